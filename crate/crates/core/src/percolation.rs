//! Vertex percolation on the Cayley graph: seeded deterministic selection of
//! permutations with probability lambda, exact component decomposition of the
//! induced subgraph, and classification of vertices by component size.
//!
//! Selection is a pure function of (seed, vertex): a 64-bit mix of the seed
//! and the vertex's rank compared against floor(lambda * 2^64). That gives
//! O(1)-memory membership queries, bit-exact reproducibility, and a free
//! monotone coupling: raising lambda with the same seed never deselects a
//! vertex.

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::permutation::{self, factorial, Permutation, Rank, MAX_RANK_N};

/// Default largest n for component decomposition (11! = 39.9M vertices).
pub const DEFAULT_COMPONENT_CAP: usize = 11;

/// Hard ceiling for component decomposition; 12! ranks need ~2 GiB for the
/// rank-to-dense map alone, so 12 sits behind an explicit opt-in.
pub const MAX_COMPONENT_CAP: usize = 12;

/// Declared memory budget for a single decomposition, checked before any
/// allocation happens.
pub const MEMORY_BUDGET_BYTES: u64 = 6 << 30;

/// The SplitMix64 output mix. This is the fixed, platform-stable finalizer
/// behind every selection draw and derived seed in the crate.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over a byte slice; used to key selection draws for tuples too
/// large to rank.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Parameters of one percolation sample: the selection probability
/// lambda = (1 + epsilon)/(n - 1), the seed determinizing the sample, and
/// the (k, delta, c_k) parameters of the component-size threshold
/// ceil(c_k * n^(k delta + 2/3)).
#[derive(Clone, Debug, PartialEq)]
pub struct PercolationParams {
    n: usize,
    epsilon: f64,
    lambda: f64,
    seed: u64,
    k: usize,
    delta: f64,
    ck: f64,
}

pub const DEFAULT_K: usize = 1;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_CK: f64 = 1.0;

impl PercolationParams {
    /// Builds parameters from epsilon; lambda = (1 + epsilon)/(n - 1) must
    /// land in [0, 1].
    pub fn from_epsilon(n: usize, epsilon: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("percolation requires n >= 2"));
        }
        let lambda = (1.0 + epsilon) / (n as f64 - 1.0);
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!(
                "epsilon = {epsilon} gives lambda = {lambda} outside [0, 1] at n = {n}"
            )));
        }
        Ok(PercolationParams {
            n,
            epsilon,
            lambda,
            seed,
            k: DEFAULT_K,
            delta: DEFAULT_DELTA,
            ck: DEFAULT_CK,
        })
    }

    /// Builds parameters from lambda directly; epsilon = lambda(n-1) - 1.
    pub fn from_lambda(n: usize, lambda: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("percolation requires n >= 2"));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("lambda = {lambda} outside [0, 1]")));
        }
        Ok(PercolationParams {
            n,
            epsilon: lambda * (n as f64 - 1.0) - 1.0,
            lambda,
            seed,
            k: DEFAULT_K,
            delta: DEFAULT_DELTA,
            ck: DEFAULT_CK,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threshold(mut self, k: usize, delta: f64, ck: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("threshold exponent k must be >= 1"));
        }
        if !(delta > 0.0) || !(ck > 0.0) {
            return Err(Error::domain(
                "threshold parameters delta and ck must be > 0",
            ));
        }
        self.k = k;
        self.delta = delta;
        self.ck = ck;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn ck(&self) -> f64 {
        self.ck
    }

    /// floor(lambda * 2^64), the acceptance cutoff for selection draws;
    /// u64::MAX + 1 (i.e. "accept everything") is encoded by `None`.
    fn cutoff(&self) -> Option<u64> {
        if self.lambda >= 1.0 {
            None
        } else if self.lambda <= 0.0 {
            Some(0)
        } else {
            Some((self.lambda * 18_446_744_073_709_551_616.0) as u64)
        }
    }

    pub(crate) fn draw(&self, key: u64) -> bool {
        match self.cutoff() {
            None => true,
            Some(t) => mix64(mix64(self.seed) ^ key) < t,
        }
    }

    /// Whether the vertex with this rank is kept in the sample. Pure in
    /// (seed, rank); marginally Bernoulli(lambda) up to 2^-64 quantization.
    pub fn is_selected(&self, r: Rank) -> bool {
        debug_assert_eq!(r.n(), self.n);
        self.draw(r.value())
    }

    /// Selection draw keyed by the vertex itself. For n <= 20 this is
    /// exactly `is_selected` on the vertex's rank, so explorations see the
    /// same sample as whole-graph decompositions; beyond that the draw is
    /// keyed by a tuple hash since ranks no longer fit in u64.
    pub fn is_selected_vertex(&self, v: &Permutation) -> bool {
        debug_assert_eq!(v.n(), self.n);
        if self.n <= MAX_RANK_N {
            self.draw(permutation::rank_of_slice(v.entries()))
        } else {
            self.draw(fnv1a64(v.entries()))
        }
    }

    /// Component-size threshold ceil(c_k * n^(k delta + 2/3)) separating the
    /// "large component" class from the rest.
    pub fn component_threshold(&self) -> u64 {
        let exponent = self.k as f64 * self.delta + 2.0 / 3.0;
        (self.ck * (self.n as f64).powf(exponent)).ceil() as u64
    }
}

/// Exact component statistics of one percolation sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    /// Number of selected vertices.
    pub selected_count: u64,
    /// All component sizes, descending.
    pub component_sizes: Vec<u64>,
    pub largest: u64,
    pub second_largest: u64,
    /// largest / selected_count (0 for the empty sample).
    pub relative_giant: f64,
    /// Selected vertices lying in components of size >= `threshold_used`.
    pub gamma_nk_count: u64,
    pub threshold_used: u64,
}

impl ComponentReport {
    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }
}

/// Component decomposition with the default size cap.
pub fn components(g: &CayleyGraph, params: &PercolationParams) -> Result<ComponentReport> {
    components_with_cap(g, params, DEFAULT_COMPONENT_CAP)
}

/// Component decomposition with an explicit cap (at most 12; the memory
/// acknowledgment for n = 12 is passing `cap = 12` here).
pub fn components_with_cap(
    g: &CayleyGraph,
    params: &PercolationParams,
    cap: usize,
) -> Result<ComponentReport> {
    let mut d = Decomposition::build(g, params, cap)?;
    Ok(d.report())
}

/// Fraction of ALL vertices of the Cayley graph whose radius-2 ball meets
/// the realized large-component vertex set (the selected vertices in
/// components of size >= the threshold).
///
/// Needs radius-2 balls around every vertex, so it is gated by the graph's
/// metric cap.
pub fn two_density(g: &CayleyGraph, params: &PercolationParams) -> Result<f64> {
    let n = g.n();
    if n > g.metric_cap() {
        return Err(Error::capability("two_density", n, g.metric_cap()));
    }
    let mut d = Decomposition::build(g, params, g.metric_cap().min(DEFAULT_COMPONENT_CAP))?;
    let gamma = d.gamma_bitset();
    let total = factorial(n);
    let mut hit = 0u64;
    let mut scratch = vec![0u8; n];
    let gens: Vec<(usize, usize)> = g.tree().transpositions().collect();
    for v in 0..total {
        if gamma.contains(v as usize) {
            hit += 1;
            continue;
        }
        permutation::unrank_into(n, v, &mut scratch);
        let mut found = false;
        'radius1: for &(a, b) in &gens {
            scratch.swap(a - 1, b - 1);
            if gamma.contains(permutation::rank_of_slice(&scratch) as usize) {
                found = true;
            } else {
                for &(c, e) in &gens {
                    scratch.swap(c - 1, e - 1);
                    let r2 = permutation::rank_of_slice(&scratch);
                    scratch.swap(c - 1, e - 1);
                    if gamma.contains(r2 as usize) {
                        found = true;
                        break;
                    }
                }
            }
            scratch.swap(a - 1, b - 1);
            if found {
                break 'radius1;
            }
        }
        if found {
            hit += 1;
        }
    }
    Ok(hit as f64 / total as f64)
}

/// Shared machinery behind `components` and `two_density`: the rank-to-dense
/// index map plus the union-find over selected vertices.
struct Decomposition {
    n: usize,
    dense: Vec<u32>,
    uf: UnionFind,
    selected: u64,
    threshold: u64,
}

const NOT_SELECTED: u32 = u32::MAX;

impl Decomposition {
    fn build(g: &CayleyGraph, params: &PercolationParams, cap: usize) -> Result<Self> {
        let n = g.n();
        if params.n() != n {
            return Err(Error::domain(format!(
                "percolation parameters for n = {} fed to a graph with n = {n}",
                params.n()
            )));
        }
        let cap = cap.min(MAX_COMPONENT_CAP);
        if n > cap {
            return Err(Error::capability("component decomposition", n, cap));
        }
        let total = factorial(n);
        // Pre-check the budget before touching the allocator: the dense map
        // plus union-find arrays dominate.
        let estimate = 4 * total + (9.0 * params.lambda() * total as f64) as u64;
        if estimate > MEMORY_BUDGET_BYTES {
            return Err(Error::domain(format!(
                "decomposition at n = {n} needs ~{estimate} bytes, over the {MEMORY_BUDGET_BYTES} budget"
            )));
        }

        let mut dense = vec![NOT_SELECTED; total as usize];
        let mut selected = 0u64;
        for r in 0..total {
            if params.draw(r) {
                dense[r as usize] = selected as u32;
                selected += 1;
            }
        }
        let mut uf = UnionFind::new(selected as usize);
        let mut scratch = vec![0u8; n];
        for r in 0..total {
            let di = dense[r as usize];
            if di == NOT_SELECTED {
                continue;
            }
            permutation::unrank_into(n, r, &mut scratch);
            g.for_each_neighbor_rank(&mut scratch, |w| {
                let dw = dense[w as usize];
                if dw != NOT_SELECTED {
                    uf.union(di, dw);
                }
            });
        }
        Ok(Decomposition {
            n,
            dense,
            uf,
            selected,
            threshold: params.component_threshold(),
        })
    }

    fn report(&mut self) -> ComponentReport {
        let mut sizes: Vec<u64> = Vec::new();
        for i in 0..self.selected as u32 {
            if self.uf.find(i) == i {
                sizes.push(self.uf.size_of_root(i) as u64);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let largest = sizes.first().copied().unwrap_or(0);
        let second_largest = sizes.get(1).copied().unwrap_or(0);
        let relative_giant = if self.selected == 0 {
            0.0
        } else {
            largest as f64 / self.selected as f64
        };
        let gamma_nk_count = sizes.iter().take_while(|&&s| s >= self.threshold).sum();
        ComponentReport {
            selected_count: self.selected,
            component_sizes: sizes,
            largest,
            second_largest,
            relative_giant,
            gamma_nk_count,
            threshold_used: self.threshold,
        }
    }

    /// Bit per rank: selected and in a component of size >= threshold.
    fn gamma_bitset(&mut self) -> RankBits {
        let mut bits = RankBits::new(factorial(self.n) as usize);
        for r in 0..self.dense.len() {
            let di = self.dense[r];
            if di != NOT_SELECTED {
                let root = self.uf.find(di);
                if self.uf.size_of_root(root) as u64 >= self.threshold {
                    bits.insert(r);
                }
            }
        }
        bits
    }
}

struct RankBits {
    words: Vec<u64>,
}

impl RankBits {
    fn new(size: usize) -> Self {
        RankBits {
            words: vec![0; size.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }
}

/// Union-find with path halving and union by size, over dense u32 indices.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(m: usize) -> Self {
        UnionFind {
            parent: (0..m as u32).collect(),
            size: vec![1; m],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.size[ra as usize] += self.size[rb as usize];
        self.parent[rb as usize] = ra;
    }

    fn size_of_root(&self, root: u32) -> u32 {
        self.size[root as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::TranspositionTree;
    use std::collections::VecDeque;

    fn star_graph(n: usize) -> CayleyGraph {
        CayleyGraph::new(TranspositionTree::star(n).unwrap())
    }

    #[test]
    fn lambda_extremes() {
        let all = PercolationParams::from_lambda(6, 1.0, 7).unwrap();
        let none = PercolationParams::from_lambda(6, 0.0, 7).unwrap();
        for r in 0..720 {
            let rank = Rank::new(6, r).unwrap();
            assert!(all.is_selected(rank));
            assert!(!none.is_selected(rank));
        }
    }

    #[test]
    fn params_consistency_and_validation() {
        let p = PercolationParams::from_epsilon(9, 0.5, 1).unwrap();
        assert!((p.lambda() * 8.0 - 1.5).abs() < 1e-15);
        let q = PercolationParams::from_lambda(9, 0.25, 1).unwrap();
        assert!((q.epsilon() - 1.0).abs() < 1e-12);
        assert!(PercolationParams::from_epsilon(9, 8.0, 1).is_err());
        assert!(PercolationParams::from_epsilon(9, -1.5, 1).is_err());
        assert!(PercolationParams::from_lambda(9, 1.5, 1).is_err());
        assert!(PercolationParams::from_lambda(1, 0.5, 1).is_err());
        assert!(PercolationParams::from_lambda(4, 0.5, 1)
            .unwrap()
            .with_threshold(0, 0.1, 1.0)
            .is_err());
    }

    #[test]
    fn selection_rate_concentrates() {
        // n = 9, lambda = 0.1875: the realized rate sits within 4 sigma.
        let p = PercolationParams::from_lambda(9, 0.1875, 0xfeed).unwrap();
        let total = factorial(9);
        let count = (0..total).filter(|&r| p.draw(r)).count() as f64;
        let rate = count / total as f64;
        let sigma = (0.1875 * (1.0 - 0.1875) / total as f64).sqrt();
        assert!(
            (rate - 0.1875).abs() <= 4.0 * sigma,
            "rate {rate} off lambda by more than 4 sigma"
        );
    }

    #[test]
    fn selection_unbiased_over_a_million_ranks() {
        let lambda = 0.3;
        let p = PercolationParams::from_lambda(10, lambda, 99).unwrap();
        let m = 1_000_000u64;
        let count = (0..m).filter(|&r| p.draw(r)).count() as f64;
        let sigma = (lambda * (1.0 - lambda) / m as f64).sqrt();
        assert!((count / m as f64 - lambda).abs() <= 5.0 * sigma);
    }

    #[test]
    fn monotone_coupling_in_lambda() {
        // Same seed: raising lambda never deselects, so selections nest and
        // the summary statistics are non-decreasing.
        let g = star_graph(7);
        let total = factorial(7);
        let lambdas = [0.1, 0.3, 0.6, 1.0];
        let mut prev_flags: Option<Vec<bool>> = None;
        let mut prev_counts = (0u64, 0u64);
        for &l in &lambdas {
            let p = PercolationParams::from_lambda(7, l, 1234).unwrap();
            let flags: Vec<bool> = (0..total).map(|r| p.draw(r)).collect();
            if let Some(prev) = &prev_flags {
                for r in 0..total as usize {
                    assert!(!prev[r] || flags[r], "lambda increase deselected rank {r}");
                }
            }
            let report = components(&g, &p).unwrap();
            assert!(report.selected_count >= prev_counts.0);
            assert!(report.largest >= prev_counts.1);
            prev_counts = (report.selected_count, report.largest);
            prev_flags = Some(flags);
        }
    }

    #[test]
    fn full_selection_is_one_component() {
        let g = star_graph(5);
        let p = PercolationParams::from_lambda(5, 1.0, 3).unwrap();
        let report = components(&g, &p).unwrap();
        assert_eq!(report.component_sizes, vec![120]);
        assert_eq!(report.selected_count, 120);
        assert_eq!(report.relative_giant, 1.0);
        assert_eq!(report.num_components(), 1);
        assert_eq!(report.gamma_nk_count, 120);
    }

    #[test]
    fn empty_selection_is_empty_report() {
        let g = star_graph(5);
        let p = PercolationParams::from_lambda(5, 0.0, 3).unwrap();
        let report = components(&g, &p).unwrap();
        assert_eq!(report.selected_count, 0);
        assert!(report.component_sizes.is_empty());
        assert_eq!(report.largest, 0);
        assert_eq!(report.relative_giant, 0.0);
        assert_eq!(report.gamma_nk_count, 0);
    }

    #[test]
    fn report_is_deterministic() {
        let g = star_graph(6);
        let p = PercolationParams::from_lambda(6, 0.4, 2024).unwrap();
        let a = components(&g, &p).unwrap();
        let b = components(&g, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_formula() {
        let p = PercolationParams::from_lambda(9, 0.25, 0).unwrap();
        // 9^(0.1 + 2/3) = 5.38..; ceil = 6.
        assert_eq!(p.component_threshold(), 6);
        let p2 = p.clone().with_threshold(2, 0.1, 1.0).unwrap();
        assert_eq!(
            p2.component_threshold(),
            (9f64.powf(0.2 + 2.0 / 3.0)).ceil() as u64
        );
        let report = components(&star_graph(9), &p).unwrap();
        let expected: u64 = report
            .component_sizes
            .iter()
            .filter(|&&s| s >= report.threshold_used)
            .sum();
        assert_eq!(report.gamma_nk_count, expected);
    }

    /// Independent adjacency: v ~ w iff v^-1 w is a transposition whose
    /// moved pair is a tree edge. Used by the flood-fill oracle.
    fn brute_adjacency(tree: &TranspositionTree) -> Vec<Vec<usize>> {
        let n = tree.n();
        let total = factorial(n) as usize;
        let perms: Vec<Permutation> = (0..total)
            .map(|v| Permutation::unrank(Rank::new(n, v as u64).unwrap()))
            .collect();
        let mut adj = vec![Vec::new(); total];
        for v in 0..total {
            for w in (v + 1)..total {
                let c = perms[v].inverse().compose(&perms[w]).unwrap();
                let moved: Vec<usize> = c
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(i, &x)| x as usize != i + 1)
                    .map(|(i, _)| i + 1)
                    .collect();
                if moved.len() == 2 {
                    let (a, b) = (moved[0], moved[1]);
                    let swapped =
                        c.entries()[a - 1] as usize == b && c.entries()[b - 1] as usize == a;
                    if swapped && tree.edges().contains(&(a, b)) {
                        adj[v].push(w);
                        adj[w].push(v);
                    }
                }
            }
        }
        adj
    }

    fn flood_fill_sizes(adj: &[Vec<usize>], selected: &[bool]) -> Vec<u64> {
        let mut seen = vec![false; adj.len()];
        let mut sizes = Vec::new();
        for start in 0..adj.len() {
            if !selected[start] || seen[start] {
                continue;
            }
            let mut size = 0u64;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in &adj[v] {
                    if selected[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    #[test]
    fn decomposition_matches_flood_fill() {
        let tree = TranspositionTree::from_prufer(&[2, 4]).unwrap();
        let adj = brute_adjacency(&tree);
        let g = CayleyGraph::new(tree);
        for seed in 0..5u64 {
            for lambda in [0.2, 0.5, 0.8] {
                let p = PercolationParams::from_lambda(4, lambda, seed).unwrap();
                let selected: Vec<bool> = (0..24).map(|r| p.draw(r)).collect();
                let expected = flood_fill_sizes(&adj, &selected);
                let report = components(&g, &p).unwrap();
                assert_eq!(report.component_sizes, expected);
                assert_eq!(
                    report.selected_count,
                    selected.iter().filter(|&&s| s).count() as u64
                );
            }
        }
    }

    #[test]
    fn cap_violations_are_typed() {
        let g = CayleyGraph::new(TranspositionTree::star(12).unwrap());
        let p = PercolationParams::from_lambda(12, 0.1, 0).unwrap();
        assert!(matches!(components(&g, &p), Err(Error::Capability { .. })));
        // The hard ceiling holds even if callers ask for more.
        let g13 = CayleyGraph::new(TranspositionTree::star(13).unwrap());
        let p13 = PercolationParams::from_lambda(13, 0.1, 0).unwrap();
        assert!(matches!(
            components_with_cap(&g13, &p13, 20),
            Err(Error::Capability { .. })
        ));
        // Mismatched params/graph n.
        let g5 = star_graph(5);
        let p6 = PercolationParams::from_lambda(6, 0.5, 0).unwrap();
        assert!(matches!(components(&g5, &p6), Err(Error::Domain(_))));
    }

    #[test]
    fn two_density_extremes_and_monotonicity() {
        let g = star_graph(5);
        let full = PercolationParams::from_lambda(5, 1.0, 9).unwrap();
        assert_eq!(two_density(&g, &full).unwrap(), 1.0);
        let none = PercolationParams::from_lambda(5, 0.0, 9).unwrap();
        assert_eq!(two_density(&g, &none).unwrap(), 0.0);

        let g7 = star_graph(7);
        for seed in 0..10u64 {
            let mut prev = -1.0;
            for lambda in [0.2, 0.5, 0.9] {
                let p = PercolationParams::from_lambda(7, lambda, seed).unwrap();
                let d = two_density(&g7, &p).unwrap();
                assert!(d >= prev, "two-density decreased in lambda at seed {seed}");
                prev = d;
            }
        }
    }

    #[test]
    fn two_density_respects_metric_cap() {
        let g = CayleyGraph::with_metric_cap(TranspositionTree::star(9).unwrap(), 8);
        let p = PercolationParams::from_lambda(9, 0.2, 0).unwrap();
        assert!(matches!(two_density(&g, &p), Err(Error::Capability { .. })));
    }

    #[test]
    fn vertex_keyed_selection_agrees_with_rank_keyed() {
        let p = PercolationParams::from_lambda(6, 0.42, 31).unwrap();
        for r in 0..720u64 {
            let rank = Rank::new(6, r).unwrap();
            let v = Permutation::unrank(rank);
            assert_eq!(p.is_selected(rank), p.is_selected_vertex(&v));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn coupling_never_deselects(seed in any::<u64>(), r in 0u64..5040, a in 0.0f64..1.0, b in 0.0f64..1.0) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let p_lo = PercolationParams::from_lambda(7, lo, seed).unwrap();
                let p_hi = PercolationParams::from_lambda(7, hi, seed).unwrap();
                prop_assert!(!p_lo.draw(r) || p_hi.draw(r));
            }
        }
    }
}
