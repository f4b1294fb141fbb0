//! The Cayley graph of S_n for a transposition tree: n! vertices, one per
//! permutation, with v adjacent to v·t for each generator t.
//!
//! The graph is never materialized. Adjacency is computed by applying
//! generators to tuples, and all set-valued work happens over Lehmer ranks
//! with bitsets. Exact metric operations (BFS distances, balls, boundaries,
//! diameter) allocate n!-sized workspaces and are therefore gated behind a
//! per-graph cap; exceeding it is a typed error, not silent slowness.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::generators::TranspositionTree;
use crate::permutation::{self, factorial, Permutation, Rank, MAX_RANK_N};

/// Default cap for exact metric operations (8! = 40320 vertices).
pub const DEFAULT_METRIC_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    tree: TranspositionTree,
    metric_cap: usize,
}

impl CayleyGraph {
    pub fn new(tree: TranspositionTree) -> Self {
        Self::with_metric_cap(tree, DEFAULT_METRIC_CAP)
    }

    /// Chooses the exact-computation budget: metric operations are allowed
    /// for n <= cap. The cap is clamped to 20, past which ranks overflow.
    pub fn with_metric_cap(tree: TranspositionTree, metric_cap: usize) -> Self {
        CayleyGraph {
            tree,
            metric_cap: metric_cap.min(MAX_RANK_N),
        }
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn tree(&self) -> &TranspositionTree {
        &self.tree
    }

    pub fn metric_cap(&self) -> usize {
        self.metric_cap
    }

    /// n!, the number of vertices. Panics for n > 20 where the count does
    /// not fit in u64; large-n graphs only support local operations.
    pub fn vertex_count(&self) -> u64 {
        factorial(self.n())
    }

    fn check_cap(&self, what: &str) -> Result<()> {
        if self.n() > self.metric_cap {
            return Err(Error::capability(what, self.n(), self.metric_cap));
        }
        Ok(())
    }

    fn check_vertex(&self, v: &Permutation) -> Result<()> {
        if v.n() != self.n() {
            return Err(Error::domain(format!(
                "permutation on {} symbols fed to a Cayley graph with n = {}",
                v.n(),
                self.n()
            )));
        }
        Ok(())
    }

    /// The n-1 neighbors {v·t : t in T_n}, in generator growth order.
    pub fn neighbors(&self, v: &Permutation) -> Result<Vec<Permutation>> {
        self.check_vertex(v)?;
        self.tree
            .transpositions()
            .map(|(a, b)| v.apply_transposition(a, b))
            .collect()
    }

    /// Calls `f` with the rank of each neighbor of the tuple in `scratch`,
    /// in generator order. `scratch` is restored after each call; this is
    /// the allocation-free hot path for whole-graph sweeps.
    pub(crate) fn for_each_neighbor_rank(&self, scratch: &mut [u8], mut f: impl FnMut(u64)) {
        for (a, b) in self.tree.transpositions() {
            scratch.swap(a - 1, b - 1);
            f(permutation::rank_of_slice(scratch));
            scratch.swap(a - 1, b - 1);
        }
    }

    pub fn neighbor_ranks(&self, r: Rank) -> Result<Vec<Rank>> {
        if r.n() != self.n() {
            return Err(Error::domain(format!(
                "rank for n = {} fed to a Cayley graph with n = {}",
                r.n(),
                self.n()
            )));
        }
        let mut scratch = vec![0u8; self.n()];
        permutation::unrank_into(self.n(), r.value(), &mut scratch);
        let mut out = Vec::with_capacity(self.n().saturating_sub(1));
        self.for_each_neighbor_rank(&mut scratch, |nr| {
            out.push(Rank::new(self.n(), nr).expect("neighbor rank in range"));
        });
        Ok(out)
    }

    /// BFS distances from `root` to every vertex, indexed by rank value.
    pub fn bfs_distances(&self, root: &Permutation) -> Result<Vec<u32>> {
        self.check_cap("bfs_distances")?;
        self.check_vertex(root)?;
        Ok(self.bfs_from(root.rank()?.value()))
    }

    fn bfs_from(&self, root: u64) -> Vec<u32> {
        let n = self.n();
        let size = factorial(n) as usize;
        let mut dist = vec![u32::MAX; size];
        dist[root as usize] = 0;
        let mut queue = VecDeque::from([root]);
        let mut scratch = vec![0u8; n];
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            permutation::unrank_into(n, v, &mut scratch);
            self.for_each_neighbor_rank(&mut scratch, |w| {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            });
        }
        dist
    }

    /// Exact graph distance: the minimal number of generators taking v to w.
    pub fn distance(&self, v: &Permutation, w: &Permutation) -> Result<usize> {
        self.check_cap("distance")?;
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        let target = w.rank()?.value();
        let dist = self.bfs_from(v.rank()?.value());
        Ok(dist[target as usize] as usize)
    }

    /// B(A, j): every vertex within distance j of the set, including A
    /// itself. Results are sorted by rank (= lexicographic order).
    pub fn ball_ranks(&self, a: &[Rank], radius: usize) -> Result<Vec<Rank>> {
        self.check_cap("ball")?;
        let n = self.n();
        let size = factorial(n) as usize;
        let mut in_ball = BitSet::new(size);
        let mut frontier: Vec<u64> = Vec::new();
        for r in a {
            if r.n() != n {
                return Err(Error::domain("rank with mismatched n in vertex set"));
            }
            if in_ball.insert(r.value() as usize) {
                frontier.push(r.value());
            }
        }
        let mut scratch = vec![0u8; n];
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in frontier {
                permutation::unrank_into(n, v, &mut scratch);
                self.for_each_neighbor_rank(&mut scratch, |w| {
                    if in_ball.insert(w as usize) {
                        next.push(w);
                    }
                });
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(in_ball
            .iter()
            .map(|v| Rank::new(n, v as u64).expect("rank in range"))
            .collect())
    }

    /// d(A): vertices outside A adjacent to some vertex of A, sorted by rank.
    pub fn boundary_ranks(&self, a: &[Rank]) -> Result<Vec<Rank>> {
        self.check_cap("boundary")?;
        let n = self.n();
        let size = factorial(n) as usize;
        let mut members = BitSet::new(size);
        for r in a {
            if r.n() != n {
                return Err(Error::domain("rank with mismatched n in vertex set"));
            }
            members.insert(r.value() as usize);
        }
        let mut out = BitSet::new(size);
        let mut scratch = vec![0u8; n];
        for v in members.iter() {
            permutation::unrank_into(n, v as u64, &mut scratch);
            self.for_each_neighbor_rank(&mut scratch, |w| {
                if !members.contains(w as usize) {
                    out.insert(w as usize);
                }
            });
        }
        Ok(out
            .iter()
            .map(|v| Rank::new(n, v as u64).expect("rank in range"))
            .collect())
    }

    pub fn ball(&self, a: &[Permutation], radius: usize) -> Result<Vec<Permutation>> {
        let ranks = self.rank_set(a)?;
        Ok(self
            .ball_ranks(&ranks, radius)?
            .into_iter()
            .map(Permutation::unrank)
            .collect())
    }

    pub fn boundary(&self, a: &[Permutation]) -> Result<Vec<Permutation>> {
        let ranks = self.rank_set(a)?;
        Ok(self
            .boundary_ranks(&ranks)?
            .into_iter()
            .map(Permutation::unrank)
            .collect())
    }

    fn rank_set(&self, a: &[Permutation]) -> Result<Vec<Rank>> {
        a.iter()
            .map(|p| {
                self.check_vertex(p)?;
                p.rank()
            })
            .collect()
    }

    /// The linear order on vertices: by distance to the identity first, then
    /// lexicographically on tuples.
    pub fn cmp_order(&self, sigma: &Permutation, tau: &Permutation) -> Result<Ordering> {
        self.check_cap("cmp_order")?;
        self.check_vertex(sigma)?;
        self.check_vertex(tau)?;
        let dist = self.bfs_from(0);
        let ds = dist[sigma.rank()?.value() as usize];
        let dt = dist[tau.rank()?.value() as usize];
        Ok(ds.cmp(&dt).then_with(|| sigma.cmp(tau)))
    }

    /// Exact diameter via one BFS from the identity; vertex-transitivity
    /// makes a single root sufficient.
    pub fn exact_diameter(&self) -> Result<usize> {
        self.check_cap("exact_diameter")?;
        if self.n() == 1 {
            return Ok(0);
        }
        let dist = self.bfs_from(0);
        Ok(*dist.iter().max().expect("nonempty graph") as usize)
    }

    /// Generic lower bound on the size of the vertex boundary of any set of
    /// `set_size` vertices: |S| (1 - |S|/n!) / diam. Uses the exact diameter
    /// when the cap allows, the subtree-sum bound otherwise (a larger
    /// denominator keeps the bound valid).
    pub fn aldous_boundary_bound(&self, set_size: u64) -> f64 {
        if self.n() == 1 {
            return 0.0;
        }
        let diam = if self.n() <= self.metric_cap {
            self.exact_diameter().expect("within cap") as f64
        } else {
            self.tree.diameter_bound() as f64
        };
        let total = vertex_count_f64(self.n());
        let s = set_size as f64;
        (s / diam) * (1.0 - s / total)
    }
}

fn vertex_count_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Fixed-size bitmap over rank values.
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(size: usize) -> Self {
        BitSet {
            words: vec![0; size.div_ceil(64)],
        }
    }

    /// Returns true if the bit was newly set.
    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}
