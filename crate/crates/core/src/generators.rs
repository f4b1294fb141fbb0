//! Minimal transposition generating sets of S_n, represented as labeled trees
//! on {1, .., n}.
//!
//! A set of transpositions generates S_n minimally exactly when its pairs form
//! a spanning tree, so every generating set here is built from (or validated
//! as) a tree: the star and path specializations, explicit edge lists, and
//! Prüfer sequences for uniform random trees.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How to build a generating set. The string grammar used by the CLI is
/// `star | bubble | prufer:<int>,<int>,... | edges:<a>-<b>,<c>-<d>,...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeSpec {
    /// All edges at vertex 1: T_n = {(1 j) : 2 <= j <= n}.
    Star,
    /// The path 1-2-..-n: T_n = {(i i+1) : 1 <= i <= n-1} (bubble-sort moves).
    Bubble,
    /// Explicit edge list over {1, .., n}.
    Edges(Vec<(usize, usize)>),
    /// Prüfer sequence of length n-2 over {1, .., n}.
    Prufer(Vec<usize>),
}

impl FromStr for TreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "star" {
            return Ok(TreeSpec::Star);
        }
        if s == "bubble" {
            return Ok(TreeSpec::Bubble);
        }
        if let Some(rest) = s.strip_prefix("prufer:") {
            let mut seq = Vec::new();
            if !rest.trim().is_empty() {
                for tok in rest.split(',') {
                    let v: usize = tok.trim().parse().map_err(|_| {
                        Error::domain(format!("bad prufer entry {tok:?} in tree spec {s:?}"))
                    })?;
                    seq.push(v);
                }
            }
            return Ok(TreeSpec::Prufer(seq));
        }
        if let Some(rest) = s.strip_prefix("edges:") {
            let mut edges = Vec::new();
            for tok in rest.split(',') {
                let (a, b) = tok
                    .trim()
                    .split_once('-')
                    .ok_or_else(|| Error::domain(format!("bad edge {tok:?} in tree spec {s:?}")))?;
                let a: usize = a.trim().parse().map_err(|_| {
                    Error::domain(format!("bad edge endpoint {a:?} in tree spec {s:?}"))
                })?;
                let b: usize = b.trim().parse().map_err(|_| {
                    Error::domain(format!("bad edge endpoint {b:?} in tree spec {s:?}"))
                })?;
                edges.push((a, b));
            }
            return Ok(TreeSpec::Edges(edges));
        }
        Err(Error::domain(format!(
            "unknown tree spec {s:?}; expected star, bubble, prufer:.. or edges:.."
        )))
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Star => write!(f, "star"),
            TreeSpec::Bubble => write!(f, "bubble"),
            TreeSpec::Prufer(seq) => {
                write!(f, "prufer:")?;
                for (i, v) in seq.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            TreeSpec::Edges(edges) => {
                write!(f, "edges:")?;
                for (i, (a, b)) in edges.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}-{b}")?;
                }
                Ok(())
            }
        }
    }
}

/// A minimal generating set of transpositions together with its tree
/// structure: the growth order (v_i, s_i) anchored at vertex 1, and the
/// diameters of the nested subtrees it induces.
///
/// The growth order adds, at each step, the vertex of minimal
/// (tree-distance-to-1, label) among those not yet included; s_i is its
/// unique already-included neighbor. Transpositions earlier in the order
/// never move the entry that (v_i s_i) moves at position v_i, which is what
/// makes products along the order well-behaved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    order_sequence: Vec<(usize, usize)>,
    subtree_diameters: Vec<usize>,
}

impl TranspositionTree {
    pub fn from_spec(spec: &TreeSpec, n: usize) -> Result<Self> {
        match spec {
            TreeSpec::Star => Self::star(n),
            TreeSpec::Bubble => Self::bubble(n),
            TreeSpec::Edges(edges) => Self::from_edges(n, edges),
            TreeSpec::Prufer(seq) => {
                let tree = Self::from_prufer(seq)?;
                if tree.n != n {
                    return Err(Error::domain(format!(
                        "prufer sequence of length {} describes n = {}, expected n = {n}",
                        seq.len(),
                        tree.n
                    )));
                }
                Ok(tree)
            }
        }
    }

    pub fn star(n: usize) -> Result<Self> {
        check_n(n)?;
        let edges: Vec<_> = (2..=n).map(|j| (1, j)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn bubble(n: usize) -> Result<Self> {
        check_n(n)?;
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges)
    }

    /// Validates an edge list as a spanning tree on {1, .., n} and builds the
    /// tree. Wrong edge count, cycles or disconnection are minimality
    /// violations; out-of-range labels are domain errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_n(n)?;
        if edges.len() != n - 1 {
            return Err(Error::minimality(format!(
                "{} edges given, a tree on {n} vertices has {}",
                edges.len(),
                n - 1
            )));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a < 1 || a > n || b < 1 || b > n {
                return Err(Error::domain(format!(
                    "edge ({a},{b}) has labels outside 1..={n}"
                )));
            }
            if a == b {
                return Err(Error::minimality(format!("edge ({a},{b}) is a self-loop")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::minimality("duplicate edge in edge list".to_string()));
        }
        let adj = adjacency(n, &norm);
        // n-1 distinct edges and connectivity together rule out cycles.
        let dist = bfs_tree_distances(n, &adj, 1);
        if dist.iter().skip(1).any(|&d| d == usize::MAX) {
            return Err(Error::minimality(format!(
                "edge list is disconnected on {n} vertices"
            )));
        }
        let (order_sequence, subtree_diameters) = growth_order(n, &adj, &dist);
        Ok(TranspositionTree {
            n,
            edges: norm,
            order_sequence,
            subtree_diameters,
        })
    }

    /// Decodes a Prüfer sequence (length n-2, entries in {1, .., n}) into the
    /// tree it encodes; n is inferred from the length. The empty sequence
    /// gives the single edge on two vertices.
    pub fn from_prufer(seq: &[usize]) -> Result<Self> {
        let n = seq.len() + 2;
        for &v in seq {
            if v < 1 || v > n {
                return Err(Error::domain(format!(
                    "prufer entry {v} outside 1..={n} (sequence length {})",
                    seq.len()
                )));
            }
        }
        let mut degree = vec![1usize; n + 1];
        for &v in seq {
            degree[v] += 1;
        }
        // Classic decode: join the smallest current leaf to the next
        // sequence entry.
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (1..=n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &v in seq {
            let Reverse(u) = leaves.pop().expect("leaf available during decode");
            edges.push((u, v));
            degree[u] -= 1;
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(Reverse(v));
            }
        }
        let Reverse(u) = leaves.pop().expect("two leaves remain");
        let Reverse(w) = leaves.pop().expect("two leaves remain");
        edges.push((u, w));
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as normalized (min, max) pairs in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The growth sequence (v_i, s_i) for i = 2..=n: v_i is the new vertex,
    /// s_i its already-included neighbor.
    pub fn order_sequence(&self) -> &[(usize, usize)] {
        &self.order_sequence
    }

    /// diam(T_i) for i = 2..=n, where T_i is the subtree induced by
    /// {1, v_2, .., v_i}.
    pub fn subtree_diameters(&self) -> &[usize] {
        &self.subtree_diameters
    }

    /// The generators as position pairs (min, max), in growth order. This is
    /// the deterministic neighbor order used by the Cayley graph.
    pub fn transpositions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order_sequence
            .iter()
            .map(|&(v, s)| (v.min(s), v.max(s)))
    }

    /// Upper bound on the Cayley-graph diameter: the sum of the nested
    /// subtree diameters. Always <= [`binomial_bound`](Self::binomial_bound),
    /// with equality for the path tree.
    pub fn diameter_bound(&self) -> usize {
        self.subtree_diameters.iter().sum()
    }

    /// The universal bound C(n, 2).
    pub fn binomial_bound(n: usize) -> usize {
        n * (n - 1) / 2
    }

    /// Closed-form bound 2(n-2) for the star generating set, valid for
    /// n >= 4.
    pub fn star_bound(n: usize) -> usize {
        2 * n.saturating_sub(2)
    }
}

fn check_n(n: usize) -> Result<()> {
    // n = 1 is the degenerate single-vertex tree with no generators; it is
    // accepted so the trivial Cayley graph works.
    if n == 0 {
        return Err(Error::domain("tree size n must be >= 1"));
    }
    if n > crate::permutation::MAX_TUPLE_N {
        return Err(Error::domain(format!(
            "tree size n = {n} exceeds cap {}",
            crate::permutation::MAX_TUPLE_N
        )));
    }
    Ok(())
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn bfs_tree_distances(n: usize, adj: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; n + 1];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Builds the growth sequence and the nested subtree diameters. Vertices are
/// added by (distance to 1, label); the parent of each new vertex is its
/// unique neighbor closer to 1, which is always already included.
fn growth_order(n: usize, adj: &[Vec<usize>], dist: &[usize]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut order: Vec<usize> = (2..=n).collect();
    order.sort_by_key(|&v| (dist[v], v));

    let mut sequence = Vec::with_capacity(n.saturating_sub(1));
    let mut diameters = Vec::with_capacity(n.saturating_sub(1));
    let mut included = vec![false; n + 1];
    included[1] = true;
    // ecc[v] = eccentricity of v within the current subtree; updating it
    // incrementally keeps the whole construction O(n^2).
    let mut members = vec![1usize];
    let mut diameter = 0usize;
    for &v in &order {
        let parent = *adj[v]
            .iter()
            .find(|&&w| dist[w] + 1 == dist[v])
            .expect("non-root tree vertex has a parent");
        debug_assert!(included[parent]);
        sequence.push((v, parent));
        included[v] = true;
        members.push(v);
        // Distances from v inside the subtree determine the new diameter.
        let far = members
            .iter()
            .map(|&w| subtree_distance(adj, &included, v, w))
            .max()
            .unwrap_or(0);
        diameter = diameter.max(far);
        diameters.push(diameter);
    }
    (sequence, diameters)
}

fn subtree_distance(adj: &[Vec<usize>], included: &[bool], from: usize, to: usize) -> usize {
    if from == to {
        return 0;
    }
    let mut dist = vec![usize::MAX; included.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if included[w] && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if w == to {
                    return dist[w];
                }
                queue.push_back(w);
            }
        }
    }
    unreachable!("subtree is connected");
}
