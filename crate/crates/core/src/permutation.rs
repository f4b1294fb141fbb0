//! Elements of the symmetric group S_n as 1-based n-tuples, with composition,
//! transposition action and exact Lehmer-code ranking.
//!
//! Ranking gives a bijection between S_n and `0..n!`, which is what lets the
//! n!-vertex Cayley graph be addressed by integers instead of materialized.

use std::fmt;

use crate::error::{Error, Result};

/// Largest n for which ranks fit in a `u64` (20! < 2^64 < 21!).
pub const MAX_RANK_N: usize = 20;

/// Largest n for which tuples are representable (entries are stored as `u8`).
pub const MAX_TUPLE_N: usize = 255;

/// `FACTORIALS[k] = k!` for `k <= 20`.
pub const FACTORIALS: [u64; MAX_RANK_N + 1] = {
    let mut f = [1u64; MAX_RANK_N + 1];
    let mut k = 1;
    while k <= MAX_RANK_N {
        f[k] = f[k - 1] * k as u64;
        k += 1;
    }
    f
};

/// `n!` for `n <= 20`.
///
/// Panics for larger n; callers that handle big tuples must not ask for
/// vertex counts.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_RANK_N, "factorial({n}) does not fit in u64");
    FACTORIALS[n]
}

/// A permutation of {1, .., n}, written as the tuple (x_1, .., x_n).
///
/// The tuple is stored with `u8` entries, so n is capped at 255. Ranking is
/// additionally capped at n = 20 by `u64` arithmetic; see [`Rank`].
///
/// Derived `Ord` is lexicographic on the tuple, matching the tie-break order
/// used by the Cayley-graph linear order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u8>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Permutation {
    /// The identity permutation (1, 2, .., n).
    pub fn identity(n: usize) -> Result<Self> {
        check_tuple_n(n)?;
        Ok(Permutation {
            entries: (1..=n as u8).collect(),
        })
    }

    /// Builds a permutation from its tuple, validating that the entries are a
    /// bijection on {1, .., n}.
    pub fn from_entries(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        check_tuple_n(n)?;
        let mut seen = vec![false; n + 1];
        for &x in &entries {
            if x == 0 || x as usize > n {
                return Err(Error::domain(format!(
                    "entry {x} out of range 1..={n} in permutation tuple"
                )));
            }
            if seen[x as usize] {
                return Err(Error::domain(format!(
                    "entry {x} repeated in permutation tuple"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// The tuple (x_1, .., x_n); index 0 holds x_1.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &x)| x as usize == i + 1)
    }

    /// Right action of the transposition (i j): swaps the entries at
    /// positions i and j. Positions are 1-based and must satisfy i < j <= n.
    pub fn apply_transposition(&self, i: usize, j: usize) -> Result<Self> {
        if i < 1 || j <= i || j > self.n() {
            return Err(Error::domain(format!(
                "transposition positions ({i} {j}) must satisfy 1 <= i < j <= {}",
                self.n()
            )));
        }
        let mut entries = self.entries.clone();
        entries.swap(i - 1, j - 1);
        Ok(Permutation { entries })
    }

    /// Composition `self * other`: applies `other` first, then `self`, i.e.
    /// `result(k) = self(other(k))`.
    ///
    /// Under this convention `p.compose(&t)` with `t` the transposition (i j)
    /// equals `p.apply_transposition(i, j)`, so generators act on the right.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::domain(format!(
                "cannot compose permutations of sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        let entries = other
            .entries
            .iter()
            .map(|&k| self.entries[k as usize - 1])
            .collect();
        Ok(Permutation { entries })
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0u8; self.n()];
        for (i, &x) in self.entries.iter().enumerate() {
            entries[x as usize - 1] = i as u8 + 1;
        }
        Permutation { entries }
    }

    /// Lehmer-code rank: `sum_i c_i (n-1-i)!` where `c_i` counts later
    /// entries smaller than `x_i`. The identity ranks 0 and the map is
    /// strictly increasing in lexicographic tuple order.
    pub fn rank(&self) -> Result<Rank> {
        let n = self.n();
        if n > MAX_RANK_N {
            return Err(Error::domain(format!(
                "rank requires n <= {MAX_RANK_N}, got n = {n}"
            )));
        }
        Ok(Rank {
            value: rank_of_slice(&self.entries),
            n: n as u8,
        })
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(rank: Rank) -> Self {
        let n = rank.n();
        let mut entries = vec![0u8; n];
        unrank_into(n, rank.value, &mut entries);
        Permutation { entries }
    }
}

fn check_tuple_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("permutation size n must be >= 1"));
    }
    if n > MAX_TUPLE_N {
        return Err(Error::domain(format!(
            "permutation size n = {n} exceeds tuple cap {MAX_TUPLE_N}"
        )));
    }
    Ok(())
}

/// Position of a permutation in the lexicographic enumeration of S_n,
/// an integer in `0..n!`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rank {
    value: u64,
    n: u8,
}

impl Rank {
    pub fn new(n: usize, value: u64) -> Result<Self> {
        if n == 0 || n > MAX_RANK_N {
            return Err(Error::domain(format!(
                "rank requires 1 <= n <= {MAX_RANK_N}, got n = {n}"
            )));
        }
        if value >= FACTORIALS[n] {
            return Err(Error::domain(format!(
                "rank value {value} out of range 0..{}! = {}",
                n, FACTORIALS[n]
            )));
        }
        Ok(Rank { value, n: n as u8 })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn n(self) -> usize {
        self.n as usize
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Allocation-free Lehmer rank of a tuple slice. Hot path for implicit-graph
/// traversal; the caller guarantees the slice is a valid tuple with n <= 20.
pub(crate) fn rank_of_slice(entries: &[u8]) -> u64 {
    let n = entries.len();
    debug_assert!(n <= MAX_RANK_N);
    let mut acc = 0u64;
    for i in 0..n {
        let xi = entries[i];
        let mut smaller_later = 0u64;
        for &xj in &entries[i + 1..] {
            if xj < xi {
                smaller_later += 1;
            }
        }
        acc += smaller_later * FACTORIALS[n - 1 - i];
    }
    acc
}

/// Writes the tuple of the given rank into `out` (length n). Inverse of
/// [`rank_of_slice`].
pub(crate) fn unrank_into(n: usize, mut value: u64, out: &mut [u8]) {
    debug_assert!(n <= MAX_RANK_N && out.len() == n && value < FACTORIALS[n]);
    // remaining[k] = k-th smallest unused value, shrinking left to right.
    let mut remaining: Vec<u8> = (1..=n as u8).collect();
    for i in 0..n {
        let f = FACTORIALS[n - 1 - i];
        let digit = (value / f) as usize;
        value %= f;
        out[i] = remaining.remove(digit);
    }
}
