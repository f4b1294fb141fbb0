//! Galton-Watson machinery: offspring laws, survival-probability solvers,
//! total-progeny tail evaluation, Chernoff bounds, the partition parameters
//! used for component-size thresholds, and the tree-growth process embedded
//! in the Cayley graph.

use std::collections::{HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::percolation::PercolationParams;
use crate::permutation::Permutation;

/// Offspring distribution of one individual.
#[derive(Clone, Debug, PartialEq)]
pub enum OffspringLaw {
    /// Binomial(trials, p).
    Binomial { trials: u64, p: f64 },
    /// Poisson(lambda).
    Poisson { lambda: f64 },
}

impl OffspringLaw {
    pub fn binomial(trials: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("binomial p = {p} outside [0, 1]")));
        }
        Ok(OffspringLaw::Binomial { trials, p })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::domain(format!(
                "poisson lambda = {lambda} must be >= 0"
            )));
        }
        Ok(OffspringLaw::Poisson { lambda })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            OffspringLaw::Binomial { trials, p } => trials as f64 * p,
            OffspringLaw::Poisson { lambda } => lambda,
        }
    }

    /// Point mass at j, evaluated by stable multiplicative recurrences.
    pub fn pmf(&self, j: u64) -> f64 {
        match *self {
            OffspringLaw::Binomial { trials, p } => {
                if j > trials {
                    return 0.0;
                }
                if p == 0.0 {
                    return if j == 0 { 1.0 } else { 0.0 };
                }
                if p == 1.0 {
                    return if j == trials { 1.0 } else { 0.0 };
                }
                let mut val = (1.0 - p).powi(trials as i32);
                for t in 0..j {
                    val *= (trials - t) as f64 / (t + 1) as f64 * (p / (1.0 - p));
                }
                val
            }
            OffspringLaw::Poisson { lambda } => {
                if lambda == 0.0 {
                    return if j == 0 { 1.0 } else { 0.0 };
                }
                let mut val = (-lambda).exp();
                for t in 0..j {
                    val *= lambda / (t + 1) as f64;
                }
                val
            }
        }
    }

    /// Largest support point carrying mass: the trial count for binomial,
    /// and the point where the remaining poisson tail drops below 1e-15
    /// (the truncation that makes the pmf-sum invariant meaningful).
    pub fn support_limit(&self) -> u64 {
        match *self {
            OffspringLaw::Binomial { trials, .. } => trials,
            OffspringLaw::Poisson { lambda } => {
                if lambda == 0.0 {
                    return 0;
                }
                let mut cum = 0.0;
                let mut val = (-lambda).exp();
                let mut j = 0u64;
                while cum + val < 1.0 - 1e-15 && j < 10_000_000 {
                    cum += val;
                    j += 1;
                    val *= lambda / j as f64;
                }
                j
            }
        }
    }

    /// One draw.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        self.sample_sum(1, rng)
    }

    /// Sum of `count` independent draws, taken as a single aggregated draw:
    /// a sum of iid Binomial(m, p) over k individuals is Binomial(k m, p),
    /// and likewise Poisson sums to Poisson(k lambda).
    pub fn sample_sum(&self, count: u64, rng: &mut ChaCha8Rng) -> u64 {
        if count == 0 {
            return 0;
        }
        match *self {
            OffspringLaw::Binomial { trials, p } => {
                let total = trials.saturating_mul(count);
                if total == 0 || p == 0.0 {
                    return 0;
                }
                if p == 1.0 {
                    return total;
                }
                Binomial::new(total, p)
                    .expect("validated parameters")
                    .sample(rng)
            }
            OffspringLaw::Poisson { lambda } => {
                let total = lambda * count as f64;
                if total == 0.0 {
                    return 0;
                }
                Poisson::new(total)
                    .expect("validated parameters")
                    .sample(rng) as u64
            }
        }
    }
}

/// Criticality of a process by mean offspring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// A solved survival probability with solver diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurvivalResult {
    /// The survival probability in [0, 1].
    pub value: f64,
    /// |exp(-lambda y) - (1 - y)| at the returned value.
    pub residual: f64,
    pub iterations: u32,
    pub regime: Regime,
}

/// Survival probability of a Poisson(lambda) branching process: the largest
/// root y in [0, 1) of 1 - y = exp(-lambda y), and 0 for lambda <= 1.
///
/// Bracketed bisection on [machine epsilon, 1] followed by a Newton polish;
/// residual tolerance 1e-12, iteration cap 200. The function is evaluated as
/// -expm1(-lambda y) - y, which stays accurate near y = 0.
pub fn survival_poisson(lambda: f64) -> Result<SurvivalResult> {
    if !(lambda >= 0.0) {
        return Err(Error::domain(format!(
            "poisson survival needs lambda >= 0, got {lambda}"
        )));
    }
    let regime = if lambda > 1.0 {
        Regime::Supercritical
    } else if lambda == 1.0 {
        Regime::Critical
    } else {
        Regime::Subcritical
    };
    if lambda <= 1.0 {
        return Ok(SurvivalResult {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            regime,
        });
    }

    let f = |y: f64| -(-lambda * y).exp_m1() - y;
    let mut lo = f64::EPSILON;
    let mut hi = 1.0;
    let mut iterations = 0u32;
    if f(lo) <= 0.0 {
        // lambda exceeds 1 by less than machine resolution; the positive
        // root is indistinguishable from 0.
        return Ok(SurvivalResult {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            regime,
        });
    }
    while hi - lo > 1e-13 && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut y = 0.5 * (lo + hi);
    // Newton polish; fall back to the bisection value if a step escapes.
    for _ in 0..20 {
        let fy = f(y);
        if fy.abs() < 1e-16 {
            break;
        }
        let fp = lambda * (-lambda * y).exp() - 1.0;
        if fp == 0.0 {
            break;
        }
        let next = y - fy / fp;
        if !(0.0..1.0).contains(&next) {
            break;
        }
        y = next;
        iterations += 1;
        if iterations >= 200 {
            break;
        }
    }
    let residual = ((-lambda * y).exp() - (1.0 - y)).abs();
    Ok(SurvivalResult {
        value: y,
        residual,
        iterations,
        regime,
    })
}

/// Survival probability as a function of epsilon, i.e. of a process with
/// mean offspring 1 + epsilon. This is the exact root for every epsilon;
/// the 2*epsilon near-critical form lives in [`near_critical_survival`].
pub fn survival_from_epsilon(epsilon: f64) -> Result<SurvivalResult> {
    survival_poisson(1.0 + epsilon)
}

/// First-order near-critical asymptote of the survival probability.
pub fn near_critical_survival(epsilon: f64) -> f64 {
    2.0 * epsilon
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcessOutcome {
    /// Some generation hit zero.
    Extinct,
    /// Still alive when a cap (generations or total population) was hit.
    SurvivedCap,
}

/// Exact simulation record: Z_0 = 1, Z_1, .. and how the run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessTrace {
    pub generations: Vec<u64>,
    /// Total individuals ever born, including the root.
    pub total: u64,
    pub outcome: ProcessOutcome,
}

/// Simulates a branching process whose root reproduces by `root_law` and
/// every later individual by `rest_law`, stopping at extinction, after
/// `max_generations`, or once the total population reaches `max_population`.
pub fn simulate_process(
    root_law: &OffspringLaw,
    rest_law: &OffspringLaw,
    max_generations: usize,
    max_population: u64,
    seed: u64,
) -> Result<ProcessTrace> {
    if max_generations == 0 || max_population == 0 {
        return Err(Error::domain("simulation caps must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generations = vec![1u64];
    let mut total = 1u64;
    let mut alive = 1u64;
    for t in 1..=max_generations {
        alive = if t == 1 {
            root_law.sample(&mut rng)
        } else {
            rest_law.sample_sum(alive, &mut rng)
        };
        generations.push(alive);
        total = total.saturating_add(alive);
        if alive == 0 {
            return Ok(ProcessTrace {
                generations,
                total,
                outcome: ProcessOutcome::Extinct,
            });
        }
        if total >= max_population {
            break;
        }
    }
    Ok(ProcessTrace {
        generations,
        total,
        outcome: ProcessOutcome::SurvivedCap,
    })
}

/// Tail term of the total-progeny law for the percolation exploration
/// process at selection probability lambda:
///
/// (lambda (n-2))^(i-1) / (i sqrt(2 pi i)) * [(n-2)(1-lambda)/(n-3)]^(ni-3i+2)
///
/// evaluated in log space, since the power underflows long before the log
/// stops being informative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProgenyTail {
    pub log_value: f64,
    /// exp(log_value); 0 when it underflows.
    pub value: f64,
}

pub fn progeny_tail(n: usize, lambda: f64, i: u64) -> Result<ProgenyTail> {
    if n <= 3 {
        return Err(Error::domain("progeny tail needs n >= 4"));
    }
    if i < 2 {
        return Err(Error::domain("progeny tail needs i >= 2"));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "progeny tail needs lambda in (0, 1), got {lambda}"
        )));
    }
    let nf = n as f64;
    let fi = i as f64;
    let base = ((nf - 2.0) * (1.0 - lambda)) / (nf - 3.0);
    let exponent = (n as u64 * i) as f64 - 3.0 * fi + 2.0;
    let log_value = (fi - 1.0) * (lambda * (nf - 2.0)).ln()
        - fi.ln()
        - 0.5 * (2.0 * std::f64::consts::PI * fi).ln()
        + exponent * base.ln();
    Ok(ProgenyTail {
        log_value,
        value: log_value.exp(),
    })
}

/// Two-sided Chernoff bound for a sum of independent indicators:
/// P(|Z - E| > eta E) <= 2 exp(-c_eta E) with
/// c_eta = min{(1+eta) ln(1+eta) - eta, eta^2 / 2}.
pub fn chernoff_bound(expectation: f64, eta: f64) -> Result<f64> {
    if !(expectation > 0.0) {
        return Err(Error::domain("chernoff bound needs expectation > 0"));
    }
    if !(eta > 0.0) {
        return Err(Error::domain("chernoff bound needs eta > 0"));
    }
    let c = ((1.0 + eta) * eta.ln_1p() - eta).min(eta * eta / 2.0);
    Ok(2.0 * (-c * expectation).exp())
}

/// The (mu, ell, z) partition of n used to slice the generator sequence
/// into k blocks of mu, one block of ell, and a z-sized prefix:
/// mu = floor(n^(2/3) / (2k(k+1))), ell = floor(k n^(2/3) / (2(k+1))),
/// z = n - k mu - ell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionParams {
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub ell: usize,
    pub z: usize,
}

pub fn partition_params(n: usize, k: usize) -> Result<PartitionParams> {
    if n < 1 || k < 1 {
        return Err(Error::domain("partition parameters need n >= 1 and k >= 1"));
    }
    let kf = k as f64;
    // cbrt then square: exact for perfect cubes, which is where the floor
    // boundaries matter.
    let n23 = (n as f64).cbrt().powi(2);
    let mu = (n23 / (2.0 * kf * (kf + 1.0))).floor() as usize;
    let ell = (kf * n23 / (2.0 * (kf + 1.0))).floor() as usize;
    let z = n - k * mu - ell;
    Ok(PartitionParams { n, k, mu, ell, z })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddedOutcome {
    ReachedTarget,
    Died,
}

/// The grown vertex set of one run of the embedded tree process.
#[derive(Clone, Debug)]
pub struct EmbeddedTree {
    /// Members in creation order, starting with the start vertex.
    pub vertices: Vec<Permutation>,
    /// Accepted moves; always vertices.len() - 1, since each acceptance adds
    /// exactly one fresh vertex.
    pub accepted_moves: usize,
    pub outcome: EmbeddedOutcome,
}

/// Grows a subtree of the percolation sample by branching inside the Cayley
/// graph, starting at `start` (whose own selection is conditioned out).
///
/// The move set is the first floor(n - n^(2/3)/2) - 1 generators in growth
/// order. Each live vertex, taken in creation order, probes the smallest
/// n - floor(3 n^(2/3)/4) - 1 moves not yet consumed; a probe keeps the
/// neighbor with the sample's own selection draw, and every accepted move is
/// consumed for good. Distinct consumed generators force the grown edge set
/// to be a tree: no probe can revisit a member.
///
/// `target_size` may not exceed floor(n^(2/3)/4); past that the move-set
/// arithmetic no longer guarantees a full probe window per parent.
pub fn embedded_tree_process(
    g: &CayleyGraph,
    params: &PercolationParams,
    start: &Permutation,
    target_size: usize,
) -> Result<EmbeddedTree> {
    let n = g.n();
    if start.n() != n || params.n() != n {
        return Err(Error::domain(
            "embedded process needs graph, parameters and start vertex of equal n",
        ));
    }
    let n23 = (n as f64).cbrt().powi(2);
    let cap = (n23 / 4.0).floor() as usize;
    if target_size < 1 || target_size > cap {
        return Err(Error::domain(format!(
            "target size {target_size} outside 1..={cap} at n = {n}"
        )));
    }
    let move_count =
        (((n as f64) - n23 / 2.0).floor() as isize - 1).clamp(0, n as isize - 1) as usize;
    let window = (n as isize - (3.0 * n23 / 4.0).floor() as isize - 1).max(0) as usize;
    let moves: Vec<(usize, usize)> = g.tree().transpositions().take(move_count).collect();
    let mut used = vec![false; moves.len()];

    let mut vertices = vec![start.clone()];
    let mut seen: HashSet<Permutation> = HashSet::from([start.clone()]);
    let mut live: VecDeque<Permutation> = VecDeque::from([start.clone()]);
    let mut accepted = 0usize;

    if target_size == 1 {
        return Ok(EmbeddedTree {
            vertices,
            accepted_moves: 0,
            outcome: EmbeddedOutcome::ReachedTarget,
        });
    }

    while let Some(parent) = live.pop_front() {
        let probes: Vec<usize> = (0..moves.len())
            .filter(|&m| !used[m])
            .take(window)
            .collect();
        for m in probes {
            let (a, b) = moves[m];
            let child = parent.apply_transposition(a, b)?;
            if !params.is_selected_vertex(&child) {
                continue;
            }
            used[m] = true;
            accepted += 1;
            let fresh = seen.insert(child.clone());
            assert!(
                fresh,
                "distinct consumed generators cannot revisit a vertex"
            );
            vertices.push(child.clone());
            live.push_back(child);
            if vertices.len() >= target_size {
                return Ok(EmbeddedTree {
                    vertices,
                    accepted_moves: accepted,
                    outcome: EmbeddedOutcome::ReachedTarget,
                });
            }
        }
    }
    Ok(EmbeddedTree {
        vertices,
        accepted_moves: accepted,
        outcome: EmbeddedOutcome::Died,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::TranspositionTree;

    /// Independent root finder: plain bisection on 1 - y - exp(-lambda y)
    /// with no reformulation shared with the solver under test.
    fn bisection_oracle(lambda: f64) -> f64 {
        let f = |y: f64| 1.0 - y - (-lambda * y).exp();
        let (mut lo, mut hi) = (1e-9, 1.0);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn survival_subcritical_and_critical_vanish() {
        for lambda in [0.0, 0.3, 0.9999, 1.0] {
            let s = survival_poisson(lambda).unwrap();
            assert_eq!(s.value, 0.0);
            assert_eq!(s.residual, 0.0);
        }
        assert_eq!(survival_poisson(1.0).unwrap().regime, Regime::Critical);
        assert_eq!(survival_poisson(0.5).unwrap().regime, Regime::Subcritical);
        assert!(survival_poisson(-0.1).is_err());
    }

    #[test]
    fn survival_at_two() {
        let s = survival_poisson(2.0).unwrap();
        assert_eq!(s.regime, Regime::Supercritical);
        assert!((s.value - 0.796812).abs() < 1e-6);
        assert!(s.residual <= 1e-12);
        assert!((s.value - bisection_oracle(2.0)).abs() < 1e-9);
    }

    #[test]
    fn survival_residuals_on_grid() {
        for lambda in [1.01, 1.1, 1.5, 2.0, 3.0] {
            let s = survival_poisson(lambda).unwrap();
            assert!(
                s.residual <= 1e-12,
                "residual {} at lambda {lambda}",
                s.residual
            );
            assert!(s.value > 0.0 && s.value < 1.0);
            assert!((s.value - bisection_oracle(lambda)).abs() < 1e-9);
            assert!(s.iterations <= 200);
        }
    }

    #[test]
    fn survival_near_critical() {
        let s = survival_from_epsilon(0.1).unwrap();
        assert!((s.value - 0.1761).abs() < 2e-4);
        assert_eq!(near_critical_survival(0.1), 0.2);
        // The ratio to 2 epsilon approaches 1 from below as epsilon shrinks.
        let mut prev_gap = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let v = survival_from_epsilon(eps).unwrap().value;
            let gap = (v / near_critical_survival(eps) - 1.0).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 0.15);
    }

    #[test]
    fn survival_root_is_unique_sign_change() {
        for lambda in [1.2, 2.0, 3.0] {
            let s = survival_poisson(lambda).unwrap();
            let f = |y: f64| 1.0 - y - (-lambda * y).exp();
            let mut changes = 0;
            let mut located = false;
            for step in 0..1000 {
                let a = 1e-6 + (1.0 - 2e-6) * step as f64 / 1000.0;
                let b = 1e-6 + (1.0 - 2e-6) * (step + 1) as f64 / 1000.0;
                if f(a) > 0.0 && f(b) <= 0.0 {
                    changes += 1;
                    if (a..=b).contains(&s.value) {
                        located = true;
                    }
                }
            }
            assert_eq!(changes, 1, "one positive-to-negative crossing");
            assert!(located, "solver root inside the crossing cell");
        }
    }

    #[test]
    fn pmf_sums_and_means() {
        let b = OffspringLaw::binomial(10, 0.3).unwrap();
        let sum: f64 = (0..=b.support_limit()).map(|j| b.pmf(j)).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((b.mean() - 3.0).abs() < 1e-12);

        let p = OffspringLaw::poisson(2.5).unwrap();
        let sum: f64 = (0..=p.support_limit()).map(|j| p.pmf(j)).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(p.mean(), 2.5);

        assert!(OffspringLaw::binomial(5, 1.5).is_err());
        assert!(OffspringLaw::poisson(-1.0).is_err());
    }

    #[test]
    fn simulate_degenerate_laws() {
        let zero = OffspringLaw::binomial(5, 0.0).unwrap();
        let trace = simulate_process(&zero, &zero, 100, 1000, 7).unwrap();
        assert_eq!(trace.outcome, ProcessOutcome::Extinct);
        assert_eq!(trace.generations, vec![1, 0]);

        let one = OffspringLaw::binomial(1, 1.0).unwrap();
        let trace = simulate_process(&one, &one, 50, 1000, 7).unwrap();
        assert_eq!(trace.outcome, ProcessOutcome::SurvivedCap);
        assert_eq!(trace.generations.len(), 51);
        assert!(trace.generations.iter().all(|&z| z == 1));

        assert!(simulate_process(&one, &one, 0, 10, 7).is_err());
        assert!(simulate_process(&one, &one, 10, 0, 7).is_err());
    }

    #[test]
    fn simulate_is_deterministic_in_seed() {
        let root = OffspringLaw::binomial(999, 1.5 / 999.0).unwrap();
        let rest = OffspringLaw::binomial(998, 1.5 / 999.0).unwrap();
        let a = simulate_process(&root, &rest, 1000, 10_000, 424242).unwrap();
        let b = simulate_process(&root, &rest, 1000, 10_000, 424242).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tree_rooted_process_tracks_poisson_survival() {
        // Root fans out over n-1 trials, everyone else over n-2; survival
        // frequency approaches the Poisson survival probability.
        let n = 1000u64;
        let lambda = 1.5;
        let p = lambda / (n - 1) as f64;
        let root = OffspringLaw::binomial(n - 1, p).unwrap();
        let rest = OffspringLaw::binomial(n - 2, p).unwrap();
        let runs = 20_000;
        let mut survived = 0u32;
        for seed in 0..runs {
            let t = simulate_process(&root, &rest, 100_000, 10_000, 1_000_000 + seed).unwrap();
            if t.outcome == ProcessOutcome::SurvivedCap {
                survived += 1;
            }
        }
        let freq = survived as f64 / runs as f64;
        let pi = survival_poisson(lambda).unwrap().value;
        let sigma = (pi * (1.0 - pi) / runs as f64).sqrt();
        // 4 sigma plus the finite-n drift of the mean offspring.
        assert!(
            (freq - pi).abs() <= 4.0 * sigma + 0.003,
            "freq {freq} vs poisson survival {pi}"
        );
    }

    #[test]
    fn survival_gap_shrinks_with_n() {
        let lambda = 1.5;
        let pi = survival_poisson(lambda).unwrap().value;
        let runs = 40_000u64;
        let mut gaps = Vec::new();
        for n in [1_000u64, 10_000] {
            let p = lambda / (n - 1) as f64;
            let root = OffspringLaw::binomial(n - 1, p).unwrap();
            let rest = OffspringLaw::binomial(n - 2, p).unwrap();
            let mut survived = 0u32;
            for seed in 0..runs {
                let t = simulate_process(&root, &rest, 100_000, 10_000, 31_337 + seed).unwrap();
                if t.outcome == ProcessOutcome::SurvivedCap {
                    survived += 1;
                }
            }
            gaps.push((survived as f64 / runs as f64 - pi).abs());
        }
        // The finite-n bias shrinks by an order of magnitude; Monte-Carlo
        // noise gets a 3 sigma allowance on top.
        let sigma = (pi * (1.0 - pi) / runs as f64).sqrt();
        assert!(
            gaps[1] <= gaps[0] + 3.0 * sigma,
            "gap at n = 10^4 ({}) above gap at n = 10^3 ({}) beyond noise",
            gaps[1],
            gaps[0]
        );
    }

    #[test]
    fn progeny_tail_validation_and_monotonicity() {
        assert!(progeny_tail(3, 0.5, 10).is_err());
        assert!(progeny_tail(100, 0.5, 1).is_err());
        assert!(progeny_tail(100, 0.0, 10).is_err());
        assert!(progeny_tail(100, 1.0, 10).is_err());

        // Supercritical lambda_n, past the mode: terms decrease in i.
        let lambda = 1.5 / 999.0;
        let mut prev = f64::INFINITY;
        for i in 50..120 {
            let t = progeny_tail(1000, lambda, i).unwrap();
            assert!(t.log_value < prev);
            prev = t.log_value;
        }
    }

    #[test]
    fn progeny_tail_log_matches_direct_evaluation() {
        // Where the powers stay representable, log-space and linear-space
        // evaluation agree to 10 significant digits.
        for n in [10usize, 30, 50] {
            for i in [2u64, 5, 10, 30] {
                let lambda = 1.4 / (n as f64 - 1.0);
                let t = progeny_tail(n, lambda, i).unwrap();
                let nf = n as f64;
                let fi = i as f64;
                let direct = (lambda * (nf - 2.0)).powf(fi - 1.0)
                    / (fi * (2.0 * std::f64::consts::PI * fi).sqrt())
                    * (((nf - 2.0) * (1.0 - lambda)) / (nf - 3.0)).powf(nf * fi - 3.0 * fi + 2.0);
                assert!(
                    (t.value - direct).abs() <= 1e-10 * direct.abs().max(1e-300),
                    "n={n} i={i}: {} vs {}",
                    t.value,
                    direct
                );
            }
        }
    }

    #[test]
    fn progeny_tail_sum_is_superexponentially_small() {
        // Past i = n^2 the terms decay geometrically at a per-i rate that
        // approaches ln(1+eps) - eps from above as n grows (the gap is
        // (eps - eps^2/2)/n), and the summed tail is far below e^(-n ln n).
        let eps = 0.5f64;
        let envelope = (1.0 + eps).ln() - eps;
        let mut prev_gap = f64::INFINITY;
        for n in [100usize, 1000] {
            let lambda = (1.0 + eps) / (n as f64 - 1.0);
            let start = (n * n) as u64;
            let t0 = progeny_tail(n, lambda, start).unwrap().log_value;
            let t1 = progeny_tail(n, lambda, start + 1).unwrap().log_value;
            let rate = t1 - t0;
            assert!(rate < 0.0);
            let gap = rate - envelope;
            assert!(gap > 0.0 && gap < prev_gap, "rate gap should shrink with n");
            prev_gap = gap;
            // Geometric majorant of the whole tail from its first term.
            let log_tail_sum = t0 - (-rate.exp_m1()).ln();
            let nf = n as f64;
            assert!(
                log_tail_sum <= -nf * nf.ln(),
                "tail sum e^{log_tail_sum} not below e^-(n ln n) at n = {n}"
            );
        }
    }

    #[test]
    fn chernoff_examples() {
        // eta -> 0 makes the bound vacuous (-> 2).
        assert!((chernoff_bound(100.0, 1e-9).unwrap() - 2.0).abs() < 1e-6);
        // E = 500, eta = 0.1: c_eta = 1.1 ln 1.1 - 0.1 = 0.0048412.
        let b = chernoff_bound(500.0, 0.1).unwrap();
        assert!((b - 0.177737).abs() < 1e-5);
        // Non-increasing in the expectation at fixed eta.
        let mut prev = f64::INFINITY;
        for e in [10.0, 100.0, 500.0, 2000.0] {
            let v = chernoff_bound(e, 0.1).unwrap();
            assert!(v <= prev);
            prev = v;
        }
        assert!(chernoff_bound(0.0, 0.1).is_err());
        assert!(chernoff_bound(10.0, 0.0).is_err());
    }

    #[test]
    fn chernoff_dominates_exact_binomial_tail() {
        use statrs::distribution::{Binomial as StatBinomial, DiscreteCDF};
        // P(|Bin(1000, 0.5) - 500| > 50), exactly.
        let b = StatBinomial::new(0.5, 1000).unwrap();
        let exact = 1.0 - b.cdf(550) + b.cdf(449);
        assert!(exact > 0.001 && exact < 0.002, "exact tail {exact}");
        let bound = chernoff_bound(500.0, 0.1).unwrap();
        assert!(exact <= bound);
    }

    #[test]
    fn partition_examples_and_identity() {
        let p = partition_params(1000, 1).unwrap();
        assert_eq!((p.mu, p.ell, p.z), (25, 25, 950));
        for n in (1..200).chain([1000, 10_000, 123_456, 1_000_000]) {
            for k in 1..=10 {
                let p = partition_params(n, k).unwrap();
                assert_eq!(p.z + p.k * p.mu + p.ell, p.n);
                let n23 = (n as f64).cbrt().powi(2);
                assert!((p.k * p.mu + p.ell) as f64 <= n23);
            }
        }
        assert!(partition_params(0, 1).is_err());
        assert!(partition_params(10, 0).is_err());
    }

    #[test]
    fn embedded_process_extremes() {
        let n = 25;
        let tree = TranspositionTree::bubble(n).unwrap();
        let g = CayleyGraph::new(tree);
        let start = Permutation::identity(n).unwrap();

        let dead = PercolationParams::from_lambda(n, 0.0, 5).unwrap();
        let run = embedded_tree_process(&g, &dead, &start, 2).unwrap();
        assert_eq!(run.outcome, EmbeddedOutcome::Died);
        assert_eq!(run.vertices, vec![start.clone()]);
        assert_eq!(run.accepted_moves, 0);

        let full = PercolationParams::from_lambda(n, 1.0, 5).unwrap();
        let run = embedded_tree_process(&g, &full, &start, 2).unwrap();
        assert_eq!(run.outcome, EmbeddedOutcome::ReachedTarget);
        assert_eq!(run.vertices.len(), 2);
        assert_eq!(run.accepted_moves, 1);

        // Target above the cap floor(25^(2/3)/4) = 2.
        assert!(embedded_tree_process(&g, &full, &start, 3).is_err());
    }

    #[test]
    fn embedded_process_grows_trees() {
        // Every run yields distinct members and |M| - 1 accepted moves.
        let n = 64;
        let tree = TranspositionTree::star(n).unwrap();
        let g = CayleyGraph::new(tree);
        let start = Permutation::identity(n).unwrap();
        let cap = ((n as f64).cbrt().powi(2) / 4.0).floor() as usize;
        for seed in 0..200 {
            let params = PercolationParams::from_lambda(n, 0.04, seed).unwrap();
            let run = embedded_tree_process(&g, &params, &start, cap).unwrap();
            assert_eq!(run.accepted_moves, run.vertices.len() - 1);
            let set: HashSet<_> = run.vertices.iter().collect();
            assert_eq!(set.len(), run.vertices.len());
        }
    }

    /// Dwass identity for a process whose every individual (root included)
    /// reproduces by Binomial(w, p): P(total = i) = P(Bin(i w, p) = i-1) / i.
    fn dwass_total_progeny(w: u64, p: f64, i: u64) -> f64 {
        let law = OffspringLaw::binomial(w * i, p).unwrap();
        law.pmf(i - 1) / i as f64
    }

    #[test]
    fn embedded_process_frequency_matches_branching_law() {
        // n = 125: n^(2/3) = 25, target cap 6, window 106 probes per parent.
        let n = 125usize;
        let eps = (n as f64).powf(-1.0 / 3.0 + 0.2);
        let g = CayleyGraph::new(TranspositionTree::star(n).unwrap());
        let start = Permutation::identity(n).unwrap();
        let target = 6usize;

        let runs = 10_000u64;
        let mut reached = 0u64;
        for seed in 0..runs {
            let params = PercolationParams::from_epsilon(n, eps, seed).unwrap();
            let run = embedded_tree_process(&g, &params, &start, target).unwrap();
            if run.outcome == EmbeddedOutcome::ReachedTarget {
                reached += 1;
            }
        }
        let freq = reached as f64 / runs as f64;

        // Matching branching process: every member probes 106 fresh moves.
        let lambda = (1.0 + eps) / (n as f64 - 1.0);
        let window = 106u64;
        let die: f64 = (1..target as u64)
            .map(|i| dwass_total_progeny(window, lambda, i))
            .sum();
        let reach_prob = 1.0 - die;
        let sigma = (reach_prob * (1.0 - reach_prob) / runs as f64).sqrt();
        let survival = survival_from_epsilon(eps).unwrap().value;
        println!(
            "embedded reach frequency {freq:.4}, branching oracle {reach_prob:.4}, \
             poisson survival {survival:.4}"
        );
        assert!(
            (freq - reach_prob).abs() <= 4.0 * sigma,
            "frequency {freq} vs oracle {reach_prob} (sigma {sigma})"
        );
    }
}
