//! CLI-runnable verification suites wrapping the library's exhaustive and
//! statistical invariants: boundary bounds, diameter bound chains, the vertex
//! linear order, survival-solver residuals, and branching-process agreement.

use std::fmt;
use std::str::FromStr;

use crate::branching::{
    near_critical_survival, progeny_tail, simulate_process, survival_from_epsilon,
    survival_poisson, OffspringLaw, ProcessOutcome,
};
use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::generators::TranspositionTree;
use crate::percolation::mix64;
use crate::permutation::{factorial, Permutation, Rank};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Boundary,
    Diameter,
    Order,
    Survival,
    Branching,
}

pub fn all_suites() -> [Suite; 5] {
    [
        Suite::Boundary,
        Suite::Diameter,
        Suite::Order,
        Suite::Survival,
        Suite::Branching,
    ]
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boundary" => Ok(Suite::Boundary),
            "diameter" => Ok(Suite::Diameter),
            "order" => Ok(Suite::Order),
            "survival" => Ok(Suite::Survival),
            "branching" => Ok(Suite::Branching),
            other => Err(Error::domain(format!(
                "unknown suite {other:?}; expected boundary, diameter, order, survival or branching"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Boundary => "boundary",
            Suite::Diameter => "diameter",
            Suite::Order => "order",
            Suite::Survival => "survival",
            Suite::Branching => "branching",
        };
        write!(f, "{name}")
    }
}

/// One named check with its slack: `margin >= 0` exactly when it passed.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst-case slack of the inequality behind the check.
    pub margin: f64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed_count(&self) -> usize {
        self.checks.len() - self.passed_count()
    }

    pub fn all_passed(&self) -> bool {
        self.failed_count() == 0
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}/{}: {} (margin {:.3e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    self.suite,
                    c.name,
                    c.detail,
                    c.margin
                )
            })
            .collect()
    }

    fn push(&mut self, name: &str, margin: f64, detail: String) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed: margin >= 0.0,
            margin,
            detail,
        });
    }
}

/// Runs one suite. `budget` scales the expensive knob of each suite and
/// falls back to the suite default when absent: subset count for boundary
/// (100), exhaustive max n for diameter (5), the n of the sorted graph for
/// order (4), grid size for survival (4), Monte-Carlo runs for branching
/// (100000).
pub fn run_verification_suite(suite: Suite, budget: Option<usize>) -> Result<SuiteReport> {
    match suite {
        Suite::Boundary => boundary_suite(budget.unwrap_or(100)),
        Suite::Diameter => diameter_suite(budget.unwrap_or(5)),
        Suite::Order => order_suite(budget.unwrap_or(4)),
        Suite::Survival => survival_suite(budget.unwrap_or(4)),
        Suite::Branching => branching_suite(budget.unwrap_or(100_000)),
    }
}

/// Deterministic pseudo-random stream for suite sampling.
struct SeedStream(u64);

impl SeedStream {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(self.0)
    }
}

fn boundary_suite(subsets: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: Suite::Boundary,
        checks: Vec::new(),
    };
    let n = 5usize;
    let trees: Vec<(String, TranspositionTree)> = vec![
        ("star".into(), TranspositionTree::star(n)?),
        ("bubble".into(), TranspositionTree::bubble(n)?),
        (
            "prufer:2,2,3".into(),
            TranspositionTree::from_prufer(&[2, 2, 3])?,
        ),
        (
            "prufer:3,1,4".into(),
            TranspositionTree::from_prufer(&[3, 1, 4])?,
        ),
        (
            "prufer:1,3,5".into(),
            TranspositionTree::from_prufer(&[1, 3, 5])?,
        ),
    ];
    let per_tree = subsets.div_ceil(trees.len()).max(1);
    let total = factorial(n) as usize;
    let mut stream = SeedStream(0xb0a7);
    for (name, tree) in trees {
        let g = CayleyGraph::new(tree);
        let mut min_slack = f64::INFINITY;
        let mut held = 0usize;
        for _ in 0..per_tree {
            let size = 1 + (stream.next() as usize) % (total - 1);
            let mut pool: Vec<u64> = (0..total as u64).collect();
            for i in 0..size {
                let j = i + (stream.next() as usize) % (total - i);
                pool.swap(i, j);
            }
            let members: Vec<Rank> = pool[..size]
                .iter()
                .map(|&v| Rank::new(n, v).expect("rank in range"))
                .collect();
            let exact = g.boundary_ranks(&members)?.len() as f64;
            let bound = g.aldous_boundary_bound(size as u64);
            let slack = exact - bound;
            min_slack = min_slack.min(slack);
            if slack >= 0.0 {
                held += 1;
            }
        }
        report.push(
            &name,
            min_slack,
            format!("bound held for {held}/{per_tree} random subsets"),
        );
    }
    Ok(report)
}

fn prufer_codes(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total).map(move |code| {
        let mut c = code;
        (0..len)
            .map(|_| {
                let d = c % n + 1;
                c /= n;
                d
            })
            .collect()
    })
}

fn diameter_suite(max_n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: Suite::Diameter,
        checks: Vec::new(),
    };
    // n = 7 already means 16807 trees of 5040 vertices each; stay below.
    let max_n = max_n.clamp(2, 6);
    for n in 2..=max_n {
        let mut min_slack = i64::MAX;
        let mut count = 0usize;
        for seq in prufer_codes(n) {
            let tree = TranspositionTree::from_prufer(&seq)?;
            let bound = tree.diameter_bound() as i64;
            let binom = TranspositionTree::binomial_bound(n) as i64;
            let g = CayleyGraph::new(tree);
            let exact = g.exact_diameter()? as i64;
            min_slack = min_slack.min(bound - exact).min(binom - bound);
            count += 1;
        }
        report.push(
            &format!("chain-n{n}"),
            min_slack as f64,
            format!("exact <= subtree sum <= C(n,2) over all {count} trees"),
        );
    }
    for n in [3usize, 4, 5] {
        let g = CayleyGraph::new(TranspositionTree::bubble(n)?);
        let exact = g.exact_diameter()?;
        let slack = if exact == TranspositionTree::binomial_bound(n) {
            0.0
        } else {
            -1.0
        };
        report.push(
            &format!("bubble-n{n}"),
            slack,
            format!("exact diameter {exact} = C({n},2)"),
        );
    }
    for n in [4usize, 5, 6] {
        let g = CayleyGraph::new(TranspositionTree::star(n)?);
        let exact = g.exact_diameter()?;
        let bound = TranspositionTree::star_bound(n);
        report.push(
            &format!("star-n{n}"),
            bound as f64 - exact as f64,
            format!("exact diameter {exact} <= 2(n-2) = {bound}"),
        );
    }
    Ok(report)
}

fn order_suite(n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: Suite::Order,
        checks: Vec::new(),
    };
    let n = n.clamp(2, 6);
    let total = factorial(n);
    for (name, tree) in [
        ("star", TranspositionTree::star(n)?),
        ("bubble", TranspositionTree::bubble(n)?),
    ] {
        let g = CayleyGraph::new(tree);
        let mut all: Vec<Permutation> = (0..total)
            .map(|v| Permutation::unrank(Rank::new(n, v).expect("in range")))
            .collect();
        all.sort_by(|a, b| g.cmp_order(a, b).expect("within cap"));
        let id = Permutation::identity(n)?;
        let mut ok = all[0] == id;
        let mut prev = 0usize;
        for p in &all {
            let d = g.distance(&id, p)?;
            if d < prev {
                ok = false;
            }
            prev = d;
        }
        // Antisymmetry sample.
        for i in (0..all.len()).step_by(7) {
            let j = (i * 13 + 5) % all.len();
            let fwd = g.cmp_order(&all[i], &all[j])?;
            let bwd = g.cmp_order(&all[j], &all[i])?;
            if fwd != bwd.reverse() {
                ok = false;
            }
        }
        report.push(
            &format!("{name}-n{n}"),
            if ok { 0.0 } else { -1.0 },
            format!("sorting all {total} vertices yields non-decreasing distance from id"),
        );
    }
    Ok(report)
}

fn survival_suite(grid: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: Suite::Survival,
        checks: Vec::new(),
    };
    let mut worst = 0.0f64;
    for lambda in [1.01, 1.1, 1.5, 2.0, 3.0] {
        let s = survival_poisson(lambda)?;
        worst = worst.max(s.residual);
    }
    report.push(
        "residuals",
        1e-12 - worst,
        format!("worst fixed-point residual {worst:.3e} on the supercritical grid"),
    );

    let mut sub_ok = true;
    for lambda in [0.0, 0.5, 1.0] {
        if survival_poisson(lambda)?.value != 0.0 {
            sub_ok = false;
        }
    }
    report.push(
        "critical",
        if sub_ok { 0.0 } else { -1.0 },
        "survival vanishes for mean offspring <= 1".to_string(),
    );

    // |survival/(2 eps) - 1| shrinks along a halving epsilon grid.
    let grid = grid.clamp(2, 16);
    let mut eps = 0.2;
    let mut prev_gap = f64::INFINITY;
    let mut monotone = true;
    let mut last_gap = f64::NAN;
    for _ in 0..grid {
        let v = survival_from_epsilon(eps)?.value;
        let gap = (v / near_critical_survival(eps) - 1.0).abs();
        if gap >= prev_gap {
            monotone = false;
        }
        prev_gap = gap;
        last_gap = gap;
        eps /= 2.0;
    }
    report.push(
        "near-critical",
        if monotone { 0.15 - last_gap } else { -1.0 },
        format!(
            "asymptote gap decreases to {last_gap:.4} at eps = {:.4}",
            eps * 2.0
        ),
    );
    Ok(report)
}

/// Exact total-progeny law of the tree-rooted process (root fans out over
/// n-1 trials, everyone else over n-2), by the hitting-time identity:
/// the total of r independent subtrees is m with probability
/// (r/m) P(Bin(m(n-2), lambda) = m - r).
fn dwass_total_progeny(n: u64, lambda: f64, i: u64) -> f64 {
    let root = OffspringLaw::binomial(n - 1, lambda).expect("valid law");
    if i == 1 {
        return root.pmf(0);
    }
    let m = i - 1;
    let walk = OffspringLaw::binomial(m * (n - 2), lambda).expect("valid law");
    let mut p = 0.0;
    for r in 1..=m.min(n - 1) {
        p += root.pmf(r) * (r as f64 / m as f64) * walk.pmf(m - r);
    }
    p
}

fn branching_suite(runs: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: Suite::Branching,
        checks: Vec::new(),
    };
    let n = 1000u64;
    for lambda in [1.5, 2.0] {
        let p = lambda / (n - 1) as f64;
        let root = OffspringLaw::binomial(n - 1, p)?;
        let rest = OffspringLaw::binomial(n - 2, p)?;
        let mut survived = 0usize;
        let base = mix64(0xabcd ^ (lambda * 1024.0) as u64);
        for run in 0..runs {
            let trace =
                simulate_process(&root, &rest, 100_000, 10_000, base.wrapping_add(run as u64))?;
            if trace.outcome == ProcessOutcome::SurvivedCap {
                survived += 1;
            }
        }
        let freq = survived as f64 / runs as f64;
        let pi = survival_poisson(lambda)?.value;
        let sigma = (pi * (1.0 - pi) / runs as f64).sqrt();
        report.push(
            &format!("survival-lambda{lambda}"),
            3.0 * sigma - (freq - pi).abs(),
            format!(
                "{runs} runs: frequency {freq:.4} vs survival {pi:.4} (3 sigma = {:.4})",
                3.0 * sigma
            ),
        );
    }

    // Tail formula within a factor 2 of the exact total-progeny law.
    let lambda_n = 1.5 / 999.0;
    for i in [20u64, 50, 100] {
        let formula = progeny_tail(1000, lambda_n, i)?.value;
        let exact = dwass_total_progeny(1000, lambda_n, i);
        let ratio = formula / exact;
        report.push(
            &format!("tail-i{i}"),
            (2.0 - ratio).min(ratio - 0.5),
            format!("formula/exact ratio {ratio:.4} at i = {i}"),
        );
    }
    Ok(report)
}
