//! Batch experiment runner: parameter sweeps over (epsilon, trial) grids,
//! deterministic per-trial seeding, theory columns for comparing the realized
//! giant component against the branching-process prediction, and
//! machine-readable outputs.

mod output;
mod plot;
mod verify;

pub use output::{
    read_rows_csv, rows_to_csv, rows_to_json, write_rows, OutputFormat, CSV_SCHEMA_TAG,
};
pub use plot::{emit_plot, render_plot_svg};
pub use verify::{all_suites, run_verification_suite, CheckOutcome, Suite, SuiteReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branching::survival_from_epsilon;
use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::generators::{TranspositionTree, TreeSpec};
use crate::percolation::{self, components_with_cap, mix64, PercolationParams};
use crate::permutation::factorial;

/// One sweep: a fixed (n, tree) pair, an epsilon grid, and a trial count per
/// grid point. Everything downstream is a pure function of this struct.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    /// Tree specifier in the generators grammar (star, bubble, prufer:..,
    /// edges:..).
    pub tree: String,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_ck")]
    pub ck: f64,
    /// Largest n the decomposition may attempt; raising it to 12 is the
    /// explicit memory acknowledgment.
    #[serde(default = "default_n_cap")]
    pub n_cap: usize,
}

fn default_k() -> usize {
    percolation::DEFAULT_K
}

fn default_delta() -> f64 {
    percolation::DEFAULT_DELTA
}

fn default_ck() -> f64 {
    percolation::DEFAULT_CK
}

fn default_n_cap() -> usize {
    percolation::DEFAULT_COMPONENT_CAP
}

impl SweepConfig {
    /// The stock replication run: n = 9 star tree, 20 epsilon points in
    /// [0.05, 1.0], 20 trials per point.
    pub fn figure_defaults() -> Self {
        SweepConfig {
            n: 9,
            tree: "star".to_string(),
            epsilons: epsilon_grid(0.05, 1.0, 20),
            trials: 20,
            master_seed: 0x5eed_cafe,
            k: default_k(),
            delta: default_delta(),
            ck: default_ck(),
            n_cap: default_n_cap(),
        }
    }
}

/// Evenly spaced inclusive grid; a single step collapses to [min].
pub fn epsilon_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Seed for one (epsilon index, trial index) cell. Each cell is mixed
/// independently from the master seed, so extending the grid or the trial
/// count never perturbs existing cells.
pub fn trial_seed(master_seed: u64, eps_index: usize, trial_index: usize) -> u64 {
    let e = 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(eps_index as u64 + 1);
    let t = 0xc2b2_ae3d_27d4_eb4fu64.wrapping_mul(trial_index as u64 + 1);
    mix64(mix64(master_seed ^ e) ^ t)
}

/// One row of sweep output. Field order is the CSV column order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub tree_id: String,
    pub epsilon: f64,
    pub lambda: f64,
    pub trial: usize,
    pub seed: u64,
    pub selected_count: u64,
    pub largest: u64,
    pub second_largest: u64,
    pub num_components: u64,
    pub relative_giant: f64,
    /// Survival probability of the mean-(1+epsilon) branching process.
    pub predicted_survival: f64,
    /// predicted_survival * lambda * n!.
    pub predicted_giant: f64,
    pub gamma_nk_count: u64,
}

/// Runs the sweep: one component decomposition per (epsilon, trial) cell,
/// with rows in deterministic (epsilon, trial) order. Cells execute on the
/// current rayon pool; all randomness flows from derived seeds, never from
/// scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials < 1 {
        return Err(Error::domain("sweep needs trials >= 1"));
    }
    if cfg.epsilons.is_empty() {
        return Err(Error::domain("sweep needs a nonempty epsilon grid"));
    }
    let spec: TreeSpec = cfg.tree.parse()?;
    let tree = TranspositionTree::from_spec(&spec, cfg.n)?;
    let graph = CayleyGraph::new(tree);
    let tree_id = spec.to_string();
    let total_vertices = factorial(cfg.n) as f64;

    let cells: Vec<(usize, usize)> = (0..cfg.epsilons.len())
        .flat_map(|e| (0..cfg.trials).map(move |t| (e, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(e, t)| {
            let epsilon = cfg.epsilons[e];
            let seed = trial_seed(cfg.master_seed, e, t);
            let params = PercolationParams::from_epsilon(cfg.n, epsilon, seed)?
                .with_threshold(cfg.k, cfg.delta, cfg.ck)?;
            let report = components_with_cap(&graph, &params, cfg.n_cap)?;
            let survival = survival_from_epsilon(epsilon)?;
            Ok(SweepRow {
                n: cfg.n,
                tree_id: tree_id.clone(),
                epsilon,
                lambda: params.lambda(),
                trial: t,
                seed,
                selected_count: report.selected_count,
                largest: report.largest,
                second_largest: report.second_largest,
                num_components: report.num_components() as u64,
                relative_giant: report.relative_giant,
                predicted_survival: survival.value,
                predicted_giant: survival.value * params.lambda() * total_vertices,
                gamma_nk_count: report.gamma_nk_count,
            })
        })
        .collect()
}

/// Mean relative giant size per epsilon grid point, in grid order.
/// Convenience for plots and summaries.
pub fn mean_relative_giant(rows: &[SweepRow]) -> Vec<(f64, f64, f64)> {
    let mut grouped: Vec<(u64, f64, f64, usize)> = Vec::new();
    for row in rows {
        let key = row.epsilon.to_bits();
        match grouped.iter_mut().find(|g| g.0 == key) {
            Some(g) => {
                g.2 += row.relative_giant;
                g.3 += 1;
            }
            None => grouped.push((key, row.lambda, row.relative_giant, 1)),
        }
    }
    grouped
        .into_iter()
        .map(|(key, lambda, sum, count)| (f64::from_bits(key), lambda, sum / count as f64))
        .collect()
}
