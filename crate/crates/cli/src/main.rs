//! Command-line runner for Cayley-graph percolation experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 capability error (instance too
//! large for an exact computation), 3 verification-suite failure.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use cayley_perc::branching::{survival_from_epsilon, Regime};
use cayley_perc::experiment::{
    all_suites, emit_plot, epsilon_grid, mean_relative_giant, read_rows_csv, run_sweep,
    run_verification_suite, write_rows, OutputFormat, Suite, SweepConfig,
};
use cayley_perc::generators::{TranspositionTree, TreeSpec};
use cayley_perc::{CayleyGraph, Error, Result};

#[derive(Parser)]
#[command(
    name = "cayley-perc",
    version,
    about = "Vertex percolation on Cayley graphs of the symmetric group over transposition trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a percolation sweep over an epsilon grid and write CSV/JSON rows.
    Simulate(SimulateArgs),
    /// Solve the branching-process survival probability on a grid.
    Survival(SurvivalArgs),
    /// Report diameter bounds (and the exact diameter when within the cap).
    Diameter(DiameterArgs),
    /// Run the exhaustive/property verification suites.
    Verify(VerifyArgs),
    /// Render an SVG plot from a previously written sweep CSV.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Default)]
struct SimulateArgs {
    /// TOML config file; command-line flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Tree spec: star | bubble | prufer:a,b,.. | edges:a-b,c-d,..
    #[arg(long)]
    tree: Option<String>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_steps: Option<usize>,
    /// Comma-separated selection probabilities; replaces the epsilon grid.
    #[arg(long)]
    lambda_list: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; per-trial seeds are mixed from it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    ck: Option<f64>,
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Also render the sweep as an SVG plot at this path.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads for trials (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Acknowledge the multi-GiB memory cost of decomposing n = 12.
    #[arg(long)]
    allow_n12: bool,
}

#[derive(Args, Debug)]
struct SurvivalArgs {
    #[arg(long, default_value_t = 0.05)]
    eps_min: f64,
    #[arg(long, default_value_t = 1.0)]
    eps_max: f64,
    #[arg(long, default_value_t = 20)]
    eps_steps: usize,
    /// Comma-separated mean offspring values (1 + epsilon) to solve instead.
    #[arg(long)]
    lambda_list: Option<String>,
}

#[derive(Args, Debug)]
struct DiameterArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "star")]
    tree: String,
    /// Cap for the exact BFS diameter.
    #[arg(long, default_value_t = 8)]
    cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// boundary | diameter | order | survival | branching; all when absent.
    #[arg(long)]
    suite: Option<String>,
    /// Per-suite effort knob (subset count, max n, or Monte-Carlo runs).
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Sweep CSV produced by `simulate`.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// The subset of SweepConfig readable from a TOML file.
#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    tree: Option<String>,
    eps_min: Option<f64>,
    eps_max: Option<f64>,
    eps_steps: Option<usize>,
    lambda_list: Option<Vec<f64>>,
    trials: Option<usize>,
    seed: Option<u64>,
    k: Option<usize>,
    delta: Option<f64>,
    ck: Option<f64>,
}

fn parse_lambda_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad lambda value {tok:?}")))
        })
        .collect()
}

/// Resolves defaults <- config file <- flags into a concrete sweep config.
fn build_sweep_config(args: &SimulateArgs) -> Result<SweepConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let raw = std::fs::read_to_string(path)?;
            toml::from_str(&raw).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let defaults = SweepConfig::figure_defaults();
    let n = args.n.or(file.n).unwrap_or(defaults.n);

    let flag_lambdas = match &args.lambda_list {
        Some(raw) => Some(parse_lambda_list(raw)?),
        None => None,
    };
    let epsilons = match flag_lambdas.or(file.lambda_list) {
        Some(lambdas) => lambdas
            .into_iter()
            .map(|l| l * (n as f64 - 1.0) - 1.0)
            .collect(),
        None => {
            let grid_given = args.eps_min.is_some()
                || args.eps_max.is_some()
                || args.eps_steps.is_some()
                || file.eps_min.is_some();
            if grid_given {
                epsilon_grid(
                    args.eps_min.or(file.eps_min).unwrap_or(0.05),
                    args.eps_max.or(file.eps_max).unwrap_or(1.0),
                    args.eps_steps.or(file.eps_steps).unwrap_or(20),
                )
            } else {
                defaults.epsilons.clone()
            }
        }
    };

    Ok(SweepConfig {
        n,
        tree: args.tree.clone().or(file.tree).unwrap_or(defaults.tree),
        epsilons,
        trials: args.trials.or(file.trials).unwrap_or(defaults.trials),
        master_seed: args.seed.or(file.seed).unwrap_or(defaults.master_seed),
        k: args.k.or(file.k).unwrap_or(defaults.k),
        delta: args.delta.or(file.delta).unwrap_or(defaults.delta),
        ck: args.ck.or(file.ck).unwrap_or(defaults.ck),
        n_cap: if args.allow_n12 { 12 } else { defaults.n_cap },
    })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let cfg = build_sweep_config(args)?;
    let format: OutputFormat = args.format.parse()?;
    let rows = if args.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .map_err(|e| Error::Domain(format!("worker pool: {e}")))?
            .install(|| run_sweep(&cfg))?
    } else {
        run_sweep(&cfg)?
    };
    write_rows(&args.out, &rows, format)?;
    println!(
        "# n = {}, tree = {}, {} grid points x {} trials -> {}",
        cfg.n,
        cfg.tree,
        cfg.epsilons.len(),
        cfg.trials,
        args.out.display()
    );
    println!("epsilon   lambda    mean_rel_giant   predicted");
    for (eps, lambda, mean) in mean_relative_giant(&rows) {
        let predicted = survival_from_epsilon(eps)?.value;
        println!("{eps:<9.4} {lambda:<9.4} {mean:<16.4} {predicted:.4}");
    }
    if let Some(plot_path) = &args.plot {
        emit_plot(&rows, plot_path)?;
        println!("# plot -> {}", plot_path.display());
    }
    Ok(0)
}

fn cmd_survival(args: &SurvivalArgs) -> Result<i32> {
    let means: Vec<f64> = match &args.lambda_list {
        Some(raw) => parse_lambda_list(raw)?,
        None => epsilon_grid(args.eps_min, args.eps_max, args.eps_steps)
            .into_iter()
            .map(|e| 1.0 + e)
            .collect(),
    };
    println!("epsilon   mean      survival        residual    iters  regime");
    for mean in means {
        let s = survival_from_epsilon(mean - 1.0)?;
        let regime = match s.regime {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        };
        println!(
            "{:<9.4} {mean:<9.4} {:<15.12} {:<11.2e} {:<6} {regime}",
            mean - 1.0,
            s.value,
            s.residual,
            s.iterations
        );
    }
    Ok(0)
}

fn cmd_diameter(args: &DiameterArgs) -> Result<i32> {
    let spec: TreeSpec = args.tree.parse()?;
    let tree = TranspositionTree::from_spec(&spec, args.n)?;
    let n = tree.n();
    println!("n = {n}, tree = {spec}");
    println!("subtree diameter sum = {}", tree.diameter_bound());
    println!(
        "binomial bound C(n,2) = {}",
        TranspositionTree::binomial_bound(n)
    );
    if spec == TreeSpec::Star && n >= 4 {
        println!(
            "star closed-form bound 2(n-2) = {}",
            TranspositionTree::star_bound(n)
        );
    }
    let graph = CayleyGraph::with_metric_cap(tree, args.cap);
    match graph.exact_diameter() {
        Ok(d) => println!("exact diameter = {d}"),
        Err(Error::Capability { n, cap, .. }) => {
            println!("exact diameter skipped: n = {n} above cap {cap}; use the bounds above")
        }
        Err(e) => return Err(e),
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let suites: Vec<Suite> = match &args.suite {
        Some(name) => vec![name.parse()?],
        None => all_suites().to_vec(),
    };
    let mut passed = 0usize;
    let mut failed = 0usize;
    for suite in suites {
        let report = run_verification_suite(suite, args.budget)?;
        for line in report.lines() {
            println!("{line}");
        }
        passed += report.passed_count();
        failed += report.failed_count();
    }
    println!("# {passed} passed, {failed} failed");
    Ok(if failed == 0 { 0 } else { 3 })
}

fn cmd_plot(args: &PlotArgs) -> Result<i32> {
    let rows = read_rows_csv(&args.input)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.input.with_extension("svg"));
    emit_plot(&rows, &out)?;
    println!("# plot -> {}", out.display());
    Ok(0)
}

fn execute(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Survival(args) => cmd_survival(args),
        Command::Diameter(args) => cmd_diameter(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Capability { .. } => 2,
        _ => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}
