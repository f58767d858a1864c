//! Command-line front end: `run` executes an experiment and writes the CSV,
//! `verify` runs the acceptance suite, `fit` aggregates an existing CSV into
//! a log-log scaling line. Exit code 0 means every trial verified (or every
//! check passed); anything else is a failure.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use cutforest_bench::acceptance::{suite_passed, verify_suite};
use cutforest_bench::config::{ExperimentConfig, RawSettings};
use cutforest_bench::fit::fit_scaling;
use cutforest_bench::runner::run_experiment;

#[derive(Parser)]
#[command(
    name = "cutforest-bench",
    about = "Query-count benchmarks for spanning-forest learners over hidden weighted graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment: one CSV row per verified trial.
    Run(RunArgs),
    /// Run the acceptance suite and print one status line per check.
    Verify,
    /// Fit log2(mean of a column) against log2(n) over an existing CSV.
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value settings file; any flag below overrides its entry.
    #[arg(long)]
    config: Option<PathBuf>,
    /// randomized, deterministic, or harvey-baseline.
    #[arg(long)]
    algorithm: Option<String>,
    /// erdos-renyi, path, cycle, star, clique, bipartite-matching,
    /// bipartite-uniform:D, bipartite-mixed, or bipartite-complete.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated graph sizes, e.g. 64,128,256.
    #[arg(long)]
    n: Option<String>,
    /// Edge probability for erdos-renyi.
    #[arg(long)]
    p: Option<f64>,
    /// unit, uniform:LO:HI, or heavy-tail.
    #[arg(long)]
    weights: Option<String>,
    /// Trials per size; trial i uses seed base+i.
    #[arg(long)]
    trials: Option<u64>,
    /// Base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Budget multiplier for the randomized learner's reduction rounds.
    #[arg(long)]
    budget_constant: Option<u64>,
    /// linear or baseline-logn.
    #[arg(long)]
    budget_formula: Option<String>,
    /// CSV output path; omit to print the summary only.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time per trial (off by default so CSV bytes stay
    /// deterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct FitArgs {
    /// CSV file produced by run.
    csv: PathBuf,
    /// Column to aggregate per size.
    #[arg(long, default_value = "cut_queries_total")]
    column: String,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let file_settings = match &args.config {
        Some(path) => RawSettings::from_file(path)?,
        None => RawSettings::default(),
    };
    let overrides = RawSettings {
        algorithm: args.algorithm.clone(),
        family: args.family.clone(),
        n: args.n.clone(),
        p: args.p,
        weights: args.weights.clone(),
        trials: args.trials,
        seed: args.seed,
        budget_constant: args.budget_constant,
        budget_formula: args.budget_formula.clone(),
        out: args.out.clone(),
        timings: if args.timings { Some(true) } else { None },
    };
    file_settings.overlay(overrides).build()
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = build_config(args)?;
    let rows = run_experiment(&cfg)?;
    println!(
        "{} trials verified: algorithm={} family={}",
        rows.len(),
        cfg.algorithm.label(),
        cfg.family_label()
    );
    for &n in &cfg.n_list {
        let totals: Vec<u64> =
            rows.iter().filter(|r| r.n == n).map(|r| r.cut_queries_total).collect();
        let mean = totals.iter().sum::<u64>() as f64 / totals.len() as f64;
        println!("  n={n}: mean cut queries {mean:.1} over {} trials", totals.len());
    }
    if let Some(out) = &cfg.output {
        println!("rows written to {}", out.display());
    }
    Ok(())
}

fn cmd_verify() -> bool {
    let reports = verify_suite();
    for report in &reports {
        println!("{}", report.line());
    }
    let ok = suite_passed(&reports);
    println!("{}", if ok { "all checks passed" } else { "SUITE FAILED" });
    ok
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let scaling = fit_scaling(&args.csv, &args.column)?;
    for &(n, mean) in &scaling.means {
        println!("n={n}: mean {}={mean:.2}", scaling.column);
    }
    println!(
        "log-log fit over {} sizes: slope {:.4}, intercept {:.4}",
        scaling.means.len(),
        scaling.fit.slope,
        scaling.fit.intercept
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ok = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Verify => {
            return if cmd_verify() { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match ok {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
