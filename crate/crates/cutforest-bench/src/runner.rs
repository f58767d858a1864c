//! Trial execution: generate the graph, run the chosen learner against a
//! fresh instrumented oracle, verify the output against ground truth, and
//! turn the ledger into a result row. Trials are independent and run in
//! parallel; rows always come back in (n, trial) order.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cutforest::deterministic::{harvey_baseline, spanning_forest_deterministic};
use cutforest::graph::{generate_graph, is_maximal_spanning_forest, save_graph_to_path, Forest};
use cutforest::oracle::{tags, CutOracle, QueryLedger};
use cutforest::randomized::spanning_forest_randomized;
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig};
use crate::report::{write_rows, ResultRow};

/// Mixes the trial seed into an unrelated stream for the learner so that
/// graph randomness and algorithm randomness never share a seed.
pub fn algorithm_seed(trial_seed: u64) -> u64 {
    trial_seed.wrapping_add(0x9E37_79B9_7F4A_7C15)
}

/// Ledger counts in canonical tag order.
fn category_counts(ledger: &QueryLedger) -> Vec<u64> {
    tags::CANONICAL.iter().map(|t| ledger.category(t)).collect()
}

struct TrialOutput {
    forest: Forest,
    phases_run: u64,
    aborts: u64,
    sampled_edges_total: u64,
}

fn run_learner(
    cfg: &ExperimentConfig,
    oracle: &mut CutOracle,
    trial_seed: u64,
) -> Result<TrialOutput> {
    match cfg.algorithm {
        Algorithm::Randomized => {
            let phase_cfg = cfg.phase_config(algorithm_seed(trial_seed));
            let (forest, stats) = spanning_forest_randomized(oracle, &phase_cfg);
            Ok(TrialOutput {
                forest,
                phases_run: stats.phases_run,
                aborts: stats.reduce_attempts - stats.phases_run,
                sampled_edges_total: stats.sampled_edges_total,
            })
        }
        Algorithm::Deterministic => {
            let forest = spanning_forest_deterministic(oracle)
                .context("deterministic learner rejected the input")?;
            Ok(TrialOutput { forest, phases_run: 0, aborts: 0, sampled_edges_total: 0 })
        }
        Algorithm::HarveyBaseline => {
            let forest = harvey_baseline(oracle);
            Ok(TrialOutput { forest, phases_run: 0, aborts: 0, sampled_edges_total: 0 })
        }
    }
}

/// Where a failed trial's graph gets dumped: next to the output file if one
/// is configured, otherwise the working directory.
fn dump_path(cfg: &ExperimentConfig, n: usize, seed: u64) -> PathBuf {
    let name = format!("cutforest-failed-{}-n{n}-seed{seed}.graph", cfg.algorithm.label());
    match cfg.output.as_ref().and_then(|p| p.parent()) {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(name),
        _ => PathBuf::from(name),
    }
}

/// Runs one trial end to end. A verification failure saves the offending
/// graph and aborts the experiment: the learners are zero-error, so a wrong
/// forest is an algorithm bug, never data.
pub fn run_single(cfg: &ExperimentConfig, n: usize, trial: u64) -> Result<ResultRow> {
    let trial_seed = cfg.base_seed.wrapping_add(trial);
    let spec = cfg.spec_for(n, trial_seed);
    let g = generate_graph(&spec)
        .with_context(|| format!("cannot generate {} at n={n}", cfg.family_label()))?;
    let mut oracle = CutOracle::new(&g);
    let started = Instant::now();
    let out = run_learner(cfg, &mut oracle, trial_seed)?;
    let wall_time_ms = if cfg.record_timings {
        started.elapsed().as_millis().try_into().unwrap_or(u64::MAX)
    } else {
        0
    };
    let ledger = oracle.ledger_snapshot();
    assert!(ledger.consistent(), "ledger category totals disagree with the global count");
    let verified = is_maximal_spanning_forest(&g, &out.forest);
    if !verified {
        let dump = dump_path(cfg, n, trial_seed);
        save_graph_to_path(&g, &dump)
            .with_context(|| format!("cannot save failing graph to {}", dump.display()))?;
        bail!(
            "trial failed ground-truth verification (algorithm={}, n={n}, seed={trial_seed}); \
             graph saved to {}",
            cfg.algorithm.label(),
            dump.display()
        );
    }
    Ok(ResultRow {
        algorithm: cfg.algorithm.label().to_string(),
        family: cfg.family_label(),
        n,
        seed: trial_seed,
        cut_queries_total: ledger.total(),
        per_category: category_counts(&ledger),
        phases_run: out.phases_run,
        aborts: out.aborts,
        sampled_edges_total: out.sampled_edges_total,
        components_final: out.forest.component_count() as u64,
        verified,
        wall_time_ms,
    })
}

/// Runs the whole experiment and writes the CSV if an output path is set.
/// Row order is (n, trial) regardless of which trial finishes first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let outcomes: Vec<Result<ResultRow>> =
        jobs.par_iter().map(|&(n, trial)| run_single(cfg, n, trial)).collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        rows.push(outcome?);
    }
    if let Some(path) = &cfg.output {
        write_rows(path, &rows)?;
    }
    Ok(rows)
}
