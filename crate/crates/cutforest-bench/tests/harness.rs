//! Harness-level checks: experiment execution, CSV determinism, config
//! errors, and scaling fits over real runner output.

use cutforest_bench::config::{Algorithm, ExperimentConfig, FamilyKind, RawSettings};
use cutforest_bench::fit::fit_scaling;
use cutforest_bench::runner::run_experiment;
use cutforest::graph::WeightDistribution;
use cutforest::randomized::BudgetFormula;

fn path_config() -> ExperimentConfig {
    ExperimentConfig {
        algorithm: Algorithm::Randomized,
        family: FamilyKind::Path,
        weights: WeightDistribution::Unit,
        n_list: vec![64],
        trials: 10,
        base_seed: 0,
        budget_constant: 64,
        budget_formula: BudgetFormula::BaselineLogN,
        output: None,
        record_timings: false,
    }
}

#[test]
fn ten_path_trials_all_verify() {
    let rows = run_experiment(&path_config()).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.verified));
    assert!(rows.iter().all(|r| r.n == 64 && r.components_final == 1));
    let seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, (0..10).collect::<Vec<u64>>());
}

#[test]
fn zero_trials_is_rejected_before_any_work() {
    let mut cfg = path_config();
    cfg.trials = 0;
    assert!(run_experiment(&cfg).is_err());
    let mut cfg = path_config();
    cfg.n_list.clear();
    assert!(run_experiment(&cfg).is_err());
}

#[test]
fn identical_configs_write_identical_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let mut cfg = ExperimentConfig {
        algorithm: Algorithm::Randomized,
        family: FamilyKind::ErdosRenyi { p: 0.2 },
        weights: WeightDistribution::UniformInt { lo: 1, hi: 1 << 20 },
        n_list: vec![16, 32],
        trials: 5,
        base_seed: 77,
        budget_constant: 64,
        budget_formula: BudgetFormula::BaselineLogN,
        output: Some(a.clone()),
        record_timings: false,
    };
    run_experiment(&cfg).unwrap();
    cfg.output = Some(b.clone());
    run_experiment(&cfg).unwrap();
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn every_algorithm_runs_under_the_harness() {
    for algorithm in [Algorithm::Randomized, Algorithm::Deterministic, Algorithm::HarveyBaseline] {
        let mut cfg = path_config();
        cfg.algorithm = algorithm;
        cfg.trials = 2;
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.verified && r.algorithm == algorithm.label()));
    }
}

#[test]
fn scaling_fit_runs_over_runner_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scaling.csv");
    let cfg = ExperimentConfig {
        algorithm: Algorithm::HarveyBaseline,
        family: FamilyKind::Clique,
        weights: WeightDistribution::Unit,
        n_list: vec![16, 32, 64, 128],
        trials: 3,
        base_seed: 1,
        budget_constant: 64,
        budget_formula: BudgetFormula::BaselineLogN,
        output: Some(csv.clone()),
        record_timings: false,
    };
    run_experiment(&cfg).unwrap();
    let scaling = fit_scaling(&csv, "cut_queries_total").unwrap();
    assert_eq!(scaling.means.len(), 4);
    assert!(
        scaling.fit.slope > 0.7 && scaling.fit.slope < 1.6,
        "near-linear learner scaling expected, got slope {}",
        scaling.fit.slope
    );
    assert!(fit_scaling(&csv, "bogus_column").is_err());
}

#[test]
fn config_file_plus_overrides_builds_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &conf,
        "algorithm = randomized\nfamily = star\nn = 8\ntrials = 2\nseed = 5\n",
    )
    .unwrap();
    let overrides = RawSettings {
        n: Some("12".into()),
        out: Some(csv.clone()),
        ..RawSettings::default()
    };
    let cfg = RawSettings::from_file(&conf).unwrap().overlay(overrides).build().unwrap();
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.n == 12 && r.seed >= 5));
    assert!(csv.is_file());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().starts_with("algorithm,family,n,seed"));
}
