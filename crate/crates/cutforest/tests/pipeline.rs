//! End-to-end sweeps: both spanning-forest learners and the boundary-probe
//! baseline across the generator families, checked against ground truth and
//! for ledger determinism.

use cutforest::deterministic::{
    harvey_baseline, spanning_forest_deterministic, DeterministicError,
};
use cutforest::graph::{
    generate_graph, is_maximal_spanning_forest, Forest, GraphFamily, GraphFamilySpec,
    WeightDistribution, WeightedGraph,
};
use cutforest::oracle::CutOracle;
use cutforest::randomized::{spanning_forest_randomized, PhaseConfig};

fn unit_specs() -> Vec<GraphFamilySpec> {
    use GraphFamily::*;
    use WeightDistribution::Unit;
    vec![
        GraphFamilySpec::new(ErdosRenyi { p: 0.05 }, 96, Unit, 11),
        GraphFamilySpec::new(ErdosRenyi { p: 0.3 }, 40, Unit, 12),
        GraphFamilySpec::new(ErdosRenyi { p: 0.9 }, 12, Unit, 13),
        GraphFamilySpec::new(Path, 64, Unit, 0),
        GraphFamilySpec::new(Path, 2, Unit, 0),
        GraphFamilySpec::new(Cycle, 33, Unit, 0),
        GraphFamilySpec::new(Star, 48, Unit, 0),
        GraphFamilySpec::new(Clique, 24, Unit, 0),
        GraphFamilySpec::new(
            DisjointUnion(vec![
                GraphFamilySpec::new(Clique, 8, Unit, 1),
                GraphFamilySpec::new(Path, 9, Unit, 2),
                GraphFamilySpec::new(Star, 7, Unit, 3),
            ]),
            0,
            Unit,
            0,
        ),
    ]
}

fn weighted_specs() -> Vec<GraphFamilySpec> {
    use GraphFamily::*;
    vec![
        GraphFamilySpec::new(
            ErdosRenyi { p: 0.15 },
            48,
            WeightDistribution::UniformInt { lo: 1, hi: (1 << 32) - 1 },
            21,
        ),
        GraphFamilySpec::new(Star, 32, WeightDistribution::HeavyTail, 22),
        GraphFamilySpec::new(Cycle, 17, WeightDistribution::UniformInt { lo: 5, hi: 9 }, 23),
    ]
}

fn check_forest(g: &WeightedGraph, f: &Forest) {
    assert!(is_maximal_spanning_forest(g, f), "learned forest fails the ground-truth check");
    for &(u, v, w) in f.edges() {
        assert_eq!(g.weight(u, v), Some(w), "forest edge ({u},{v}) carries a wrong weight");
    }
}

#[test]
fn randomized_learner_covers_every_family() {
    for spec in unit_specs().into_iter().chain(weighted_specs()) {
        let g = generate_graph(&spec).unwrap();
        for seed in 0..3 {
            let mut o = CutOracle::new(&g);
            let (forest, _) = spanning_forest_randomized(&mut o, &PhaseConfig::with_seed(seed));
            check_forest(&g, &forest);
            assert!(o.ledger_snapshot().consistent());
        }
    }
}

#[test]
fn deterministic_learner_covers_unit_families() {
    for spec in unit_specs() {
        let g = generate_graph(&spec).unwrap();
        let mut o = CutOracle::new(&g);
        let forest = spanning_forest_deterministic(&mut o).unwrap();
        check_forest(&g, &forest);
        assert!(o.ledger_snapshot().consistent());
    }
}

#[test]
fn deterministic_learner_rejects_weighted_inputs() {
    for spec in weighted_specs() {
        let g = generate_graph(&spec).unwrap();
        let mut o = CutOracle::new(&g);
        match spanning_forest_deterministic(&mut o) {
            Err(DeterministicError::WeightedInput { .. }) => {}
            Ok(_) => panic!("weighted graph slipped past the unit-weight detector"),
        }
    }
}

#[test]
fn baseline_learner_covers_every_family() {
    for spec in unit_specs().into_iter().chain(weighted_specs()) {
        let g = generate_graph(&spec).unwrap();
        let mut o = CutOracle::new(&g);
        let forest = harvey_baseline(&mut o);
        check_forest(&g, &forest);
        assert!(o.ledger_snapshot().consistent());
    }
}

#[test]
fn identical_seeds_replay_identical_runs() {
    let spec = GraphFamilySpec::new(
        GraphFamily::ErdosRenyi { p: 0.1 },
        72,
        WeightDistribution::UniformInt { lo: 1, hi: 1 << 16 },
        5,
    );
    let g = generate_graph(&spec).unwrap();

    let run = |seed: u64| {
        let mut o = CutOracle::new(&g);
        let (forest, stats) = spanning_forest_randomized(&mut o, &PhaseConfig::with_seed(seed));
        let ledger = o.ledger_snapshot();
        let categories: Vec<(String, u64)> =
            ledger.categories().map(|(t, c)| (t.to_string(), c)).collect();
        (forest.edges().to_vec(), stats.phases_run, ledger.total(), categories)
    };
    assert_eq!(run(9), run(9));
    let (edges_a, ..) = run(9);
    let (edges_b, ..) = run(10);
    let forest_b = Forest::new(g.n(), edges_b);
    check_forest(&g, &forest_b);
    check_forest(&g, &Forest::new(g.n(), edges_a));

    let det = |(): ()| {
        let mut o = CutOracle::new(&g);
        let spec_unit =
            GraphFamilySpec::new(GraphFamily::ErdosRenyi { p: 0.1 }, 72, WeightDistribution::Unit, 5);
        let gu = generate_graph(&spec_unit).unwrap();
        let mut ou = CutOracle::new(&gu);
        let forest = spanning_forest_deterministic(&mut ou).unwrap();
        let base = harvey_baseline(&mut o);
        (forest.edges().to_vec(), base.edges().to_vec(), ou.ledger_snapshot().total())
    };
    assert_eq!(det(()), det(()));
}

#[test]
fn forest_checker_flags_wrong_candidates() {
    let spec = GraphFamilySpec::new(GraphFamily::Cycle, 12, WeightDistribution::Unit, 0);
    let g = generate_graph(&spec).unwrap();
    let mut o = CutOracle::new(&g);
    let forest = harvey_baseline(&mut o);
    check_forest(&g, &forest);

    let mut missing = forest.edges().to_vec();
    missing.pop();
    assert!(!is_maximal_spanning_forest(&g, &Forest::new(g.n(), missing)));

    let mut cyclic = forest.edges().to_vec();
    let extra = g
        .edges()
        .find(|&(u, v, _)| !forest.edges().iter().any(|&(a, b, _)| (a, b) == (u, v)))
        .expect("a cycle keeps one non-tree edge");
    cyclic.push(extra);
    assert!(!is_maximal_spanning_forest(&g, &Forest::new(g.n(), cyclic)));
}
