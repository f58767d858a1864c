//! Randomized invariant checks for the query layer: serialization, generator
//! determinism, oracle identities, and exactness of the reconstruction
//! primitives against ground truth.

use std::collections::BTreeSet;

use cutforest::graph::{
    generate_graph, load_graph, save_graph, GraphFamily, GraphFamilySpec, WeightDistribution,
    WeightedGraph,
};
use cutforest::num::ceil_log2;
use cutforest::oracle::{tags, CutOracle};
use cutforest::reconstruct::{
    adaptive_split_bipartite, coin_weigh_support, doubling_reconstruct, general_adaptive_split,
    BudgetedAdaptiveSplit, ReconStatus, SumQueryVector,
};
use proptest::prelude::*;

/// Graphs with up to 31 vertices and an arbitrary simple edge set.
fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..32).prop_flat_map(|n| {
        proptest::collection::vec(
            (0..n as u32, 0..n as u32, 1u64..1_000_000),
            0..80,
        )
        .prop_map(move |raw| {
            let mut seen = BTreeSet::new();
            let mut edges = Vec::new();
            for (a, b, w) in raw {
                if a == b {
                    continue;
                }
                let (u, v) = (a.min(b), a.max(b));
                if seen.insert((u, v)) {
                    edges.push((u, v, w));
                }
            }
            WeightedGraph::from_edges(n, edges).unwrap()
        })
    })
}

/// A graph together with a 0..4 label per vertex, for carving disjoint sets.
fn arb_graph_with_labels() -> impl Strategy<Value = (WeightedGraph, Vec<u8>)> {
    arb_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(0u8..4, n))
    })
}

fn labeled(labels: &[u8], want: u8) -> Vec<u32> {
    labels
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l == want)
        .map(|(v, _)| v as u32)
        .collect()
}

/// Hidden boolean vector that counts how many subset-sum probes it answers.
struct CountingBits {
    bits: Vec<bool>,
    queries: u64,
}

impl SumQueryVector for CountingBits {
    fn len(&self) -> usize {
        self.bits.len()
    }

    fn query(&mut self, s: &[usize]) -> u64 {
        self.queries += 1;
        s.iter().filter(|&&i| self.bits[i]).count() as u64
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_roundtrip_preserves_everything(g in arb_graph()) {
        let text = save_graph(&g);
        let back = load_graph(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn generation_is_a_pure_function_of_the_spec(seed in any::<u64>(), n in 3usize..64, pick in 0u8..5) {
        let family = match pick {
            0 => GraphFamily::ErdosRenyi { p: 0.2 },
            1 => GraphFamily::Path,
            2 => GraphFamily::Cycle,
            3 => GraphFamily::Star,
            _ => GraphFamily::Clique,
        };
        let weights = if seed % 2 == 0 {
            WeightDistribution::Unit
        } else {
            WeightDistribution::UniformInt { lo: 1, hi: 1 << 20 }
        };
        let spec = GraphFamilySpec::new(family, n, weights, seed);
        let a = generate_graph(&spec).unwrap();
        let b = generate_graph(&spec).unwrap();
        prop_assert_eq!(a.n(), b.n());
        prop_assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }

    #[test]
    fn oracle_answers_match_direct_computation((g, labels) in arb_graph_with_labels()) {
        let mut o = CutOracle::new(&g);
        let s = labeled(&labels, 1);
        let a = labeled(&labels, 2);
        let b = labeled(&labels, 3);
        prop_assert_eq!(o.cut(&s, tags::TEST), g.cut_value(&s));
        let before = o.ledger_snapshot().total();
        let crossed = o.cross(&a, &b, tags::TEST);
        prop_assert_eq!(o.ledger_snapshot().total() - before, 3);
        prop_assert_eq!(crossed, g.cross_value(&a, &b));
        let union: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
        let identity = g.cut_value(&a) + g.cut_value(&b) - g.cut_value(&union);
        prop_assert_eq!(2 * crossed, identity);
        prop_assert_eq!(o.additive(&s, tags::TEST), g.internal_weight(&s));
        prop_assert_eq!(o.additive(&a, tags::TEST), g.internal_weight(&a));
        prop_assert!(o.ledger_snapshot().consistent());
    }

    #[test]
    fn rectangle_recovery_is_exact((g, labels) in arb_graph_with_labels()) {
        let red = labeled(&labels, 1);
        let blue = labeled(&labels, 2);
        prop_assume!(!red.is_empty() && !blue.is_empty());
        let mut expected = Vec::new();
        for &r in &red {
            for &b in &blue {
                if let Some(w) = g.weight(r, b) {
                    expected.push((r, b, w));
                }
            }
        }
        expected.sort_unstable();
        let mut o = CutOracle::new(&g);
        let out = adaptive_split_bipartite(&mut o, &red, &blue, None, tags::TEST);
        prop_assert_eq!(out.status, ReconStatus::Ok);
        prop_assert_eq!(&out.edges, &expected);
        let m = expected.len() as u64;
        let depth = (ceil_log2(red.len()) + ceil_log2(blue.len())) as u64;
        let bound = if m == 0 { 1 } else { 2 * m * depth + 1 };
        prop_assert!(out.queries_used <= bound);
    }

    #[test]
    fn whole_set_recovery_is_exact((g, labels) in arb_graph_with_labels()) {
        let u = labeled(&labels, 1);
        prop_assume!(u.len() >= 2);
        let inside: BTreeSet<u32> = u.iter().copied().collect();
        let mut expected: Vec<(u32, u32, u64)> = g
            .edges()
            .filter(|&(a, b, _)| inside.contains(&a) && inside.contains(&b))
            .collect();
        expected.sort_unstable();
        let mut o = CutOracle::new(&g);
        let out = general_adaptive_split(&mut o, &u, tags::TEST);
        prop_assert_eq!(out.status, ReconStatus::Ok);
        prop_assert_eq!(&out.edges, &expected);
    }

    #[test]
    fn verified_wrapper_agrees_with_direct_recovery((g, labels) in arb_graph_with_labels()) {
        let red = labeled(&labels, 1);
        let blue = labeled(&labels, 2);
        prop_assume!(!red.is_empty() && !blue.is_empty());
        let mut o = CutOracle::new(&g);
        let direct = adaptive_split_bipartite(&mut o, &red, &blue, None, tags::TEST);
        let wrapped = doubling_reconstruct(&mut o, &red, &blue, &BudgetedAdaptiveSplit, tags::TEST);
        prop_assert_eq!(wrapped.status, ReconStatus::Ok);
        prop_assert_eq!(wrapped.edges, direct.edges);
    }

    #[test]
    fn support_recovery_matches_brute_force(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
        let expected: Vec<usize> =
            bits.iter().enumerate().filter(|&(_, &b)| b).map(|(i, _)| i).collect();
        let mut vec = CountingBits { bits, queries: 0 };
        let n = vec.len();
        let support = coin_weigh_support(&mut vec);
        prop_assert_eq!(&support, &expected);
        let d = expected.len() as u64;
        let bound = if d == 0 { 1 } else { 2 * d * ceil_log2(n) as u64 + 1 };
        prop_assert!(vec.queries <= bound, "{} sum queries exceed {}", vec.queries, bound);
    }
}
