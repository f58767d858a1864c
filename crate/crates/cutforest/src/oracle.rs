//! The only access path learners have to a hidden graph: boundary-weight
//! queries, plus pairwise and induced-weight queries simulated from them,
//! with every underlying query charged to an exact ledger.

use std::collections::BTreeMap;

use crate::graph::{Vertex, WeightedGraph};

/// Canonical ledger categories used by the learners and the harness.
/// Tags are free-form strings; these constants keep reports comparable.
pub mod tags {
    pub const INIT_ACTIVITY: &str = "init-activity";
    pub const COLOR_CHECK: &str = "color-check";
    pub const PHASE_RECON: &str = "phase-reconstruct";
    pub const REFRESH: &str = "refresh-reps";
    pub const DFS: &str = "dfs-finish";
    pub const ADDITIVE_CACHE: &str = "additive-cache";
    pub const RESDEG: &str = "resdeg";
    pub const COIN_WEIGH: &str = "coin-weigh";
    pub const PSEUDO: &str = "pseudo-graph";
    pub const JOIN_RECON: &str = "join-recon";
    pub const JOIN_BINSEARCH: &str = "join-binsearch";
    pub const TEST: &str = "test";

    /// Fixed column order for per-category counts in CSV reports.
    pub const CANONICAL: &[&str] = &[
        INIT_ACTIVITY,
        COLOR_CHECK,
        PHASE_RECON,
        REFRESH,
        DFS,
        ADDITIVE_CACHE,
        RESDEG,
        COIN_WEIGH,
        PSEUDO,
        JOIN_RECON,
        JOIN_BINSEARCH,
    ];
}

/// Exact count of boundary queries, broken down by caller-supplied category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    cut_total: u64,
    by_category: BTreeMap<String, u64>,
}

impl QueryLedger {
    pub fn total(&self) -> u64 {
        self.cut_total
    }

    pub fn category(&self, tag: &str) -> u64 {
        self.by_category.get(tag).copied().unwrap_or(0)
    }

    /// Category rows in sorted tag order.
    pub fn categories(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.by_category.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Category sums always equal the total; false means an accounting bug.
    pub fn consistent(&self) -> bool {
        self.by_category.values().sum::<u64>() == self.cut_total
    }

    fn charge(&mut self, tag: &str, count: u64) {
        self.cut_total += count;
        *self.by_category.entry(tag.to_string()).or_insert(0) += count;
    }
}

/// Instrumented query access to one hidden graph. One instance per trial;
/// distinct instances over the same graph may run in parallel.
pub struct CutOracle<'g> {
    hidden: &'g WeightedGraph,
    ledger: QueryLedger,
    singleton_cuts: Option<Vec<u64>>,
}

impl<'g> CutOracle<'g> {
    pub fn new(hidden: &'g WeightedGraph) -> Self {
        Self { hidden, ledger: QueryLedger::default(), singleton_cuts: None }
    }

    /// Vertex count is public knowledge; edges are not.
    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn ledger_snapshot(&self) -> QueryLedger {
        self.ledger.clone()
    }

    /// Total boundary weight of `s`. Charges exactly one query under `tag`.
    pub fn cut(&mut self, s: &[Vertex], tag: &str) -> u64 {
        self.ledger.charge(tag, 1);
        self.eval_cut(s)
    }

    /// Total weight between disjoint `a` and `b`, from three boundary values.
    /// Charges exactly three queries under `tag`. Overlap is a caller bug.
    pub fn cross(&mut self, a: &[Vertex], b: &[Vertex], tag: &str) -> u64 {
        let mut in_a = vec![false; self.hidden.n()];
        for &v in a {
            self.check_range(v);
            in_a[v as usize] = true;
        }
        for &v in b {
            self.check_range(v);
            assert!(!in_a[v as usize], "cross query sets overlap at vertex {v}");
        }
        let union: Vec<Vertex> = a.iter().chain(b.iter()).copied().collect();
        let ca = self.cut(a, tag);
        let cb = self.cut(b, tag);
        let cu = self.cut(&union, tag);
        let doubled = (ca as u128 + cb as u128)
            .checked_sub(cu as u128)
            .expect("boundary arithmetic underflow");
        debug_assert_eq!(doubled % 2, 0);
        (doubled / 2) as u64
    }

    /// Total weight of edges inside `s`. The first call fills a singleton
    /// boundary cache for `n` queries (charged to a dedicated category);
    /// every call, including the first, charges one further query under `tag`.
    pub fn additive(&mut self, s: &[Vertex], tag: &str) -> u64 {
        if self.singleton_cuts.is_none() {
            let n = self.hidden.n();
            self.ledger.charge(tags::ADDITIVE_CACHE, n as u64);
            let cache: Vec<u64> = (0..n as Vertex).map(|v| self.eval_cut(&[v])).collect();
            self.singleton_cuts = Some(cache);
        }
        let boundary = self.cut(s, tag);
        let cache = self.singleton_cuts.as_ref().unwrap();
        let mut seen = vec![false; self.hidden.n()];
        let mut singleton_sum = 0u128;
        for &v in s {
            if !seen[v as usize] {
                seen[v as usize] = true;
                singleton_sum += cache[v as usize] as u128;
            }
        }
        let doubled = singleton_sum
            .checked_sub(boundary as u128)
            .expect("boundary arithmetic underflow");
        debug_assert_eq!(doubled % 2, 0);
        (doubled / 2) as u64
    }

    fn check_range(&self, v: Vertex) {
        assert!(
            (v as usize) < self.hidden.n(),
            "query vertex {v} out of range (n={})",
            self.hidden.n()
        );
    }

    /// Evaluates a boundary sum by walking the adjacency of the cheaper side.
    fn eval_cut(&self, s: &[Vertex]) -> u64 {
        let n = self.hidden.n();
        let mut inside = vec![false; n];
        let mut volume = 0u64;
        for &v in s {
            self.check_range(v);
            if !inside[v as usize] {
                inside[v as usize] = true;
                volume += self.hidden.weighted_degree(v);
            }
        }
        let total_volume = 2 * self.hidden.total_weight();
        let mut sum = 0u64;
        if volume <= total_volume - volume {
            for &v in s {
                if inside[v as usize] {
                    for &(u, w) in self.hidden.adjacency(v) {
                        if !inside[u as usize] {
                            sum += w;
                        }
                    }
                }
            }
        } else {
            for v in 0..n as Vertex {
                if !inside[v as usize] {
                    for &(u, w) in self.hidden.adjacency(v) {
                        if inside[u as usize] {
                            sum += w;
                        }
                    }
                }
            }
        }
        sum
    }
}

/// Pairwise-weight query surface the reconstruction routines run against.
///
/// The two argument slices are ids in implementation-defined spaces (plain
/// vertices, group indices, ...). The first argument always comes from the
/// caller's first id space and the second from its second space, and the two
/// expansions must be disjoint in the hidden graph. One call counts as one
/// pairwise query whatever the expansion sizes are.
pub trait CrossProbe {
    fn cross(&mut self, a: &[u32], b: &[u32], tag: &str) -> u64;
}

impl CrossProbe for CutOracle<'_> {
    fn cross(&mut self, a: &[u32], b: &[u32], tag: &str) -> u64 {
        CutOracle::cross(self, a, b, tag)
    }
}
