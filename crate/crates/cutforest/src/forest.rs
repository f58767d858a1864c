//! Shared forest-building primitives: partition-with-representative state,
//! the spanning-forest finisher that grows supernode trees by boundary
//! probes, two-sided binary edge search, and representative refresh with
//! permanently-monotone inactive flags.

use std::collections::BTreeSet;

use crate::graph::{DisjointSets, Vertex};
use crate::num::ceil_log2;
use crate::oracle::CutOracle;

/// One block of the partition. `representative` is `None` exactly when the
/// block is known to be a complete component of the hidden graph.
#[derive(Debug, Clone)]
pub struct Component {
    members: Vec<Vertex>,
    representative: Option<Vertex>,
    /// Representatives inherited from merged-away blocks; tried first on refresh.
    prior_reps: Vec<Vertex>,
}

impl Component {
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn representative(&self) -> Option<Vertex> {
        self.representative
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Learner-side view of the current partition: which vertices sit together,
/// which vertex fronts each block, and which vertices are permanently done.
#[derive(Debug, Clone)]
pub struct ComponentState {
    n: usize,
    components: Vec<Component>,
    active: Vec<bool>,
    comp_of: Vec<u32>,
    learned_edges: Vec<(Vertex, Vertex, u64)>,
}

impl ComponentState {
    /// Singleton blocks from an activity bitmap: active vertices front their
    /// own block, inactive ones start (and stay) finished.
    pub fn from_activity(active: &[bool]) -> Self {
        let n = active.len();
        let components = (0..n as Vertex)
            .map(|v| Component {
                members: vec![v],
                representative: active[v as usize].then_some(v),
                prior_reps: if active[v as usize] { vec![v] } else { Vec::new() },
            })
            .collect();
        Self {
            n,
            components,
            active: active.to_vec(),
            comp_of: (0..n as u32).collect(),
            learned_edges: Vec::new(),
        }
    }

    /// All-singleton state with every vertex assumed active and fronting
    /// itself; the starting point when nothing about the graph is known.
    pub fn singletons(n: usize) -> Self {
        Self::from_activity(&vec![true; n])
    }

    /// Explicit partition with the given internal spanning edges. Every
    /// vertex starts active; each block is fronted by its smallest member.
    pub fn from_components(
        n: usize,
        partition: Vec<Vec<Vertex>>,
        learned_edges: Vec<(Vertex, Vertex, u64)>,
    ) -> Self {
        let mut components: Vec<Component> = partition
            .into_iter()
            .map(|mut members| {
                members.sort_unstable();
                let rep = members.first().copied();
                Component { members, representative: rep, prior_reps: rep.into_iter().collect() }
            })
            .collect();
        components.sort_by_key(|c| c.members[0]);
        let mut comp_of = vec![u32::MAX; n];
        for (i, c) in components.iter().enumerate() {
            for &v in &c.members {
                comp_of[v as usize] = i as u32;
            }
        }
        let state = Self { n, components, active: vec![true; n], comp_of, learned_edges };
        state.validate();
        state
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Blocks still fronted by a representative, i.e. not yet known complete.
    pub fn participating_count(&self) -> usize {
        self.components.iter().filter(|c| c.representative.is_some()).count()
    }

    pub fn participating_indices(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| self.components[i].representative.is_some())
            .collect()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.comp_of[v as usize] as usize
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active[v as usize]
    }

    pub fn learned_edges(&self) -> &[(Vertex, Vertex, u64)] {
        &self.learned_edges
    }

    /// Merges blocks along the given true edges. Edges whose endpoints
    /// already share a block are dropped so the learned set stays a forest.
    /// Merged blocks keep every prior representative as a refresh candidate
    /// and are temporarily fronted by the smallest one.
    pub fn merge_components(&mut self, edges: &[(Vertex, Vertex, u64)]) {
        let old_count = self.components.len();
        let mut dsu = DisjointSets::new(old_count);
        for &(u, v, w) in edges {
            let (cu, cv) = (self.comp_of[u as usize], self.comp_of[v as usize]);
            if dsu.union(cu, cv) {
                self.learned_edges.push((u.min(v), u.max(v), w));
            }
        }
        let mut grouped: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
        for i in 0..old_count {
            grouped.entry(dsu.find(i as u32)).or_default().push(i);
        }
        let mut next: Vec<Component> = grouped
            .into_values()
            .map(|idxs| {
                let mut members = Vec::new();
                let mut prior: BTreeSet<Vertex> = BTreeSet::new();
                for &i in &idxs {
                    members.extend_from_slice(&self.components[i].members);
                    prior.extend(self.components[i].representative);
                    prior.extend(self.components[i].prior_reps.iter().copied());
                }
                members.sort_unstable();
                let prior_reps: Vec<Vertex> =
                    prior.into_iter().filter(|&v| self.active[v as usize]).collect();
                Component {
                    members,
                    representative: prior_reps.first().copied(),
                    prior_reps,
                }
            })
            .collect();
        next.sort_by_key(|c| c.members[0]);
        for (i, c) in next.iter().enumerate() {
            for &v in &c.members {
                self.comp_of[v as usize] = i as u32;
            }
        }
        self.components = next;
    }

    /// Checks the structural invariants; panics on violation. Cheap enough
    /// for tests, not called on hot paths.
    pub fn validate(&self) {
        let mut seen = vec![false; self.n];
        for (i, c) in self.components.iter().enumerate() {
            assert!(!c.members.is_empty(), "empty component {i}");
            assert!(c.members.windows(2).all(|w| w[0] < w[1]), "unsorted members in {i}");
            for &v in &c.members {
                assert!(!seen[v as usize], "vertex {v} in two components");
                seen[v as usize] = true;
                assert_eq!(self.comp_of[v as usize], i as u32);
            }
            if let Some(r) = c.representative {
                assert!(c.members.contains(&r), "representative {r} outside component {i}");
                assert!(self.active[r as usize], "representative {r} is inactive");
            }
        }
        assert!(seen.into_iter().all(|s| s), "partition does not cover 0..n");
        let mut dsu = DisjointSets::new(self.n);
        for &(u, v, _) in &self.learned_edges {
            assert_eq!(
                self.comp_of[u as usize], self.comp_of[v as usize],
                "learned edge ({u},{v}) crosses components"
            );
            assert!(dsu.union(u, v), "learned edges contain a cycle at ({u},{v})");
        }
        for c in &self.components {
            let root = dsu.find(c.members[0]);
            for &v in &c.members {
                assert_eq!(dsu.find(v), root, "component not connected by learned edges");
            }
        }
    }
}

/// Narrows `candidates` to the single vertex with positive pairwise weight
/// to `fixed`, halving first-half-first. Precondition (not queried): the
/// full candidate set has positive weight to `fixed`.
fn halve_to_singleton(
    oracle: &mut CutOracle,
    candidates: &[Vertex],
    fixed: &[Vertex],
    tag: &str,
) -> (Vertex, u64) {
    debug_assert!(!candidates.is_empty());
    let mut lo = 0usize;
    let mut hi = candidates.len();
    let mut queries = 0u64;
    while hi - lo > 1 {
        let mid = lo + (hi - lo + 1) / 2;
        queries += 1;
        if oracle.cross(&candidates[lo..mid], fixed, tag) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (candidates[lo], queries)
}

/// Finds one true edge between two blocks known to be connected: first the
/// endpoint inside `ci` (halving against all of `cj`), then the endpoint
/// inside `cj` (halving against the found vertex), then one weight query.
/// Spends exactly `⌈log2|C_i|⌉+⌈log2|C_j|⌉+1` pairwise queries. Panics when
/// the two blocks turn out not to be connected (caller bug).
pub fn bin_search_edge(
    oracle: &mut CutOracle,
    ci: &[Vertex],
    cj: &[Vertex],
    tag: &str,
) -> (Vertex, Vertex, u64) {
    assert!(!ci.is_empty() && !cj.is_empty());
    let (vi, qi) = halve_to_singleton(oracle, ci, cj, tag);
    let (vj, qj) = halve_to_singleton(oracle, cj, &[vi], tag);
    let w = oracle.cross(&[vi], &[vj], tag);
    assert!(
        w > 0,
        "bin_search_edge found no edge: blocks are not connected (precondition violated)"
    );
    let bound = (ceil_log2(ci.len()) + ceil_log2(cj.len()) + 1) as u64;
    assert!(qi + qj + 1 <= bound);
    (vi, vj, w)
}

/// True edges forming a spanning forest of the contracted graph over the
/// state's blocks. Trees grow from each not-yet-finished block: one boundary
/// probe tests for an outgoing edge, a halving search over the outside
/// vertices finds the far endpoint, a second halving inside the tree finds
/// the near endpoint, and the far block is absorbed. Per discovered edge at
/// most `1 + 3(2⌈log2 n⌉ + 2)` boundary queries, plus one terminal probe per
/// started tree. Blocks without a representative are complete and are never
/// probed.
pub fn dfs_spanning_forest(
    oracle: &mut CutOracle,
    state: &ComponentState,
    tag: &str,
) -> Vec<(Vertex, Vertex, u64)> {
    let n = state.n();
    let comps = state.components();
    let mut visited = vec![false; comps.len()];
    let mut found = Vec::new();
    let mut cut_queries = 0u64;
    let mut trees_started = 0u64;
    for root in 0..comps.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        if comps[root].representative().is_none() {
            continue;
        }
        trees_started += 1;
        let mut in_tree = vec![false; n];
        let mut tree: Vec<Vertex> = comps[root].members().to_vec();
        for &v in &tree {
            in_tree[v as usize] = true;
        }
        loop {
            cut_queries += 1;
            if oracle.cut(&tree, tag) == 0 {
                break;
            }
            let outside: Vec<Vertex> =
                (0..n as Vertex).filter(|&v| !in_tree[v as usize]).collect();
            let (outer, q_out) = halve_to_singleton(oracle, &outside, &tree, tag);
            let (inner, q_in) = halve_to_singleton(oracle, &tree, &[outer], tag);
            let w = oracle.cross(&[inner], &[outer], tag);
            assert!(w > 0, "halving landed on a non-edge");
            cut_queries += 3 * (q_out + q_in + 1);
            found.push((inner, outer, w));
            let oc = state.component_of(outer);
            assert!(!visited[oc], "absorbed an already-finished tree");
            visited[oc] = true;
            for &v in comps[oc].members() {
                in_tree[v as usize] = true;
            }
            tree.extend_from_slice(comps[oc].members());
        }
    }
    let per_edge = 1 + 3 * (2 * ceil_log2(n) as u64 + 2);
    assert!(
        cut_queries <= found.len() as u64 * per_edge + trees_started,
        "spanning-forest search exceeded its query bound"
    );
    found
}

/// Re-fronts every unfinished block: tries inherited representatives first,
/// then remaining active members, each with one pairwise probe against the
/// rest of the graph. A failed probe marks that vertex inactive forever. A
/// block with no surviving candidate is complete and loses its
/// representative; a block covering the whole graph is completed for free.
pub fn refresh_representatives(oracle: &mut CutOracle, state: &mut ComponentState, tag: &str) {
    let n = state.n;
    for idx in 0..state.components.len() {
        if state.components[idx].representative.is_none() {
            continue;
        }
        let members = state.components[idx].members.clone();
        if members.len() == n {
            for &v in &members {
                state.active[v as usize] = false;
            }
            state.components[idx].representative = None;
            state.components[idx].prior_reps.clear();
            continue;
        }
        let mut in_comp = vec![false; n];
        for &v in &members {
            in_comp[v as usize] = true;
        }
        let outside: Vec<Vertex> = (0..n as Vertex).filter(|&v| !in_comp[v as usize]).collect();
        let candidates: Vec<Vertex> = {
            let c = &state.components[idx];
            let mut tried = BTreeSet::new();
            c.prior_reps
                .iter()
                .chain(c.members.iter())
                .copied()
                .filter(|&v| state.active[v as usize] && tried.insert(v))
                .collect()
        };
        let mut chosen = None;
        for v in candidates {
            if oracle.cross(&[v], &outside, tag) > 0 {
                chosen = Some(v);
                break;
            }
            state.active[v as usize] = false;
        }
        state.components[idx].representative = chosen;
        state.components[idx].prior_reps = chosen.into_iter().collect();
    }
}
