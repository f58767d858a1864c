//! Deterministic spanning-forest learner for unweighted hidden graphs.
//!
//! Stage one walks a breadth-first frontier over the still-unvisited vertex
//! set and, whenever a vertex keeps at least `L` residual neighbors, learns
//! all of them at once by coin-weighing the residual indicator row. Vertices
//! below the threshold are closed out unexpanded, so each contributes fewer
//! than `L` edges toward other blocks. Stage two reconstructs the contracted
//! multigraph over the discovered blocks exactly, takes a spanning forest of
//! it, and resolves every forest edge to one true edge, splicing blocks
//! whose forest degree is large through a dedicated bipartite
//! reconstruction. A Prim-style boundary-probe baseline is included for
//! comparison; unlike the two-stage pipeline it also handles weights.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::forest::{bin_search_edge, dfs_spanning_forest, ComponentState};
use crate::graph::{DisjointSets, Forest, Vertex};
use crate::num::ceil_log2;
use crate::oracle::{tags, CrossProbe, CutOracle};
use crate::reconstruct::{
    adaptive_split_bipartite, coin_weigh_support, general_adaptive_split, SumQueryVector,
};

/// The pipeline assumes every hidden weight is exactly 1. Queries whose
/// answers cannot come from a simple unweighted graph abort the run.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeterministicError {
    #[error("weighted input detected: {detail}")]
    WeightedInput { detail: String },
}

/// Residual-degree threshold for expansion: `max(1, ⌈log2 n/(log2 log2 n)²⌉)`.
/// Equals 1 for n = 2 and for 16 ≤ n ≤ 65536, and 2 on the small range in
/// between, so small instances are the ones that exercise close-outs.
pub fn dense_threshold(n: usize) -> u64 {
    if n < 3 {
        return 1;
    }
    let l = (n as f64).log2();
    let denom = l.log2().powi(2).max(1.0);
    ((l / denom).ceil() as u64).max(1)
}

/// Forest-degree bound above which a block is spliced vertex-by-vertex:
/// `max(1, ⌈log2 n/log2 log2 n⌉)`.
pub fn degree_split_threshold(n: usize) -> u64 {
    if n < 3 {
        return 1;
    }
    let l = (n as f64).log2();
    ((l / l.log2()).ceil() as u64).max(1)
}

/// Outcome of the discovery stage: the vertex blocks in the order they were
/// grown, a spanning tree of learned edges inside each block, and the
/// threshold that was in force.
#[derive(Debug, Clone)]
pub struct DiscoveryState {
    threshold: u64,
    components: Vec<Vec<Vertex>>,
    internal_edges: Vec<(Vertex, Vertex, u64)>,
    closeout_residual_total: u64,
}

impl DiscoveryState {
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn internal_edges(&self) -> &[(Vertex, Vertex, u64)] {
        &self.internal_edges
    }

    /// Sum of residual degrees seen at close-out; an upper bound on the
    /// number of true edges left between different blocks.
    pub fn closeout_residual_total(&self) -> u64 {
        self.closeout_residual_total
    }
}

/// The residual indicator row of one vertex, exposed as a sum-query vector:
/// position `i` holds 1 exactly when `universe[i]` neighbors `center`.
struct ResidualRow<'a, 'g> {
    oracle: &'a mut CutOracle<'g>,
    center: Vertex,
    universe: &'a [Vertex],
}

impl SumQueryVector for ResidualRow<'_, '_> {
    fn len(&self) -> usize {
        self.universe.len()
    }

    fn query(&mut self, s: &[usize]) -> u64 {
        let chosen: Vec<Vertex> = s.iter().map(|&i| self.universe[i]).collect();
        self.oracle.cross(&[self.center], &chosen, tags::COIN_WEIGH)
    }
}

/// Discovery with the threshold derived from the graph size.
pub fn discover_dense_components(
    oracle: &mut CutOracle,
) -> Result<DiscoveryState, DeterministicError> {
    let l = dense_threshold(oracle.n());
    discover_with_threshold(oracle, l)
}

/// Discovery under an explicit expansion threshold `l`.
///
/// Repeatedly seeds a breadth-first walk at the lowest-index unvisited
/// vertex. A dequeued vertex first learns its residual degree (one pairwise
/// query against the unvisited set); at or above `l` its residual neighbors
/// are identified by coin-weighing, learned as tree edges, and enqueued.
/// Below `l` the vertex closes out, leaving fewer than `l` of its edges
/// pointing at other blocks, which caps the total crossing-edge count at
/// `n·l`.
pub fn discover_with_threshold(
    oracle: &mut CutOracle,
    l: u64,
) -> Result<DiscoveryState, DeterministicError> {
    assert!(l >= 1, "expansion threshold must be positive");
    let n = oracle.n();
    let mut unvisited = vec![true; n];
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    let mut internal_edges: Vec<(Vertex, Vertex, u64)> = Vec::new();
    let mut closeout_total = 0u64;
    for start in 0..n {
        if !unvisited[start] {
            continue;
        }
        unvisited[start] = false;
        let mut comp = vec![start as Vertex];
        let mut queue: VecDeque<Vertex> = VecDeque::from([start as Vertex]);
        while let Some(v) = queue.pop_front() {
            let residual: Vec<Vertex> =
                (0..n as Vertex).filter(|&u| unvisited[u as usize]).collect();
            let resdeg = if residual.is_empty() {
                0
            } else {
                oracle.cross(&[v], &residual, tags::RESDEG)
            };
            if resdeg > residual.len() as u64 {
                return Err(DeterministicError::WeightedInput {
                    detail: format!(
                        "vertex {v} reports residual weight {resdeg} toward only {} vertices",
                        residual.len()
                    ),
                });
            }
            if resdeg >= l {
                let mut row = ResidualRow { oracle, center: v, universe: &residual };
                let support = coin_weigh_support(&mut row);
                if support.len() as u64 != resdeg {
                    return Err(DeterministicError::WeightedInput {
                        detail: format!(
                            "vertex {v} spreads residual weight {resdeg} over {} neighbors",
                            support.len()
                        ),
                    });
                }
                for &pos in &support {
                    let u = residual[pos];
                    unvisited[u as usize] = false;
                    internal_edges.push((v.min(u), v.max(u), 1));
                    comp.push(u);
                    queue.push_back(u);
                }
            } else {
                closeout_total += resdeg;
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    if n > 0 {
        assert!(
            closeout_total < n as u64 * l,
            "close-outs kept more residual edges than the threshold permits"
        );
    }
    Ok(DiscoveryState {
        threshold: l,
        components,
        internal_edges,
        closeout_residual_total: closeout_total,
    })
}

/// Contraction of the hidden graph over a set of vertex blocks: block pairs
/// mapped to the number of true edges between them.
#[derive(Debug, Clone)]
pub struct PseudoGraph {
    supernodes: Vec<Vec<Vertex>>,
    multiplicities: BTreeMap<(u32, u32), u64>,
}

impl PseudoGraph {
    pub fn supernode_count(&self) -> usize {
        self.supernodes.len()
    }

    pub fn supernodes(&self) -> &[Vec<Vertex>] {
        &self.supernodes
    }

    pub fn multiplicity(&self, i: u32, j: u32) -> u64 {
        self.multiplicities.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.multiplicities.iter().map(|(&k, &m)| (k, m))
    }

    /// Total number of true edges running between different supernodes.
    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.values().sum()
    }
}

/// Pairwise probes between supernode sets, answered by expanding each id to
/// its block's vertices; one supernode probe costs one vertex-level probe.
struct SupernodeView<'a, 'g> {
    oracle: &'a mut CutOracle<'g>,
    components: &'a [Vec<Vertex>],
}

impl CrossProbe for SupernodeView<'_, '_> {
    fn cross(&mut self, a: &[u32], b: &[u32], tag: &str) -> u64 {
        let expand = |ids: &[u32]| -> Vec<Vertex> {
            ids.iter().flat_map(|&i| self.components[i as usize].iter().copied()).collect()
        };
        let left = expand(a);
        let right = expand(b);
        self.oracle.cross(&left, &right, tag)
    }
}

/// Reconstructs the contraction of the hidden graph over `components`
/// exactly. Requires the blocks to partition the vertices.
pub fn build_pseudo_graph(
    oracle: &mut CutOracle,
    components: &[Vec<Vertex>],
) -> Result<PseudoGraph, DeterministicError> {
    let ids: Vec<u32> = (0..components.len() as u32).collect();
    let mut view = SupernodeView { oracle, components };
    let result = general_adaptive_split(&mut view, &ids, tags::PSEUDO);
    let mut multiplicities = BTreeMap::new();
    for (i, j, m) in result.edges {
        let (a, b) = (i.min(j), i.max(j));
        let cap = (components[a as usize].len() * components[b as usize].len()) as u64;
        if m > cap {
            return Err(DeterministicError::WeightedInput {
                detail: format!(
                    "blocks {a} and {b} report {m} crossing edges but only {cap} pairs exist"
                ),
            });
        }
        multiplicities.insert((a, b), m);
    }
    Ok(PseudoGraph { supernodes: components.to_vec(), multiplicities })
}

/// Pairwise probes where the left side is plain vertices and the right side
/// indexes a list of vertex blocks.
struct MixedView<'a, 'g> {
    oracle: &'a mut CutOracle<'g>,
    right_blocks: Vec<&'a [Vertex]>,
}

impl CrossProbe for MixedView<'_, '_> {
    fn cross(&mut self, a: &[u32], b: &[u32], tag: &str) -> u64 {
        let right: Vec<Vertex> =
            b.iter().flat_map(|&i| self.right_blocks[i as usize].iter().copied()).collect();
        self.oracle.cross(a, &right, tag)
    }
}

/// One endpoint specification of a contracted forest edge while it is being
/// resolved to a true edge.
#[derive(Debug, Clone, Copy)]
enum Side {
    /// Still the whole block.
    Full,
    /// Narrowed to one member vertex known to reach the other side.
    Pinned(Vertex),
}

/// Turns the contracted graph's connectivity into true edges and returns the
/// finished forest.
///
/// A spanning forest of the contraction is fixed first (scanning pseudo-edges
/// in block order). Blocks whose forest degree exceeds the splice threshold
/// reconstruct their full bipartite adjacency toward their neighbor blocks in
/// one shot and pin, per neighbor, their lowest-numbered member with an edge
/// there; every forest edge is then resolved by the two-sided binary search,
/// searching from a pinned vertex when one exists. The result is the learned
/// internal trees plus exactly one true edge per forest edge.
pub fn join_components(
    oracle: &mut CutOracle,
    components: &[Vec<Vertex>],
    internal_edges: &[(Vertex, Vertex, u64)],
    h: &PseudoGraph,
) -> Result<Forest, DeterministicError> {
    let n = oracle.n();
    let k = components.len();
    debug_assert_eq!(h.supernode_count(), k);
    let mut dsu = DisjointSets::new(k);
    let mut skeleton: Vec<(u32, u32)> = Vec::new();
    for ((i, j), _) in h.edges() {
        if dsu.union(i, j) {
            skeleton.push((i, j));
        }
    }
    let mut degree = vec![0u64; k];
    for &(i, j) in &skeleton {
        degree[i as usize] += 1;
        degree[j as usize] += 1;
    }
    let mut sides: Vec<[Side; 2]> =
        skeleton.iter().map(|_| [Side::Full, Side::Full]).collect();
    let split_at = degree_split_threshold(n);
    for ci in 0..k as u32 {
        if degree[ci as usize] <= split_at {
            continue;
        }
        // (skeleton index, neighbor block, side slot owned by ci)
        let incident: Vec<(usize, u32, usize)> = skeleton
            .iter()
            .enumerate()
            .filter_map(|(idx, &(i, j))| {
                if i == ci {
                    Some((idx, j, 0))
                } else if j == ci {
                    Some((idx, i, 1))
                } else {
                    None
                }
            })
            .collect();
        let right_blocks: Vec<&[Vertex]> =
            incident.iter().map(|&(_, other, _)| components[other as usize].as_slice()).collect();
        let members = &components[ci as usize];
        let right_ids: Vec<u32> = (0..incident.len() as u32).collect();
        let mut view = MixedView { oracle, right_blocks };
        let res = adaptive_split_bipartite(&mut view, members, &right_ids, None, tags::JOIN_RECON);
        for (slot, &(idx, other, own)) in incident.iter().enumerate() {
            let hit = res
                .edges
                .iter()
                .find(|&&(_, r, _)| r == slot as u32)
                .copied()
                .expect("forest neighbor lost its crossing edges");
            let (v, _, m) = hit;
            let cap = components[other as usize].len() as u64;
            if m > cap {
                return Err(DeterministicError::WeightedInput {
                    detail: format!(
                        "vertex {v} reports {m} edges into a block of {cap} vertices"
                    ),
                });
            }
            sides[idx][own] = Side::Pinned(v);
        }
    }
    let mut recovered: Vec<(Vertex, Vertex, u64)> = Vec::new();
    for (idx, &(i, j)) in skeleton.iter().enumerate() {
        // search from a pinned vertex when available; a pin guarantees an
        // edge into the opposite block, so the full block stays the target
        let (left, right): (Vec<Vertex>, Vec<Vertex>) = match sides[idx] {
            [Side::Pinned(a), _] => (vec![a], components[j as usize].clone()),
            [Side::Full, Side::Pinned(b)] => (vec![b], components[i as usize].clone()),
            [Side::Full, Side::Full] => {
                (components[i as usize].clone(), components[j as usize].clone())
            }
        };
        let (u, v, w) = bin_search_edge(oracle, &left, &right, tags::JOIN_BINSEARCH);
        if w != 1 {
            return Err(DeterministicError::WeightedInput {
                detail: format!("edge ({u},{v}) carries weight {w}"),
            });
        }
        recovered.push((u, v, w));
    }
    let mut all = internal_edges.to_vec();
    all.extend(recovered);
    Ok(Forest::new(n, all))
}

/// The full two-stage deterministic pipeline. Identical inputs give
/// identical query ledgers; any answer inconsistent with an unweighted
/// simple graph aborts with an error instead of risking a wrong forest.
pub fn spanning_forest_deterministic(
    oracle: &mut CutOracle,
) -> Result<Forest, DeterministicError> {
    let discovery = discover_dense_components(oracle)?;
    let h = build_pseudo_graph(oracle, discovery.components())?;
    let n = oracle.n() as u64;
    assert!(
        n == 0 || h.total_multiplicity() < n * discovery.threshold(),
        "crossing-edge count escaped its discovery bound"
    );
    join_components(oracle, discovery.components(), discovery.internal_edges(), &h)
}

/// Prim-style baseline: grow trees with boundary probes straight from the
/// singleton partition. Handles weighted graphs too, at a
/// `O(n log n)`-query price, and never exceeds `14·n·⌈log2 n⌉` probes.
pub fn harvey_baseline(oracle: &mut CutOracle) -> Forest {
    let n = oracle.n();
    let state = ComponentState::singletons(n);
    let before = oracle.ledger_snapshot().total();
    let edges = dfs_spanning_forest(oracle, &state, tags::DFS);
    let spent = oracle.ledger_snapshot().total() - before;
    assert!(
        spent <= 14 * n as u64 * u64::from(ceil_log2(n).max(1)),
        "baseline exceeded its query ceiling"
    );
    Forest::new(n, edges)
}
