//! Ground-truth weighted graphs: construction, generator families, text I/O,
//! and the brute-force verifiers the test suite and harness check learners against.
//!
//! Learners never see these types; they go through [`crate::oracle::CutOracle`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

/// Hard cap on vertex count; keeps every weight sum inside a 64-bit accumulator.
pub const MAX_VERTICES: usize = 1 << 16;
/// Exclusive upper bound on a single edge weight.
pub const MAX_WEIGHT_EXCLUSIVE: u64 = 1 << 32;

/// Vertices are dense indices `0..n`.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for n={n}")]
    VertexOutOfRange { v: u64, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: Vertex },
    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: Vertex, v: Vertex },
    #[error("edge ({u},{v}) weight {w} outside [1, 2^32)")]
    WeightOutOfRange { u: Vertex, v: Vertex, w: i128 },
    #[error("vertex count {n} exceeds maximum {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("invalid generator parameter: {0}")]
    InvalidSpec(String),
    #[error("line {line}: malformed record: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("reading graph file: {0}")]
    Io(String),
}

/// Immutable weighted graph on vertices `0..n`. Absent pairs have weight 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(Vertex, Vertex), u64>,
    adj: Vec<Vec<(Vertex, u64)>>,
    weighted_degree: Vec<u64>,
    total_weight: u64,
}

impl WeightedGraph {
    /// Builds a graph from an edge list. Pairs are normalized to `u < v`.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex, u64)>,
    ) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut map = BTreeMap::new();
        for (a, b, w) in edges {
            if a as usize >= n {
                return Err(GraphError::VertexOutOfRange { v: a as u64, n });
            }
            if b as usize >= n {
                return Err(GraphError::VertexOutOfRange { v: b as u64, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { v: a });
            }
            if w == 0 || w >= MAX_WEIGHT_EXCLUSIVE {
                return Err(GraphError::WeightOutOfRange { u: a, v: b, w: w as i128 });
            }
            let key = (a.min(b), a.max(b));
            if map.insert(key, w).is_some() {
                return Err(GraphError::DuplicateEdge { u: key.0, v: key.1 });
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut weighted_degree = vec![0u64; n];
        let mut total_weight = 0u64;
        for (&(u, v), &w) in &map {
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
            weighted_degree[u as usize] += w;
            weighted_degree[v as usize] += w;
            total_weight += w;
        }
        Ok(Self { n, edges: map, adj, weighted_degree, total_weight })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weight of the pair, or `None` when no edge is present.
    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<u64> {
        if u == v {
            return None;
        }
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.weight(u, v).is_some()
    }

    /// Edges in canonical `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Neighbors of `v` with edge weights.
    pub fn adjacency(&self, v: Vertex) -> &[(Vertex, u64)] {
        &self.adj[v as usize]
    }

    /// Sum of incident edge weights of `v`.
    pub fn weighted_degree(&self, v: Vertex) -> u64 {
        self.weighted_degree[v as usize]
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Total boundary weight of `s`, by scanning the whole edge map.
    /// Reference semantics for the oracle; duplicated there by a faster route.
    pub fn cut_value(&self, s: &[Vertex]) -> u64 {
        let mut inside = vec![false; self.n];
        for &v in s {
            inside[v as usize] = true;
        }
        self.edges
            .iter()
            .filter(|(&(u, v), _)| inside[u as usize] != inside[v as usize])
            .map(|(_, &w)| w)
            .sum()
    }

    /// Total weight between two vertex sets, by pairwise lookups.
    pub fn cross_value(&self, a: &[Vertex], b: &[Vertex]) -> u64 {
        let mut sum = 0u64;
        for &u in a {
            for &v in b {
                sum += self.weight(u, v).unwrap_or(0);
            }
        }
        sum
    }

    /// Total weight of edges with both endpoints inside `s`.
    pub fn internal_weight(&self, s: &[Vertex]) -> u64 {
        let mut inside = vec![false; self.n];
        for &v in s {
            inside[v as usize] = true;
        }
        self.edges
            .iter()
            .filter(|(&(u, v), _)| inside[u as usize] && inside[v as usize])
            .map(|(_, &w)| w)
            .sum()
    }
}

/// Union-find with path compression and union by rank.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
    sets: usize,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), rank: vec![0; n], sets: n }
    }

    pub(crate) fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Returns false when both elements were already in the same set.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        self.sets -= 1;
        true
    }

    pub(crate) fn set_count(&self) -> usize {
        self.sets
    }

    /// Member lists sorted ascending, components ordered by smallest member.
    pub(crate) fn components(&mut self) -> Vec<Vec<u32>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for v in 0..n as u32 {
            let r = self.find(v);
            by_root.entry(r).or_default().push(v);
        }
        let mut comps: Vec<Vec<u32>> = by_root.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// `label[v]` = smallest vertex in v's set; equal labelings mean equal partitions.
    pub(crate) fn canonical_labels(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut min_of_root: BTreeMap<u32, u32> = BTreeMap::new();
        for v in 0..n as u32 {
            let r = self.find(v);
            min_of_root.entry(r).or_insert(v);
        }
        (0..n as u32).map(|v| min_of_root[&self.parent[v as usize]]).collect()
    }
}

/// Exact connected components of `g`, one sorted member list per component.
pub fn ground_truth_components(g: &WeightedGraph) -> Vec<Vec<Vertex>> {
    let mut dsu = DisjointSets::new(g.n());
    for (u, v, _) in g.edges() {
        dsu.union(u, v);
    }
    dsu.components()
}

/// Spanning forest candidate produced by a learner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    edges: Vec<(Vertex, Vertex, u64)>,
}

impl Forest {
    pub fn new(n: usize, mut edges: Vec<(Vertex, Vertex, u64)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_unstable();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex, u64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Connected components under the forest's edges.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut dsu = DisjointSets::new(self.n);
        for &(u, v, _) in &self.edges {
            dsu.union(u, v);
        }
        dsu.components()
    }

    pub fn component_count(&self) -> usize {
        let mut dsu = DisjointSets::new(self.n);
        for &(u, v, _) in &self.edges {
            dsu.union(u, v);
        }
        dsu.set_count()
    }
}

/// True iff `f` contains only real edges of `g` (exact weights), is acyclic,
/// and connects exactly the components `g` connects.
pub fn is_maximal_spanning_forest(g: &WeightedGraph, f: &Forest) -> bool {
    if f.n() != g.n() {
        return false;
    }
    let mut dsu = DisjointSets::new(g.n());
    for &(u, v, w) in f.edges() {
        if (u as usize) >= g.n() || (v as usize) >= g.n() {
            return false;
        }
        if g.weight(u, v) != Some(w) {
            return false;
        }
        if !dsu.union(u, v) {
            return false; // cycle
        }
    }
    let mut truth = DisjointSets::new(g.n());
    for (u, v, _) in g.edges() {
        truth.union(u, v);
    }
    dsu.canonical_labels() == truth.canonical_labels()
}

/// Degree shape for the two-sided promise family (every left vertex keeps at
/// least one right neighbor).
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeProfile {
    /// Perfect matching under a random permutation.
    Matching,
    /// Every left vertex gets exactly `d` random right neighbors.
    Uniform(usize),
    /// Per-vertex degree drawn log-uniformly from {1, 2, 4, ..., side}.
    Mixed,
    /// Complete bipartite graph.
    Complete,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    ErdosRenyi { p: f64 },
    Path,
    Cycle,
    Star,
    Clique,
    /// Two sides of `n` vertices each: left `0..n`, right `n..2n`.
    /// The generated graph therefore has `2n` vertices.
    BipartitePromise { profile: DegreeProfile },
    /// Vertex-disjoint union of sub-family graphs; `n` of the outer spec is
    /// ignored and the total is the sum of the parts.
    DisjointUnion(Vec<GraphFamilySpec>),
    /// Load from an edge-list file; `n`, `weights`, and `seed` are ignored.
    FromFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightDistribution {
    Unit,
    UniformInt { lo: u64, hi: u64 },
    /// Log-uniform over [1, 2^30): exponent first, then uniform within the octave.
    HeavyTail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFamilySpec {
    pub family: GraphFamily,
    pub n: usize,
    pub weights: WeightDistribution,
    pub seed: u64,
}

impl GraphFamilySpec {
    pub fn new(family: GraphFamily, n: usize, weights: WeightDistribution, seed: u64) -> Self {
        Self { family, n, weights, seed }
    }
}

fn draw_weight(dist: &WeightDistribution, rng: &mut ChaCha12Rng) -> Result<u64, GraphError> {
    match dist {
        WeightDistribution::Unit => Ok(1),
        WeightDistribution::UniformInt { lo, hi } => {
            if *lo < 1 || lo > hi || *hi >= MAX_WEIGHT_EXCLUSIVE {
                return Err(GraphError::InvalidSpec(format!(
                    "uniform_int bounds [{lo}, {hi}] outside [1, 2^32)"
                )));
            }
            Ok(rng.gen_range(*lo..=*hi))
        }
        WeightDistribution::HeavyTail => {
            let e = rng.gen_range(0u32..30);
            Ok(rng.gen_range((1u64 << e)..(2u64 << e)))
        }
    }
}

/// Distinct sorted samples from `0..side`, `count` many.
fn sample_distinct(side: usize, count: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut picked = rand::seq::index::sample(rng, side, count).into_vec();
    picked.sort_unstable();
    picked
}

fn bipartite_edges(
    side: usize,
    profile: &DegreeProfile,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<(Vertex, Vertex)>, GraphError> {
    if side == 0 {
        return Err(GraphError::InvalidSpec("bipartite side must be at least 1".into()));
    }
    let mut edges = Vec::new();
    match profile {
        DegreeProfile::Matching => {
            let mut right: Vec<usize> = (0..side).collect();
            right.shuffle(rng);
            for (l, r) in right.into_iter().enumerate() {
                edges.push((l as Vertex, (side + r) as Vertex));
            }
        }
        DegreeProfile::Uniform(d) => {
            if *d < 1 || *d > side {
                return Err(GraphError::InvalidSpec(format!(
                    "uniform degree {d} outside [1, {side}]"
                )));
            }
            for l in 0..side {
                for r in sample_distinct(side, *d, rng) {
                    edges.push((l as Vertex, (side + r) as Vertex));
                }
            }
        }
        DegreeProfile::Mixed => {
            let max_exp = crate::num::ceil_log2(side);
            for l in 0..side {
                let d = ((1usize << rng.gen_range(0..=max_exp)) as usize).min(side);
                for r in sample_distinct(side, d, rng) {
                    edges.push((l as Vertex, (side + r) as Vertex));
                }
            }
        }
        DegreeProfile::Complete => {
            for l in 0..side {
                for r in 0..side {
                    edges.push((l as Vertex, (side + r) as Vertex));
                }
            }
        }
    }
    Ok(edges)
}

/// Deterministic function of the spec: same spec, same graph.
pub fn generate_graph(spec: &GraphFamilySpec) -> Result<WeightedGraph, GraphError> {
    if spec.n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices { n: spec.n, max: MAX_VERTICES });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let topology: Vec<(Vertex, Vertex)> = match &spec.family {
        GraphFamily::ErdosRenyi { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(GraphError::InvalidSpec(format!("erdos_renyi p={p} outside [0,1]")));
            }
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in (u + 1)..n as Vertex {
                    if rng.gen_bool(*p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        GraphFamily::Path => (1..n as Vertex).map(|v| (v - 1, v)).collect(),
        GraphFamily::Cycle => {
            if n < 3 {
                return Err(GraphError::InvalidSpec(format!("cycle needs n ≥ 3, got {n}")));
            }
            let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
            edges.push((0, (n - 1) as Vertex));
            edges
        }
        GraphFamily::Star => (1..n as Vertex).map(|v| (0, v)).collect(),
        GraphFamily::Clique => {
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in (u + 1)..n as Vertex {
                    edges.push((u, v));
                }
            }
            edges
        }
        GraphFamily::BipartitePromise { profile } => {
            if 2 * n > MAX_VERTICES {
                return Err(GraphError::TooManyVertices { n: 2 * n, max: MAX_VERTICES });
            }
            bipartite_edges(n, profile, &mut rng)?
        }
        GraphFamily::DisjointUnion(parts) => {
            let mut offset: Vertex = 0;
            let mut all = Vec::new();
            for part in parts {
                let sub = generate_graph(part)?;
                for (u, v, w) in sub.edges() {
                    all.push((u + offset, v + offset, w));
                }
                offset = offset
                    .checked_add(sub.n() as Vertex)
                    .ok_or(GraphError::TooManyVertices { n: usize::MAX, max: MAX_VERTICES })?;
            }
            return WeightedGraph::from_edges(offset as usize, all);
        }
        GraphFamily::FromFile(path) => {
            return load_graph_from_path(path);
        }
    };
    let total_n = match &spec.family {
        GraphFamily::BipartitePromise { .. } => 2 * n,
        _ => n,
    };
    let mut canonical: Vec<(Vertex, Vertex)> =
        topology.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    canonical.sort_unstable();
    let mut weighted = Vec::with_capacity(canonical.len());
    for (u, v) in canonical {
        weighted.push((u, v, draw_weight(&spec.weights, &mut rng)?));
    }
    WeightedGraph::from_edges(total_n, weighted)
}

/// Serializes to the line format: header `n <count>`, then one `u v w` per edge.
pub fn save_graph(g: &WeightedGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v, w) in g.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Parses the `save_graph` format back; `load_graph(save_graph(g)) == g`.
pub fn load_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphError::MalformedLine { line: 1, text: String::new() })?;
    let mut parts = header.split_whitespace();
    let n = match (parts.next(), parts.next(), parts.next()) {
        (Some("n"), Some(count), None) => count
            .parse::<usize>()
            .map_err(|_| GraphError::MalformedLine { line: 1, text: header.to_string() })?,
        _ => return Err(GraphError::MalformedLine { line: 1, text: header.to_string() }),
    };
    let mut edges = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            return Err(GraphError::MalformedLine { line: lineno, text: line.to_string() });
        }
        let mut tok = line.split_whitespace();
        let (u, v, w) = match (tok.next(), tok.next(), tok.next(), tok.next()) {
            (Some(u), Some(v), Some(w), None) => (u, v, w),
            _ => return Err(GraphError::MalformedLine { line: lineno, text: line.to_string() }),
        };
        let u: u64 = u
            .parse()
            .map_err(|_| GraphError::MalformedLine { line: lineno, text: line.to_string() })?;
        let v: u64 = v
            .parse()
            .map_err(|_| GraphError::MalformedLine { line: lineno, text: line.to_string() })?;
        let w: i128 = w
            .parse()
            .map_err(|_| GraphError::MalformedLine { line: lineno, text: line.to_string() })?;
        if u >= n as u64 {
            return Err(GraphError::VertexOutOfRange { v: u, n });
        }
        if v >= n as u64 {
            return Err(GraphError::VertexOutOfRange { v, n });
        }
        let (u, v) = (u as Vertex, v as Vertex);
        if u == v {
            return Err(GraphError::SelfLoop { v: u });
        }
        if w <= 0 || w >= MAX_WEIGHT_EXCLUSIVE as i128 {
            return Err(GraphError::WeightOutOfRange { u, v, w });
        }
        edges.push((u, v, w as u64));
    }
    WeightedGraph::from_edges(n, edges)
}

pub fn save_graph_to_path(g: &WeightedGraph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, save_graph(g)).map_err(|e| GraphError::Io(e.to_string()))
}

pub fn load_graph_from_path(path: &Path) -> Result<WeightedGraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(e.to_string()))?;
    load_graph(&text)
}
