//! Labeled graphs: the combinatorial data of a graph of infinite cyclic groups.
//!
//! A [`LabeledGraph`] is a finite connected graph whose edges carry a nonzero
//! integer at each end. The label at an end says which power of the vertex
//! generator the edge generator is identified with.
//!
//! Vertex and edge ids are opaque strings. Every deterministic choice in this
//! crate (spanning trees, canonical views, reduction order) is made by
//! byte-lexicographic id order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge `{edge}` has a zero label at end {end}")]
    ZeroLabel { edge: String, end: usize },
    #[error("graph is disconnected: vertex `{vertex}` is not reachable from `{root}`")]
    Disconnected { root: String, vertex: String },
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("graph is not reduced: edge `{0}` admits a collapse")]
    NotReduced(String),
}

/// An edge as written by the user: endpoints by id, one label per end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub id: String,
    pub ends: [String; 2],
    pub labels: [BigInt; 2],
}

impl RawEdge {
    pub fn new(
        id: impl Into<String>,
        v0: impl Into<String>,
        l0: impl Into<BigInt>,
        v1: impl Into<String>,
        l1: impl Into<BigInt>,
    ) -> Self {
        RawEdge {
            id: id.into(),
            ends: [v0.into(), v1.into()],
            labels: [l0.into(), l1.into()],
        }
    }
}

/// A validated edge. `ends` index into [`LabeledGraph::vertices`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
    pub labels: [BigInt; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// Index (0 or 1) of the end opposite to `end`.
    pub fn other(end: usize) -> usize {
        1 - end
    }
}

/// Finite connected graph with nonzero integer labels at both ends of every edge.
///
/// Vertices are kept sorted by id and edges sorted by id, so two graphs with
/// the same content compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Validates a raw description. Vertices mentioned only by edges are
    /// declared implicitly.
    pub fn new<I, S>(vertices: I, edges: Vec<RawEdge>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vertex_set = BTreeSet::new();
        for v in vertices {
            let v = v.into();
            if !vertex_set.insert(v.clone()) {
                return Err(GraphError::DuplicateId(v));
            }
        }
        for e in &edges {
            for v in &e.ends {
                vertex_set.insert(v.clone());
            }
        }
        Self::build(vertex_set, edges, false)
    }

    /// Like [`LabeledGraph::new`] but every endpoint must have been declared.
    pub fn new_strict<I, S>(vertices: I, edges: Vec<RawEdge>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vertex_set = BTreeSet::new();
        for v in vertices {
            let v = v.into();
            if !vertex_set.insert(v.clone()) {
                return Err(GraphError::DuplicateId(v));
            }
        }
        Self::build(vertex_set, edges, true)
    }

    fn build(
        vertex_set: BTreeSet<String>,
        mut edges: Vec<RawEdge>,
        strict: bool,
    ) -> Result<Self, GraphError> {
        if vertex_set.is_empty() {
            return Err(GraphError::Empty);
        }
        let vertices: Vec<String> = vertex_set.into_iter().collect();
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();

        let mut edge_ids = BTreeSet::new();
        for e in &edges {
            // edge generators share a namespace with vertex generators
            if index.contains_key(e.id.as_str()) || !edge_ids.insert(e.id.clone()) {
                return Err(GraphError::DuplicateId(e.id.clone()));
            }
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));

        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            for (end, l) in e.labels.iter().enumerate() {
                if l.is_zero() {
                    return Err(GraphError::ZeroLabel { edge: e.id, end });
                }
            }
            let mut ends = [0usize; 2];
            for k in 0..2 {
                match index.get(e.ends[k].as_str()) {
                    Some(&i) => ends[k] = i,
                    None => {
                        debug_assert!(strict);
                        return Err(GraphError::UnknownVertex {
                            edge: e.id,
                            vertex: e.ends[k].clone(),
                        });
                    }
                }
            }
            out.push(Edge {
                id: e.id,
                ends,
                labels: e.labels,
            });
        }

        let g = LabeledGraph {
            vertices,
            edges: out,
        };
        let reached = g.reachable_from(0);
        if let Some(v) = (0..g.vertices.len()).find(|&v| !reached[v]) {
            return Err(GraphError::Disconnected {
                root: g.vertices[0].clone(),
                vertex: g.vertices[v].clone(),
            });
        }
        Ok(g)
    }

    fn reachable_from(&self, root: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, end) in &adj[v] {
                let w = self.edges[e].ends[Edge::other(end)];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index(id).map(|i| &self.edges[i])
    }

    /// For each vertex, the incident `(edge index, end)` pairs in edge id order.
    /// A loop appears twice, once per end.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.ends[0]].push((i, 0));
            adj[e.ends[1]].push((i, 1));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends[0] == v) as usize + (e.ends[1] == v) as usize)
            .sum()
    }

    /// Back to the user-facing description, edges in id order.
    pub fn raw_edges(&self) -> Vec<RawEdge> {
        self.edges
            .iter()
            .map(|e| RawEdge {
                id: e.id.clone(),
                ends: [
                    self.vertices[e.ends[0]].clone(),
                    self.vertices[e.ends[1]].clone(),
                ],
                labels: e.labels.clone(),
            })
            .collect()
    }

    /// First Betti number `|E| - |V| + 1`: the number of edges outside any
    /// maximal subtree.
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.betti1() == 0
    }

    /// Id of the first non-loop edge with a `±1` label, if any.
    pub fn first_collapsible(&self) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| !e.is_loop() && e.labels.iter().any(is_unit))
    }

    /// No non-loop edge carries a `±1` label at either end.
    pub fn is_reduced(&self) -> bool {
        self.first_collapsible().is_none()
    }

    /// Breadth-first spanning tree from the smallest vertex id, trying
    /// incident edges in id order.
    pub fn spanning_tree(&self) -> SpanningTree {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut in_tree = vec![false; self.edges.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(e, end) in &adj[v] {
                let w = self.edges[e].ends[Edge::other(end)];
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        SpanningTree { in_tree }
    }

    /// Classifies the underlying graph of a reduced labeled graph.
    pub fn shape(&self) -> Result<Shape, GraphError> {
        if let Some(e) = self.first_collapsible() {
            return Err(GraphError::NotReduced(e.id.clone()));
        }
        Ok(self.shape_unchecked())
    }

    /// Shape detection without the reducedness precondition.
    pub fn shape_unchecked(&self) -> Shape {
        let n = self.vertices.len();
        if self.edges.is_empty() {
            return Shape::SingleVertex;
        }
        let b1 = self.betti1();
        if b1 >= 2 {
            return Shape::Other(format!("first Betti number is {b1}, at most 1 allowed"));
        }
        let degrees: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        if let Some(v) = (0..n).find(|&v| degrees[v] >= 3) {
            let d = degrees[v];
            let vid = &self.vertices[v];
            let reason = if b1 == 1 {
                format!("lollipop: cycle with a pendant path, vertex `{vid}` has degree {d}")
            } else {
                format!("trident: vertex `{vid}` has degree {d}")
            };
            return Shape::Other(reason);
        }
        // all degrees <= 2 and connected: a path (b1 = 0) or a cycle (b1 = 1)
        if b1 == 0 {
            Shape::Segment(self.segment_view(&degrees))
        } else {
            Shape::Cycle(self.cycle_view())
        }
    }

    fn segment_view(&self, degrees: &[usize]) -> SegmentView {
        let adj = self.adjacency();
        // vertices are sorted, so the first degree-1 vertex has the smaller id
        let start = (0..degrees.len()).find(|&v| degrees[v] == 1).unwrap();
        let mut vertices = vec![start];
        let mut pairs = Vec::new();
        let mut edges = Vec::new();
        let mut prev_edge = usize::MAX;
        let mut v = start;
        loop {
            let next = adj[v].iter().find(|&&(e, _)| e != prev_edge);
            let Some(&(e, end)) = next else { break };
            let edge = &self.edges[e];
            pairs.push((edge.labels[end].clone(), edge.labels[Edge::other(end)].clone()));
            edges.push(edge.id.clone());
            v = edge.ends[Edge::other(end)];
            vertices.push(v);
            prev_edge = e;
        }
        SegmentView {
            vertices: vertices.iter().map(|&i| self.vertices[i].clone()).collect(),
            edges,
            pairs,
        }
    }

    fn cycle_view(&self) -> CycleView {
        let adj = self.adjacency();
        let start = 0usize;
        let mut vertices = Vec::new();
        let mut pairs = Vec::new();
        let mut edges = Vec::new();
        let (first_edge, first_end) = adj[start][0];
        let mut e = first_edge;
        let mut end = first_end;
        let mut v = start;
        loop {
            let edge = &self.edges[e];
            vertices.push(self.vertices[v].clone());
            edges.push(edge.id.clone());
            pairs.push((edge.labels[end].clone(), edge.labels[Edge::other(end)].clone()));
            v = edge.ends[Edge::other(end)];
            if v == start {
                break;
            }
            let &(ne, nend) = adj[v].iter().find(|&&(f, _)| f != e).unwrap();
            e = ne;
            end = nend;
        }
        CycleView {
            vertices,
            edges,
            pairs,
        }
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::serialize(self))
    }
}

pub(crate) fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// A maximal subtree, stored as a membership mask over the graph's edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    in_tree: Vec<bool>,
}

impl SpanningTree {
    /// Checks that the named edges form a spanning tree of `g`.
    pub fn from_edge_ids<S: AsRef<str>>(g: &LabeledGraph, ids: &[S]) -> Option<Self> {
        let mut in_tree = vec![false; g.edges.len()];
        for id in ids {
            let i = g.edge_index(id.as_ref())?;
            if in_tree[i] {
                return None;
            }
            in_tree[i] = true;
        }
        let t = SpanningTree { in_tree };
        t.is_spanning_tree_of(g).then_some(t)
    }

    pub fn is_spanning_tree_of(&self, g: &LabeledGraph) -> bool {
        if self.in_tree.len() != g.edges.len() {
            return false;
        }
        let n = g.vertices.len();
        if self.len() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(n);
        for (i, e) in g.edges.iter().enumerate() {
            if self.in_tree[i] && !uf.union(e.ends[0], e.ends[1]) {
                return false;
            }
        }
        true
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.in_tree[edge]
    }

    pub fn len(&self) -> usize {
        self.in_tree.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_ids<'g>(&self, g: &'g LabeledGraph) -> Vec<&'g str> {
        g.edges
            .iter()
            .zip(&self.in_tree)
            .filter(|(_, &b)| b)
            .map(|(e, _)| e.id.as_str())
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Labels along a simple path `a_1 - a_2 - ... - a_{s+1}`; pair `i` is
/// `(k_i, l_i)` with `k_i` at the `a_i` end and `l_i` at the `a_{i+1}` end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentView {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub pairs: Vec<(BigInt, BigInt)>,
}

impl SegmentView {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same segment read from the other end.
    pub fn reversed(&self) -> SegmentView {
        SegmentView {
            vertices: self.vertices.iter().rev().cloned().collect(),
            edges: self.edges.iter().rev().cloned().collect(),
            pairs: self
                .pairs
                .iter()
                .rev()
                .map(|(k, l)| (l.clone(), k.clone()))
                .collect(),
        }
    }
}

/// Labels around a simple cycle `a_1 -> a_2 -> ... -> a_s -> a_1`, with the
/// same pair convention as [`SegmentView`]. A single loop has `s = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleView {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub pairs: Vec<(BigInt, BigInt)>,
}

impl CycleView {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    SingleVertex,
    Segment(SegmentView),
    Cycle(CycleView),
    Other(String),
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::SingleVertex => "single_vertex",
            Shape::Segment(_) => "segment",
            Shape::Cycle(_) => "cycle",
            Shape::Other(_) => "other",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn pairs(p: &[(BigInt, BigInt)]) -> String {
            p.iter()
                .map(|(k, l)| format!("({k},{l})"))
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            Shape::SingleVertex => write!(f, "single vertex"),
            Shape::Segment(v) => write!(f, "segment {}", pairs(&v.pairs)),
            Shape::Cycle(v) => write!(f, "cycle {}", pairs(&v.pairs)),
            Shape::Other(r) => write!(f, "other: {r}"),
        }
    }
}
