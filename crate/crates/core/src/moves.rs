//! Expansion and collapse moves, and reduction to a graph with no collapsible edge.
//!
//! Collapsing a non-loop edge `e = (u, w)` whose label at `w` is `ε = ±1`
//! uses the relation `g_w^ε = g_u^λ`, i.e. `g_w = g_u^{ελ}`, to eliminate
//! `g_w`. Every other label sitting at `w` is multiplied by `ελ` and moved to `u`.
//! Expansion is the exact inverse.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{is_unit, Edge, GraphError, LabeledGraph, RawEdge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` is not collapsible (loop, or no end labelled ±1)")]
    NotCollapsible(String),
    #[error("bad factorization: {0}")]
    BadFactorization(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which of the two ends of `e` is eliminated by a collapse, if any.
/// Prefers end 1, so `a -(λ,±1)- b` merges `b` into `a`.
pub fn collapsible_end(e: &Edge) -> Option<usize> {
    if e.is_loop() {
        return None;
    }
    if is_unit(&e.labels[1]) {
        Some(1)
    } else if is_unit(&e.labels[0]) {
        Some(0)
    } else {
        None
    }
}

pub fn collapse(g: &LabeledGraph, edge_id: &str) -> Result<LabeledGraph, MoveError> {
    let e = g
        .edge(edge_id)
        .ok_or_else(|| MoveError::UnknownEdge(edge_id.to_string()))?;
    let w_end = collapsible_end(e).ok_or_else(|| MoveError::NotCollapsible(edge_id.to_string()))?;
    let u_end = Edge::other(w_end);
    let u = &g.vertices()[e.ends[u_end]];
    let w = &g.vertices()[e.ends[w_end]];
    let factor: BigInt = &e.labels[w_end] * &e.labels[u_end];

    let edges = g
        .raw_edges()
        .into_iter()
        .filter(|f| f.id != edge_id)
        .map(|mut f| {
            for k in 0..2 {
                if &f.ends[k] == w {
                    f.ends[k] = u.clone();
                    f.labels[k] = &f.labels[k] * &factor;
                }
            }
            f
        })
        .collect();
    let vertices = g.vertices().iter().filter(|v| *v != w).cloned();
    Ok(LabeledGraph::new(vertices, edges)?)
}

/// Splits end `end` of `edge_id`, whose label must equal `m * n`, by a new
/// vertex. The new edge joins the old endpoint (label `m`) to the new vertex
/// (label 1); the old edge keeps label `n` at the new vertex.
///
/// Fresh ids are derived from the edge id and are chosen not to clash.
pub fn expand(
    g: &LabeledGraph,
    edge_id: &str,
    end: usize,
    m: &BigInt,
    n: &BigInt,
) -> Result<LabeledGraph, MoveError> {
    let e = g
        .edge(edge_id)
        .ok_or_else(|| MoveError::UnknownEdge(edge_id.to_string()))?;
    if end > 1 {
        return Err(MoveError::BadFactorization(format!("end must be 0 or 1, got {end}")));
    }
    if m.is_zero() || n.is_zero() || &(m * n) != &e.labels[end] {
        return Err(MoveError::BadFactorization(format!(
            "{m} * {n} != {}",
            e.labels[end]
        )));
    }
    let (vertex_id, new_edge_id) = fresh_ids(g, edge_id, end);
    let old_vertex = g.vertices()[e.ends[end]].clone();

    let mut edges = g.raw_edges();
    for f in edges.iter_mut().filter(|f| f.id == edge_id) {
        f.ends[end] = vertex_id.clone();
        f.labels[end] = n.clone();
    }
    edges.push(RawEdge {
        id: new_edge_id,
        ends: [old_vertex, vertex_id.clone()],
        labels: [m.clone(), BigInt::from(1)],
    });
    let vertices = g.vertices().iter().cloned().chain(std::iter::once(vertex_id));
    Ok(LabeledGraph::new(vertices, edges)?)
}

fn fresh_ids(g: &LabeledGraph, edge_id: &str, end: usize) -> (String, String) {
    let taken = |s: &str| g.vertex_index(s).is_some() || g.edge_index(s).is_some();
    let mut i = 0usize;
    loop {
        let v = format!("{edge_id}.{end}v{i}");
        let e = format!("{edge_id}.{end}e{i}");
        if !taken(&v) && !taken(&e) {
            return (v, e);
        }
        i += 1;
    }
}

/// Collapses the collapsible edge with the smallest id until none is left.
pub fn reduce(g: &LabeledGraph) -> LabeledGraph {
    let mut cur = g.clone();
    while let Some(e) = cur.first_collapsible() {
        let id = e.id.clone();
        cur = collapse(&cur, &id).expect("first_collapsible returned a collapsible edge");
    }
    cur
}

/// Replaces generators by their inverses (negating every label at that
/// vertex) so that spanning-tree labels are positive where possible.
/// Changes no group invariant; only makes output easier to read.
pub fn canonicalize_signs(g: &LabeledGraph) -> LabeledGraph {
    let tree = g.spanning_tree();
    let adj = g.adjacency();
    let n = g.vertices().len();
    let mut flip = vec![false; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let sign_at = |flip: &[bool], e: &Edge, end: usize| -> bool {
        // true if label is positive after flips
        (e.labels[end] > BigInt::zero()) != flip[e.ends[end]]
    };
    // root: make its first tree edge positive at the root end
    if let Some(&(e, end)) = adj[0].iter().find(|&&(e, _)| tree.contains(e)) {
        if !sign_at(&flip, &g.edges()[e], end) {
            flip[0] = true;
        }
    }
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(e, end) in &adj[v] {
            if !tree.contains(e) {
                continue;
            }
            let edge = &g.edges()[e];
            let w = edge.ends[Edge::other(end)];
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if !sign_at(&flip, edge, Edge::other(end)) {
                flip[w] = true;
            }
            queue.push_back(w);
        }
    }
    let vertices = g.vertices();
    let edges = g
        .raw_edges()
        .into_iter()
        .map(|mut f| {
            for k in 0..2 {
                let v = g.vertex_index(&f.ends[k]).unwrap();
                if flip[v] {
                    f.labels[k] = -&f.labels[k];
                }
            }
            f
        })
        .collect();
    LabeledGraph::new(vertices.iter().cloned(), edges).expect("sign flips keep validity")
}
