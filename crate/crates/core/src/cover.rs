//! Safe-cover decompositions of embedded planar graphs.
//!
//! Vertices are partitioned into rings by vertex-face-graph distance from a
//! root; a cover is built from runs of M+1 consecutive rings overlapping in
//! every M-th ring, where the offset of the shared rings is chosen to make
//! the doubly-covered vertices and their incident edges cheap. The result is
//! a k-vertex-safe (hence k-edge-safe) cover whose pieces are obtained by
//! contracting everything outside each set.

use crate::contraction::{contract_outside, ContractionMap};
use crate::cost::Cost;
use crate::cuts::{enumerate_connected_cuts, CutError};
use crate::graph::{Edge, EdgeId, GraphError, MultiGraph, PlanarMultigraph, VertexId};
use crate::graph::vertex_face_graph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("INVALID_DELTA: delta must lie in (0,1)")]
    InvalidDelta,
    #[error("U_NOT_PROPER: contraction set must be a proper vertex subset")]
    UNotProper,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cut(#[from] CutError),
}

#[derive(Clone, Debug)]
pub struct RingDecomposition {
    pub root: VertexId,
    pub k: u64,
    /// ring j = vertices with dist in [2kj, 2k(j+1))
    pub rings: Vec<BTreeSet<VertexId>>,
    pub ring_of: BTreeMap<VertexId, usize>,
}

pub fn ring_decomposition(g: &PlanarMultigraph, r: VertexId, k: u64) -> Result<RingDecomposition, GraphError> {
    let vf = vertex_face_graph(g, r)?;
    let mut rings: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut ring_of = BTreeMap::new();
    for (v, d) in &vf.dist_vertex {
        let j = (*d as u64 / (2 * k)) as usize;
        while rings.len() <= j {
            rings.push(BTreeSet::new());
        }
        rings[j].insert(*v);
        ring_of.insert(*v, j);
    }
    debug_assert!(g.edges().iter().all(|e| {
        let (a, b) = (ring_of[&e.u], ring_of[&e.v]);
        a.abs_diff(b) <= 1
    }));
    Ok(RingDecomposition { root: r, k, rings, ring_of })
}

/// Offset minimizing w(W_a ∪ Γ(W_a)) + c(edges incident to W_a) over
/// a in {0..M-1}; ties break to the smallest offset. Returns (a*, value).
pub fn choose_offset(
    g: &PlanarMultigraph,
    rings: &RingDecomposition,
    weights: &BTreeMap<VertexId, Cost>,
    costs: &BTreeMap<EdgeId, Cost>,
    m: u64,
) -> (u64, Cost) {
    assert!(m >= 1);
    let w_of = |v: &VertexId| weights.get(v).cloned().unwrap_or_else(Cost::zero);
    let c_of = |e: &EdgeId| costs.get(e).cloned().unwrap_or_else(Cost::zero);
    let mut best: Option<(u64, Cost)> = None;
    for a in 0..m {
        let wa: BTreeSet<VertexId> = rings
            .rings
            .iter()
            .enumerate()
            .filter(|(j, _)| *j as u64 % m == a % m)
            .flat_map(|(_, ring)| ring.iter().copied())
            .collect();
        let mut closed = wa.clone();
        for v in &wa {
            closed.extend(g.neighbors(*v));
        }
        let mut value: Cost = closed.iter().map(w_of).sum();
        let incident: Cost = g
            .edges()
            .iter()
            .filter(|e| wa.contains(&e.u) || wa.contains(&e.v))
            .map(|e| c_of(&e.id))
            .sum();
        value += &incident;
        match &best {
            Some((_, b)) if *b <= value => {}
            _ => best = Some((a, value)),
        }
    }
    best.unwrap()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverSet {
    /// compacted index
    pub index: usize,
    /// index before empty sets were dropped
    pub orig_index: usize,
    /// U = V_[alpha, beta) in ring-level units (dist/(2) levels)
    pub alpha: u64,
    pub beta: u64,
    pub vertices: BTreeSet<VertexId>,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub root: VertexId,
    pub k: u64,
    pub m: u64,
    pub offset: u64,
    pub sets: Vec<CoverSet>,
    /// vertices in at least two sets
    pub v_u: BTreeSet<VertexId>,
    /// edges incident to v_u
    pub e_u: BTreeSet<EdgeId>,
}

impl Cover {
    pub fn multiplicity(&self, v: VertexId) -> usize {
        self.sets.iter().filter(|s| s.vertices.contains(&v)).count()
    }

    /// No edge joins the exclusive parts of two different sets.
    pub fn is_well_separated(&self, edges: &[Edge]) -> bool {
        for (i, si) in self.sets.iter().enumerate() {
            for sj in self.sets.iter().skip(i + 1) {
                for e in edges {
                    let u_excl_i = si.vertices.contains(&e.u) && !sj.vertices.contains(&e.u);
                    let v_excl_j = sj.vertices.contains(&e.v) && !si.vertices.contains(&e.v);
                    let u_excl_j = sj.vertices.contains(&e.u) && !si.vertices.contains(&e.u);
                    let v_excl_i = si.vertices.contains(&e.v) && !sj.vertices.contains(&e.v);
                    if (u_excl_i && v_excl_j) || (u_excl_j && v_excl_i) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "offset": self.offset,
            "M": self.m,
            "pieces": self.sets.iter().map(|s| serde_json::json!({
                "i": s.index,
                "alpha": s.alpha,
                "beta": s.beta,
                "vertices": s.vertices.iter().copied().collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct PieceGraph {
    pub index: usize,
    pub alpha: u64,
    pub beta: u64,
    pub graph: PlanarMultigraph,
    pub map: ContractionMap,
    /// edges of the piece whose cost is zeroed (E_U edges; boundary edges
    /// to supervertices are a subset of E_U)
    pub zero_cost: BTreeSet<EdgeId>,
}

/// Build a k-vertex-safe cover with vertex weights and edge costs, plus the
/// contracted piece graphs. delta in (0,1); M = ceil(3/delta).
pub fn build_safe_cover(
    g: &PlanarMultigraph,
    costs: &BTreeMap<EdgeId, Cost>,
    weights: &BTreeMap<VertexId, Cost>,
    delta: &Cost,
    k: u64,
) -> Result<(Cover, Vec<PieceGraph>), CoverError> {
    if !delta.is_positive() || *delta >= Cost::one() {
        return Err(CoverError::InvalidDelta);
    }
    let root = *g.vertices().iter().min().expect("nonempty graph");
    let rings = ring_decomposition(g, root, k)?;
    // M = ceil(3/delta), exact
    let three_over = &Cost::from_int(3) / delta;
    let m = {
        let r = three_over.as_ratio();
        let (num, den) = (r.numer().clone(), r.denom().clone());
        let q = &num / &den;
        let m = if &q * &den == num { q } else { q + 1u32 };
        u64::try_from(m).expect("M fits u64")
    };
    let (offset, _) = choose_offset(g, &rings, weights, costs, m);
    let last_ring = rings.rings.len() as u64 - 1;
    let mut sets: Vec<CoverSet> = Vec::new();
    let mut orig = 0usize;
    loop {
        let (lo, hi) = if orig == 0 {
            (0, offset)
        } else {
            (offset + (orig as u64 - 1) * m, offset + orig as u64 * m)
        };
        if lo > last_ring {
            break;
        }
        let vertices: BTreeSet<VertexId> = rings
            .rings
            .iter()
            .enumerate()
            .filter(|(j, _)| *j as u64 >= lo && *j as u64 <= hi)
            .flat_map(|(_, ring)| ring.iter().copied())
            .collect();
        if !vertices.is_empty() {
            let alpha = k * lo;
            let beta = k * (hi + 1);
            sets.push(CoverSet {
                index: sets.len(),
                orig_index: orig,
                alpha,
                beta,
                vertices,
            });
        }
        orig += 1;
    }
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for s in &sets {
        for v in &s.vertices {
            *count.entry(*v).or_insert(0) += 1;
        }
    }
    debug_assert!(g.vertices().iter().all(|v| count.get(v).copied().unwrap_or(0) >= 1));
    debug_assert!(count.values().all(|c| *c <= 2));
    let v_u: BTreeSet<VertexId> = count.iter().filter(|(_, c)| **c >= 2).map(|(v, _)| *v).collect();
    let e_u: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| v_u.contains(&e.u) || v_u.contains(&e.v))
        .map(|e| e.id)
        .collect();
    let cover = Cover {
        root,
        k,
        m,
        offset,
        sets,
        v_u,
        e_u,
    };
    let mut pieces = Vec::new();
    for s in &cover.sets {
        let (graph, map) = contract_outside(g, &s.vertices)?;
        let zero_cost: BTreeSet<EdgeId> = graph
            .edges()
            .iter()
            .map(|e| e.id)
            .filter(|id| cover.e_u.contains(id))
            .collect();
        pieces.push(PieceGraph {
            index: s.index,
            alpha: s.alpha,
            beta: s.beta,
            graph,
            map,
            zero_cost,
        });
    }
    Ok((cover, pieces))
}

/// Exact bound from the cover guarantee:
/// c(E_U) + w(V_U ∪ Γ(V_U)) vs delta * (w(V) + c(E)).
pub fn cover_bound_sides(
    g: &PlanarMultigraph,
    cover: &Cover,
    costs: &BTreeMap<EdgeId, Cost>,
    weights: &BTreeMap<VertexId, Cost>,
    delta: &Cost,
) -> (Cost, Cost) {
    let w_of = |v: &VertexId| weights.get(v).cloned().unwrap_or_else(Cost::zero);
    let c_of = |e: &EdgeId| costs.get(e).cloned().unwrap_or_else(Cost::zero);
    let mut closed = cover.v_u.clone();
    for v in &cover.v_u {
        closed.extend(g.neighbors(*v));
    }
    let mut lhs: Cost = closed.iter().map(w_of).sum();
    let ec: Cost = cover.e_u.iter().map(&c_of).sum();
    lhs += &ec;
    let total_w: Cost = g.vertices().iter().map(w_of).sum();
    let total_c: Cost = g.edges().iter().map(|e| c_of(&e.id)).sum();
    let rhs = delta * &(total_w + total_c);
    (lhs, rhs)
}

/// Oracle-scale check of the k-edge-safe cover condition over all connected
/// cuts: |δ(S) ∩ E_U| >= k or δ(S) ⊆ E[U_i] for some i.
pub fn verify_edge_safe(
    cover: &Cover,
    g: &MultiGraph,
    k: u64,
    bound: usize,
) -> Result<bool, CutError> {
    let cuts = enumerate_connected_cuts(g, cover.root, bound)?;
    for s in cuts {
        let crossing: Vec<&Edge> = g
            .edges
            .iter()
            .filter(|e| s.contains(&e.u) != s.contains(&e.v))
            .collect();
        let in_eu = crossing.iter().filter(|e| cover.e_u.contains(&e.id)).count() as u64;
        if in_eu >= k {
            continue;
        }
        let inside_some = cover.sets.iter().any(|set| {
            crossing
                .iter()
                .all(|e| set.vertices.contains(&e.u) && set.vertices.contains(&e.v))
        });
        if !inside_some {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Oracle-scale check of the k-vertex-safe cover condition:
/// |Γ_{E_U}(S)| >= k or δ(S) ⊆ E[U_i] for some i.
pub fn verify_vertex_safe(
    cover: &Cover,
    g: &MultiGraph,
    k: u64,
    bound: usize,
) -> Result<bool, CutError> {
    let cuts = enumerate_connected_cuts(g, cover.root, bound)?;
    for s in cuts {
        let gamma_eu: BTreeSet<VertexId> = g
            .edges
            .iter()
            .filter(|e| cover.e_u.contains(&e.id) && (s.contains(&e.u) != s.contains(&e.v)))
            .map(|e| if s.contains(&e.u) { e.v } else { e.u })
            .collect();
        if gamma_eu.len() as u64 >= k {
            continue;
        }
        let crossing: Vec<&Edge> = g
            .edges
            .iter()
            .filter(|e| s.contains(&e.u) != s.contains(&e.v))
            .collect();
        let inside_some = cover.sets.iter().any(|set| {
            crossing
                .iter()
                .all(|e| set.vertices.contains(&e.u) && set.vertices.contains(&e.v))
        });
        if !inside_some {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct VertexSafeContraction {
    pub graph: MultiGraph,
    /// fresh clique vertices, k per contracted component
    pub clique_vertices: BTreeSet<VertexId>,
    /// fresh edges: clique edges plus clique-to-neighbor edges
    pub fresh_edges: BTreeSet<EdgeId>,
    /// surviving original edges (both endpoints outside U)
    pub kept_edges: BTreeSet<EdgeId>,
}

/// k-vertex-safe contraction: contract every connected component of G[U] in
/// (V, F) and replace each contracted vertex by a k-clique joined to all of
/// the component's neighbors.
pub fn vertex_safe_contract(
    g: &MultiGraph,
    f: &BTreeSet<EdgeId>,
    u: &BTreeSet<VertexId>,
    k: u64,
) -> Result<VertexSafeContraction, CoverError> {
    let vset: BTreeSet<VertexId> = g.vertices.iter().copied().collect();
    if !u.is_subset(&vset) || u.len() >= vset.len() {
        return Err(CoverError::UNotProper);
    }
    let comps = g.induced(u).components();
    let mut comp_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for v in c {
            comp_of.insert(*v, i);
        }
    }
    let mut next_vertex = g.vertices.iter().copied().max().unwrap_or(0) + 1;
    let mut next_edge = g.max_edge_id() + 1;
    let mut vertices: Vec<VertexId> = g.vertices.iter().copied().filter(|v| !u.contains(v)).collect();
    let mut clique_vertices = BTreeSet::new();
    let mut cliques: Vec<Vec<VertexId>> = Vec::new();
    for _ in 0..comps.len() {
        let mut cv = Vec::new();
        for _ in 0..k {
            cv.push(next_vertex);
            clique_vertices.insert(next_vertex);
            vertices.push(next_vertex);
            next_vertex += 1;
        }
        cliques.push(cv);
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut kept_edges = BTreeSet::new();
    let mut fresh_edges = BTreeSet::new();
    // original edges of F entirely outside U survive unchanged
    for e in &g.edges {
        if f.contains(&e.id) && !u.contains(&e.u) && !u.contains(&e.v) {
            edges.push(*e);
            kept_edges.insert(e.id);
        }
    }
    // neighbors of each component with respect to F
    for (i, comp) in comps.iter().enumerate() {
        let mut nbrs: BTreeSet<VertexId> = BTreeSet::new();
        for e in &g.edges {
            if !f.contains(&e.id) {
                continue;
            }
            let (iu, iv) = (comp.contains(&e.u), comp.contains(&e.v));
            if iu && !iv && !u.contains(&e.v) {
                nbrs.insert(e.v);
            }
            if iv && !iu && !u.contains(&e.u) {
                nbrs.insert(e.u);
            }
            // neighbor components get connected through their cliques below
        }
        for &cv in &cliques[i] {
            for &nb in &nbrs {
                edges.push(Edge { id: next_edge, u: cv, v: nb });
                fresh_edges.insert(next_edge);
                next_edge += 1;
            }
        }
        // clique edges
        for a in 0..cliques[i].len() {
            for b in (a + 1)..cliques[i].len() {
                edges.push(Edge {
                    id: next_edge,
                    u: cliques[i][a],
                    v: cliques[i][b],
                });
                fresh_edges.insert(next_edge);
                next_edge += 1;
            }
        }
    }
    // edges of F between two distinct components: the components are merged
    // vertices, so their cliques become adjacent
    let mut comp_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for e in &g.edges {
        if !f.contains(&e.id) {
            continue;
        }
        if let (Some(&a), Some(&b)) = (comp_of.get(&e.u), comp_of.get(&e.v)) {
            if a != b {
                comp_pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    for (a, b) in comp_pairs {
        for &x in &cliques[a] {
            for &y in &cliques[b] {
                edges.push(Edge { id: next_edge, u: x, v: y });
                fresh_edges.insert(next_edge);
                next_edge += 1;
            }
        }
    }
    Ok(VertexSafeContraction {
        graph: MultiGraph::new(vertices, edges),
        clique_vertices,
        fresh_edges,
        kept_edges,
    })
}
