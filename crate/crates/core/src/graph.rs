//! Embedded planar multigraphs.
//!
//! A graph is given by vertices, edges with stable ids (parallel edges
//! allowed, loops rejected) and a rotation system: the cyclic order of
//! incident edges around every vertex. Faces are derived by face-walk
//! traversal and validated against Euler's formula per connected component,
//! which is the acceptance test for planarity of the supplied rotation.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(x == self.u || x == self.v);
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Edge `edge` traversed from `u` to `v` when `forward`, else `v` to `u`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("EULER_VIOLATION: component of vertex {vertex} has v={v} e={e} f={f}")]
    EulerViolation { vertex: VertexId, v: usize, e: usize, f: usize },
    #[error("MALFORMED_ROTATION: {0}")]
    MalformedRotation(String),
    #[error("DISCONNECTED")]
    Disconnected,
    #[error("MALFORMED: {0}")]
    Malformed(String),
}

/// Unembedded multigraph. Used for contraction images that leave the plane
/// (clique replacements) and as the input shape for tree decompositions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

impl MultiGraph {
    pub fn new(mut vertices: Vec<VertexId>, edges: Vec<Edge>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        MultiGraph { vertices, edges }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn incident(&self, v: VertexId) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.touches(v)).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        self.edges.iter().find(|e| e.id == id).expect("unknown edge id")
    }

    pub fn max_edge_id(&self) -> EdgeId {
        self.edges.iter().map(|e| e.id).max().unwrap_or(0)
    }

    /// Connected components as sorted vertex sets.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        components_of(&self.vertices, &self.edges)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced by `keep`, retaining edge ids.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> MultiGraph {
        MultiGraph {
            vertices: self.vertices.iter().copied().filter(|v| keep.contains(v)).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
                .collect(),
        }
    }
}

pub(crate) fn components_of(vertices: &[VertexId], edges: &[Edge]) -> Vec<BTreeSet<VertexId>> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for v in vertices {
        adj.entry(*v).or_default();
    }
    for e in edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut comps = Vec::new();
    for v in vertices {
        if seen.contains(v) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([*v]);
        seen.insert(*v);
        while let Some(x) = queue.pop_front() {
            comp.insert(x);
            for &y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// An embedded planar multigraph with derived faces.
#[derive(Clone, Debug)]
pub struct PlanarMultigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    edge_by_id: HashMap<EdgeId, usize>,
    rotation: BTreeMap<VertexId, Vec<EdgeId>>,
    faces: Vec<Vec<HalfEdge>>,
    face_of: HashMap<HalfEdge, usize>,
}

impl PlanarMultigraph {
    /// Build from an edge list and a rotation system, validating both the
    /// rotation shape and Euler's formula on every connected component.
    pub fn build(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        rotation: BTreeMap<VertexId, Vec<EdgeId>>,
    ) -> Result<Self, GraphError> {
        let mut vs = vertices;
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::Malformed("duplicate vertex id".into()));
        }
        let vset: BTreeSet<VertexId> = vs.iter().copied().collect();
        let mut edge_by_id = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(GraphError::Malformed(format!("loop edge {}", e.id)));
            }
            if !vset.contains(&e.u) || !vset.contains(&e.v) {
                return Err(GraphError::Malformed(format!("edge {} has unknown endpoint", e.id)));
            }
            if edge_by_id.insert(e.id, i).is_some() {
                return Err(GraphError::Malformed(format!("duplicate edge id {}", e.id)));
            }
        }
        // Rotation lists must contain exactly the incident edges, once each.
        let mut incident: BTreeMap<VertexId, BTreeSet<EdgeId>> = BTreeMap::new();
        for v in &vs {
            incident.insert(*v, BTreeSet::new());
        }
        for e in &edges {
            incident.get_mut(&e.u).unwrap().insert(e.id);
            incident.get_mut(&e.v).unwrap().insert(e.id);
        }
        for (v, want) in &incident {
            let rot = rotation.get(v).cloned().unwrap_or_default();
            let got: BTreeSet<EdgeId> = rot.iter().copied().collect();
            if got.len() != rot.len() || &got != want {
                return Err(GraphError::MalformedRotation(format!(
                    "vertex {v}: rotation {:?} does not list incident edges {:?} exactly once",
                    rot, want
                )));
            }
        }
        let mut rotation = rotation;
        for v in &vs {
            rotation.entry(*v).or_default();
        }
        rotation.retain(|v, _| vset.contains(v));

        let mut g = PlanarMultigraph {
            vertices: vs,
            edges,
            edge_by_id,
            rotation,
            faces: Vec::new(),
            face_of: HashMap::new(),
        };
        g.recompute_faces();
        g.check_euler()?;
        Ok(g)
    }

    fn recompute_faces(&mut self) {
        self.faces.clear();
        self.face_of.clear();
        let mut pos: HashMap<(VertexId, EdgeId), usize> = HashMap::new();
        for (v, rot) in &self.rotation {
            for (i, e) in rot.iter().enumerate() {
                pos.insert((*v, *e), i);
            }
        }
        let mut pending: BTreeSet<(EdgeId, bool)> = BTreeSet::new();
        for e in &self.edges {
            pending.insert((e.id, true));
            pending.insert((e.id, false));
        }
        while let Some(&(eid, fwd)) = pending.iter().next() {
            let mut walk = Vec::new();
            let mut h = HalfEdge { edge: eid, forward: fwd };
            loop {
                if !pending.remove(&(h.edge, h.forward)) {
                    break;
                }
                let face_idx = self.faces.len();
                self.face_of.insert(h, face_idx);
                walk.push(h);
                let head = self.head(h);
                let rot = &self.rotation[&head];
                let i = pos[&(head, h.edge)];
                // Predecessor in the rotation at the head vertex, oriented
                // away from it, continues the face walk.
                let next_eid = rot[(i + rot.len() - 1) % rot.len()];
                let next_edge = self.edge(next_eid);
                h = HalfEdge { edge: next_eid, forward: next_edge.u == head };
            }
            self.faces.push(walk);
        }
    }

    fn check_euler(&self) -> Result<(), GraphError> {
        for comp in self.components() {
            let v = comp.len();
            let e = self.edges.iter().filter(|e| comp.contains(&e.u)).count();
            let f = if e == 0 {
                1
            } else {
                let mut fs = BTreeSet::new();
                for (i, walk) in self.faces.iter().enumerate() {
                    if walk.iter().any(|h| comp.contains(&self.tail(*h))) {
                        fs.insert(i);
                    }
                }
                fs.len()
            };
            if v + f != e + 2 {
                return Err(GraphError::EulerViolation {
                    vertex: *comp.iter().next().unwrap(),
                    v,
                    e,
                    f,
                });
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[self.edge_by_id[&id]]
    }

    pub fn has_edge_id(&self, id: EdgeId) -> bool {
        self.edge_by_id.contains_key(&id)
    }

    pub fn rotation(&self) -> &BTreeMap<VertexId, Vec<EdgeId>> {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<HalfEdge>] {
        &self.faces
    }

    pub fn tail(&self, h: HalfEdge) -> VertexId {
        let e = self.edge(h.edge);
        if h.forward {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(&self, h: HalfEdge) -> VertexId {
        let e = self.edge(h.edge);
        if h.forward {
            e.v
        } else {
            e.u
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[&v].len()
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[&v]
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.rotation[&v].iter().map(|e| self.edge(*e).other(v)).collect()
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        components_of(&self.vertices, &self.edges)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Edges with exactly one endpoint in `s`.
    pub fn cut_edges(&self, s: &BTreeSet<VertexId>) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| s.contains(&e.u) != s.contains(&e.v))
            .map(|e| e.id)
            .collect()
    }

    pub fn as_multigraph(&self) -> MultiGraph {
        MultiGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Remove the given edges, keeping the embedding of the rest.
    pub fn delete_edges(&self, drop: &BTreeSet<EdgeId>) -> PlanarMultigraph {
        let edges: Vec<Edge> = self.edges.iter().copied().filter(|e| !drop.contains(&e.id)).collect();
        let mut rotation = self.rotation.clone();
        for rot in rotation.values_mut() {
            rot.retain(|e| !drop.contains(e));
        }
        PlanarMultigraph::build(self.vertices.clone(), edges, rotation)
            .expect("deleting edges keeps the embedding valid")
    }

    /// Remove isolated vertices (used after deletions).
    pub fn drop_isolated(&self) -> PlanarMultigraph {
        let keep: Vec<VertexId> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| !self.rotation[v].is_empty())
            .collect();
        let rotation: BTreeMap<VertexId, Vec<EdgeId>> = self
            .rotation
            .iter()
            .filter(|(v, r)| !r.is_empty() && keep.contains(v))
            .map(|(v, r)| (*v, r.clone()))
            .collect();
        PlanarMultigraph::build(keep, self.edges.clone(), rotation).expect("dropping isolated vertices is safe")
    }

    pub fn max_edge_id(&self) -> EdgeId {
        self.edges.iter().map(|e| e.id).max().unwrap_or(0)
    }
}

/// Bipartite vertex-face incidence graph with BFS distances from a root.
#[derive(Clone, Debug)]
pub struct VertexFaceGraph {
    pub root: VertexId,
    pub dist_vertex: BTreeMap<VertexId, u32>,
    pub dist_face: Vec<u32>,
}

/// BFS over the vertex-face graph of a connected embedded graph.
pub fn vertex_face_graph(g: &PlanarMultigraph, r: VertexId) -> Result<VertexFaceGraph, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let mut verts_on_face: Vec<BTreeSet<VertexId>> = Vec::with_capacity(g.faces().len());
    for walk in g.faces() {
        verts_on_face.push(walk.iter().map(|h| g.tail(*h)).collect());
    }
    let mut faces_at_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, vs) in verts_on_face.iter().enumerate() {
        for v in vs {
            faces_at_vertex.entry(*v).or_default().push(i);
        }
    }
    let mut dist_vertex: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut dist_face: Vec<u32> = vec![u32::MAX; g.faces().len()];
    dist_vertex.insert(r, 0);
    let mut vqueue: VecDeque<VertexId> = VecDeque::from([r]);
    let mut fqueue: VecDeque<usize> = VecDeque::new();
    loop {
        if let Some(v) = vqueue.pop_front() {
            let d = dist_vertex[&v];
            for &f in faces_at_vertex.get(&v).into_iter().flatten() {
                if dist_face[f] == u32::MAX {
                    dist_face[f] = d + 1;
                    fqueue.push_back(f);
                }
            }
            continue;
        }
        if let Some(f) = fqueue.pop_front() {
            let d = dist_face[f];
            for &v in &verts_on_face[f] {
                dist_vertex.entry(v).or_insert_with(|| {
                    vqueue.push_back(v);
                    d + 1
                });
            }
            continue;
        }
        break;
    }
    debug_assert!(dist_vertex.values().all(|d| d % 2 == 0));
    debug_assert!(dist_face.iter().all(|d| *d == u32::MAX || d % 2 == 1));
    Ok(VertexFaceGraph {
        root: r,
        dist_vertex,
        dist_face,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn triangle() -> PlanarMultigraph {
        let edges = vec![
            Edge { id: 0, u: 0, v: 1 },
            Edge { id: 1, u: 1, v: 2 },
            Edge { id: 2, u: 2, v: 0 },
        ];
        let rotation = BTreeMap::from([(0, vec![0, 2]), (1, vec![1, 0]), (2, vec![2, 1])]);
        PlanarMultigraph::build(vec![0, 1, 2], edges, rotation).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = triangle();
        assert_eq!(g.faces().len(), 2);
        let total: usize = g.faces().iter().map(|w| w.len()).sum();
        assert_eq!(total, 2 * g.edges().len());
    }

    #[test]
    fn single_edge_one_face_of_length_two() {
        let edges = vec![Edge { id: 0, u: 0, v: 1 }];
        let rotation = BTreeMap::from([(0, vec![0]), (1, vec![0])]);
        let g = PlanarMultigraph::build(vec![0, 1], edges, rotation).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.faces()[0].len(), 2);
    }

    #[test]
    fn k5_rotation_fails_euler() {
        // K5: any rotation system must violate Euler on the single component.
        let mut edges = Vec::new();
        let mut id = 0;
        for u in 0..5u32 {
            for v in (u + 1)..5 {
                edges.push(Edge { id, u, v });
                id += 1;
            }
        }
        let mut rotation: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
        for v in 0..5u32 {
            let inc: Vec<EdgeId> = edges.iter().filter(|e| e.touches(v)).map(|e| e.id).collect();
            rotation.insert(v, inc);
        }
        let err = PlanarMultigraph::build((0..5).collect(), edges, rotation).unwrap_err();
        assert!(matches!(err, GraphError::EulerViolation { .. }));
    }

    #[test]
    fn rotation_must_list_incident_edges() {
        let edges = vec![Edge { id: 0, u: 0, v: 1 }, Edge { id: 1, u: 1, v: 2 }];
        let rotation = BTreeMap::from([(0, vec![0]), (1, vec![0]), (2, vec![1])]);
        let err = PlanarMultigraph::build(vec![0, 1, 2], edges, rotation).unwrap_err();
        assert!(matches!(err, GraphError::MalformedRotation(_)));
    }

    #[test]
    fn parallel_edges_embed() {
        // Two vertices joined by three parallel edges: 3 faces.
        let edges = vec![
            Edge { id: 0, u: 0, v: 1 },
            Edge { id: 1, u: 0, v: 1 },
            Edge { id: 2, u: 0, v: 1 },
        ];
        let rotation = BTreeMap::from([(0, vec![0, 1, 2]), (1, vec![2, 1, 0])]);
        let g = PlanarMultigraph::build(vec![0, 1], edges, rotation).unwrap();
        assert_eq!(g.faces().len(), 3);
    }

    #[test]
    fn vertex_face_distances_on_triangle() {
        let g = triangle();
        let d = vertex_face_graph(&g, 0).unwrap();
        assert_eq!(d.dist_vertex[&0], 0);
        assert!(d.dist_face.iter().all(|&x| x == 1));
        assert_eq!(d.dist_vertex[&1], 2);
        assert_eq!(d.dist_vertex[&2], 2);
    }


    #[test]
    fn grid_corner_max_distance() {
        // grid of 3x3 cells (4x4 vertices) from a corner: brute-force BFS
        // over the explicit vertex-face incidence graph as the oracle
        let g = crate::instances::gen_grid(4, 4).graph;
        let vf = vertex_face_graph(&g, 0).unwrap();
        let got_max = *vf.dist_vertex.values().max().unwrap();
        // independent BFS: nodes = vertices + faces, incidence from walks
        let nv = g.vertices().len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv + g.faces().len()];
        for (fi, walk) in g.faces().iter().enumerate() {
            let verts: BTreeSet<VertexId> = walk.iter().map(|h| g.tail(*h)).collect();
            for v in verts {
                adj[v as usize].push(nv + fi);
                adj[nv + fi].push(v as usize);
            }
        }
        let mut dist = vec![u32::MAX; adj.len()];
        dist[0] = 0;
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        let oracle_max = (0..nv).map(|v| dist[v]).max().unwrap();
        assert_eq!(got_max, oracle_max);
        assert_eq!(got_max, 4);
    }

    #[test]
    fn vertex_face_graph_rejects_disconnected() {
        let edges = vec![Edge { id: 0, u: 0, v: 1 }, Edge { id: 1, u: 2, v: 3 }];
        let rotation = BTreeMap::from([(0, vec![0]), (1, vec![0]), (2, vec![1]), (3, vec![1])]);
        let g = PlanarMultigraph::build(vec![0, 1, 2, 3], edges, rotation).unwrap();
        assert!(matches!(vertex_face_graph(&g, 0), Err(GraphError::Disconnected)));
    }

    #[test]
    fn path_distances() {
        // path a-b-c: one face; b,c at distance 2 from a.
        let edges = vec![Edge { id: 0, u: 0, v: 1 }, Edge { id: 1, u: 1, v: 2 }];
        let rotation = BTreeMap::from([(0, vec![0]), (1, vec![0, 1]), (2, vec![1])]);
        let g = PlanarMultigraph::build(vec![0, 1, 2], edges, rotation).unwrap();
        assert_eq!(g.faces().len(), 1);
        let d = vertex_face_graph(&g, 0).unwrap();
        assert_eq!(d.dist_vertex[&1], 2);
        assert_eq!(d.dist_vertex[&2], 2);
    }
}
