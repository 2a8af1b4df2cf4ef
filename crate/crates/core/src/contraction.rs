//! Edge contraction on embedded multigraphs.
//!
//! Contracting an edge merges its endpoints by splicing the two rotations at
//! the edge's position, so the image stays embedded; loops arising from
//! parallel copies are deleted. Surviving edges keep their ids.

use crate::graph::{Edge, EdgeId, GraphError, PlanarMultigraph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum EdgeImage {
    Kept(EdgeId),
    DeletedAsLoop,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ContractionMap {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeImage>,
}

impl ContractionMap {
    pub fn identity(g: &PlanarMultigraph) -> Self {
        ContractionMap {
            vertex_map: g.vertices().iter().map(|v| (*v, *v)).collect(),
            edge_map: g.edges().iter().map(|e| (e.id, EdgeImage::Kept(e.id))).collect(),
        }
    }

    pub fn image_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[&v]
    }

    /// Preimage of a vertex set.
    pub fn lift_vertices(&self, s: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        self.vertex_map
            .iter()
            .filter(|(_, img)| s.contains(img))
            .map(|(v, _)| *v)
            .collect()
    }

    /// Compose: first self, then other.
    pub fn then(&self, other: &ContractionMap) -> ContractionMap {
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|(v, mid)| (*v, other.vertex_map[mid]))
            .collect();
        let edge_map = self
            .edge_map
            .iter()
            .map(|(e, img)| {
                let img = match img {
                    EdgeImage::DeletedAsLoop => EdgeImage::DeletedAsLoop,
                    EdgeImage::Kept(mid) => other.edge_map[mid],
                };
                (*e, img)
            })
            .collect();
        ContractionMap { vertex_map, edge_map }
    }
}

struct Worktable {
    /// live rotations; merged vertices removed
    rotation: BTreeMap<VertexId, Vec<EdgeId>>,
    /// live edges by id
    edges: HashMap<EdgeId, Edge>,
    /// union-find over original vertices
    parent: HashMap<VertexId, VertexId>,
    deleted: BTreeSet<EdgeId>,
}

impl Worktable {
    fn find(&mut self, v: VertexId) -> VertexId {
        let p = self.parent[&v];
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.parent.insert(v, r);
        r
    }

    fn remove_edge_entry(&mut self, at: VertexId, e: EdgeId) {
        let rot = self.rotation.get_mut(&at).unwrap();
        let i = rot.iter().position(|x| *x == e).expect("edge in rotation");
        rot.remove(i);
    }

    /// Contract live edge `eid` by merging the larger-rooted endpoint into
    /// the smaller one; splices rotations and deletes arising loops.
    fn contract(&mut self, eid: EdgeId) {
        let e = self.edges[&eid];
        let ru = self.find(e.u);
        let rv = self.find(e.v);
        debug_assert_ne!(ru, rv, "edge already a loop");
        let (keep, gone) = if ru < rv { (ru, rv) } else { (rv, ru) };
        // splice: in keep's rotation replace the entry for eid by gone's
        // rotation read cyclically starting after eid, with eid removed
        let rot_keep = self.rotation[&keep].clone();
        let rot_gone = self.rotation[&gone].clone();
        let pk = rot_keep.iter().position(|x| *x == eid).expect("edge at keep");
        let pg = rot_gone.iter().position(|x| *x == eid).expect("edge at gone");
        let mut merged: Vec<EdgeId> = Vec::with_capacity(rot_keep.len() + rot_gone.len() - 2);
        merged.extend_from_slice(&rot_keep[..pk]);
        for i in 1..rot_gone.len() {
            merged.push(rot_gone[(pg + i) % rot_gone.len()]);
        }
        merged.extend_from_slice(&rot_keep[pk + 1..]);
        self.rotation.remove(&gone);
        self.rotation.insert(keep, merged);
        self.parent.insert(gone, keep);
        self.edges.remove(&eid);
        self.deleted.insert(eid);
        // rewrite endpoints of edges formerly at `gone`, deleting loops
        let ids: Vec<EdgeId> = self.rotation[&keep].clone();
        let mut loops: Vec<EdgeId> = Vec::new();
        for id in ids {
            let ed = self.edges.get_mut(&id).expect("live edge");
            if ed.u == gone {
                ed.u = keep;
            }
            if ed.v == gone {
                ed.v = keep;
            }
            if ed.u == ed.v && !loops.contains(&id) {
                loops.push(id);
            }
        }
        for id in loops {
            // a loop appears twice in keep's rotation
            self.remove_edge_entry(keep, id);
            self.remove_edge_entry(keep, id);
            self.edges.remove(&id);
            self.deleted.insert(id);
        }
    }
}

/// Contract the given edge set, returning the embedded image and the map.
pub fn contract_edges(
    g: &PlanarMultigraph,
    contract: &BTreeSet<EdgeId>,
) -> Result<(PlanarMultigraph, ContractionMap), GraphError> {
    let mut wt = Worktable {
        rotation: g.rotation().clone(),
        edges: g.edges().iter().map(|e| (e.id, *e)).collect(),
        parent: g.vertices().iter().map(|v| (*v, *v)).collect(),
        deleted: BTreeSet::new(),
    };
    for eid in contract {
        if wt.deleted.contains(eid) {
            continue;
        }
        let e = wt.edges[eid];
        if wt.find(e.u) == wt.find(e.v) {
            // became a loop through earlier merges; drop it
            let at = wt.find(e.u);
            wt.remove_edge_entry(at, *eid);
            wt.remove_edge_entry(at, *eid);
            wt.edges.remove(eid);
            wt.deleted.insert(*eid);
            continue;
        }
        wt.contract(*eid);
    }
    let vertices: Vec<VertexId> = wt.rotation.keys().copied().collect();
    let edges: Vec<Edge> = {
        let mut v: Vec<Edge> = wt.edges.values().copied().collect();
        v.sort_by_key(|e| e.id);
        v
    };
    let rotation = wt.rotation.clone();
    let image = PlanarMultigraph::build(vertices, edges, rotation)?;
    let mut parent = wt.parent;
    let roots: Vec<VertexId> = parent.keys().copied().collect();
    let find = |v: VertexId, parent: &mut HashMap<VertexId, VertexId>| -> VertexId {
        let mut r = v;
        while parent[&r] != r {
            r = parent[&r];
        }
        let mut cur = v;
        while parent[&cur] != r {
            let next = parent[&cur];
            parent.insert(cur, r);
            cur = next;
        }
        r
    };
    let vertex_map: BTreeMap<VertexId, VertexId> = roots.iter().map(|v| (*v, find(*v, &mut parent))).collect();
    let edge_map: BTreeMap<EdgeId, EdgeImage> = g
        .edges()
        .iter()
        .map(|e| {
            let img = if wt.deleted.contains(&e.id) {
                EdgeImage::DeletedAsLoop
            } else {
                EdgeImage::Kept(e.id)
            };
            (e.id, img)
        })
        .collect();
    Ok((image, ContractionMap { vertex_map, edge_map }))
}

/// Contract every edge with both endpoints outside `keep` (i.e. E[V \ keep]).
pub fn contract_outside(
    g: &PlanarMultigraph,
    keep: &BTreeSet<VertexId>,
) -> Result<(PlanarMultigraph, ContractionMap), GraphError> {
    let f: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| !keep.contains(&e.u) && !keep.contains(&e.v))
        .map(|e| e.id)
        .collect();
    contract_edges(g, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanarMultigraph;
    use std::collections::BTreeMap;

    fn triangle() -> PlanarMultigraph {
        let edges = vec![
            Edge { id: 0, u: 0, v: 1 },
            Edge { id: 1, u: 1, v: 2 },
            Edge { id: 2, u: 2, v: 0 },
        ];
        let rotation = BTreeMap::from([(0, vec![0, 2]), (1, vec![1, 0]), (2, vec![2, 1])]);
        PlanarMultigraph::build(vec![0, 1, 2], edges, rotation).unwrap()
    }

    fn c4() -> PlanarMultigraph {
        let edges = vec![
            Edge { id: 0, u: 0, v: 1 },
            Edge { id: 1, u: 1, v: 2 },
            Edge { id: 2, u: 2, v: 3 },
            Edge { id: 3, u: 3, v: 0 },
        ];
        let rotation = BTreeMap::from([
            (0, vec![0, 3]),
            (1, vec![1, 0]),
            (2, vec![2, 1]),
            (3, vec![3, 2]),
        ]);
        PlanarMultigraph::build(vec![0, 1, 2, 3], edges, rotation).unwrap()
    }

    #[test]
    fn contract_triangle_edge_gives_parallel_pair() {
        let g = triangle();
        let (img, map) = contract_edges(&g, &BTreeSet::from([0])).unwrap();
        assert_eq!(img.vertices().len(), 2);
        assert_eq!(img.edges().len(), 2);
        assert_eq!(map.vertex_map[&1], 0);
        assert_eq!(map.edge_map[&0], EdgeImage::DeletedAsLoop);
        assert_eq!(map.edge_map[&1], EdgeImage::Kept(1));
    }

    #[test]
    fn contract_everything() {
        let g = triangle();
        let all: BTreeSet<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        let (img, map) = contract_edges(&g, &all).unwrap();
        assert_eq!(img.vertices().len(), 1);
        assert!(img.edges().is_empty());
        assert!(map.vertex_map.values().all(|v| *v == 0));
    }

    #[test]
    fn contract_path_in_c4() {
        let g = c4();
        let (img, _) = contract_edges(&g, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(img.vertices().len(), 1);
        // the 4th edge became a loop after the path collapsed
        assert!(img.edges().is_empty());
        let (img2, map2) = contract_edges(&g, &BTreeSet::from([1, 2])).unwrap();
        assert_eq!(img2.vertices().len(), 2);
        assert_eq!(img2.edges().len(), 2);
        assert_eq!(map2.vertex_map[&2], 1);
        assert_eq!(map2.vertex_map[&3], 1);
    }

    #[test]
    fn contraction_preserves_uncrossed_cut_values() {
        let g = c4();
        let (img, map) = contract_edges(&g, &BTreeSet::from([2])).unwrap();
        // cut {0,1} does not cross the contracted component {2,3}
        let mg = img.as_multigraph();
        let s: BTreeSet<u32> = [map.vertex_map[&0], map.vertex_map[&1]].into_iter().collect();
        let crossing = mg.edges.iter().filter(|e| s.contains(&e.u) != s.contains(&e.v)).count();
        assert_eq!(crossing, 2);
    }
}
