//! Snug structure of minimally k-edge-connected graphs.
//!
//! A vertex of degree >= k+1 is snug when two k-cuts differ exactly by it;
//! its unique shore pair chains snug vertices into vertex-disjoint directed
//! paths whose shores are strictly nested. Contracting snug paths preserves
//! every k-cut except their internal shores, which is what the augmentation
//! pipeline exploits. This module also thins link sets per cost class and
//! computes exact covering link sets per path.

use crate::contraction::{contract_edges, ContractionMap};
use crate::cost::Cost;
use crate::cuts::{enumerate_k_cuts, is_k_edge_connected, min_cut_value, CutError};
use crate::graph::{Edge, EdgeId, GraphError, MultiGraph, PlanarMultigraph, VertexId};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SnugError {
    #[error("NOT_K_CONNECTED: min cut {0} below k={1}")]
    NotKConnected(u64, u64),
    #[error("NOT_MINIMAL: edge {0} crosses no k-cut")]
    NotMinimal(EdgeId),
    #[error("INFEASIBLE")]
    Infeasible,
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug)]
pub struct SnugPath {
    /// u_0 .. u_t in chain order
    pub vertices: Vec<VertexId>,
    /// S_0 .. S_{t+1}, strictly nested
    pub shores: Vec<BTreeSet<VertexId>>,
}

impl SnugPath {
    /// Smallest shore index containing x; t+2 when x is outside all shores.
    pub fn shore_index(&self, x: VertexId) -> usize {
        for (i, s) in self.shores.iter().enumerate() {
            if s.contains(&x) {
                return i;
            }
        }
        self.shores.len()
    }

    /// Shore indices crossed by the link {u, v}: the half-open nest between
    /// the endpoints' entry levels, as an inclusive interval.
    pub fn crossed_interval(&self, u: VertexId, v: VertexId) -> Option<(usize, usize)> {
        let (a, b) = (self.shore_index(u), self.shore_index(v));
        let (lo, hi) = (a.min(b), a.max(b));
        if lo == hi {
            None
        } else {
            Some((lo, hi - 1))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SnugStructure {
    pub root: VertexId,
    pub k: u64,
    pub snug: BTreeSet<VertexId>,
    pub shores: BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<VertexId>)>,
    pub arcs: Vec<(VertexId, VertexId)>,
    pub paths: Vec<SnugPath>,
    /// all k-cuts, canonicalized away from the root
    pub k_cuts: Vec<BTreeSet<VertexId>>,
}

impl SnugStructure {
    pub fn path_of(&self, v: VertexId) -> Option<usize> {
        self.paths.iter().position(|p| p.vertices.contains(&v))
    }

    /// Debug dump: paths with vertex sequences and shore vertex lists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "root": self.root,
            "k": self.k,
            "snug": self.snug.iter().copied().collect::<Vec<_>>(),
            "paths": self.paths.iter().map(|p| serde_json::json!({
                "vertices": p.vertices.clone(),
                "shores": p.shores.iter()
                    .map(|s| s.iter().copied().collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Number of degree-k vertices.
pub fn n_k(g: &MultiGraph, k: u64) -> usize {
    g.vertices.iter().filter(|v| g.degree(**v) as u64 == k).count()
}

/// Contract every edge crossing no k-cut; the result is minimally
/// k-edge-connected with the same k-cut family.
pub fn minimalize(g: &PlanarMultigraph, k: u64) -> Result<(PlanarMultigraph, ContractionMap), SnugError> {
    let mg = g.as_multigraph();
    let mc = min_cut_value(&mg).map_err(SnugError::Cut)?;
    if mc < k {
        return Err(SnugError::NotKConnected(mc, k));
    }
    if mc > k {
        // no k-cuts at all: everything contracts to a single vertex
        let all: BTreeSet<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        let (img, map) = contract_edges(g, &all)?;
        return Ok((img, map));
    }
    let root = *g.vertices().iter().min().unwrap();
    let cuts = enumerate_k_cuts(&mg, k, root)?;
    let mut crossed: BTreeSet<EdgeId> = BTreeSet::new();
    for s in &cuts {
        for e in g.edges() {
            if s.contains(&e.u) != s.contains(&e.v) {
                crossed.insert(e.id);
            }
        }
    }
    let contract: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .map(|e| e.id)
        .filter(|id| !crossed.contains(id))
        .collect();
    let (img, map) = contract_edges(g, &contract)?;
    Ok((img, map))
}

/// Snug vertices, unique shores, chain graph, and snug paths of a minimally
/// k-edge-connected graph.
pub fn find_snug_structure(g: &MultiGraph, root: VertexId, k: u64) -> Result<SnugStructure, SnugError> {
    if g.vertices.len() < 2 {
        return Ok(SnugStructure {
            root,
            k,
            snug: BTreeSet::new(),
            shores: BTreeMap::new(),
            arcs: Vec::new(),
            paths: Vec::new(),
            k_cuts: Vec::new(),
        });
    }
    let mc = min_cut_value(g)?;
    if mc != k {
        return Err(SnugError::NotKConnected(mc, k));
    }
    let cuts = enumerate_k_cuts(g, k, root)?;
    // minimality: every edge crosses some k-cut
    for e in &g.edges {
        if !cuts.iter().any(|s| s.contains(&e.u) != s.contains(&e.v)) {
            return Err(SnugError::NotMinimal(e.id));
        }
    }
    let cut_set: HashSet<&BTreeSet<VertexId>> = cuts.iter().collect();
    let mut shores: BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<VertexId>)> = BTreeMap::new();
    for s2 in &cuts {
        for v in s2 {
            if (g.degree(*v) as u64) < k + 1 {
                continue;
            }
            let mut s1 = s2.clone();
            s1.remove(v);
            if s1.is_empty() || !cut_set.contains(&s1) {
                continue;
            }
            // shores are unique per snug vertex
            debug_assert!(
                shores.get(v).map(|(a, b)| a == &s1 && b == s2).unwrap_or(true),
                "snug shores not unique for {v}"
            );
            shores.insert(*v, (s1, s2.clone()));
        }
    }
    let snug: BTreeSet<VertexId> = shores.keys().copied().collect();
    // arc (u, v) iff S2(u) == S1(v)
    let mut by_s1: HashMap<&BTreeSet<VertexId>, VertexId> = HashMap::new();
    for (v, (s1, _)) in &shores {
        let prev = by_s1.insert(s1, *v);
        debug_assert!(prev.is_none(), "two snug vertices share an inner shore");
    }
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::new();
    let mut succ: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut has_pred: BTreeSet<VertexId> = BTreeSet::new();
    for (u, (_, s2)) in &shores {
        if let Some(&v) = by_s1.get(s2) {
            arcs.push((*u, v));
            let prev = succ.insert(*u, v);
            debug_assert!(prev.is_none(), "out-degree above one in chain graph");
            let fresh = has_pred.insert(v);
            debug_assert!(fresh, "in-degree above one in chain graph");
        }
    }
    arcs.sort();
    // maximal paths
    let mut paths = Vec::new();
    for start in &snug {
        if has_pred.contains(start) {
            continue;
        }
        let mut vertices = vec![*start];
        let mut cur = *start;
        while let Some(&next) = succ.get(&cur) {
            vertices.push(next);
            cur = next;
        }
        let mut shore_chain = vec![shores[&vertices[0]].0.clone()];
        for v in &vertices {
            shore_chain.push(shores[v].1.clone());
        }
        debug_assert!(shore_chain.windows(2).all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]));
        paths.push(SnugPath {
            vertices,
            shores: shore_chain,
        });
    }
    Ok(SnugStructure {
        root,
        k,
        snug,
        shores,
        arcs,
        paths,
        k_cuts: cuts,
    })
}

/// Contract the snug paths with the given indices (over graph edges, links
/// included via loop deletion). The graph passed in may be G or G + L.
pub fn contract_snug_paths(
    graph: &PlanarMultigraph,
    snug: &SnugStructure,
    q: &[usize],
) -> Result<(PlanarMultigraph, ContractionMap), GraphError> {
    let mut contract: BTreeSet<EdgeId> = BTreeSet::new();
    for &pi in q {
        let path = &snug.paths[pi];
        for w in path.vertices.windows(2) {
            let eid = graph
                .edges()
                .iter()
                .filter(|e| (e.u == w[0] && e.v == w[1]) || (e.u == w[1] && e.v == w[0]))
                .map(|e| e.id)
                .min()
                .expect("chain arc is an edge of the graph");
            contract.insert(eid);
        }
    }
    contract_edges(graph, &contract)
}

/// Links with both endpoints snug.
pub fn l_snug(links: &[Edge], snug: &SnugStructure) -> BTreeSet<EdgeId> {
    links
        .iter()
        .filter(|l| snug.snug.contains(&l.u) && snug.snug.contains(&l.v))
        .map(|l| l.id)
        .collect()
}

/// One cheapest link per unordered pair of distinct snug paths that are
/// joined by any link; ties break to the smallest link id.
pub fn select_circ_snug(
    links: &[Edge],
    snug: &SnugStructure,
    costs: &BTreeMap<EdgeId, Cost>,
) -> BTreeSet<EdgeId> {
    let mut best: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for l in links {
        let (Some(pu), Some(pv)) = (snug.path_of(l.u), snug.path_of(l.v)) else {
            continue;
        };
        if pu == pv {
            continue;
        }
        let key = (pu.min(pv), pu.max(pv));
        match best.get(&key) {
            None => {
                best.insert(key, l.id);
            }
            Some(&cur) => {
                let better = costs[&l.id] < costs[&cur] || (costs[&l.id] == costs[&cur] && l.id < cur);
                if better {
                    best.insert(key, l.id);
                }
            }
        }
    }
    best.into_values().collect()
}

/// Thin the link set per the cost-class scheme: keep all snug-snug links;
/// one cheapest link per non-snug pair; per non-snug vertex, snug path,
/// and cost class, the deepest-reaching link. Feasibility of G + L' is
/// preserved and the optimum inflates by at most (1+lambda).
pub fn thin_links(
    base: &MultiGraph,
    links: &[Edge],
    costs: &BTreeMap<EdgeId, Cost>,
    snug: &SnugStructure,
    lambda: &Cost,
) -> Result<BTreeSet<EdgeId>, SnugError> {
    assert!(lambda.is_positive() && *lambda < Cost::one());
    if links.is_empty() {
        return Ok(BTreeSet::new());
    }
    let cmin = links.iter().map(|l| costs[&l.id].clone()).min().unwrap();
    let one_plus = &Cost::one() + lambda;
    // cost class: max i with cmin * (1+lambda)^i <= c
    let class_of = |c: &Cost| -> u32 {
        let mut i = 0u32;
        let mut boundary = &cmin * &one_plus;
        while &boundary <= c {
            i += 1;
            boundary = &boundary * &one_plus;
        }
        i
    };
    let mut keep: BTreeSet<EdgeId> = l_snug(links, snug);
    // cheapest per non-snug pair
    let mut pair_best: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    // deepest per (non-snug vertex, path, side, class): value (depth, id)
    let mut class_best: BTreeMap<(VertexId, usize, bool, u32), (usize, EdgeId)> = BTreeMap::new();
    for l in links {
        let su = snug.snug.contains(&l.u);
        let sv = snug.snug.contains(&l.v);
        if su && sv {
            continue;
        }
        if !su && !sv {
            let key = (l.u.min(l.v), l.u.max(l.v));
            match pair_best.get(&key) {
                None => {
                    pair_best.insert(key, l.id);
                }
                Some(&cur) => {
                    if costs[&l.id] < costs[&cur] || (costs[&l.id] == costs[&cur] && l.id < cur) {
                        pair_best.insert(key, l.id);
                    }
                }
            }
            continue;
        }
        let (v, u_snug) = if su { (l.v, l.u) } else { (l.u, l.v) };
        let pi = snug.path_of(u_snug).expect("snug vertex lies on a path");
        let path = &snug.paths[pi];
        let i = path.vertices.iter().position(|x| *x == u_snug).unwrap();
        // v in S_0 keeps the farthest-out link (max i); v outside S_{t+1}
        // keeps the deepest-in link (min i)
        let inside = path.shores[0].contains(&v);
        let cls = class_of(&costs[&l.id]);
        let key = (v, pi, inside, cls);
        let depth = if inside { i } else { path.vertices.len() - 1 - i };
        match class_best.get(&key) {
            None => {
                class_best.insert(key, (depth, l.id));
            }
            Some(&(d, cur)) => {
                let better = depth > d
                    || (depth == d
                        && (costs[&l.id] < costs[&cur] || (costs[&l.id] == costs[&cur] && l.id < cur)));
                if better {
                    class_best.insert(key, (depth, l.id));
                }
            }
        }
    }
    keep.extend(pair_best.into_values());
    keep.extend(class_best.into_values().map(|(_, id)| id));
    // feasibility: G + L' stays (k+1)-edge-connected
    let mut aug = base.clone();
    let mut next = aug.edges.iter().map(|e| e.id).max().unwrap_or(0) + 1;
    for l in links {
        if keep.contains(&l.id) {
            aug.edges.push(Edge { id: next, u: l.u, v: l.v });
            next += 1;
        }
    }
    if !is_k_edge_connected(&aug, snug.k + 1) {
        return Err(SnugError::Infeasible);
    }
    Ok(keep)
}

/// Exact weighted interval cover over nested shore indices; among equal-cost
/// covers prefers the lexicographically smallest link-id set.
pub fn interval_cover_exact(
    required: &[usize],
    items: &[(EdgeId, (usize, usize))],
    costs: &BTreeMap<EdgeId, Cost>,
) -> Option<BTreeSet<EdgeId>> {
    if required.is_empty() {
        return Some(BTreeSet::new());
    }
    let q = required.len();
    // dp[j] = best cover of required[0..j]
    let mut dp: Vec<Option<(Cost, BTreeSet<EdgeId>)>> = vec![None; q + 1];
    dp[0] = Some((Cost::zero(), BTreeSet::new()));
    for j in 1..=q {
        let point = required[j - 1];
        let mut best: Option<(Cost, BTreeSet<EdgeId>)> = None;
        for (id, (lo, hi)) in items {
            if *lo <= point && point <= *hi {
                // previous required point strictly below lo
                let j_prev = required.iter().take_while(|r| **r < *lo).count();
                if let Some((_pc, pset)) = &dp[j_prev.min(j - 1)] {
                    let mut set = pset.clone();
                    set.insert(*id);
                    let cost: Cost = set.iter().map(|i| &costs[i]).sum();
                    let better = match &best {
                        None => true,
                        Some((bc, bs)) => cost < *bc || (cost == *bc && set < *bs),
                    };
                    if better {
                        best = Some((cost, set));
                    }
                }
            }
        }
        dp[j] = best;
    }
    dp[q].take().map(|(_, set)| set)
}

/// Covering link set for one snug path: the farthest-out and deepest-in
/// boundary links plus an exact interval cover of the middle shores.
pub fn cover_path_links(
    snug: &SnugStructure,
    path_idx: usize,
    links: &[Edge],
    costs: &BTreeMap<EdgeId, Cost>,
) -> Result<BTreeSet<EdgeId>, SnugError> {
    let path = &snug.paths[path_idx];
    let t_plus_1 = path.shores.len() - 1;
    let outside = path.shores.len(); // sentinel index
    // a_P: farthest shore reachable by a link anchored inside S_0
    let mut a_p: Option<(usize, EdgeId)> = None;
    let mut b_p: Option<(usize, EdgeId)> = None;
    for l in links {
        for (x, y) in [(l.u, l.v), (l.v, l.u)] {
            let ix = path.shore_index(x);
            let iy = path.shore_index(y);
            if ix == 0 && iy >= 1 {
                let reach = (iy - 1).min(t_plus_1);
                let better = match a_p {
                    None => true,
                    Some((r, cur)) => {
                        reach > r
                            || (reach == r
                                && (costs[&l.id] < costs[&cur]
                                    || (costs[&l.id] == costs[&cur] && l.id < cur)))
                    }
                };
                if better {
                    a_p = Some((reach, l.id));
                }
            }
            if ix == outside && iy <= t_plus_1 {
                let reach = iy;
                let better = match b_p {
                    None => true,
                    Some((r, cur)) => {
                        reach < r
                            || (reach == r
                                && (costs[&l.id] < costs[&cur]
                                    || (costs[&l.id] == costs[&cur] && l.id < cur)))
                    }
                };
                if better {
                    b_p = Some((reach, l.id));
                }
            }
        }
    }
    let (a_p, l1) = a_p.ok_or(SnugError::Infeasible)?;
    let (b_p, l2) = b_p.ok_or(SnugError::Infeasible)?;
    let mut result = BTreeSet::from([l1, l2]);
    if a_p < b_p.saturating_sub(1) {
        let required: Vec<usize> = (a_p + 1..=b_p - 1).collect();
        let items: Vec<(EdgeId, (usize, usize))> = links
            .iter()
            .filter_map(|l| path.crossed_interval(l.u, l.v).map(|iv| (l.id, iv)))
            .collect();
        let cover = interval_cover_exact(&required, &items, costs).ok_or(SnugError::Infeasible)?;
        result.extend(cover);
    }
    // every shore of the path is now covered
    debug_assert!(path.shores.iter().all(|s| {
        links
            .iter()
            .filter(|l| result.contains(&l.id))
            .any(|l| s.contains(&l.u) != s.contains(&l.v))
    }));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, LinkPattern};
    use crate::oracle;

    #[test]
    fn cycle_has_no_snug_vertices() {
        let g = instances::gen_cycle(6).graph.as_multigraph();
        let s = find_snug_structure(&g, 0, 2).unwrap();
        assert!(s.snug.is_empty());
        assert!(s.paths.is_empty());
    }

    #[test]
    fn chain_has_single_snug_path() {
        let inst = instances::gen_snug_chain(8, LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, 0, 3).unwrap();
        // every vertex except the two outer ones is snug
        let expect: BTreeSet<VertexId> = (1..7).collect();
        assert_eq!(s.snug, expect);
        assert_eq!(s.paths.len(), 1);
        assert_eq!(s.paths[0].vertices.len(), 6);
        assert_eq!(s.k_cuts.len(), 7);
        // counting bounds
        let nk = n_k(&base, 3);
        assert!(base.vertices.len() - s.snug.len() < 4 * nk);
        assert!(s.paths.len() < 2 * nk);
    }

    #[test]
    fn arc_crossing_confinement() {
        let inst = instances::gen_snug_chain(7, LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, 0, 3).unwrap();
        for (u, v) in &s.arcs {
            // the arc's edge crosses exactly the shared shore
            let shared = &s.shores[u].1;
            for cut in &s.k_cuts {
                let crosses = cut.contains(u) != cut.contains(v);
                assert_eq!(crosses, cut == shared, "arc ({u},{v})");
            }
        }
    }

    #[test]
    fn minimalize_contracts_chords() {
        // C4 plus a chord: the chord crosses no 2-cut and is contracted
        let mut drawn = vec![
            instances::DrawnEdge::new(0, 0, 1, 0.0),
            instances::DrawnEdge::new(1, 1, 2, 0.0),
            instances::DrawnEdge::new(2, 2, 3, 0.0),
            instances::DrawnEdge::new(3, 3, 0, 0.0),
        ];
        drawn.push(instances::DrawnEdge::new(4, 0, 2, 0.0));
        let layout: instances::Layout = [
            (0u32, (1.0, 0.0)),
            (1u32, (0.0, 1.0)),
            (2u32, (-1.0, 0.0)),
            (3u32, (0.0, -1.0)),
        ]
        .into_iter()
        .collect();
        let g = instances::build_from_layout(&layout, &drawn).unwrap();
        let (img, map) = minimalize(&g, 2).unwrap();
        assert_eq!(img.vertices().len(), 3);
        assert_eq!(map.vertex_map[&2], 0);
        let mg = img.as_multigraph();
        assert_eq!(min_cut_value(&mg).unwrap(), 2);
        // already-minimal graph: identity
        let chain = instances::gen_snug_chain(5, LinkPattern::Minimal).base_graph();
        let (img2, _) = minimalize(&chain, 3).unwrap();
        assert_eq!(img2.vertices().len(), chain.vertices().len());
        assert_eq!(img2.edges().len(), chain.edges().len());
    }

    #[test]
    fn contract_paths_on_chain() {
        let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
        let base = inst.base_graph();
        let s = find_snug_structure(&base.as_multigraph(), 0, 3).unwrap();
        let (img, map) = contract_snug_paths(&inst.graph, &s, &[0]).unwrap();
        assert_eq!(img.vertices().len(), 3);
        // the long link survives
        let link = *inst.links.iter().next().unwrap();
        assert!(matches!(map.edge_map[&link], crate::contraction::EdgeImage::Kept(_)));
        // identity on empty Q
        let (img2, _) = contract_snug_paths(&inst.graph, &s, &[]).unwrap();
        assert_eq!(img2.vertices().len(), inst.graph.vertices().len());
    }

    #[test]
    fn cover_path_links_single_long_link() {
        let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, 0, 3).unwrap();
        let links: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
        let lp = cover_path_links(&s, 0, &links, &inst.costs).unwrap();
        assert_eq!(lp.len(), 1);
    }


    #[test]
    fn doubled_cycle_is_minimal_at_k4() {
        // parallel pairs around a cycle: every edge crosses the two arc
        // cuts adjacent to its gap, so nothing contracts
        let n = 5u32;
        let layout: instances::Layout = (0..n)
            .map(|i| {
                let a = i as f64 / n as f64 * std::f64::consts::TAU;
                (i, (a.cos(), a.sin()))
            })
            .collect();
        let mut drawn = Vec::new();
        let mut id = 0;
        for i in 0..n {
            for bend in [12.0, -12.0] {
                drawn.push(instances::DrawnEdge::new(id, i, (i + 1) % n, bend));
                id += 1;
            }
        }
        let g = instances::build_from_layout(&layout, &drawn).unwrap();
        assert_eq!(min_cut_value(&g.as_multigraph()).unwrap(), 4);
        let (img, _) = minimalize(&g, 4).unwrap();
        assert_eq!(img.vertices().len(), g.vertices().len());
        assert_eq!(img.edges().len(), g.edges().len());
    }

    #[test]
    fn unit_cost_thinning_is_class_independent() {
        // with cost ratio 1 there is a single cost class, so the kept set
        // does not depend on lambda
        let inst = instances::gen_snug_chain(8, instances::LinkPattern::Rich);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, 0, 3).unwrap();
        let links: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
        let a = thin_links(&base, &links, &inst.costs, &s, &Cost::ratio(1, 3)).unwrap();
        let b = thin_links(&base, &links, &inst.costs, &s, &Cost::ratio(2, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thin_links_keeps_feasibility_and_near_optimality() {
        for seed in [0u64, 1, 2, 5] {
            let inst = instances::gen_cap_instance(8, 2, seed, 3, 6);
            let base = inst.base_graph().as_multigraph();
            let s = find_snug_structure(&base, 0, 2).unwrap();
            let links: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
            let lambda = Cost::ratio(1, 3);
            let kept = thin_links(&base, &links, &inst.costs, &s, &lambda).unwrap();
            assert!(kept.iter().all(|id| inst.links.contains(id)));
            let raw: Vec<(EdgeId, u32, u32)> = links.iter().map(|l| (l.id, l.u, l.v)).collect();
            let opt_full = oracle::brute_wcap(&base, &raw, &inst.costs, 2, 24).unwrap();
            let thin_raw: Vec<(EdgeId, u32, u32)> = links
                .iter()
                .filter(|l| kept.contains(&l.id))
                .map(|l| (l.id, l.u, l.v))
                .collect();
            let opt_thin = oracle::brute_wcap(&base, &thin_raw, &inst.costs, 2, 24).unwrap();
            let c_full: Cost = opt_full.iter().map(|id| &inst.costs[id]).sum();
            let c_thin: Cost = opt_thin.iter().map(|id| &inst.costs[id]).sum();
            let bound = &(&Cost::one() + &lambda) * &c_full;
            assert!(c_thin <= bound, "seed {seed}: {c_thin} > {bound}");
        }
    }


    #[test]
    fn circ_snug_on_beaded_chain_picks_cheapest_per_pair() {
        let inst = instances::gen_beaded_chain(3, 3, 2);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, inst.root, 2).unwrap();
        assert_eq!(s.paths.len(), 3);
        let links: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
        let circ = select_circ_snug(&links, &s, &inst.costs);
        // consecutive blocks are joined by cross links; one representative
        // per joined pair, and it is the cheapest among the candidates
        assert!(!circ.is_empty());
        // (G + (L minus snug-snug plus representatives)) with all paths
        // contracted stays 3-edge-connected
        let snug_ids = l_snug(&links, &s);
        let keep: BTreeSet<EdgeId> = inst
            .links
            .iter()
            .copied()
            .filter(|id| !snug_ids.contains(id) || circ.contains(id))
            .collect();
        let drop: BTreeSet<EdgeId> = inst.links.difference(&keep).copied().collect();
        let reduced = inst.graph.delete_edges(&drop);
        let all: Vec<usize> = (0..s.paths.len()).collect();
        let (contracted, _) = contract_snug_paths(&reduced, &s, &all).unwrap();
        assert!(crate::cuts::is_k_edge_connected(&contracted.as_multigraph(), 3));
        for id in &circ {
            let l = links.iter().find(|l| l.id == *id).unwrap();
            let (pu, pv) = (s.path_of(l.u).unwrap(), s.path_of(l.v).unwrap());
            assert_ne!(pu, pv);
            for other in &links {
                if let (Some(qu), Some(qv)) = (s.path_of(other.u), s.path_of(other.v)) {
                    if (qu.min(qv), qu.max(qv)) == (pu.min(pv), pu.max(pv)) {
                        assert!(inst.costs[id] <= inst.costs[&other.id]);
                    }
                }
            }
        }
    }

    #[test]
    fn circ_snug_synthetic_tie_break() {
        // two synthetic paths joined by links of costs {3, 1, 2}
        let shores1 = vec![
            BTreeSet::from([9]),
            BTreeSet::from([9, 0]),
            BTreeSet::from([9, 0, 1]),
        ];
        let shores2 = vec![
            BTreeSet::from([9, 0, 1, 5]),
            BTreeSet::from([9, 0, 1, 5, 2]),
            BTreeSet::from([9, 0, 1, 5, 2, 3]),
        ];
        let s = SnugStructure {
            root: 8,
            k: 2,
            snug: BTreeSet::from([0, 1, 2, 3]),
            shores: BTreeMap::new(),
            arcs: vec![(0, 1), (2, 3)],
            paths: vec![
                SnugPath { vertices: vec![0, 1], shores: shores1 },
                SnugPath { vertices: vec![2, 3], shores: shores2 },
            ],
            k_cuts: Vec::new(),
        };
        let links = vec![
            Edge { id: 10, u: 0, v: 2 },
            Edge { id: 11, u: 1, v: 2 },
            Edge { id: 12, u: 1, v: 3 },
        ];
        let costs = BTreeMap::from([
            (10, Cost::from_int(3)),
            (11, Cost::from_int(1)),
            (12, Cost::from_int(2)),
        ]);
        let circ = select_circ_snug(&links, &s, &costs);
        assert_eq!(circ, BTreeSet::from([11]));
    }

    #[test]
    fn circ_snug_picks_cheapest_per_pair() {
        let inst = instances::gen_snug_chain(8, LinkPattern::Rich);
        let base = inst.base_graph().as_multigraph();
        let s = find_snug_structure(&base, 0, 3).unwrap();
        let links: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
        // single path: no distinct pairs
        assert!(select_circ_snug(&links, &s, &inst.costs).is_empty());
    }
}
