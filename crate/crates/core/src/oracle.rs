//! Independent brute-force reference solvers.
//!
//! Everything here enumerates bitmasks with its own connectivity checks and
//! shares no code with the pipeline solvers; the acceptance suite compares
//! the two sides. Costs are scaled to integers over a common denominator so
//! the inner loops stay in u64.

use crate::cost::Cost;
use crate::cuts;
use crate::graph::{EdgeId, MultiGraph, VertexId};
use num::Integer;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("ORACLE_TOO_LARGE: {0}")]
    TooLarge(String),
    #[error("INFEASIBLE")]
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub edges: BTreeSet<EdgeId>,
    pub cost: Cost,
}

/// Scale rational costs to u64 weights over the lcm of denominators.
fn scale_costs(ids: &[EdgeId], costs: &BTreeMap<EdgeId, Cost>) -> Vec<u64> {
    let mut lcm = num::BigInt::from(1);
    for id in ids {
        lcm = lcm.lcm(costs[id].as_ratio().denom());
    }
    ids.iter()
        .map(|id| {
            let r = costs[id].as_ratio();
            let scaled = r.numer() * (&lcm / r.denom());
            u64::try_from(scaled).expect("nonnegative scaled cost fits u64")
        })
        .collect()
}

struct BitGraph {
    n: usize,
    /// adjacency under a given edge mask is recomputed per query
    ends: Vec<(usize, usize)>,
}

impl BitGraph {
    fn new(g: &MultiGraph) -> (Self, Vec<EdgeId>, BTreeMap<VertexId, usize>) {
        let vidx: BTreeMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let ids: Vec<EdgeId> = g.edges.iter().map(|e| e.id).collect();
        let ends = g.edges.iter().map(|e| (vidx[&e.u], vidx[&e.v])).collect();
        (BitGraph { n: g.vertices.len(), ends }, ids, vidx)
    }

    fn connected_under(&self, emask: u64, vmask: u64) -> bool {
        if vmask == 0 {
            return true;
        }
        let start = vmask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for (i, (a, b)) in self.ends.iter().enumerate() {
                if emask >> i & 1 == 0 {
                    continue;
                }
                let (ma, mb) = (1u64 << a, 1u64 << b);
                if vmask & ma != 0 && vmask & mb != 0 {
                    if frontier & ma != 0 && seen & mb == 0 {
                        next |= mb;
                    }
                    if frontier & mb != 0 && seen & ma == 0 {
                        next |= ma;
                    }
                }
            }
            seen |= next;
            frontier = next;
        }
        seen == vmask
    }
}

/// Exact minimum-cost k-edge-connected spanning sub-multigraph by edge
/// subset enumeration. Bound is on the number of edges.
pub fn brute_wecss(
    g: &MultiGraph,
    costs: &BTreeMap<EdgeId, Cost>,
    k: u64,
    edge_bound: usize,
) -> Result<OracleSolution, OracleError> {
    let m = g.edges.len();
    let n = g.vertices.len();
    if m > edge_bound || m > 30 || n > 24 {
        return Err(OracleError::TooLarge(format!("{m} edges / {n} vertices")));
    }
    let (bg, ids, vidx) = BitGraph::new(g);
    let weights = scale_costs(&ids, costs);
    // incidence masks per vertex
    let mut inc = vec![0u64; n];
    for (i, (a, b)) in bg.ends.iter().enumerate() {
        inc[*a] |= 1 << i;
        inc[*b] |= 1 << i;
    }
    // crossing edge masks for every vertex subset avoiding vertex 0,
    // ordered smallest subsets first so infeasible masks die early
    let mut cross: Vec<u64> = Vec::new();
    for smask in 1u64..(1 << (n - 1)) {
        let svm = smask << 1; // vertex 0 never in S
        let mut cm = 0u64;
        for (i, (a, b)) in bg.ends.iter().enumerate() {
            if (svm >> a & 1) != (svm >> b & 1) {
                cm |= 1 << i;
            }
        }
        cross.push(cm);
    }
    cross.sort_by_key(|cm| cm.count_ones());
    cross.dedup();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if !feasible_cut_masks(full, &cross, k) {
        return Err(OracleError::Infeasible);
    }
    let mut best_mask = full;
    let mut best_w: u64 = weights.iter().sum();
    for f in 0..=full {
        let w: u64 = (0..m).filter(|i| f >> i & 1 == 1).map(|i| weights[i]).sum();
        if w >= best_w {
            continue;
        }
        if inc.iter().any(|im| ((im & f).count_ones() as u64) < k) {
            continue;
        }
        if feasible_cut_masks(f, &cross, k) {
            best_mask = f;
            best_w = w;
        }
    }
    let _ = vidx;
    let edges: BTreeSet<EdgeId> = (0..m).filter(|i| best_mask >> i & 1 == 1).map(|i| ids[i]).collect();
    let cost = edges.iter().map(|id| &costs[id]).sum();
    Ok(OracleSolution { edges, cost })
}

fn feasible_cut_masks(f: u64, cross: &[u64], k: u64) -> bool {
    cross.iter().all(|cm| (cm & f).count_ones() as u64 >= k)
}

/// Exact minimum-cost k-vertex-connected spanning subgraph by subset
/// enumeration with direct vertex-cut checking.
pub fn brute_wvcss(
    g: &MultiGraph,
    costs: &BTreeMap<EdgeId, Cost>,
    k: u64,
    edge_bound: usize,
) -> Result<OracleSolution, OracleError> {
    let m = g.edges.len();
    let n = g.vertices.len();
    if m > edge_bound || m > 26 || n > 16 {
        return Err(OracleError::TooLarge(format!("{m} edges / {n} vertices")));
    }
    if (n as u64) < k + 1 {
        return Err(OracleError::Infeasible);
    }
    let (bg, ids, _) = BitGraph::new(g);
    let weights = scale_costs(&ids, costs);
    let mut inc = vec![0u64; n];
    for (i, (a, b)) in bg.ends.iter().enumerate() {
        inc[*a] |= 1 << i;
        inc[*b] |= 1 << i;
    }
    let full = (1u64 << m) - 1;
    let all_v = (1u64 << n) - 1;
    let kvc = |f: u64| -> bool {
        if !bg.connected_under(f, all_v) {
            return false;
        }
        // remove every vertex set of size < k and check connectivity
        kvc_rec(&bg, f, all_v, 0, k as usize - 1)
    };
    if !kvc(full) {
        return Err(OracleError::Infeasible);
    }
    let mut best_mask = full;
    let mut best_w: u64 = weights.iter().sum();
    for f in 0..=full {
        let w: u64 = (0..m).filter(|i| f >> i & 1 == 1).map(|i| weights[i]).sum();
        if w >= best_w {
            continue;
        }
        if inc.iter().any(|im| ((im & f).count_ones() as u64) < k) {
            continue;
        }
        if kvc(f) {
            best_mask = f;
            best_w = w;
        }
    }
    let edges: BTreeSet<EdgeId> = (0..m).filter(|i| best_mask >> i & 1 == 1).map(|i| ids[i]).collect();
    let cost = edges.iter().map(|id| &costs[id]).sum();
    Ok(OracleSolution { edges, cost })
}

fn kvc_rec(bg: &BitGraph, f: u64, remaining: u64, from: usize, budget: usize) -> bool {
    if !bg.connected_under(f, remaining) {
        return false;
    }
    if budget == 0 {
        return true;
    }
    for v in from..bg.n {
        if remaining >> v & 1 == 1 {
            let rest = remaining & !(1 << v);
            if rest.count_ones() >= 2 && !kvc_rec(bg, f, rest, v + 1, budget - 1) {
                return false;
            }
        }
    }
    true
}

/// Exact minimum-cost augmentation: cover every k-cut of G by links so that
/// G + F is (k+1)-edge-connected. Enumerates link subsets.
pub fn brute_wcap(
    g: &MultiGraph,
    links: &[(EdgeId, VertexId, VertexId)],
    costs: &BTreeMap<EdgeId, Cost>,
    k: u64,
    link_bound: usize,
) -> Result<BTreeSet<EdgeId>, OracleError> {
    let n = g.vertices.len();
    let ml = links.len();
    if ml > link_bound || ml > 26 || n > 24 {
        return Err(OracleError::TooLarge(format!("{ml} links / {n} vertices")));
    }
    let vidx: BTreeMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    // all k-cuts of G by direct enumeration, as link-crossing masks
    let mut cut_linkmasks: Vec<u64> = Vec::new();
    for smask in 1u64..(1 << (n - 1)) {
        let svm = smask << 1;
        let crossing = g
            .edges
            .iter()
            .filter(|e| (svm >> vidx[&e.u] & 1) != (svm >> vidx[&e.v] & 1))
            .count() as u64;
        if crossing == 0 {
            return Err(OracleError::Infeasible); // disconnected base graph
        }
        if crossing < k {
            return Err(OracleError::Infeasible);
        }
        if crossing == k {
            let mut lm = 0u64;
            for (i, (_, u, v)) in links.iter().enumerate() {
                if (svm >> vidx[u] & 1) != (svm >> vidx[v] & 1) {
                    lm |= 1 << i;
                }
            }
            if lm == 0 {
                return Err(OracleError::Infeasible); // uncoverable k-cut
            }
            cut_linkmasks.push(lm);
        }
    }
    cut_linkmasks.sort();
    cut_linkmasks.dedup();
    let ids: Vec<EdgeId> = links.iter().map(|(id, _, _)| *id).collect();
    let weights = scale_costs(&ids, costs);
    let full = if ml == 0 { 0 } else { (1u64 << ml) - 1 };
    let mut best_mask = full;
    let mut best_w: u64 = weights.iter().sum::<u64>() + 1;
    for f in 0..=full {
        let w: u64 = (0..ml).filter(|i| f >> i & 1 == 1).map(|i| weights[i]).sum();
        if w >= best_w {
            continue;
        }
        if cut_linkmasks.iter().all(|lm| lm & f != 0) {
            best_mask = f;
            best_w = w;
        }
    }
    Ok((0..ml).filter(|i| best_mask >> i & 1 == 1).map(|i| ids[i]).collect())
}

/// Exact vertex connectivity: connected-cut enumeration at small sizes, the
/// flow-based computation beyond. The two characterizations are
/// cross-asserted in tests.
pub fn vertex_connectivity(g: &MultiGraph) -> u64 {
    let n = g.vertices.len();
    if n <= 1 {
        return 0;
    }
    if n <= 14 {
        let vidx: BTreeMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut nbr = vec![0u64; n];
        for e in &g.edges {
            let (a, b) = (vidx[&e.u], vidx[&e.v]);
            nbr[a] |= 1 << b;
            nbr[b] |= 1 << a;
        }
        let (bg, _, _) = BitGraph::new(g);
        let all_e = if g.edges.is_empty() { 0 } else { (1u64 << g.edges.len()) - 1 };
        let all_v = (1u64 << n) - 1;
        if !bg.connected_under(all_e, all_v) {
            return 0;
        }
        let mut best = (n - 1) as u64;
        for smask in 1u64..all_v {
            if smask == all_v {
                continue;
            }
            let comp = all_v & !smask;
            if !bg.connected_under(all_e, smask) || !bg.connected_under(all_e, comp) {
                continue;
            }
            let mut gamma = 0u64;
            for v in 0..n {
                if smask >> v & 1 == 1 {
                    gamma |= nbr[v];
                }
            }
            gamma &= !smask;
            if gamma != comp {
                best = best.min(gamma.count_ones() as u64);
            }
        }
        best
    } else {
        cuts::vertex_connectivity_flow(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::instances;

    fn unit(g: &MultiGraph) -> BTreeMap<EdgeId, Cost> {
        g.edges.iter().map(|e| (e.id, Cost::one())).collect()
    }

    #[test]
    fn wecss_on_c5_takes_all_edges() {
        let g = instances::gen_cycle(5).graph.as_multigraph();
        let sol = brute_wecss(&g, &unit(&g), 2, 24).unwrap();
        assert_eq!(sol.cost, Cost::from_int(5));
        assert_eq!(sol.edges.len(), 5);
    }

    #[test]
    fn wecss_parallel_edges_pick_cheapest() {
        let g = MultiGraph::new(
            vec![0, 1],
            vec![
                Edge { id: 0, u: 0, v: 1 },
                Edge { id: 1, u: 0, v: 1 },
                Edge { id: 2, u: 0, v: 1 },
            ],
        );
        let costs = BTreeMap::from([
            (0, Cost::from_int(1)),
            (1, Cost::from_int(2)),
            (2, Cost::from_int(3)),
        ]);
        let sol = brute_wecss(&g, &costs, 2, 24).unwrap();
        assert_eq!(sol.cost, Cost::from_int(3));
        assert_eq!(sol.edges, BTreeSet::from([0, 1]));
    }

    #[test]
    fn wvcss_on_k4() {
        let mut edges = Vec::new();
        let mut id = 0;
        for a in 0..4u32 {
            for b in (a + 1)..4 {
                edges.push(Edge { id, u: a, v: b });
                id += 1;
            }
        }
        let g = MultiGraph::new(vec![0, 1, 2, 3], edges);
        let sol = brute_wvcss(&g, &unit(&g), 3, 24).unwrap();
        assert_eq!(sol.cost, Cost::from_int(6));
    }

    #[test]
    fn wcap_minimal_chain_needs_one_link() {
        let inst = instances::gen_snug_chain(6, instances::LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let links: Vec<(EdgeId, u32, u32)> = inst
            .links
            .iter()
            .map(|id| {
                let e = inst.graph.edge(*id);
                (*id, e.u, e.v)
            })
            .collect();
        let f = brute_wcap(&base, &links, &inst.costs, 3, 22).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn vertex_connectivity_matches_flow() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(4..9u32);
            let mut edges = Vec::new();
            let mut id = 0;
            for v in 1..n {
                let u = rng.gen_range(0..v);
                edges.push(Edge { id, u, v });
                id += 1;
            }
            for _ in 0..rng.gen_range(2..8) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && !edges.iter().any(|e: &Edge| (e.u, e.v) == (u, v) || (e.v, e.u) == (u, v)) {
                    edges.push(Edge { id, u, v });
                    id += 1;
                }
            }
            let g = MultiGraph::new((0..n).collect(), edges);
            assert_eq!(vertex_connectivity(&g), cuts::vertex_connectivity_flow(&g));
        }
    }

    #[test]
    fn icosahedron_is_five_connected() {
        // standard icosahedral graph adjacency
        let adj: [(u32, u32); 30] = [
            (0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
            (1, 6), (1, 7), (2, 7), (2, 8), (3, 8),
            (3, 9), (4, 9), (4, 10), (5, 10), (5, 6),
            (6, 7), (7, 8), (8, 9), (9, 10), (10, 6),
            (6, 11), (7, 11), (8, 11), (9, 11), (10, 11),
        ];
        let edges: Vec<Edge> = adj
            .iter()
            .enumerate()
            .map(|(i, (u, v))| Edge { id: i as u32, u: *u, v: *v })
            .collect();
        let g = MultiGraph::new((0..12).collect(), edges);
        assert_eq!(vertex_connectivity(&g), 5);
        assert_eq!(cuts::vertex_connectivity_flow(&g), 5);
    }
}
