//! The planar k-WCAP pipeline: minimalize, thin, cover snug paths, build a
//! (k+1)-edge-safe cover of the path-contracted graph with vertex weights,
//! classify paths against the cover, keep the awkward paths contracted, and
//! solve the resulting pieces exactly. Also the exact set-cover solver used
//! both as the per-piece solver and as a reference optimum.

use crate::contraction::{contract_edges, contract_outside, ContractionMap};
use crate::cost::Cost;
use crate::cover::{build_safe_cover, CoverError};
use crate::cuts::{enumerate_k_cuts, is_k_edge_connected, min_cut_value, CutError};
use crate::graph::{Edge, EdgeId, GraphError, MultiGraph, PlanarMultigraph, VertexId};
use crate::instances::{cost_ratio, CapInstance};
use crate::snug::{
    contract_snug_paths, cover_path_links, find_snug_structure, l_snug, select_circ_snug, thin_links,
    SnugError, SnugStructure,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum CapError {
    #[error("INFEASIBLE")]
    Infeasible,
    #[error("INVALID_EPSILON: epsilon must lie in (0,1)")]
    InvalidEpsilon,
    #[error("NOT_K_CONNECTED: min cut {0} below k={1}")]
    NotKConnected(u64, u64),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Snug(#[from] SnugError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Exact minimum-cost augmentation to (k+1)-edge-connectivity: a weighted
/// cover of all k-cuts by links, solved by branch and bound over the cut
/// with the fewest remaining candidates.
pub fn exact_wcap(
    base: &MultiGraph,
    links: &[Edge],
    costs: &BTreeMap<EdgeId, Cost>,
    k: u64,
) -> Result<BTreeSet<EdgeId>, CapError> {
    if base.vertices.len() < 2 {
        return Ok(BTreeSet::new());
    }
    let mc = min_cut_value(base)?;
    if mc < k {
        return Err(CapError::NotKConnected(mc, k));
    }
    if mc > k {
        return Ok(BTreeSet::new());
    }
    let root = *base.vertices.iter().min().unwrap();
    let cuts = enumerate_k_cuts(base, k, root)?;
    // candidates per cut, each sorted by (cost, id)
    let mut cut_cands: Vec<Vec<EdgeId>> = Vec::new();
    for s in &cuts {
        let mut cands: Vec<EdgeId> = links
            .iter()
            .filter(|l| s.contains(&l.u) != s.contains(&l.v))
            .map(|l| l.id)
            .collect();
        if cands.is_empty() {
            return Err(CapError::Infeasible);
        }
        cands.sort_by(|a, b| costs[a].cmp(&costs[b]).then(a.cmp(b)));
        cands.dedup();
        cut_cands.push(cands);
    }
    let mut best: Option<(Cost, BTreeSet<EdgeId>)> = None;
    let mut chosen: BTreeSet<EdgeId> = BTreeSet::new();
    cover_bb(&cut_cands, costs, &mut chosen, &Cost::zero(), &mut best);
    best.map(|(_, set)| set).ok_or(CapError::Infeasible)
}

fn cover_bb(
    cut_cands: &[Vec<EdgeId>],
    costs: &BTreeMap<EdgeId, Cost>,
    chosen: &mut BTreeSet<EdgeId>,
    chosen_cost: &Cost,
    best: &mut Option<(Cost, BTreeSet<EdgeId>)>,
) {
    // lower bound: greedily pack uncovered cuts with pairwise-disjoint
    // candidate sets; any cover pays at least the cheapest candidate of
    // each packed cut with distinct links
    let mut pick: Option<usize> = None;
    let mut uncovered: Vec<usize> = Vec::new();
    for (i, cands) in cut_cands.iter().enumerate() {
        if cands.iter().any(|c| chosen.contains(c)) {
            continue;
        }
        uncovered.push(i);
        match pick {
            None => pick = Some(i),
            Some(p) if cands.len() < cut_cands[p].len() => pick = Some(i),
            _ => {}
        }
    }
    uncovered.sort_by_key(|i| cut_cands[*i].len());
    let mut lb = Cost::zero();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    for i in &uncovered {
        if cut_cands[*i].iter().all(|c| !used.contains(c)) {
            used.extend(cut_cands[*i].iter().copied());
            lb += &costs[&cut_cands[*i][0]];
        }
    }
    let Some(p) = pick else {
        let better = match best {
            None => true,
            Some((bc, bs)) => chosen_cost < bc || (chosen_cost == bc && *chosen < *bs),
        };
        if better {
            *best = Some((chosen_cost.clone(), chosen.clone()));
        }
        return;
    };
    if let Some((bc, _)) = best {
        if &(chosen_cost + &lb) >= bc {
            return;
        }
    }
    for cand in &cut_cands[p] {
        let cost = chosen_cost + &costs[cand];
        if let Some((bc, _)) = best {
            if &cost >= bc {
                continue;
            }
        }
        chosen.insert(*cand);
        cover_bb(cut_cands, costs, chosen, &cost, best);
        chosen.remove(cand);
    }
}

/// Augmentation-safe cover over explicit vertex sets.
#[derive(Clone, Debug)]
pub struct AugSafeCover {
    pub sets: Vec<BTreeSet<VertexId>>,
    pub v_u: BTreeSet<VertexId>,
}

impl AugSafeCover {
    pub fn new(sets: Vec<BTreeSet<VertexId>>) -> Self {
        let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for s in &sets {
            for v in s {
                *count.entry(*v).or_insert(0) += 1;
            }
        }
        let v_u = count.into_iter().filter(|(_, c)| *c >= 2).map(|(v, _)| v).collect();
        AugSafeCover { sets, v_u }
    }

    /// Links incident to a doubly-covered vertex.
    pub fn f_u<'a>(&self, links: &'a [Edge]) -> Vec<&'a Edge> {
        links
            .iter()
            .filter(|l| self.v_u.contains(&l.u) || self.v_u.contains(&l.v))
            .collect()
    }

    pub fn is_well_separated(&self, elements: &[Edge]) -> bool {
        for (i, si) in self.sets.iter().enumerate() {
            for sj in self.sets.iter().skip(i + 1) {
                for e in elements {
                    let ui = si.contains(&e.u) && !sj.contains(&e.u);
                    let vj = sj.contains(&e.v) && !si.contains(&e.v);
                    let uj = sj.contains(&e.u) && !si.contains(&e.u);
                    let vi = si.contains(&e.v) && !sj.contains(&e.v);
                    if (ui && vj) || (uj && vi) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Check the augmentation-safe condition for every k-cut of the base graph:
/// all crossing edges and links inside one set, or some doubly-covered link
/// crosses.
pub fn verify_aug_safe(
    cover: &AugSafeCover,
    base: &MultiGraph,
    links: &[Edge],
    k: u64,
) -> Result<bool, CapError> {
    let mc = min_cut_value(base)?;
    if mc > k {
        return Ok(true); // no k-cuts
    }
    if mc < k {
        return Err(CapError::NotKConnected(mc, k));
    }
    let root = *base.vertices.iter().min().unwrap();
    let cuts = enumerate_k_cuts(base, k, root)?;
    let f_u: Vec<&Edge> = cover.f_u(links);
    for s in &cuts {
        if f_u.iter().any(|l| s.contains(&l.u) != s.contains(&l.v)) {
            continue;
        }
        let mut crossing: Vec<&Edge> = base
            .edges
            .iter()
            .filter(|e| s.contains(&e.u) != s.contains(&e.v))
            .collect();
        crossing.extend(links.iter().filter(|l| s.contains(&l.u) != s.contains(&l.v)));
        let inside_some = cover
            .sets
            .iter()
            .any(|u| crossing.iter().all(|e| u.contains(&e.u) && u.contains(&e.v)));
        if !inside_some {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Preimage of every cover set under a contraction.
pub fn lift_cover(sets: &[BTreeSet<VertexId>], map: &ContractionMap) -> Vec<BTreeSet<VertexId>> {
    sets.iter().map(|s| map.lift_vertices(s)).collect()
}

/// Image of every cover set under a contraction.
pub fn contract_cover(sets: &[BTreeSet<VertexId>], map: &ContractionMap) -> Vec<BTreeSet<VertexId>> {
    sets.iter()
        .map(|s| s.iter().map(|v| map.image_vertex(*v)).collect())
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct PathClassification {
    pub q1: Vec<usize>,
    pub case2: Vec<usize>,
    pub q3: Vec<usize>,
}

impl PathClassification {
    pub fn q(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.q1.iter().chain(self.q3.iter()).copied().collect();
        q.sort_unstable();
        q.dedup();
        q
    }
}

/// Classify snug paths against a well-separated cover of the contracted
/// graph: (1) the contracted vertex is in or adjacent to the doubly-covered
/// region; (2) a unique set contains all shore crossings; (3) every shore is
/// crossed by a doubly-covered link. Paths in (1) or (3) stay contracted.
#[allow(clippy::too_many_arguments)]
pub fn classify_paths(
    snug: &SnugStructure,
    contracted: &PlanarMultigraph,
    map: &ContractionMap,
    cover_sets: &[BTreeSet<VertexId>],
    tilde_links: &[Edge],
    base_edges: &[Edge],
) -> PathClassification {
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for s in cover_sets {
        for v in s {
            *count.entry(*v).or_insert(0) += 1;
        }
    }
    let vu_contracted: BTreeSet<VertexId> = count
        .into_iter()
        .filter(|(_, c)| *c >= 2)
        .map(|(v, _)| v)
        .collect();
    let mut vu_closed = vu_contracted.clone();
    for v in &vu_contracted {
        vu_closed.extend(contracted.neighbors(*v));
    }
    let lifted = lift_cover(cover_sets, map);
    let vu_lifted = map.lift_vertices(&vu_contracted);
    let tilde_u: Vec<&Edge> = tilde_links
        .iter()
        .filter(|l| vu_lifted.contains(&l.u) || vu_lifted.contains(&l.v))
        .collect();
    let mut out = PathClassification::default();
    for (pi, path) in snug.paths.iter().enumerate() {
        let u_p = map.image_vertex(path.vertices[0]);
        let case1 = vu_closed.contains(&u_p);
        let case3 = path
            .shores
            .iter()
            .all(|s| tilde_u.iter().any(|l| s.contains(&l.u) != s.contains(&l.v)));
        let case2 = lifted.iter().enumerate().any(|(i, u_star)| {
            if !cover_sets[i].contains(&u_p) {
                return false;
            }
            path.shores.iter().all(|s| {
                base_edges
                    .iter()
                    .map(|e| (e.u, e.v))
                    .chain(tilde_links.iter().map(|l| (l.u, l.v)))
                    .filter(|(u, v)| s.contains(u) != s.contains(v))
                    .all(|(u, v)| u_star.contains(&u) && u_star.contains(&v))
            })
        });
        debug_assert!(case1 || case2 || case3, "path {pi} matches no case");
        if case1 {
            out.q1.push(pi);
        }
        if case3 && !case1 {
            out.q3.push(pi);
        }
        if case2 && !case1 && !case3 {
            out.case2.push(pi);
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct WcapStats {
    pub snug_paths: usize,
    pub thinned_links: usize,
    pub tilde_links: usize,
    pub q1: usize,
    pub case2: usize,
    pub q3: usize,
    pub l_star_star_cost: Cost,
    pub pieces: usize,
    pub piece_snug_tw: Vec<usize>,
    pub delta_cover: Cost,
    pub cover_sets: usize,
}

#[derive(Clone, Debug)]
pub struct WcapResult {
    pub links: BTreeSet<EdgeId>,
    pub cost: Cost,
    /// min cut of G + F
    pub certificate: u64,
    pub stats: WcapStats,
}

fn edges_of(g: &PlanarMultigraph, ids: &BTreeSet<EdgeId>) -> Vec<Edge> {
    g.edges().iter().filter(|e| ids.contains(&e.id)).copied().collect()
}

/// The full PTAS for planar k-WCAP with bounded cost ratio.
pub fn ptas_wcap(inst: &CapInstance, eps: &Cost) -> Result<WcapResult, CapError> {
    ptas_wcap_with(inst, eps, None, None)
}

/// ptas_wcap with explicit thinning and cover parameter overrides.
pub fn ptas_wcap_with(
    inst: &CapInstance,
    eps: &Cost,
    lambda_override: Option<&Cost>,
    delta_override: Option<&Cost>,
) -> Result<WcapResult, CapError> {
    if !eps.is_positive() || *eps > Cost::one() {
        return Err(CapError::InvalidEpsilon);
    }
    let base = inst.base_graph();
    let base_mg = base.as_multigraph();
    let k = inst.k;
    let mc = min_cut_value(&base_mg)?;
    if mc < k {
        return Err(CapError::NotKConnected(mc, k));
    }
    if !is_k_edge_connected(&inst.graph.as_multigraph(), k + 1) {
        return Err(CapError::Infeasible);
    }
    if mc > k {
        return Ok(WcapResult {
            links: BTreeSet::new(),
            cost: Cost::zero(),
            certificate: mc,
            stats: WcapStats::default(),
        });
    }
    // minimalize the base inside the embedded G + L graph
    let root0 = *base.vertices().iter().min().unwrap();
    let cuts = enumerate_k_cuts(&base_mg, k, root0)?;
    let contract_ids: BTreeSet<EdgeId> = base
        .edges()
        .iter()
        .filter(|e| !cuts.iter().any(|s| s.contains(&e.u) != s.contains(&e.v)))
        .map(|e| e.id)
        .collect();
    let (full_min, _min_map) = contract_edges(&inst.graph, &contract_ids)?;
    let live_links: BTreeSet<EdgeId> = inst
        .links
        .iter()
        .copied()
        .filter(|id| full_min.has_edge_id(*id))
        .collect();
    let base_min = full_min.delete_edges(&live_links);
    let base_min_mg = base_min.as_multigraph();
    let root = *base_min.vertices().iter().min().unwrap();
    let snug = find_snug_structure(&base_min_mg, root, k)?;
    let link_edges: Vec<Edge> = edges_of(&full_min, &live_links);
    let costs = &inst.costs;

    // thin with lambda = eps/3
    let lambda = lambda_override.cloned().unwrap_or_else(|| eps / &Cost::from_int(3));
    let l_bar = thin_links(&base_min_mg, &link_edges, costs, &snug, &lambda)?;

    // per-path covering link sets over the full surviving link set
    let mut l_p: Vec<BTreeSet<EdgeId>> = Vec::new();
    for pi in 0..snug.paths.len() {
        l_p.push(cover_path_links(&snug, pi, &link_edges, costs)?);
    }

    // tilde links: thinned minus snug-snug plus one representative per pair
    let snug_links = l_snug(&link_edges, &snug);
    let circ = select_circ_snug(&link_edges, &snug, costs);
    let tilde: BTreeSet<EdgeId> = l_bar
        .iter()
        .copied()
        .filter(|id| !snug_links.contains(id))
        .chain(circ.iter().copied())
        .collect();

    // contract all snug paths in G + tilde
    let drop: BTreeSet<EdgeId> = live_links.difference(&tilde).copied().collect();
    let g_tilde = full_min.delete_edges(&drop);
    let all_paths: Vec<usize> = (0..snug.paths.len()).collect();
    let (g_chain, chain_map) = contract_snug_paths(&g_tilde, &snug, &all_paths)?;

    // vertex weights: w(u_P) = c(L_P)
    let mut weights: BTreeMap<VertexId, Cost> = BTreeMap::new();
    for (pi, path) in snug.paths.iter().enumerate() {
        let u_p = chain_map.image_vertex(path.vertices[0]);
        let w: Cost = l_p[pi].iter().map(|id| &costs[id]).sum();
        weights.insert(u_p, w);
    }
    // edge costs on the contracted graph: links keep cost, edges are free
    let mut chain_costs: BTreeMap<EdgeId, Cost> = BTreeMap::new();
    for e in g_chain.edges() {
        let c = if tilde.contains(&e.id) {
            costs[&e.id].clone()
        } else {
            Cost::zero()
        };
        chain_costs.insert(e.id, c);
    }

    // (k+1)-edge-safe cover with delta = eps^2 / (6*345*Delta^2)
    let delta_ratio = if link_edges.is_empty() {
        Cost::one()
    } else {
        cost_ratio(link_edges.iter().map(|l| &costs[&l.id])).max(Cost::one())
    };
    let eps_sq = eps * eps;
    let denom = &(&Cost::from_int(6 * 345) * &delta_ratio) * &delta_ratio;
    let delta = delta_override.cloned().unwrap_or_else(|| &eps_sq / &denom);
    let (cover, _) = build_safe_cover(&g_chain, &chain_costs, &weights, &delta, k + 1)?;
    let cover_sets: Vec<BTreeSet<VertexId>> = cover.sets.iter().map(|s| s.vertices.clone()).collect();

    // classify paths against the lifted cover
    let tilde_edges = edges_of(&full_min, &tilde);
    let class = classify_paths(
        &snug,
        &g_chain,
        &chain_map,
        &cover_sets,
        &tilde_edges,
        base_min.edges(),
    );
    let q = class.q();

    // L** = union of L_P over Q1 plus the doubly-covered tilde links
    let vu_lifted = chain_map.lift_vertices(&cover.v_u);
    let mut l_star_star: BTreeSet<EdgeId> = BTreeSet::new();
    for pi in &class.q1 {
        l_star_star.extend(l_p[*pi].iter().copied());
    }
    for l in &tilde_edges {
        if vu_lifted.contains(&l.u) || vu_lifted.contains(&l.v) {
            l_star_star.insert(l.id);
        }
    }

    // L* = tilde plus snug-snug links not internal to contracted pairs
    let qset: BTreeSet<usize> = q.iter().copied().collect();
    let mut l_star = tilde.clone();
    for l in &link_edges {
        if !snug_links.contains(&l.id) {
            continue;
        }
        let (Some(pu), Some(pv)) = (snug.path_of(l.u), snug.path_of(l.v)) else {
            continue;
        };
        if pu == pv && !qset.contains(&pu) {
            l_star.insert(l.id);
        }
        if pu != pv && !(qset.contains(&pu) && qset.contains(&pv)) {
            l_star.insert(l.id);
        }
    }

    // uncontracted paths must lie inside exactly one lifted cover set
    debug_assert!({
        let lifted = lift_cover(&cover_sets, &chain_map);
        snug.paths.iter().enumerate().all(|(pi, path)| {
            q.contains(&pi)
                || lifted
                    .iter()
                    .filter(|u| path.vertices.iter().all(|v| u.contains(v)))
                    .count()
                    == 1
        })
    });
    // contract Q in G + L*
    let drop_star: BTreeSet<EdgeId> = live_links.difference(&l_star).copied().collect();
    let g_lstar = full_min.delete_edges(&drop_star);
    let (g_q, q_map) = contract_snug_paths(&g_lstar, &snug, &q)?;
    let lifted_sets = lift_cover(&cover_sets, &chain_map);
    let q_sets = contract_cover(&lifted_sets, &q_map);

    // solve each piece exactly
    let live_star: BTreeSet<EdgeId> = l_star
        .iter()
        .copied()
        .filter(|id| g_q.has_edge_id(*id))
        .collect();
    let mut f: BTreeSet<EdgeId> = l_star_star.clone();
    let mut piece_snug_tw = Vec::new();
    for u_set in &q_sets {
        let (piece, _) = contract_outside(&g_q, u_set)?;
        let piece_links: Vec<Edge> = piece
            .edges()
            .iter()
            .filter(|e| live_star.contains(&e.id))
            .copied()
            .collect();
        let piece_link_ids: BTreeSet<EdgeId> = piece_links.iter().map(|l| l.id).collect();
        let piece_base = piece.delete_edges(&piece_link_ids).as_multigraph();
        let opt_i = exact_wcap(&piece_base, &piece_links, costs, k)?;
        f.extend(opt_i);
        piece_snug_tw.push(piece_snug_treewidth(&piece, &piece_link_ids, k));
    }

    // certificate on the original instance
    let mut aug = base_mg.clone();
    let mut next = inst.graph.max_edge_id() + 1;
    for id in &f {
        let l = inst.graph.edge(*id);
        aug.edges.push(Edge { id: next, u: l.u, v: l.v });
        next += 1;
    }
    let certificate = min_cut_value(&aug)?;
    if certificate < k + 1 {
        return Err(CapError::Infeasible);
    }
    let cost: Cost = f.iter().map(|id| &costs[id]).sum();
    let l_star_star_cost: Cost = l_star_star.iter().map(|id| &costs[id]).sum();
    Ok(WcapResult {
        links: f,
        cost,
        certificate,
        stats: WcapStats {
            snug_paths: snug.paths.len(),
            thinned_links: l_bar.len(),
            tilde_links: tilde.len(),
            q1: class.q1.len(),
            case2: class.case2.len(),
            q3: class.q3.len(),
            l_star_star_cost,
            pieces: q_sets.len(),
            piece_snug_tw,
            delta_cover: delta,
            cover_sets: cover_sets.len(),
        },
    })
}

/// Heuristic snug-treewidth of a piece: width of a min-fill decomposition of
/// the piece after contracting its own snug paths. Informational only.
fn piece_snug_treewidth(piece: &PlanarMultigraph, link_ids: &BTreeSet<EdgeId>, k: u64) -> usize {
    let base = piece.delete_edges(link_ids).as_multigraph();
    if base.vertices.len() < 2 {
        return 0;
    }
    let root = *base.vertices.iter().min().unwrap();
    match find_snug_structure(&base, root, k) {
        Ok(s) => {
            let all: Vec<usize> = (0..s.paths.len()).collect();
            match contract_snug_paths(piece, &s, &all) {
                Ok((img, _)) => crate::treedec::min_fill_td(&img.as_multigraph()).width(),
                Err(_) => crate::treedec::min_fill_td(&piece.as_multigraph()).width(),
            }
        }
        Err(_) => crate::treedec::min_fill_td(&piece.as_multigraph()).width(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, LinkPattern};
    use crate::oracle;

    fn links_of(inst: &CapInstance) -> Vec<Edge> {
        inst.links.iter().map(|id| *inst.graph.edge(*id)).collect()
    }

    #[test]
    fn exact_wcap_fig1_needs_single_link() {
        let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let f = exact_wcap(&base, &links_of(&inst), &inst.costs, 3).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn exact_wcap_matches_bruteforce() {
        for seed in 0..10 {
            for k in [2u64, 3] {
                let inst = instances::gen_cap_instance(8, k, seed, 3, 6);
                let base = inst.base_graph().as_multigraph();
                let links = links_of(&inst);
                let f = exact_wcap(&base, &links, &inst.costs, k).unwrap();
                let raw: Vec<(EdgeId, u32, u32)> = links.iter().map(|l| (l.id, l.u, l.v)).collect();
                let brute = oracle::brute_wcap(&base, &raw, &inst.costs, k, 24).unwrap();
                let cf: Cost = f.iter().map(|i| &inst.costs[i]).sum();
                let cb: Cost = brute.iter().map(|i| &inst.costs[i]).sum();
                assert_eq!(cf, cb, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn trivial_cover_is_aug_safe() {
        let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
        let base = inst.base_graph().as_multigraph();
        let cover = AugSafeCover::new(vec![base.vertices.iter().copied().collect()]);
        assert!(verify_aug_safe(&cover, &base, &links_of(&inst), 3).unwrap());
    }

    #[test]
    fn edge_safe_cover_of_g_plus_l_is_aug_safe() {
        let inst = instances::gen_cap_instance(10, 2, 2, 2, 5);
        let full = inst.graph.as_multigraph();
        let base = inst.base_graph().as_multigraph();
        let costs_all: BTreeMap<EdgeId, Cost> = full.edges.iter().map(|e| (e.id, Cost::one())).collect();
        let weights = BTreeMap::new();
        let delta = Cost::ratio(1, 2);
        let (cover, _) = build_safe_cover(&inst.graph, &costs_all, &weights, &delta, 3).unwrap();
        let sets: Vec<BTreeSet<VertexId>> = cover.sets.iter().map(|s| s.vertices.clone()).collect();
        let aug = AugSafeCover::new(sets);
        assert!(verify_aug_safe(&aug, &base, &links_of(&inst), 2).unwrap());
        // removing a set breaks it on shallow instances only if cuts escape;
        // a cover with a single interior set must fail when it misses cuts
        let broken = AugSafeCover::new(vec![BTreeSet::from([0, 1])]);
        assert!(!verify_aug_safe(&broken, &base, &links_of(&inst), 2).unwrap());
    }

    #[test]
    fn lift_then_contract_is_identity() {
        let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
        let base = inst.base_graph();
        let s = find_snug_structure(&base.as_multigraph(), 0, 3).unwrap();
        let (_, map) = contract_snug_paths(&inst.graph, &s, &[0]).unwrap();
        let sets = vec![BTreeSet::from([0u32, 1, 2, 3, 4, 5])];
        let contracted = contract_cover(&sets, &map);
        let lifted = lift_cover(&contracted, &map);
        assert_eq!(lifted[0], sets[0]);
    }

    #[test]
    fn ptas_wcap_fig1_returns_single_link() {
        for eps in [Cost::ratio(1, 2), Cost::ratio(99, 100), Cost::ratio(1, 10)] {
            let inst = instances::gen_snug_chain(6, LinkPattern::Minimal);
            let res = ptas_wcap(&inst, &eps).unwrap();
            assert_eq!(res.cost, Cost::one(), "eps {eps}");
            assert!(res.certificate >= 4);
        }
    }

    #[test]
    fn ptas_wcap_within_ratio_on_random_instances() {
        for seed in 0..8 {
            for k in [2u64, 3] {
                let inst = instances::gen_cap_instance(9, k, seed, 3, 6);
                let eps = Cost::ratio(1, 2);
                let res = ptas_wcap(&inst, &eps).unwrap();
                assert!(res.certificate > k);
                let base = inst.base_graph().as_multigraph();
                let links = links_of(&inst);
                let raw: Vec<(EdgeId, u32, u32)> = links.iter().map(|l| (l.id, l.u, l.v)).collect();
                let brute = oracle::brute_wcap(&base, &raw, &inst.costs, k, 24).unwrap();
                let opt: Cost = brute.iter().map(|i| &inst.costs[i]).sum();
                let bound = &(&Cost::one() + &eps) * &opt;
                assert!(res.cost <= bound, "seed {seed} k {k}: {} > {bound}", res.cost);
            }
        }
    }


    #[test]
    fn ptas_wcap_beaded_chain_within_ratio() {
        for seed in [1u64, 2, 3] {
            let inst = instances::gen_beaded_chain(3, 3, seed);
            let eps = Cost::ratio(1, 2);
            let res = ptas_wcap(&inst, &eps).unwrap();
            assert!(res.certificate >= 3);
            assert!(res.stats.snug_paths >= 3);
            let base = inst.base_graph().as_multigraph();
            let links = links_of(&inst);
            let raw: Vec<(EdgeId, u32, u32)> = links.iter().map(|l| (l.id, l.u, l.v)).collect();
            let brute = oracle::brute_wcap(&base, &raw, &inst.costs, 2, 24).unwrap();
            let opt: Cost = brute.iter().map(|i| &inst.costs[i]).sum();
            let bound = &(&Cost::one() + &eps) * &opt;
            assert!(res.cost <= bound, "seed {seed}: {} > {bound}", res.cost);
        }
    }

    #[test]
    fn classify_paths_three_cases_on_synthetic_cover() {
        use crate::snug::{contract_snug_paths, find_snug_structure};
        // beaded chain: one snug path per block; build a two-set cover of
        // the contracted graph overlapping at the middle block so each
        // classification case appears
        let inst = instances::gen_beaded_chain_with(3, 3, 7, false);
        let base = inst.base_graph();
        let base_mg = base.as_multigraph();
        let snug = find_snug_structure(&base_mg, inst.root, 2).unwrap();
        assert_eq!(snug.paths.len(), 3);
        let all: Vec<usize> = (0..snug.paths.len()).collect();
        let (chain_g, chain_map) = contract_snug_paths(&inst.graph, &snug, &all).unwrap();
        let tilde_edges: Vec<Edge> = inst
            .links
            .iter()
            .filter(|id| chain_g.has_edge_id(**id))
            .map(|id| *inst.graph.edge(*id))
            .collect();
        // split the contracted vertices at the middle path image
        let mid = chain_map.image_vertex(snug.paths[1].vertices[0]);
        let verts = chain_g.vertex_set();
        let (mut left, mut right) = (BTreeSet::new(), BTreeSet::new());
        let mid_x = inst.layout[&mid].0;
        for v in &verts {
            let x = inst.layout[v].0;
            if x <= mid_x {
                left.insert(*v);
            }
            if x >= mid_x {
                right.insert(*v);
            }
        }
        // overlap only at vertices of the middle column: the middle path
        // image lies in both sets
        let cover_sets = vec![left, right];
        let class = classify_paths(
            &snug,
            &chain_g,
            &chain_map,
            &cover_sets,
            &tilde_edges,
            base.edges(),
        );
        // the middle path sits in the two-set overlap: case 1
        assert!(class.q1.contains(&1), "overlap path lands in Q1: {class:?}");
        // every path is classified exactly once under the priority order
        assert_eq!(class.q1.len() + class.case2.len() + class.q3.len(), 3);
    }

    #[test]
    fn classify_paths_case3_when_boundary_links_cover_all_shores() {
        use crate::snug::{contract_snug_paths, find_snug_structure};
        // single-block chain with a long link whose endpoints are doubly
        // covered: every shore of the path is crossed by a V_U-incident
        // link, so case 3 applies once case 1 is ruled out
        let inst = instances::gen_snug_chain(6, instances::LinkPattern::Minimal);
        let base = inst.base_graph();
        let base_mg = base.as_multigraph();
        let snug = find_snug_structure(&base_mg, inst.root, 3).unwrap();
        let (chain_g, chain_map) = contract_snug_paths(&inst.graph, &snug, &[0]).unwrap();
        let tilde_edges: Vec<Edge> = inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
        // both chain endpoints doubly covered, path vertex in one set only;
        // the long link is incident to V_U and crosses every shore
        let u_p = chain_map.image_vertex(snug.paths[0].vertices[0]);
        let ends: Vec<crate::graph::VertexId> = chain_g
            .vertices()
            .iter()
            .copied()
            .filter(|v| *v != u_p)
            .collect();
        let cover_sets = vec![
            chain_g.vertex_set(),
            ends.iter().copied().collect::<BTreeSet<_>>(),
        ];
        let class = classify_paths(
            &snug,
            &chain_g,
            &chain_map,
            &cover_sets,
            &tilde_edges,
            base.edges(),
        );
        // u_P is adjacent to the doubly covered endpoints: case 1 wins; the
        // same instance with the neighborhood stripped exhibits case 3, so
        // check the underlying conditions directly
        assert_eq!(class.q1, vec![0]);
        let vu = chain_map.lift_vertices(&ends.iter().copied().collect());
        let covered_all = snug.paths[0].shores.iter().all(|s| {
            tilde_edges
                .iter()
                .filter(|l| vu.contains(&l.u) || vu.contains(&l.v))
                .any(|l| s.contains(&l.u) != s.contains(&l.v))
        });
        assert!(covered_all, "boundary links cover every shore (case 3 condition)");
    }


    #[test]
    fn ptas_wcap_multi_piece_glue_on_deep_instance() {
        // shells have no snug vertices, so this isolates the multi-piece
        // cover, piece solving, and glue of the augmentation pipeline
        let inst = instances::gen_deep_cap(96, 3);
        let res = ptas_wcap_with(&inst, &Cost::ratio(1, 2), None, Some(&Cost::ratio(9, 10))).unwrap();
        assert!(res.stats.cover_sets >= 2, "got {} sets", res.stats.cover_sets);
        assert_eq!(res.stats.snug_paths, 0);
        assert!(res.certificate >= 3);
        let total: Cost = inst.links.iter().map(|i| &inst.costs[i]).sum();
        assert!(res.cost <= total);
    }

    #[test]
    fn ptas_wcap_deep_within_ratio_at_oracle_scale() {
        let inst = instances::gen_deep_cap(18, 5);
        let eps = Cost::ratio(1, 2);
        let res = ptas_wcap(&inst, &eps).unwrap();
        assert!(res.certificate >= 3);
        let base = inst.base_graph().as_multigraph();
        let links = links_of(&inst);
        let raw: Vec<(EdgeId, u32, u32)> = links.iter().map(|l| (l.id, l.u, l.v)).collect();
        let brute = oracle::brute_wcap(&base, &raw, &inst.costs, 2, 24).unwrap();
        let opt: Cost = brute.iter().map(|i| &inst.costs[i]).sum();
        let bound = &(&Cost::one() + &eps) * &opt;
        assert!(res.cost <= bound, "{} > {bound}", res.cost);
    }


    #[test]
    fn already_augmented_base_needs_nothing() {
        // doubled cycle: min cut 4 exceeds k+1 = 4 for k = 3
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
        drawn.push(instances::DrawnEdge::new(id, 0, 2, 40.0));
        let graph = instances::build_from_layout(&layout, &drawn).unwrap();
        let costs = graph.edges().iter().map(|e| (e.id, Cost::one())).collect();
        let inst = CapInstance {
            graph,
            links: BTreeSet::from([id]),
            costs,
            k: 3,
            root: 0,
            layout,
        };
        let res = ptas_wcap(&inst, &Cost::ratio(1, 2)).unwrap();
        assert!(res.links.is_empty());
        assert!(res.cost.is_zero());
    }

    #[test]
    fn ptas_wcap_rich_chain_stays_cheap() {
        let inst = instances::gen_snug_chain(12, LinkPattern::Rich);
        let res = ptas_wcap(&inst, &Cost::ratio(1, 2)).unwrap();
        assert!(res.certificate >= 4);
        // one link suffices; the PTAS must stay within (1+eps)
        assert!(res.cost <= Cost::ratio(3, 2), "{}", res.cost);
    }
}
