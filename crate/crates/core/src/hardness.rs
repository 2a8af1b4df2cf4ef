//! Hardness gadget generators: Linked Planar 3-SAT to planar k-CAP.
//!
//! The k=2 reduction replaces each variable on the Hamiltonian cycle by a
//! 22-vertex gadget (18 inner, 4 outer degree-2 vertices) whose two perfect
//! matchings on the inner vertices encode the truth value; a satisfying
//! assignment corresponds exactly to an augmentation of cardinality 13m.
//! The k=3 reduction uses wheel-shaped variable gadgets and clause gadgets
//! with two candidate links at the hub, giving cardinality 15m + l. Even k
//! lifts duplicate every edge k/2 times; odd k lifts add (k-3)/2 copies of a
//! 2-edge-connected subgraph meeting every 3-cut in exactly 2 edges.
//!
//! The layout is a linear strip: clause blocks on the left, variable gadgets
//! to the right, the cycle-closing edge routed below everything. Negated
//! occurrence links leave gadget tops and run above the strip (outside the
//! cycle); positive ones leave gadget bottoms and run below (inside).

use crate::cost::Cost;
use crate::graph::{EdgeId, PlanarMultigraph, VertexId};
use crate::instances::{build_from_layout, CapInstance, DrawnEdge, InstanceError, Layout};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct LinkedPlanar3Sat {
    pub num_vars: usize,
    /// clauses in cycle order; literal = (variable index, positive?)
    pub clauses: Vec<Vec<(usize, bool)>>,
}

impl LinkedPlanar3Sat {
    pub fn validate(&self) -> Result<(), InstanceError> {
        let mut pos = vec![0usize; self.num_vars];
        let mut neg = vec![0usize; self.num_vars];
        for (ci, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > 3 {
                return Err(InstanceError::SatMalformed(format!(
                    "clause {ci} must have 1..=3 literals"
                )));
            }
            for (v, p) in clause {
                if *v >= self.num_vars {
                    return Err(InstanceError::SatMalformed(format!("unknown variable {v}")));
                }
                if *p {
                    pos[*v] += 1;
                } else {
                    neg[*v] += 1;
                }
            }
        }
        for v in 0..self.num_vars {
            if pos[v] + neg[v] > 3 {
                return Err(InstanceError::SatMalformed(format!(
                    "variable {v} occurs more than three times"
                )));
            }
            if !(1..=2).contains(&pos[v]) || !(1..=2).contains(&neg[v]) {
                return Err(InstanceError::SatMalformed(format!(
                    "variable {v}: each literal must occur once or twice"
                )));
            }
        }
        Ok(())
    }

    pub fn satisfiable(&self) -> bool {
        for mask in 0u64..(1 << self.num_vars) {
            let ok = self.clauses.iter().all(|c| {
                c.iter().any(|(v, p)| (mask >> v & 1 == 1) == *p)
            });
            if ok {
                return true;
            }
        }
        false
    }

    /// DIMACS CNF body; variable cycle order is 1..num_vars, clause order as
    /// listed (matching the sidecar convention of this crate).
    pub fn parse_dimacs(text: &str) -> Result<Self, InstanceError> {
        let mut num_vars = 0usize;
        let mut clauses = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let mut parts = rest.split_whitespace();
                num_vars = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| InstanceError::SatMalformed("bad p line".into()))?;
                continue;
            }
            let mut clause = Vec::new();
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| InstanceError::SatMalformed(format!("bad literal {tok}")))?;
                if lit == 0 {
                    break;
                }
                clause.push(((lit.unsigned_abs() as usize) - 1, lit > 0));
            }
            if !clause.is_empty() {
                clauses.push(clause);
            }
        }
        let sat = LinkedPlanar3Sat { num_vars, clauses };
        sat.validate()?;
        Ok(sat)
    }
}

#[derive(Clone, Debug)]
pub struct HardnessInstance {
    pub cap: CapInstance,
    /// edge ids of the 2-edge-connected boost subgraph (k=3 construction)
    pub g_tilde: BTreeSet<EdgeId>,
    /// consistency-cut vertex sets, per gadget
    pub consistency_cuts: Vec<BTreeSet<VertexId>>,
    /// 13m for k=2, 15m + l for k=3
    pub target_cardinality: u64,
}

struct Builder {
    layout: Layout,
    drawn: Vec<DrawnEdge>,
    links: BTreeSet<EdgeId>,
    g_tilde: BTreeSet<EdgeId>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl Builder {
    fn new() -> Self {
        Builder {
            layout: Layout::new(),
            drawn: Vec::new(),
            links: BTreeSet::new(),
            g_tilde: BTreeSet::new(),
            next_vertex: 0,
            next_edge: 0,
        }
    }

    fn vertex(&mut self, x: f64, y: f64) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.layout.insert(v, (x, y));
        v
    }

    fn edge(&mut self, u: VertexId, v: VertexId, bend: f64) -> EdgeId {
        let id = self.next_edge;
        self.next_edge += 1;
        self.drawn.push(DrawnEdge::new(id, u, v, bend));
        id
    }

    fn edge_angled(&mut self, u: VertexId, v: VertexId, at_u: f64, at_v: f64) -> EdgeId {
        let id = self.next_edge;
        self.next_edge += 1;
        self.drawn.push(DrawnEdge::angled(id, u, v, at_u, at_v));
        id
    }

    fn link(&mut self, u: VertexId, v: VertexId, bend: f64) -> EdgeId {
        let id = self.edge(u, v, bend);
        self.links.insert(id);
        id
    }

    fn link_angled(&mut self, u: VertexId, v: VertexId, at_u: f64, at_v: f64) -> EdgeId {
        let id = self.edge_angled(u, v, at_u, at_v);
        self.links.insert(id);
        id
    }

    fn finish(self, k: u64) -> Result<CapInstance, InstanceError> {
        let graph = build_from_layout(&self.layout, &self.drawn)?;
        let costs: BTreeMap<EdgeId, Cost> = graph.edges().iter().map(|e| (e.id, Cost::one())).collect();
        Ok(CapInstance {
            graph,
            links: self.links,
            costs,
            k,
            root: 0,
            layout: self.layout,
        })
    }
}

/// Literal link arriving at a clause anchor from above (negated) or below
/// (positive); ordered per anchor by arc span so that wider arcs sit outside.
struct PendingArc {
    source: VertexId,
    target: VertexId,
    above: bool,
}

fn route_arcs(b: &mut Builder, mut arcs: Vec<PendingArc>) {
    // group by (target, side); rank by span ascending
    arcs.sort_by(|p, q| {
        let sp = (b.layout[&p.source].0 - b.layout[&p.target].0).abs();
        let sq = (b.layout[&q.source].0 - b.layout[&q.target].0).abs();
        (p.target, p.above, sp).partial_cmp(&(q.target, q.above, sq)).unwrap()
    });
    let mut rank: BTreeMap<(VertexId, bool), usize> = BTreeMap::new();
    for arc in arcs {
        let r = rank.entry((arc.target, arc.above)).or_insert(0);
        let tilt = 40.0 + (*r as f64) * 14.0;
        *r += 1;
        // sources sit to the right of their targets in this layout
        if arc.above {
            b.link_angled(arc.source, arc.target, 91.0 + *r as f64, tilt);
        } else {
            b.link_angled(arc.source, arc.target, -(91.0 + *r as f64), -tilt);
        }
    }
}

/// Negated occurrences of a variable, in clause order; doubled when single.
fn slot_targets(occ: &[usize]) -> Result<(usize, usize), InstanceError> {
    match occ {
        [a] => Ok((*a, *a)),
        [a, b] => Ok((*a.min(b), *a.max(b))),
        _ => Err(InstanceError::SatMalformed(
            "literal occurrence count outside 1..=2".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// k = 2
// ---------------------------------------------------------------------------

/// Variable gadget for k=2 in local coordinates (x in [0,15], outer boundary
/// through o-vertices, inner chain through the blocks). Returns
/// (s_end, t_end, red slots [o1,o2], blue slots [o3,o4], consistency cuts).
#[allow(clippy::type_complexity)]
fn gadget_k2(
    b: &mut Builder,
    base: f64,
    s_end: VertexId,
) -> (VertexId, [VertexId; 2], [VertexId; 2], Vec<BTreeSet<VertexId>>) {
    // mirror local x so that s_i sits on the left: p(x) = base + (15 - x)
    let px = |x: f64| base + (15.0 - x);
    // s_end corresponds to local (15,0) (the figure's s_i); t at local (0,0)
    let t_end = b.vertex(px(0.0), 0.0);
    let v = [
        b.vertex(px(3.0), 1.0),
        b.vertex(px(9.0), 1.0),
        b.vertex(px(6.0), -1.0),
        b.vertex(px(12.0), -1.0),
    ];
    let mut a = [0u32; 4];
    let mut bb = [0u32; 4];
    let mut c = [0u32; 4];
    let mut d = [0u32; 4];
    let block_pos = [
        ((2.0, 2.0), (4.0, 2.0), (2.0, 0.0), (4.0, 0.0)),
        ((8.0, 2.0), (10.0, 2.0), (8.0, 0.0), (10.0, 0.0)),
        ((5.0, -2.0), (7.0, -2.0), (5.0, 0.0), (7.0, 0.0)),
        ((11.0, -2.0), (13.0, -2.0), (11.0, 0.0), (13.0, 0.0)),
    ];
    for i in 0..4 {
        let ((ax, ay), (bx, by), (cx, cy), (dx, dy)) = block_pos[i];
        a[i] = b.vertex(px(ax), ay);
        bb[i] = b.vertex(px(bx), by);
        c[i] = b.vertex(px(cx), cy);
        d[i] = b.vertex(px(dx), dy);
    }
    let s2 = b.vertex(px(1.0), 0.0);
    let t2 = b.vertex(px(14.0), 0.0);
    let o1 = b.vertex(px(3.0), 3.0);
    let o2 = b.vertex(px(9.0), 3.0);
    let o3 = b.vertex(px(6.0), -3.0);
    let o4 = b.vertex(px(12.0), -3.0);
    // outer boundary (mirror flips bend signs)
    b.edge(t_end, o1, -30.0);
    b.edge(o1, o2, 0.0);
    b.edge(o2, s_end, -25.0);
    b.edge(s_end, o4, -25.0);
    b.edge(o4, o3, 0.0);
    b.edge(o3, t_end, -25.0);
    // blocks: doubled edges to a and b, singles to c and d
    for i in 0..4 {
        b.edge(v[i], a[i], 15.0);
        b.edge(v[i], a[i], -15.0);
        b.edge(v[i], bb[i], 15.0);
        b.edge(v[i], bb[i], -15.0);
        b.edge(c[i], v[i], 0.0);
        b.edge(v[i], d[i], 0.0);
    }
    // inner chain
    b.edge(t_end, s2, 0.0);
    b.edge(s2, c[0], 0.0);
    b.edge(d[0], c[2], 0.0);
    b.edge(d[2], c[1], 0.0);
    b.edge(d[1], c[3], 0.0);
    b.edge(d[3], t2, 0.0);
    b.edge(t2, s_end, 0.0);
    // red links (false assignment): matching + two v-o links
    b.link(s2, a[0], 0.0);
    b.link(bb[0], a[1], 0.0);
    b.link(bb[1], t2, 0.0);
    b.link(c[0], d[0], 0.0);
    b.link(c[1], d[1], 0.0);
    b.link(a[2], c[2], 0.0);
    b.link(bb[2], d[2], 0.0);
    b.link(a[3], c[3], 0.0);
    b.link(bb[3], d[3], 0.0);
    b.link(v[2], o3, 0.0);
    b.link(v[3], o4, 0.0);
    // blue links (true assignment)
    b.link(s2, a[2], 0.0);
    b.link(bb[2], a[3], 0.0);
    b.link(bb[3], t2, 0.0);
    b.link(c[2], d[2], 0.0);
    b.link(c[3], d[3], 0.0);
    b.link(a[0], c[0], 0.0);
    b.link(bb[0], d[0], 0.0);
    b.link(a[1], c[1], 0.0);
    b.link(bb[1], d[1], 0.0);
    b.link(v[0], o1, 0.0);
    b.link(v[1], o2, 0.0);
    let cuts: Vec<BTreeSet<VertexId>> = (0..4)
        .map(|i| BTreeSet::from([a[i], bb[i], c[i], d[i], v[i]]))
        .collect();
    (t_end, [o1, o2], [o3, o4], cuts)
}

/// Planar 2-CAP hardness instance: solution of cardinality 13m exists iff
/// the formula is satisfiable.
pub fn gen_hardness_k2(sat: &LinkedPlanar3Sat) -> Result<HardnessInstance, InstanceError> {
    sat.validate()?;
    let m = sat.num_vars;
    let l = sat.clauses.len();
    let mut b = Builder::new();
    // clause vertices on the line
    let clause_v: Vec<VertexId> = (0..l).map(|j| b.vertex(4.0 * j as f64, 0.0)).collect();
    for w in clause_v.windows(2) {
        b.edge(w[0], w[1], 0.0);
    }
    // chain of gadgets to the right
    let strip0 = 4.0 * l as f64;
    let mut s = b.vertex(strip0, 0.0); // s_1
    b.edge(clause_v[l - 1], s, 0.0);
    let mut arcs: Vec<PendingArc> = Vec::new();
    let mut all_cuts = Vec::new();
    for i in 0..m {
        let base = strip0 + 15.0 * i as f64;
        let (t, red_slots, blue_slots, cuts) = gadget_k2(&mut b, base, s);
        all_cuts.extend(cuts);
        // negated occurrences (above), positive (below), clause order
        let neg: Vec<usize> = sat
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&(i, false)))
            .map(|(j, _)| j)
            .collect();
        let pos: Vec<usize> = sat
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&(i, true)))
            .map(|(j, _)| j)
            .collect();
        let (n_first, n_second) = slot_targets(&neg)?;
        let (p_first, p_second) = slot_targets(&pos)?;
        // the slot with larger x pairs with the earlier (leftmost) clause
        let (rs_near, rs_far) = if b.layout[&red_slots[0]].0 > b.layout[&red_slots[1]].0 {
            (red_slots[1], red_slots[0])
        } else {
            (red_slots[0], red_slots[1])
        };
        arcs.push(PendingArc { source: rs_far, target: clause_v[n_first], above: true });
        arcs.push(PendingArc { source: rs_near, target: clause_v[n_second], above: true });
        let (bs_near, bs_far) = if b.layout[&blue_slots[0]].0 > b.layout[&blue_slots[1]].0 {
            (blue_slots[1], blue_slots[0])
        } else {
            (blue_slots[0], blue_slots[1])
        };
        arcs.push(PendingArc { source: bs_far, target: clause_v[p_first], above: false });
        arcs.push(PendingArc { source: bs_near, target: clause_v[p_second], above: false });
        s = t;
    }
    // close the Hamiltonian cycle below everything: t_m -> C_1
    b.edge_angled(s, clause_v[0], -89.0, -85.0);
    route_arcs(&mut b, arcs);
    let cap = b.finish(2)?;
    Ok(HardnessInstance {
        cap,
        g_tilde: BTreeSet::new(),
        consistency_cuts: all_cuts,
        target_cardinality: 13 * m as u64,
    })
}

// ---------------------------------------------------------------------------
// k = 3
// ---------------------------------------------------------------------------

/// Variable gadget for k=3: the 22-vertex wheel. Returns
/// (t_end, red slots, blue slots, consistency cuts).
#[allow(clippy::type_complexity)]
fn gadget_k3(
    b: &mut Builder,
    center: f64,
    s_end: VertexId,
) -> (VertexId, [VertexId; 2], [VertexId; 2], Vec<BTreeSet<VertexId>>) {
    // pre-mirror local coordinates: rim position i at angle (i-1)*360/22,
    // radius 4; mirror x so s_i (= rim position 1) lands on the left.
    let pos = |i: usize, r: f64| -> (f64, f64) {
        let ang = (i as f64 - 1.0) * std::f64::consts::TAU / 22.0;
        (center - r * ang.cos(), r * ang.sin())
    };
    let mut rim = [0u32; 23]; // 1-indexed
    for (i, slot) in rim.iter_mut().enumerate().skip(1) {
        if i == 1 {
            *slot = s_end;
        } else {
            let (x, y) = pos(i, 4.0);
            *slot = b.vertex(x, y);
        }
    }
    let v0 = b.vertex(center, 0.0);
    let blocks = [3usize, 9, 14, 20];
    let mut q = BTreeMap::new();
    let mut p = BTreeMap::new();
    for &i in &blocks {
        let (qx, qy) = pos(i, 1.5);
        q.insert(i, b.vertex(qx, qy));
        let (px_, py) = pos(i, 3.0);
        p.insert(i, b.vertex(px_, py));
    }
    let (s2x, s2y) = pos(12, 3.0);
    let s2 = b.vertex(s2x, s2y);
    let (t2x, t2y) = pos(1, 3.0);
    let t2 = b.vertex(t2x, t2y);
    // o corners, pulled inward to avoid colliding with neighbor gadgets
    let o1 = b.vertex(center - 3.4, 3.5);
    let o2 = b.vertex(center + 3.4, 3.5);
    let o3 = b.vertex(center + 3.4, -3.5);
    let o4 = b.vertex(center - 3.4, -3.5);
    let t_end = rim[12];
    // rim cycle
    for i in 1..=22 {
        let j = if i == 22 { 1 } else { i + 1 };
        b.edge(rim[i], rim[j], 0.0);
    }
    // hub spine and doubled spokes
    b.edge(t2, v0, 0.0);
    b.edge(v0, s2, 0.0);
    b.edge(t2, rim[1], 10.0);
    b.edge(t2, rim[1], -10.0);
    b.edge(s2, rim[12], 10.0);
    b.edge(s2, rim[12], -10.0);
    for &i in &blocks {
        b.edge(v0, q[&i], 0.0);
        b.edge(q[&i], p[&i], 0.0);
        b.edge(p[&i], rim[i], 10.0);
        b.edge(p[&i], rim[i], -10.0);
    }
    // rim spokes
    for (rim_i, hub) in [
        (2usize, q[&3]),
        (4, q[&3]),
        (5, q[&3]),
        (6, v0),
        (7, v0),
        (8, q[&9]),
        (10, q[&9]),
        (11, q[&9]),
        (13, q[&14]),
        (15, q[&14]),
        (16, q[&14]),
        (17, v0),
        (18, v0),
        (19, q[&20]),
        (21, q[&20]),
        (22, q[&20]),
    ] {
        b.edge(rim[rim_i], hub, 0.0);
    }
    // outer square: doubled struts plus top and bottom bars
    b.edge(rim[1], o1, 5.7);
    b.edge(rim[1], o1, 7.7);
    b.edge(o2, rim[12], 6.7);
    b.edge(o2, rim[12], 8.2);
    b.edge(rim[12], o3, 6.7);
    b.edge(rim[12], o3, 8.2);
    b.edge(o4, rim[1], 6.2);
    b.edge(o4, rim[1], 7.7);
    b.edge(o1, o2, 28.0);
    b.edge(o3, o4, 28.0);
    // red links (false): rim matching plus the two o links into the bottom
    b.link(t2, rim[2], 0.0);
    b.link(p[&3], rim[4], 0.0);
    b.link(rim[5], rim[6], -15.0);
    b.link(rim[7], rim[8], -15.0);
    b.link(p[&9], rim[10], 0.0);
    b.link(rim[11], s2, 0.0);
    b.link(rim[13], p[&14], 0.0);
    b.link(rim[15], rim[16], -15.0);
    b.link(rim[17], rim[18], -15.0);
    b.link(rim[19], p[&20], 0.0);
    b.link(rim[21], rim[22], -15.0);
    b.link(o3, rim[14], 0.0);
    b.link(o4, rim[20], 0.0);
    // blue links (true)
    b.link(rim[2], p[&3], 0.0);
    b.link(rim[4], rim[5], -15.0);
    b.link(rim[6], rim[7], -15.0);
    b.link(rim[8], p[&9], 0.0);
    b.link(rim[10], rim[11], -15.0);
    b.link(s2, rim[13], 0.0);
    b.link(p[&14], rim[15], 0.0);
    b.link(rim[16], rim[17], -15.0);
    b.link(rim[18], rim[19], -15.0);
    b.link(p[&20], rim[21], 0.0);
    b.link(rim[22], t2, 0.0);
    b.link(o1, rim[3], 0.0);
    b.link(o2, rim[9], 0.0);
    // g_tilde per the boost figure: rim minus the four gap edges, single
    // copies of hub/spoke/outer structure, one rim spoke per block
    let mut g_tilde_local: BTreeSet<EdgeId> = BTreeSet::new();
    let rim_gap = |i: usize, j: usize| (i, j);
    let gaps = [rim_gap(3, 4), rim_gap(9, 10), rim_gap(14, 15), rim_gap(19, 20)];
    for e in b.drawn.clone() {
        if b.links.contains(&e.id) {
            continue;
        }
        let find_rim = |v: VertexId| rim.iter().skip(1).position(|r| *r == v).map(|x| x + 1);
        if let (Some(i), Some(j)) = (find_rim(e.u), find_rim(e.v)) {
            let key = (i.min(j), i.max(j));
            let adjacent = j == i + 1 || i == j + 1 || key == (1, 22);
            if adjacent && !gaps.contains(&key) {
                g_tilde_local.insert(e.id);
            }
        }
    }
    // explicit single-copy members
    let mut singles: Vec<(VertexId, VertexId)> = vec![
        (t2, v0),
        (v0, s2),
        (t2, rim[1]),
        (s2, rim[12]),
        (rim[1], o1),
        (o2, rim[12]),
        (rim[12], o3),
        (o4, rim[1]),
        (o1, o2),
        (o3, o4),
        (rim[4], q[&3]),
        (rim[10], q[&9]),
        (rim[15], q[&14]),
        (rim[19], q[&20]),
    ];
    for &i in &blocks {
        singles.push((v0, q[&i]));
        singles.push((q[&i], p[&i]));
        singles.push((p[&i], rim[i]));
    }
    for (u, v) in singles {
        let id = b
            .drawn
            .iter()
            .filter(|e| !b.links.contains(&e.id))
            .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .map(|e| e.id)
            .min()
            .expect("single-copy edge exists");
        g_tilde_local.insert(id);
    }
    // drop the hub-to-center spokes that are not part of g_tilde
    for (u, v) in [(rim[6], v0), (rim[7], v0), (rim[17], v0), (rim[18], v0)] {
        let id = b
            .drawn
            .iter()
            .find(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .map(|e| e.id)
            .unwrap();
        g_tilde_local.remove(&id);
    }
    for (u, v) in [(v0, q[&3]), (v0, q[&9]), (v0, q[&14]), (v0, q[&20])] {
        let id = b
            .drawn
            .iter()
            .find(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .map(|e| e.id)
            .unwrap();
        g_tilde_local.remove(&id);
    }
    b.g_tilde.extend(g_tilde_local);
    let mut cuts = Vec::new();
    let nbrs = [
        (3usize, [2usize, 4, 5]),
        (9, [8, 10, 11]),
        (14, [13, 15, 16]),
        (20, [19, 21, 22]),
    ];
    for (i, rims) in nbrs {
        cuts.push(BTreeSet::from([
            q[&i],
            p[&i],
            rim[i],
            rim[rims[0]],
            rim[rims[1]],
            rim[rims[2]],
        ]));
        cuts.push(BTreeSet::from([p[&i], rim[i]]));
    }
    (
        t_end,
        [o1, o2],
        [o3, o4],
        cuts,
    )
}

/// Clause gadget for k=3: a and b endpoints, hub c, anchors w (top) and v
/// (bottom), with the two hub links {v,c} and {c,w}.
fn clause_gadget_k3(b: &mut Builder, base: f64) -> (VertexId, VertexId, VertexId, VertexId) {
    let a = b.vertex(base, 0.0);
    let bb = b.vertex(base + 2.4, 0.0);
    let c = b.vertex(base + 1.2, 0.0);
    let w = b.vertex(base + 1.2, 1.2);
    let v = b.vertex(base + 1.2, -1.2);
    b.edge(a, v, 12.0);
    b.edge(a, v, -12.0);
    b.edge(a, c, 12.0);
    b.edge(a, c, -12.0);
    b.edge(a, w, 12.0);
    b.edge(a, w, -12.0);
    b.edge(bb, v, 0.0);
    b.edge(bb, c, 0.0);
    b.edge(bb, w, 0.0);
    b.link(v, c, 0.0);
    b.link(c, w, 0.0);
    for (u, vv) in [(a, v), (a, c), (a, w)] {
        let id = b
            .drawn
            .iter()
            .filter(|e| (e.u == u && e.v == vv) || (e.u == vv && e.v == u))
            .map(|e| e.id)
            .min()
            .unwrap();
        b.g_tilde.insert(id);
    }
    for (u, vv) in [(bb, v), (bb, c), (bb, w)] {
        let id = b
            .drawn
            .iter()
            .find(|e| (e.u == u && e.v == vv) || (e.u == vv && e.v == u))
            .map(|e| e.id)
            .unwrap();
        b.g_tilde.insert(id);
    }
    (a, bb, w, v)
}

/// Planar 3-CAP hardness instance: solution of cardinality 15m + l exists
/// iff the formula is satisfiable.
pub fn gen_hardness_k3(sat: &LinkedPlanar3Sat) -> Result<HardnessInstance, InstanceError> {
    sat.validate()?;
    let m = sat.num_vars;
    let l = sat.clauses.len();
    let mut b = Builder::new();
    let mut clause_parts = Vec::new();
    for j in 0..l {
        clause_parts.push(clause_gadget_k3(&mut b, 4.0 * j as f64));
    }
    // doubled path edges between consecutive clause gadgets
    for w in clause_parts.windows(2) {
        let (_, b_prev, _, _) = w[0];
        let (a_next, _, _, _) = w[1];
        let e1 = b.edge(b_prev, a_next, 8.0);
        b.edge(b_prev, a_next, -8.0);
        b.g_tilde.insert(e1);
    }
    let strip0 = 4.0 * l as f64 + 1.0;
    let mut s = b.vertex(strip0, 0.0); // s_1
    {
        let (_, b_last, _, _) = clause_parts[l - 1];
        let e1 = b.edge(b_last, s, 8.0);
        b.edge(b_last, s, -8.0);
        b.g_tilde.insert(e1);
    }
    let mut arcs = Vec::new();
    let mut all_cuts = Vec::new();
    for i in 0..m {
        let center = strip0 + 4.0 + 8.0 * i as f64;
        let (t, red_slots, blue_slots, cuts) = gadget_k3(&mut b, center, s);
        all_cuts.extend(cuts);
        let neg: Vec<usize> = sat
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&(i, false)))
            .map(|(j, _)| j)
            .collect();
        let pos: Vec<usize> = sat
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&(i, true)))
            .map(|(j, _)| j)
            .collect();
        let (n_first, n_second) = slot_targets(&neg)?;
        let (p_first, p_second) = slot_targets(&pos)?;
        let (rs_near, rs_far) = if b.layout[&red_slots[0]].0 > b.layout[&red_slots[1]].0 {
            (red_slots[1], red_slots[0])
        } else {
            (red_slots[0], red_slots[1])
        };
        arcs.push(PendingArc { source: rs_far, target: clause_parts[n_first].2, above: true });
        arcs.push(PendingArc { source: rs_near, target: clause_parts[n_second].2, above: true });
        let (bs_near, bs_far) = if b.layout[&blue_slots[0]].0 > b.layout[&blue_slots[1]].0 {
            (blue_slots[1], blue_slots[0])
        } else {
            (blue_slots[0], blue_slots[1])
        };
        arcs.push(PendingArc { source: bs_far, target: clause_parts[p_first].3, above: false });
        arcs.push(PendingArc { source: bs_near, target: clause_parts[p_second].3, above: false });
        s = t;
    }
    // doubled cycle-closing edges t_m -> a_1, below everything
    let (a1, _, _, _) = clause_parts[0];
    let e1 = b.edge_angled(s, a1, -60.0, -84.0);
    b.edge_angled(s, a1, -62.0, -82.0);
    b.g_tilde.insert(e1);
    route_arcs(&mut b, arcs);
    let g_tilde = b.g_tilde.clone();
    let cap = b.finish(3)?;
    Ok(HardnessInstance {
        cap,
        g_tilde,
        consistency_cuts: all_cuts,
        target_cardinality: (15 * m + l) as u64,
    })
}

/// Duplicate the given edges `copies` times, each copy adjacent to its
/// original in both rotations.
fn duplicate_edges(g: &PlanarMultigraph, ids: &BTreeSet<EdgeId>, copies: u64) -> PlanarMultigraph {
    let mut edges = g.edges().to_vec();
    let mut rotation = g.rotation().clone();
    let mut next = g.max_edge_id() + 1;
    for id in ids {
        let e = *g.edge(*id);
        for _ in 0..copies {
            let fresh = next;
            next += 1;
            edges.push(crate::graph::Edge { id: fresh, u: e.u, v: e.v });
            // after the original at one end, before it at the other, so the
            // copies nest into a lens
            let rot_u = rotation.get_mut(&e.u).unwrap();
            let pos_u = rot_u.iter().position(|x| *x == *id).unwrap();
            rot_u.insert(pos_u + 1, fresh);
            let rot_v = rotation.get_mut(&e.v).unwrap();
            let pos_v = rot_v.iter().position(|x| *x == *id).unwrap();
            rot_v.insert(pos_v, fresh);
        }
    }
    PlanarMultigraph::build(g.vertices().to_vec(), edges, rotation).expect("duplication keeps the embedding")
}

/// Lift a hardness instance to higher k: even k duplicates every base edge
/// to k/2 copies; odd k adds (k-3)/2 copies of the boost subgraph. The
/// minimum-cut family is preserved.
pub fn lift_hardness(sat: &LinkedPlanar3Sat, k: u64) -> Result<HardnessInstance, InstanceError> {
    if k < 2 {
        return Err(InstanceError::SatMalformed("k must be at least 2".into()));
    }
    if k.is_multiple_of(2) {
        let mut inst = gen_hardness_k2(sat)?;
        if k > 2 {
            let base_edges: BTreeSet<EdgeId> = inst
                .cap
                .graph
                .edges()
                .iter()
                .map(|e| e.id)
                .filter(|id| !inst.cap.links.contains(id))
                .collect();
            let graph = duplicate_edges(&inst.cap.graph, &base_edges, k / 2 - 1);
            let costs = graph.edges().iter().map(|e| (e.id, Cost::one())).collect();
            inst.cap = CapInstance {
                graph,
                links: inst.cap.links,
                costs,
                k,
                root: inst.cap.root,
                layout: inst.cap.layout,
            };
        }
        Ok(inst)
    } else {
        let mut inst = gen_hardness_k3(sat)?;
        if k > 3 {
            let graph = duplicate_edges(&inst.cap.graph, &inst.g_tilde, (k - 3) / 2);
            let costs = graph.edges().iter().map(|e| (e.id, Cost::one())).collect();
            inst.cap = CapInstance {
                graph,
                links: inst.cap.links,
                costs,
                k,
                root: inst.cap.root,
                layout: inst.cap.layout,
            };
        }
        Ok(inst)
    }
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::cap::exact_wcap;
    use crate::cuts::{enumerate_k_cuts, is_k_edge_connected, min_cut_value};
    use crate::graph::Edge;

    fn sat_x_and_not_x() -> LinkedPlanar3Sat {
        // (x) and (not x): unsatisfiable
        LinkedPlanar3Sat {
            num_vars: 1,
            clauses: vec![vec![(0, true)], vec![(0, false)]],
        }
    }

    fn sat_tautology() -> LinkedPlanar3Sat {
        // (x or not x): satisfiable
        LinkedPlanar3Sat {
            num_vars: 1,
            clauses: vec![vec![(0, true), (0, false)]],
        }
    }

    fn links_of(inst: &CapInstance) -> Vec<Edge> {
        inst.links.iter().map(|id| *inst.graph.edge(*id)).collect()
    }

    #[test]
    fn k2_gadget_counts_and_structure() {
        let h = gen_hardness_k2(&sat_tautology()).unwrap();
        let base = h.cap.base_graph();
        // 22 degree-2 vertices per gadget: 18 inner + 4 outer
        let mg = base.as_multigraph();
        let deg2 = mg.vertices.iter().filter(|v| mg.degree(**v) == 2).count();
        assert_eq!(deg2, 22 + 1); // plus the single clause vertex
        assert_eq!(min_cut_value(&mg).unwrap(), 2);
        assert!(is_k_edge_connected(&h.cap.graph.as_multigraph(), 3));
        // consistency cuts are genuine 2-cuts
        let cuts = enumerate_k_cuts(&mg, 2, h.cap.root).unwrap();
        for c in &h.consistency_cuts {
            let canonical: BTreeSet<VertexId> = if c.contains(&h.cap.root) {
                mg.vertices.iter().copied().filter(|v| !c.contains(v)).collect()
            } else {
                c.clone()
            };
            assert!(cuts.contains(&canonical), "missing consistency cut {c:?}");
        }
    }

    #[test]
    fn k2_satisfiable_formula_reaches_13m() {
        let h = gen_hardness_k2(&sat_tautology()).unwrap();
        let base = h.cap.base_graph().as_multigraph();
        let f = exact_wcap(&base, &links_of(&h.cap), &h.cap.costs, 2).unwrap();
        assert_eq!(f.len() as u64, h.target_cardinality);
    }

    #[test]
    fn k2_unsatisfiable_formula_exceeds_13m() {
        let h = gen_hardness_k2(&sat_x_and_not_x()).unwrap();
        assert!(!sat_x_and_not_x().satisfiable());
        let base = h.cap.base_graph().as_multigraph();
        let f = exact_wcap(&base, &links_of(&h.cap), &h.cap.costs, 2).unwrap();
        assert!(f.len() as u64 > h.target_cardinality, "{}", f.len());
    }

    #[test]
    fn k3_structure_and_cardinality() {
        let h = gen_hardness_k3(&sat_tautology()).unwrap();
        let base = h.cap.base_graph().as_multigraph();
        assert_eq!(min_cut_value(&base).unwrap(), 3);
        assert!(is_k_edge_connected(&h.cap.graph.as_multigraph(), 4));
        let cuts = enumerate_k_cuts(&base, 3, h.cap.root).unwrap();
        for c in &h.consistency_cuts {
            let canonical: BTreeSet<VertexId> = if c.contains(&h.cap.root) {
                base.vertices.iter().copied().filter(|v| !c.contains(v)).collect()
            } else {
                c.clone()
            };
            assert!(cuts.contains(&canonical), "missing k3 consistency cut");
        }
        let f = exact_wcap(&base, &links_of(&h.cap), &h.cap.costs, 3).unwrap();
        assert_eq!(f.len() as u64, h.target_cardinality);
    }

    #[test]
    fn lifts_preserve_cut_family() {
        let sat = sat_tautology();
        let h2 = gen_hardness_k2(&sat).unwrap();
        let h4 = lift_hardness(&sat, 4).unwrap();
        let b2 = h2.cap.base_graph().as_multigraph();
        let b4 = h4.cap.base_graph().as_multigraph();
        assert_eq!(min_cut_value(&b4).unwrap(), 4);
        let c2 = enumerate_k_cuts(&b2, 2, h2.cap.root).unwrap();
        let c4 = enumerate_k_cuts(&b4, 4, h4.cap.root).unwrap();
        assert_eq!(c2, c4);
        let h3 = gen_hardness_k3(&sat).unwrap();
        let h5 = lift_hardness(&sat, 5).unwrap();
        let b3 = h3.cap.base_graph().as_multigraph();
        let b5 = h5.cap.base_graph().as_multigraph();
        assert_eq!(min_cut_value(&b5).unwrap(), 5);
        let c3 = enumerate_k_cuts(&b3, 3, h3.cap.root).unwrap();
        let c5 = enumerate_k_cuts(&b5, 5, h5.cap.root).unwrap();
        assert_eq!(c3, c5);
    }

    #[test]
    fn dimacs_parsing() {
        let sat = LinkedPlanar3Sat::parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(sat.num_vars, 1);
        assert_eq!(sat.clauses.len(), 2);
        assert!(!sat.satisfiable());
        assert!(LinkedPlanar3Sat::parse_dimacs("p cnf 1 1\n1 0\n").is_err());
    }
}
