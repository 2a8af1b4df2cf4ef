//! Instance model, file format, and generators.
//!
//! Generators construct embeddings from explicit coordinates: each edge has
//! a bend hint (degrees of departure offset at its tail, mirrored at the
//! head) and rotations are the sorted departure angles. The Euler check in
//! the graph constructor then certifies the rotation system.

use crate::cost::Cost;
use crate::graph::{Edge, EdgeId, GraphError, PlanarMultigraph, VertexId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum InstanceError {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("SAT_MALFORMED: {0}")]
    SatMalformed(String),
}

pub type Layout = BTreeMap<VertexId, (f64, f64)>;

/// Weighted spanning-subgraph instance: embedded multigraph plus edge costs.
#[derive(Clone, Debug)]
pub struct WecssInstance {
    pub graph: PlanarMultigraph,
    pub costs: BTreeMap<EdgeId, Cost>,
    pub k: u64,
    pub layout: Layout,
}

impl WecssInstance {
    pub fn delta(&self) -> Cost {
        cost_ratio(self.graph.edges().iter().map(|e| &self.costs[&e.id]))
    }
}

/// Augmentation instance: G + L embedded together; `links` marks link ids.
#[derive(Clone, Debug)]
pub struct CapInstance {
    pub graph: PlanarMultigraph,
    pub links: BTreeSet<EdgeId>,
    pub costs: BTreeMap<EdgeId, Cost>,
    pub k: u64,
    pub root: VertexId,
    pub layout: Layout,
}

impl CapInstance {
    /// The base graph G without candidate links.
    pub fn base_graph(&self) -> PlanarMultigraph {
        self.graph.delete_edges(&self.links)
    }

    pub fn link_cost(&self, id: EdgeId) -> Cost {
        self.costs.get(&id).cloned().unwrap_or_else(Cost::one)
    }

    pub fn delta(&self) -> Cost {
        cost_ratio(self.links.iter().map(|id| &self.costs[id]))
    }
}

pub fn cost_ratio<'a, I: Iterator<Item = &'a Cost>>(costs: I) -> Cost {
    let mut min: Option<Cost> = None;
    let mut max: Option<Cost> = None;
    for c in costs {
        min = Some(match min {
            None => c.clone(),
            Some(m) => m.min(c.clone()),
        });
        max = Some(match max {
            None => c.clone(),
            Some(m) => m.max(c.clone()),
        });
    }
    match (min, max) {
        (Some(min), Some(max)) if min.is_positive() => &max / &min,
        _ => Cost::one(),
    }
}

// ---------------------------------------------------------------------------
// layout-driven embedding construction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DrawnEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    /// departure offset at u in degrees; mirrored at v
    pub bend: f64,
    /// absolute departure angles overriding the straight-line geometry
    pub angle_u: Option<f64>,
    pub angle_v: Option<f64>,
}

impl DrawnEdge {
    pub fn new(id: EdgeId, u: VertexId, v: VertexId, bend: f64) -> Self {
        DrawnEdge { id, u, v, bend, angle_u: None, angle_v: None }
    }

    pub fn angled(id: EdgeId, u: VertexId, v: VertexId, at_u: f64, at_v: f64) -> Self {
        DrawnEdge {
            id,
            u,
            v,
            bend: 0.0,
            angle_u: Some(at_u),
            angle_v: Some(at_v),
        }
    }
}

pub fn rotations_from_layout(layout: &Layout, edges: &[DrawnEdge]) -> BTreeMap<VertexId, Vec<EdgeId>> {
    let mut at: BTreeMap<VertexId, Vec<(f64, EdgeId)>> = BTreeMap::new();
    for v in layout.keys() {
        at.insert(*v, Vec::new());
    }
    for e in edges {
        let (ux, uy) = layout[&e.u];
        let (vx, vy) = layout[&e.v];
        let fwd = e
            .angle_u
            .unwrap_or_else(|| (vy - uy).atan2(vx - ux).to_degrees() + e.bend);
        at.get_mut(&e.u).unwrap().push((normalize_deg(fwd), e.id));
        let back = e
            .angle_v
            .unwrap_or_else(|| (uy - vy).atan2(ux - vx).to_degrees() - e.bend);
        at.get_mut(&e.v).unwrap().push((normalize_deg(back), e.id));
    }
    at.into_iter()
        .map(|(v, mut list)| {
            list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            (v, list.into_iter().map(|(_, e)| e).collect())
        })
        .collect()
}

fn normalize_deg(a: f64) -> f64 {
    let mut x = a % 360.0;
    if x < 0.0 {
        x += 360.0;
    }
    x
}

pub fn build_from_layout(layout: &Layout, drawn: &[DrawnEdge]) -> Result<PlanarMultigraph, GraphError> {
    let vertices: Vec<VertexId> = layout.keys().copied().collect();
    let edges: Vec<Edge> = drawn.iter().map(|d| Edge { id: d.id, u: d.u, v: d.v }).collect();
    let rotation = rotations_from_layout(layout, drawn);
    PlanarMultigraph::build(vertices, edges, rotation)
}

// ---------------------------------------------------------------------------
// deterministic structured generators
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GenGraph {
    pub graph: PlanarMultigraph,
    pub layout: Layout,
}

pub fn gen_cycle(n: u32) -> GenGraph {
    assert!(n >= 3);
    let layout: Layout = (0..n)
        .map(|i| {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            (i, (a.cos(), a.sin()))
        })
        .collect();
    let drawn: Vec<DrawnEdge> = (0..n)
        .map(|i| DrawnEdge::new(i, i, (i + 1) % n, 0.0))
        .collect();
    GenGraph {
        graph: build_from_layout(&layout, &drawn).expect("cycle embeds"),
        layout,
    }
}

pub fn gen_grid(rows: u32, cols: u32) -> GenGraph {
    assert!(rows >= 1 && cols >= 1 && rows * cols >= 2);
    let vid = |r: u32, c: u32| r * cols + c;
    let layout: Layout = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (vid(r, c), (c as f64, -(r as f64)))))
        .collect();
    let mut drawn = Vec::new();
    let mut id = 0;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                drawn.push(DrawnEdge::new(id, vid(r, c), vid(r, c + 1), 0.0));
                id += 1;
            }
            if r + 1 < rows {
                drawn.push(DrawnEdge::new(id, vid(r, c), vid(r + 1, c), 0.0));
                id += 1;
            }
        }
    }
    GenGraph {
        graph: build_from_layout(&layout, &drawn).expect("grid embeds"),
        layout,
    }
}

/// 2 x len grid strip; 2-edge-connected with long vertex-face diameter.
pub fn gen_ladder(len: u32, rows: u32) -> GenGraph {
    gen_grid(rows.max(2), len.max(2))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinkPattern {
    /// one long unit link spanning the chain
    Minimal,
    /// long link plus one short link per arc lens
    Rich,
}

/// The ladder-like minimally 3-edge-connected chain with its candidate
/// links: spine 0..n-1, doubled end edges, arcs (i, i+2) alternating above
/// (even i) and below (odd i). Every gap between consecutive spine vertices
/// is a 3-cut.
pub fn gen_snug_chain(n: u32, pattern: LinkPattern) -> CapInstance {
    assert!(n >= 4);
    let layout: Layout = (0..n).map(|i| (i, (i as f64, 0.0))).collect();
    let mut drawn: Vec<DrawnEdge> = Vec::new();
    let mut id = 0;
    let mut push = |drawn: &mut Vec<DrawnEdge>, u: u32, v: u32, bend: f64| -> EdgeId {
        let e = id;
        drawn.push(DrawnEdge::new(e, u, v, bend));
        id += 1;
        e
    };
    for i in 0..n - 1 {
        push(&mut drawn, i, i + 1, 0.0);
    }
    // doubled end edges; the right one mirrors onto the side of its arc
    push(&mut drawn, 0, 1, 45.0);
    let right_arc_up = (n - 3).is_multiple_of(2);
    push(&mut drawn, n - 2, n - 1, if right_arc_up { 45.0 } else { -45.0 });
    for i in 0..=n - 3 {
        let bend = if i % 2 == 0 { 50.0 } else { -50.0 };
        push(&mut drawn, i, i + 2, bend);
    }
    let mut links = BTreeSet::new();
    let mut link =
        |drawn: &mut Vec<DrawnEdge>, links: &mut BTreeSet<EdgeId>, u: u32, v: u32, bend: f64| {
            let e = push(drawn, u, v, bend);
            links.insert(e);
        };
    link(&mut drawn, &mut links, 0, n - 1, -80.0);
    if pattern == LinkPattern::Rich {
        for i in 0..=n - 3 {
            let up = i % 2 == 0;
            let inner_end = i == 0 || i + 2 == n - 1;
            let mag = if inner_end { 47.0 } else { 30.0 };
            link(&mut drawn, &mut links, i, i + 2, if up { mag } else { -mag });
        }
    }
    let graph = build_from_layout(&layout, &drawn).expect("snug chain embeds");
    let costs = graph.edges().iter().map(|e| (e.id, Cost::one())).collect();
    CapInstance {
        graph,
        links,
        costs,
        k: 3,
        root: 0,
        layout,
    }
}

/// Beaded chain for k=2: blocks of doubled-path segments separated by
/// degree-2 "diamond" pairs. Each block is one snug path (the diamond
/// vertices have degree 2, so the chain graph breaks there), giving an
/// instance with many snug paths and a long contracted graph. Links: one
/// spanning link, one link across each diamond, and cross-block links
/// joining consecutive block ends (snug-snug, distinct paths).
pub fn gen_beaded_chain(blocks: u32, block_len: u32, seed: u64) -> CapInstance {
    gen_beaded_chain_with(blocks, block_len, seed, true)
}

/// Beaded chain variant: without the spanning link, feasibility comes from
/// block-to-block links (head_b, tail_{b+1}), so faces stay small and the
/// contracted graph keeps a long vertex-face diameter.
pub fn gen_beaded_chain_with(blocks: u32, block_len: u32, seed: u64, long_link: bool) -> CapInstance {
    use rand::SeedableRng;
    assert!(blocks >= 1 && block_len >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x51ed));
    let mut layout: Layout = BTreeMap::new();
    let mut drawn: Vec<DrawnEdge> = Vec::new();
    let mut id: EdgeId = 0;
    let mut next_v: VertexId = 0;
    let mut x = 0.0f64;
    let mut block_ends: Vec<(VertexId, VertexId)> = Vec::new();
    let mut diamonds: Vec<(VertexId, VertexId)> = Vec::new();
    let mut prev_tail: Option<VertexId> = None;
    for _ in 0..blocks {
        let head = next_v;
        for i in 0..block_len {
            layout.insert(next_v + i, (x + i as f64, 0.0));
        }
        next_v += block_len;
        x += block_len as f64;
        for i in 0..block_len - 1 {
            drawn.push(DrawnEdge::new(id, head + i, head + i + 1, 20.0));
            id += 1;
            drawn.push(DrawnEdge::new(id, head + i, head + i + 1, -20.0));
            id += 1;
        }
        let tail = head + block_len - 1;
        if let Some(t) = prev_tail {
            // diamond between the previous tail and this head
            let up = next_v;
            let dn = next_v + 1;
            next_v += 2;
            layout.insert(up, (x - block_len as f64 - 0.5, 0.8));
            layout.insert(dn, (x - block_len as f64 - 0.5, -0.8));
            drawn.push(DrawnEdge::new(id, t, up, 0.0));
            id += 1;
            drawn.push(DrawnEdge::new(id, up, head, 0.0));
            id += 1;
            drawn.push(DrawnEdge::new(id, t, dn, 0.0));
            id += 1;
            drawn.push(DrawnEdge::new(id, dn, head, 0.0));
            id += 1;
            diamonds.push((up, dn));
        }
        block_ends.push((head, tail));
        prev_tail = Some(tail);
        x += 1.0;
    }
    let mut links = BTreeSet::new();
    let first = block_ends[0].0;
    let last = block_ends.last().unwrap().1;
    if long_link {
        drawn.push(DrawnEdge::new(id, first, last, -70.0));
        links.insert(id);
        id += 1;
    }
    for (up, dn) in &diamonds {
        // inside the diamond face
        drawn.push(DrawnEdge::new(id, *up, *dn, 0.0));
        links.insert(id);
        id += 1;
    }
    // block-to-block links: (head_b, tail_{b+1}) spans every gap of the
    // two blocks and the diamond between them; consecutive spans overlap,
    // so they alternate between the lower and upper side
    let mut depth = 30.0;
    for (i, w) in block_ends.windows(2).enumerate() {
        let (h1, t1) = w[0];
        let (h2, t2) = w[1];
        let (src, dst) = if long_link {
            (t1.saturating_sub(1).max(h1), (h2 + 1).min(t2))
        } else {
            (h1, t2)
        };
        let side = if i % 2 == 0 { -1.0 } else { 1.0 };
        let mut attempt = drawn.clone();
        attempt.push(DrawnEdge::new(id, src, dst, side * depth));
        if build_from_layout(&layout, &attempt).is_ok() {
            drawn = attempt;
            links.insert(id);
            id += 1;
            depth += 1.5;
        }
    }
    let graph = build_from_layout(&layout, &drawn).expect("beaded chain embeds");
    let costs = graph
        .edges()
        .iter()
        .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=3))))
        .collect();
    CapInstance {
        graph,
        links,
        costs,
        k: 2,
        root: first,
        layout,
    }
}

// ---------------------------------------------------------------------------
// random planar generators
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KecShape {
    /// stacked triangulation (k=3) or triangulated polygon (k=2)
    Compact,
    /// long thin strip
    Strip,
    /// concentric shells with spokes: vertex-face depth grows with n
    Deep,
}

/// Random planar k-edge-connected instance with rotation system, integer
/// costs in 1..=delta_target. Deterministic under (n, k, seed).
pub fn gen_planar_kec(n: u32, k: u64, seed: u64, delta_target: i64, shape: KecShape) -> WecssInstance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 20 ^ k << 50);
    let gen = match (k, shape) {
        (2, KecShape::Compact) => gen_outerplanar(n.max(4), &mut rng),
        (2, KecShape::Strip) => gen_ladder(n.max(4) / 2, 2),
        (2, KecShape::Deep) => gen_deep_shells(n.max(12), 2),
        (3, KecShape::Deep) => gen_deep_shells(n.max(12), 3),
        (3, KecShape::Compact) => gen_stacked_triangulation(n.max(4), &mut rng),
        (3, KecShape::Strip) => {
            let chain = gen_snug_chain(n.max(4), LinkPattern::Minimal);
            GenGraph {
                graph: chain.base_graph(),
                layout: chain.layout,
            }
        }
        _ => panic!("base construction supports k in {{2,3}}"),
    };
    let costs = gen
        .graph
        .edges()
        .iter()
        .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=delta_target.max(1)))))
        .collect();
    WecssInstance {
        graph: gen.graph,
        costs,
        k,
        layout: gen.layout,
    }
}


/// Concentric shells joined by k spokes each: minimally k-edge-connected
/// (shell arcs lie in arc cuts, spoke bundles are the shell-separating
/// cuts) with vertex-face depth proportional to the number of shells.
/// k=2 uses simple shell cycles; k=3 doubles the shell edges.
pub fn gen_deep_shells(n: u32, k: u64) -> GenGraph {
    assert!(k == 2 || k == 3);
    let per_shell = 6u32;
    let shells = (n / per_shell).max(2);
    let mut layout: Layout = BTreeMap::new();
    let mut drawn: Vec<DrawnEdge> = Vec::new();
    let mut id: EdgeId = 0;
    let vid = |s: u32, i: u32| s * per_shell + i;
    for s in 0..shells {
        let r = 1.0 + s as f64;
        for i in 0..per_shell {
            let a = i as f64 / per_shell as f64 * std::f64::consts::TAU;
            layout.insert(vid(s, i), (r * a.cos(), r * a.sin()));
        }
        for i in 0..per_shell {
            let j = (i + 1) % per_shell;
            drawn.push(DrawnEdge::new(id, vid(s, i), vid(s, j), 0.0));
            id += 1;
            if k == 3 {
                drawn.push(DrawnEdge::new(id, vid(s, i), vid(s, j), 12.0));
                id += 1;
            }
        }
    }
    // k spokes between consecutive shells at spread-out positions
    let spoke_slots: &[u32] = if k == 2 { &[0, 3] } else { &[0, 2, 4] };
    for s in 0..shells - 1 {
        for &i in spoke_slots {
            drawn.push(DrawnEdge::new(id, vid(s, i), vid(s + 1, i), 0.0));
            id += 1;
        }
    }
    GenGraph {
        graph: build_from_layout(&layout, &drawn).expect("shells embed"),
        layout,
    }
}


/// Deep augmentation instance: concentric-shell base (k=2) with radial
/// links at the non-spoke slots. Every degree-2 shell vertex gets an
/// incident link, so the instance is feasible; the contracted graph keeps
/// the shells' vertex-face depth.
pub fn gen_deep_cap(n: u32, seed: u64) -> CapInstance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xdeec).wrapping_add(9));
    let gen = gen_deep_shells(n.max(12), 2);
    let per_shell = 6u32;
    let shells = (n.max(12) / per_shell).max(2);
    let mut drawn: Vec<DrawnEdge> = gen
        .graph
        .edges()
        .iter()
        .map(|e| DrawnEdge::new(e.id, e.u, e.v, 0.0))
        .collect();
    let mut id = gen.graph.max_edge_id() + 1;
    let mut links = BTreeSet::new();
    let vid = |s: u32, i: u32| s * per_shell + i;
    for s in 0..shells - 1 {
        for i in [1u32, 2, 4, 5] {
            drawn.push(DrawnEdge::new(id, vid(s, i), vid(s + 1, i), 0.0));
            links.insert(id);
            id += 1;
        }
    }
    let graph = build_from_layout(&gen.layout, &drawn).expect("radial links embed");
    let costs = graph
        .edges()
        .iter()
        .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=3))))
        .collect();
    CapInstance {
        graph,
        links,
        costs,
        k: 2,
        root: 0,
        layout: gen.layout,
    }
}

/// Maximal outerplanar graph: polygon plus a random full triangulation.
/// 2-edge-connected, min cut exactly 2.
pub fn gen_outerplanar(n: u32, rng: &mut ChaCha8Rng) -> GenGraph {
    assert!(n >= 4);
    let layout: Layout = (0..n)
        .map(|i| {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            (i, (a.cos(), a.sin()))
        })
        .collect();
    let mut drawn: Vec<DrawnEdge> = (0..n)
        .map(|i| DrawnEdge::new(i, i, (i + 1) % n, 0.0))
        .collect();
    let mut id = n;
    // random fan triangulation of the polygon [lo..hi]
    let mut stack = vec![(0u32, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let mid = rng.gen_range(lo + 1..hi);
        if mid - lo >= 2 {
            drawn.push(DrawnEdge::new(id, lo, mid, 0.0));
            id += 1;
        }
        if hi - mid >= 2 {
            drawn.push(DrawnEdge::new(id, mid, hi, 0.0));
            id += 1;
        }
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    GenGraph {
        graph: build_from_layout(&layout, &drawn).expect("outerplanar embeds"),
        layout,
    }
}

/// Apollonian-style stacked triangulation: 3-connected, min cut exactly 3.
pub fn gen_stacked_triangulation(n: u32, rng: &mut ChaCha8Rng) -> GenGraph {
    assert!(n >= 4);
    let mut layout: Layout = BTreeMap::from([
        (0, (0.0, 0.0)),
        (1, (100.0, 0.0)),
        (2, (50.0, 90.0)),
    ]);
    let mut drawn = vec![
        DrawnEdge::new(0, 0, 1, 0.0),
        DrawnEdge::new(1, 1, 2, 0.0),
        DrawnEdge::new(2, 2, 0, 0.0),
    ];
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2]];
    let mut id = 3;
    for v in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        let (ax, ay) = layout[&a];
        let (bx, by) = layout[&b];
        let (cx, cy) = layout[&c];
        layout.insert(v, ((ax + bx + cx) / 3.0, (ay + by + cy) / 3.0));
        for w in [a, b, c] {
            drawn.push(DrawnEdge::new(id, v, w, 0.0));
            id += 1;
        }
        faces.push([a, b, v]);
        faces.push([b, c, v]);
        faces.push([a, c, v]);
    }
    GenGraph {
        graph: build_from_layout(&layout, &drawn).expect("stacked triangulation embeds"),
        layout,
    }
}

/// Random feasible augmentation instance: a minimally-k-connected base plus
/// links that are guaranteed to reach (k+1)-edge-connectivity.
///
/// k=2 alternates between two shapes by seed parity: a doubled path whose
/// interior vertices are all snug (one long snug path), and a plain cycle
/// with a full inside fan (no snug vertices at all). k=3 uses the snug
/// chain with a spanning link and random nested links below the spine.
pub fn gen_cap_instance(n: u32, k: u64, seed: u64, delta_target: i64, extra_links: u32) -> CapInstance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37).wrapping_add(k));
    match k {
        2 if seed.is_multiple_of(2) => {
            // doubled path: cuts are exactly the prefixes, every interior
            // vertex is snug
            let n = n.max(4);
            let layout: Layout = (0..n).map(|i| (i, (i as f64, 0.0))).collect();
            let mut drawn: Vec<DrawnEdge> = Vec::new();
            let mut id = 0;
            for i in 0..n - 1 {
                drawn.push(DrawnEdge::new(id, i, i + 1, 20.0));
                id += 1;
                drawn.push(DrawnEdge::new(id, i, i + 1, -20.0));
                id += 1;
            }
            let mut links = BTreeSet::new();
            drawn.push(DrawnEdge::new(id, 0, n - 1, -75.0));
            links.insert(id);
            id += 1;
            let mut tries = 0;
            let mut depth = 30.0;
            while links.len() < (extra_links + 1) as usize && tries < 300 {
                tries += 1;
                let u = rng.gen_range(0..n - 1);
                let v = rng.gen_range(u + 1..n);
                let mut attempt = drawn.clone();
                attempt.push(DrawnEdge::new(id, u, v, -depth));
                if build_from_layout(&layout, &attempt).is_ok() {
                    drawn = attempt;
                    links.insert(id);
                    id += 1;
                    depth += 2.0;
                }
            }
            let graph = build_from_layout(&layout, &drawn).expect("doubled path embeds");
            let costs = graph
                .edges()
                .iter()
                .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=delta_target.max(1)))))
                .collect();
            CapInstance { graph, links, costs, k, root: 0, layout }
        }
        2 => {
            // cycle with a full fan of links from vertex 0: the fan covers
            // every 2-cut (each arc of the cycle has exactly one endpoint
            // of some fan link inside)
            let n = n.max(4);
            let cyc = gen_cycle(n);
            let layout = cyc.layout.clone();
            let mut drawn: Vec<DrawnEdge> = cyc
                .graph
                .edges()
                .iter()
                .map(|e| DrawnEdge::new(e.id, e.u, e.v, 0.0))
                .collect();
            let mut id = cyc.graph.max_edge_id() + 1;
            let mut links = BTreeSet::new();
            let tiny = (90.0 / n as f64).min(6.0);
            for v in 1..n {
                let bend = if v == 1 { tiny } else if v == n - 1 { -tiny } else { 0.0 };
                drawn.push(DrawnEdge::new(id, 0, v, bend));
                links.insert(id);
                id += 1;
            }
            // parallel short links inside the fan triangles
            let mut tries = 0;
            while tries < extra_links {
                tries += 1;
                let u = rng.gen_range(1..n - 1);
                let mut attempt = drawn.clone();
                attempt.push(DrawnEdge::new(id, u, u + 1, tiny));
                if build_from_layout(&layout, &attempt).is_ok() {
                    drawn = attempt;
                    links.insert(id);
                    id += 1;
                }
            }
            let graph = build_from_layout(&layout, &drawn).expect("fan embeds");
            let costs = graph
                .edges()
                .iter()
                .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=delta_target.max(1)))))
                .collect();
            CapInstance { graph, links, costs, k, root: 0, layout }
        }
        3 => {
            let n = n.max(5);
            let chain = gen_snug_chain(n, LinkPattern::Minimal);
            let layout = chain.layout.clone();
            let mut drawn: Vec<DrawnEdge> = Vec::new();
            for e in chain.graph.edges() {
                if !chain.links.contains(&e.id) {
                    // recover bend hints from the generator's conventions
                    let bend = chain_bend(n, e);
                    drawn.push(DrawnEdge::new(e.id, e.u, e.v, bend));
                }
            }
            let mut id = chain.graph.max_edge_id() + 1;
            let mut links = BTreeSet::new();
            // long feasibility link below everything
            drawn.push(DrawnEdge::new(id, 0, n - 1, -80.0));
            links.insert(id);
            id += 1;
            // random nested short links below the spine
            let mut spans: Vec<(u32, u32, f64)> = Vec::new();
            let mut tries = 0;
            while spans.len() < extra_links as usize && tries < 300 {
                tries += 1;
                let u = rng.gen_range(0..n - 1);
                let v = rng.gen_range(u + 1..n);
                let depth = -(52.0 + spans.len() as f64 * 2.0);
                let cand = (u, v, depth);
                let mut attempt = drawn.clone();
                attempt.push(DrawnEdge::new(id, u, v, depth));
                if build_from_layout(&layout, &attempt).is_ok() {
                    drawn = attempt;
                    spans.push(cand);
                    links.insert(id);
                    id += 1;
                }
            }
            let graph = build_from_layout(&layout, &drawn).expect("chain links embed");
            let costs = graph
                .edges()
                .iter()
                .map(|e| (e.id, Cost::from_int(rng.gen_range(1..=delta_target.max(1)))))
                .collect();
            CapInstance { graph, links, costs, k, root: 0, layout }
        }
        _ => panic!("cap generator supports k in {{2,3}}"),
    }
}

fn chain_bend(n: u32, e: &Edge) -> f64 {
    let span = e.u.abs_diff(e.v);
    if span == 1 {
        // spine edges sorted before the doubled copies by id
        if e.id < n - 1 {
            0.0
        } else if e.u == 0 || e.v == 0 || (n - 3).is_multiple_of(2) {
            45.0
        } else {
            -45.0
        }
    } else if e.u.min(e.v).is_multiple_of(2) {
        50.0
    } else {
        -50.0
    }
}

// ---------------------------------------------------------------------------
// instance files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    id: EdgeId,
    u: VertexId,
    v: VertexId,
    #[serde(default = "default_cost")]
    cost: Cost,
}

fn default_cost() -> Cost {
    Cost::one()
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeFile>,
    rotation: BTreeMap<String, Vec<EdgeId>>,
    #[serde(default)]
    links: Vec<EdgeFile>,
    k: u64,
    root: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<BTreeMap<String, (f64, f64)>>,
}

#[derive(Clone, Debug)]
pub enum ParsedInstance {
    Wecss(WecssInstance),
    Cap(CapInstance),
}

pub fn parse_instance_str(text: &str) -> Result<ParsedInstance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
    let mut edges = Vec::new();
    let mut costs = BTreeMap::new();
    let mut links = BTreeSet::new();
    for e in &file.edges {
        edges.push(Edge { id: e.id, u: e.u, v: e.v });
        costs.insert(e.id, e.cost.clone());
    }
    for l in &file.links {
        edges.push(Edge { id: l.id, u: l.u, v: l.v });
        costs.insert(l.id, l.cost.clone());
        if !links.insert(l.id) {
            return Err(InstanceError::Parse(format!("duplicate link id {}", l.id)));
        }
    }
    let mut rotation: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for (vs, rot) in &file.rotation {
        let v: VertexId = vs
            .parse()
            .map_err(|_| InstanceError::Parse(format!("bad rotation key {vs}")))?;
        rotation.insert(v, rot.clone());
    }
    let graph = PlanarMultigraph::build(file.vertices.clone(), edges, rotation)?;
    let layout: Layout = file
        .layout
        .unwrap_or_default()
        .into_iter()
        .filter_map(|(vs, xy)| vs.parse().ok().map(|v: VertexId| (v, xy)))
        .collect();
    if links.is_empty() {
        Ok(ParsedInstance::Wecss(WecssInstance {
            graph,
            costs,
            k: file.k,
            layout,
        }))
    } else {
        Ok(ParsedInstance::Cap(CapInstance {
            graph,
            links,
            costs,
            k: file.k,
            root: file.root,
            layout,
        }))
    }
}

pub fn parse_instance(path: &std::path::Path) -> Result<ParsedInstance, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|e| InstanceError::Parse(format!("{}: {e}", path.display())))?;
    parse_instance_str(text.as_str())
}

pub fn write_instance_value(inst: &ParsedInstance) -> serde_json::Value {
    let (graph, costs, links, k, root, layout) = match inst {
        ParsedInstance::Wecss(w) => (
            &w.graph,
            &w.costs,
            BTreeSet::new(),
            w.k,
            *w.graph.vertices().iter().min().unwrap(),
            &w.layout,
        ),
        ParsedInstance::Cap(c) => (&c.graph, &c.costs, c.links.clone(), c.k, c.root, &c.layout),
    };
    let file = InstanceFile {
        vertices: graph.vertices().to_vec(),
        edges: graph
            .edges()
            .iter()
            .filter(|e| !links.contains(&e.id))
            .map(|e| EdgeFile {
                id: e.id,
                u: e.u,
                v: e.v,
                cost: costs.get(&e.id).cloned().unwrap_or_else(Cost::one),
            })
            .collect(),
        rotation: graph
            .rotation()
            .iter()
            .map(|(v, rot)| (v.to_string(), rot.clone()))
            .collect(),
        links: graph
            .edges()
            .iter()
            .filter(|e| links.contains(&e.id))
            .map(|e| EdgeFile {
                id: e.id,
                u: e.u,
                v: e.v,
                cost: costs.get(&e.id).cloned().unwrap_or_else(Cost::one),
            })
            .collect(),
        k,
        root,
        layout: if layout.is_empty() {
            None
        } else {
            Some(layout.iter().map(|(v, xy)| (v.to_string(), *xy)).collect())
        },
    };
    serde_json::to_value(&file).expect("instance serializes")
}

pub fn write_instance(inst: &ParsedInstance, path: &std::path::Path) -> Result<(), InstanceError> {
    let value = write_instance_value(inst);
    let text = serde_json::to_string_pretty(&value).expect("serialize");
    std::fs::write(path, text).map_err(|e| InstanceError::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::{is_k_edge_connected, min_cut_value};

    #[test]
    fn grid_and_cycle_embed() {
        let g = gen_grid(3, 3);
        assert_eq!(g.graph.vertices().len(), 9);
        assert_eq!(g.graph.faces().len(), 2 + g.graph.edges().len() - 9);
        let c = gen_cycle(5);
        assert_eq!(min_cut_value(&c.graph.as_multigraph()).unwrap(), 2);
    }

    #[test]
    fn snug_chain_is_minimally_three_connected() {
        for n in [4u32, 5, 6, 9, 12] {
            let inst = gen_snug_chain(n, LinkPattern::Minimal);
            let base = inst.base_graph();
            let mg = base.as_multigraph();
            assert_eq!(min_cut_value(&mg).unwrap(), 3, "n={n}");
            // each spine gap is a 3-cut
            for j in 0..n - 1 {
                let s: BTreeSet<VertexId> = (0..=j).collect();
                let crossing = mg
                    .edges
                    .iter()
                    .filter(|e| s.contains(&e.u) != s.contains(&e.v))
                    .count();
                assert_eq!(crossing, 3, "gap {j} of n={n}");
            }
            // with the long link, G+L is 4-edge-connected
            assert!(is_k_edge_connected(&inst.graph.as_multigraph(), 4), "n={n}");
        }
    }

    #[test]
    fn rich_chain_embeds_and_grows_links() {
        let inst = gen_snug_chain(10, LinkPattern::Rich);
        assert!(inst.links.len() >= 9);
        assert!(is_k_edge_connected(&inst.graph.as_multigraph(), 4));
    }

    #[test]
    fn random_kec_instances_have_declared_min_cut() {
        use rand::SeedableRng;
        for seed in 0..5 {
            let w2 = gen_planar_kec(10, 2, seed, 3, KecShape::Compact);
            assert_eq!(min_cut_value(&w2.graph.as_multigraph()).unwrap(), 2);
            let w3 = gen_planar_kec(10, 3, seed, 3, KecShape::Compact);
            assert_eq!(min_cut_value(&w3.graph.as_multigraph()).unwrap(), 3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let op = gen_outerplanar(12, &mut rng);
        assert_eq!(min_cut_value(&op.graph.as_multigraph()).unwrap(), 2);
    }

    #[test]
    fn determinism_byte_identical() {
        let a = gen_planar_kec(9, 2, 42, 3, KecShape::Compact);
        let b = gen_planar_kec(9, 2, 42, 3, KecShape::Compact);
        let va = write_instance_value(&ParsedInstance::Wecss(a));
        let vb = write_instance_value(&ParsedInstance::Wecss(b));
        assert_eq!(va.to_string(), vb.to_string());
    }

    #[test]
    fn file_round_trip() {
        let inst = gen_snug_chain(6, LinkPattern::Minimal);
        let v = write_instance_value(&ParsedInstance::Cap(inst.clone()));
        let parsed = parse_instance_str(&v.to_string()).unwrap();
        match parsed {
            ParsedInstance::Cap(c) => {
                assert_eq!(c.links, inst.links);
                assert_eq!(c.k, 3);
                assert_eq!(c.graph.edges().len(), inst.graph.edges().len());
                assert_eq!(c.graph.rotation(), inst.graph.rotation());
            }
            _ => panic!("expected cap instance"),
        }
    }

    #[test]
    fn missing_rotation_is_rejected() {
        let text = r#"{"vertices":[0,1],"edges":[{"id":0,"u":0,"v":1}],"rotation":{"0":[0]},"k":2,"root":0}"#;
        assert!(parse_instance_str(text).is_err());
    }


    #[test]
    fn beaded_chain_structure() {
        use crate::snug::find_snug_structure;
        let inst = gen_beaded_chain(4, 3, 1);
        let base = inst.base_graph().as_multigraph();
        assert_eq!(min_cut_value(&base).unwrap(), 2);
        assert!(is_k_edge_connected(&inst.graph.as_multigraph(), 3));
        let s = find_snug_structure(&base, inst.root, 2).unwrap();
        assert_eq!(s.paths.len(), 4, "one snug path per block");
        // the root and the degree-2 final tail are not snug, so the two
        // outer blocks lose one vertex each
        let mut lens: Vec<usize> = s.paths.iter().map(|p| p.vertices.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 2, 3, 3]);
    }


    #[test]
    fn deep_shells_grow_rings_and_split_covers() {
        use crate::cover::{build_safe_cover, cover_bound_sides};
        let inst = gen_planar_kec(120, 2, 1, 1, KecShape::Deep);
        let delta = Cost::ratio(9, 10);
        let weights = BTreeMap::new();
        let (cover, pieces) =
            build_safe_cover(&inst.graph, &inst.costs, &weights, &delta, 2).unwrap();
        assert!(cover.sets.len() >= 3, "got {} sets", cover.sets.len());
        assert!(!cover.v_u.is_empty());
        let (lhs, rhs) = cover_bound_sides(&inst.graph, &cover, &inst.costs, &weights, &delta);
        assert!(lhs <= rhs);
        assert!(cover.is_well_separated(inst.graph.edges()));
        for v in inst.graph.vertices() {
            assert!((1..=2).contains(&cover.multiplicity(*v)));
        }
        // overlap rings are exactly every M-th ring from the offset
        for p in &pieces {
            assert!(p.graph.is_connected());
        }
    }

    #[test]
    fn deep_cap_instance_is_feasible() {
        let inst = gen_deep_cap(36, 2);
        assert_eq!(min_cut_value(&inst.base_graph().as_multigraph()).unwrap(), 2);
        assert!(is_k_edge_connected(&inst.graph.as_multigraph(), 3));
    }

    #[test]
    fn random_cap_instances_are_feasible() {
        for seed in 0..5 {
            for k in [2u64, 3] {
                let inst = gen_cap_instance(9, k, seed, 3, 5);
                assert_eq!(min_cut_value(&inst.base_graph().as_multigraph()).unwrap(), k);
                assert!(is_k_edge_connected(&inst.graph.as_multigraph(), k + 1));
            }
        }
    }
}
