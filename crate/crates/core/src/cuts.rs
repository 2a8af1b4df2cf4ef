//! Cuts and flows: global min cut, max-flow, Gomory-Hu trees, enumeration of
//! all minimum cuts and of all connected cuts, and vertex connectivity.
//!
//! Cuts are canonicalized as the shore avoiding a fixed root. Parallel edges
//! count with multiplicity everywhere.

use crate::graph::{Edge, MultiGraph, VertexId};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("MIN_CUT_MISMATCH: min cut is {actual}, expected {expected}")]
    MinCutMismatch { expected: u64, actual: u64 },
    #[error("ORACLE_TOO_LARGE: {0} vertices exceeds the enumeration bound {1}")]
    OracleTooLarge(usize, usize),
    #[error("graph must have at least two vertices")]
    TooSmall,
    #[error("DISCONNECTED")]
    Disconnected,
}

/// Global minimum cut value by Stoer-Wagner, parallel edges as weights.
pub fn min_cut_value(g: &MultiGraph) -> Result<u64, CutError> {
    let n = g.vertices.len();
    if n < 2 {
        return Err(CutError::TooSmall);
    }
    if !g.is_connected() {
        return Ok(0);
    }
    let idx: HashMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut w = vec![vec![0u64; n]; n];
    for e in &g.edges {
        let (a, b) = (idx[&e.u], idx[&e.v]);
        w[a][b] += 1;
        w[b][a] += 1;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        // maximum adjacency order
        let mut order = Vec::with_capacity(active.len());
        let mut key: HashMap<usize, u64> = active.iter().map(|&v| (v, 0)).collect();
        let mut in_a: HashSet<usize> = HashSet::new();
        for _ in 0..active.len() {
            let (&u, _) = key
                .iter()
                .filter(|(v, _)| !in_a.contains(v))
                .max_by_key(|(v, k)| (**k, usize::MAX - **v))
                .unwrap();
            in_a.insert(u);
            order.push(u);
            for &v in &active {
                if !in_a.contains(&v) {
                    *key.get_mut(&v).unwrap() += w[u][v];
                }
            }
        }
        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        best = best.min(key[&t]);
        // merge t into s
        for &v in &active {
            if v != s && v != t {
                w[s][v] += w[t][v];
                w[v][s] = w[s][v];
            }
        }
        active.retain(|&v| v != t);
    }
    Ok(best)
}

pub fn is_k_edge_connected(g: &MultiGraph, k: u64) -> bool {
    if k == 0 {
        return true;
    }
    let n = g.vertices.len();
    if n < 2 {
        return n == 1;
    }
    if !g.is_connected() {
        return false;
    }
    // capped max-flows from a fixed root to every other vertex
    let net = FlowNet::new(g);
    let s = g.vertices[0];
    g.vertices[1..]
        .iter()
        .all(|t| net.clone().max_flow(s, *t, Some(k)) >= k)
}

/// Unit-capacity-per-parallel-edge max flow (Dinic), on vertex ids.
#[derive(Clone)]
pub struct FlowNet {
    idx: HashMap<VertexId, usize>,
    verts: Vec<VertexId>,
    // arcs as (to, cap); arc i's twin is i^1
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNet {
    pub fn new(g: &MultiGraph) -> Self {
        let verts = g.vertices.clone();
        let idx: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut net = FlowNet {
            idx,
            verts,
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); g.vertices.len()],
        };
        // aggregate parallel edges into one arc pair with capacity = count
        let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for e in &g.edges {
            let (a, b) = (net.idx[&e.u], net.idx[&e.v]);
            let key = if a < b { (a, b) } else { (b, a) };
            *mult.entry(key).or_insert(0) += 1;
        }
        for ((a, b), m) in mult {
            net.add_arc(a, b, m);
        }
        net
    }

    fn add_arc(&mut self, a: usize, b: usize, cap: u64) {
        self.adj[a].push(self.head.len());
        self.head.push(b);
        self.cap.push(cap);
        self.adj[b].push(self.head.len());
        self.head.push(a);
        self.cap.push(cap);
    }

    fn bfs_levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.adj.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.adj[u] {
                let v = self.head[a];
                if self.cap[a] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        if level[t] >= 0 {
            Some(level)
        } else {
            None
        }
    }

    fn dfs_push(&mut self, u: usize, t: usize, f: u64, level: &[i32], it: &mut [usize]) -> u64 {
        if u == t {
            return f;
        }
        while it[u] < self.adj[u].len() {
            let a = self.adj[u][it[u]];
            let v = self.head[a];
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let d = self.dfs_push(v, t, f.min(self.cap[a]), level, it);
                if d > 0 {
                    self.cap[a] -= d;
                    self.cap[a ^ 1] += d;
                    return d;
                }
            }
            it[u] += 1;
        }
        0
    }

    /// Max flow value, optionally stopping once `cap_limit` is reached.
    pub fn max_flow(&mut self, s: VertexId, t: VertexId, cap_limit: Option<u64>) -> u64 {
        let (s, t) = (self.idx[&s], self.idx[&t]);
        let mut flow = 0u64;
        while let Some(level) = self.bfs_levels(s, t) {
            let mut it = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs_push(s, t, u64::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
                if let Some(limit) = cap_limit {
                    if flow >= limit {
                        return flow;
                    }
                }
            }
        }
        flow
    }

    /// Vertices reachable from `s` in the residual graph (source side of
    /// the canonical minimum cut). Call after `max_flow`.
    pub fn residual_source_side(&self, s: VertexId) -> BTreeSet<VertexId> {
        let s = self.idx[&s];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.adj[u] {
                let v = self.head[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        (0..self.adj.len()).filter(|&i| seen[i]).map(|i| self.verts[i]).collect()
    }

    /// All minimum s-t cuts as source-side vertex sets, via closed sets of
    /// the residual SCC condensation. Output-polynomial branch and bound.
    pub fn all_min_cut_source_sides(&self, s: VertexId, t: VertexId) -> Vec<BTreeSet<VertexId>> {
        let (si, ti) = (self.idx[&s], self.idx[&t]);
        let n = self.adj.len();
        // residual arcs
        let mut radj = vec![Vec::new(); n];
        for u in 0..n {
            for &a in &self.adj[u] {
                if self.cap[a] > 0 {
                    radj[u].push(self.head[a]);
                }
            }
        }
        let comp = scc(&radj);
        let m = comp.iter().copied().max().unwrap_or(0) + 1;
        let mut dag_out = vec![BTreeSet::new(); m];
        let mut dag_in = vec![BTreeSet::new(); m];
        for u in 0..n {
            for &v in &radj[u] {
                if comp[u] != comp[v] {
                    dag_out[comp[u]].insert(comp[v]);
                    dag_in[comp[v]].insert(comp[u]);
                }
            }
        }
        let cs = comp[si];
        let ct = comp[ti];
        // A min cut source side = union of comps X with cs in X, ct not in X,
        // closed under out-arcs: c in X implies successors of c in X.
        let desc_closure = |seed: usize, base: &BTreeSet<usize>| -> Option<BTreeSet<usize>> {
            let mut x = base.clone();
            let mut stack = vec![seed];
            while let Some(c) = stack.pop() {
                if x.insert(c) {
                    if c == ct {
                        return None;
                    }
                    stack.extend(dag_out[c].iter().copied());
                }
            }
            Some(x)
        };
        let anc_closure = |seed: usize, base: &BTreeSet<usize>| -> Option<BTreeSet<usize>> {
            let mut y = base.clone();
            let mut stack = vec![seed];
            while let Some(c) = stack.pop() {
                if y.insert(c) {
                    if c == cs {
                        return None;
                    }
                    stack.extend(dag_in[c].iter().copied());
                }
            }
            Some(y)
        };
        let x0 = match desc_closure(cs, &BTreeSet::new()) {
            Some(x) => x,
            None => return Vec::new(), // t residual-reachable: flow not maximum
        };
        let y0 = anc_closure(ct, &BTreeSet::new()).expect("s cannot be an ancestor of t in residual");
        if x0.intersection(&y0).next().is_some() {
            return Vec::new();
        }
        let mut results = Vec::new();
        let mut stack = vec![(x0, y0)];
        while let Some((x, y)) = stack.pop() {
            let free = (0..m).find(|c| !x.contains(c) && !y.contains(c));
            match free {
                None => {
                    let verts: BTreeSet<VertexId> = (0..n)
                        .filter(|&u| x.contains(&comp[u]))
                        .map(|u| self.verts[u])
                        .collect();
                    results.push(verts);
                }
                Some(c) => {
                    if let Some(x2) = desc_closure(c, &x) {
                        if x2.intersection(&y).next().is_none() {
                            stack.push((x2, y.clone()));
                        }
                    }
                    if let Some(y2) = anc_closure(c, &y) {
                        if x.intersection(&y2).next().is_none() {
                            stack.push((x, y2));
                        }
                    }
                }
            }
        }
        results
    }
}

fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    // iterative Tarjan
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0usize;
    let mut ncomp = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pi)) = call.last_mut() {
            if *pi == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *pi < adj[v].len() {
                let w = adj[v][*pi];
                *pi += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    comp
}

#[derive(Clone, Debug)]
pub struct GomoryHuTree {
    pub edges: Vec<(VertexId, VertexId, u64)>,
}

impl GomoryHuTree {
    /// Minimum flow value on the tree path between u and v.
    pub fn min_on_path(&self, u: VertexId, v: VertexId) -> u64 {
        let mut adj: HashMap<VertexId, Vec<(VertexId, u64)>> = HashMap::new();
        for (a, b, w) in &self.edges {
            adj.entry(*a).or_default().push((*b, *w));
            adj.entry(*b).or_default().push((*a, *w));
        }
        // BFS path with parent tracking
        let mut parent: HashMap<VertexId, (VertexId, u64)> = HashMap::new();
        let mut q = VecDeque::from([u]);
        let mut seen = BTreeSet::from([u]);
        while let Some(x) = q.pop_front() {
            if x == v {
                break;
            }
            for &(y, w) in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    parent.insert(y, (x, w));
                    q.push_back(y);
                }
            }
        }
        let mut cur = v;
        let mut best = u64::MAX;
        while cur != u {
            let (p, w) = parent[&cur];
            best = best.min(w);
            cur = p;
        }
        best
    }

    /// The bipartition obtained by removing one tree edge: returns the side
    /// containing `a` for the tree edge (a, b, _) at `index`.
    pub fn split(&self, index: usize) -> BTreeSet<VertexId> {
        let (a, b, _) = self.edges[index];
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for (i, (x, y, _)) in self.edges.iter().enumerate() {
            if i == index {
                continue;
            }
            adj.entry(*x).or_default().push(*y);
            adj.entry(*y).or_default().push(*x);
        }
        let mut side = BTreeSet::from([a]);
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            for &y in adj.get(&x).into_iter().flatten() {
                if y != b && side.insert(y) {
                    q.push_back(y);
                }
            }
        }
        debug_assert!(!side.contains(&b));
        side
    }
}

/// Gomory-Hu tree by the classical supernode-splitting algorithm.
pub fn gomory_hu(g: &MultiGraph) -> Result<GomoryHuTree, CutError> {
    if g.vertices.len() < 2 {
        return Err(CutError::TooSmall);
    }
    if !g.is_connected() {
        return Err(CutError::Disconnected);
    }
    // tree over supernodes: each node is a set of vertices
    #[derive(Clone)]
    struct Node {
        verts: BTreeSet<VertexId>,
        // edges to other nodes: (node index, weight)
        nbrs: Vec<(usize, u64)>,
    }
    let mut nodes = vec![Node {
        verts: g.vertices.iter().copied().collect(),
        nbrs: Vec::new(),
    }];
    loop {
        let Some(split_idx) = nodes.iter().position(|n| n.verts.len() >= 2) else {
            break;
        };
        let mut it = nodes[split_idx].verts.iter();
        let s = *it.next().unwrap();
        let t = *it.next().unwrap();
        // contract every subtree hanging off split_idx into one vertex
        let mut side_of: HashMap<usize, usize> = HashMap::new(); // node -> neighbor slot
        let mut stacks: Vec<Vec<usize>> = Vec::new();
        for (slot, (nb, _)) in nodes[split_idx].nbrs.iter().enumerate() {
            stacks.push(vec![*nb]);
            side_of.insert(*nb, slot);
        }
        for slot in 0..stacks.len() {
            while let Some(x) = stacks[slot].pop() {
                for (y, _) in nodes[x].nbrs.clone() {
                    if y != split_idx && !side_of.contains_key(&y) {
                        side_of.insert(y, slot);
                        stacks[slot].push(y);
                    }
                }
            }
        }
        // build contracted graph: vertices of split node + one vertex per slot
        let mut cverts: Vec<VertexId> = nodes[split_idx].verts.iter().copied().collect();
        let nslots = nodes[split_idx].nbrs.len();
        let base = g.vertices.iter().copied().max().unwrap() + 1;
        let slot_vert: Vec<VertexId> = (0..nslots).map(|i| base + i as u32).collect();
        cverts.extend(slot_vert.iter().copied());
        let vert_of = |v: VertexId| -> VertexId {
            if nodes[split_idx].verts.contains(&v) {
                v
            } else {
                let node = nodes
                    .iter()
                    .position(|n| n.verts.contains(&v))
                    .expect("vertex in some supernode");
                slot_vert[side_of[&node]]
            }
        };
        let cedges: Vec<Edge> = g
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| {
                let (a, b) = (vert_of(e.u), vert_of(e.v));
                if a == b {
                    None
                } else {
                    Some(Edge { id: i as u32, u: a, v: b })
                }
            })
            .collect();
        let cgraph = MultiGraph::new(cverts, cedges);
        let mut net = FlowNet::new(&cgraph);
        let flow = net.max_flow(s, t, None);
        let s_side = net.residual_source_side(s);
        // split the node
        let s_verts: BTreeSet<VertexId> = nodes[split_idx]
            .verts
            .iter()
            .copied()
            .filter(|v| s_side.contains(v))
            .collect();
        let t_verts: BTreeSet<VertexId> = nodes[split_idx]
            .verts
            .iter()
            .copied()
            .filter(|v| !s_side.contains(v))
            .collect();
        debug_assert!(s_verts.contains(&s) && t_verts.contains(&t));
        let t_idx = nodes.len();
        let old_nbrs = nodes[split_idx].nbrs.clone();
        nodes.push(Node {
            verts: t_verts,
            nbrs: vec![(split_idx, flow)],
        });
        nodes[split_idx].verts = s_verts;
        nodes[split_idx].nbrs = vec![(t_idx, flow)];
        // reattach old neighbors by the side their contracted vertex fell on
        for (slot, (nb, w)) in old_nbrs.into_iter().enumerate() {
            let attach = if s_side.contains(&slot_vert[slot]) { split_idx } else { t_idx };
            nodes[attach].nbrs.push((nb, w));
            let back = nodes[nb].nbrs.iter_mut().find(|(x, _)| *x == split_idx).unwrap();
            back.0 = attach;
        }
    }
    let mut edges = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        let u = *n.verts.iter().next().unwrap();
        for (j, w) in &n.nbrs {
            if *j > i {
                let v = *nodes[*j].verts.iter().next().unwrap();
                edges.push((u, v, *w));
            }
        }
    }
    Ok(GomoryHuTree { edges })
}

/// All minimum cuts of a k-edge-connected graph with min cut exactly k,
/// canonicalized as the shore avoiding `root`. Every Gomory-Hu tree edge of
/// value k yields a pair whose minimum cuts are enumerated and deduplicated.
pub fn enumerate_k_cuts(g: &MultiGraph, k: u64, root: VertexId) -> Result<Vec<BTreeSet<VertexId>>, CutError> {
    let actual = min_cut_value(g)?;
    if actual != k {
        return Err(CutError::MinCutMismatch { expected: k, actual });
    }
    let tree = gomory_hu(g)?;
    let mut seen: HashSet<BTreeSet<VertexId>> = HashSet::new();
    let mut out = Vec::new();
    for (u, v, w) in &tree.edges {
        if *w != k {
            continue;
        }
        let mut net = FlowNet::new(g);
        let flow = net.max_flow(*u, *v, None);
        debug_assert_eq!(flow, k);
        for side in net.all_min_cut_source_sides(*u, *v) {
            let shore: BTreeSet<VertexId> = if side.contains(&root) {
                g.vertices.iter().copied().filter(|x| !side.contains(x)).collect()
            } else {
                side
            };
            if seen.insert(shore.clone()) {
                debug_assert_eq!(g.edges.iter().filter(|e| shore.contains(&e.u) != shore.contains(&e.v)).count() as u64, k);
                out.push(shore);
            }
        }
    }
    // minimum cuts of a k-edge-connected graph are connected shores
    debug_assert!(out.iter().all(|s| {
        let sub = g.induced(s);
        sub.is_connected()
    }));
    out.sort();
    Ok(out)
}

/// Brute-force enumeration of connected cuts, canonicalized as the side not
/// containing `root`. Oracle-scale only.
pub fn enumerate_connected_cuts(
    g: &MultiGraph,
    root: VertexId,
    bound: usize,
) -> Result<Vec<BTreeSet<VertexId>>, CutError> {
    let n = g.vertices.len();
    if n > bound {
        return Err(CutError::OracleTooLarge(n, bound));
    }
    let others: Vec<VertexId> = g.vertices.iter().copied().filter(|v| *v != root).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1 << others.len()) {
        let s: BTreeSet<VertexId> = others
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| *v)
            .collect();
        let comp: BTreeSet<VertexId> = g.vertices.iter().copied().filter(|v| !s.contains(v)).collect();
        if g.induced(&s).is_connected() && g.induced(&comp).is_connected() {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Exact vertex connectivity via vertex-split max-flow over non-adjacent
/// pairs; n-1 for complete graphs.
pub fn vertex_connectivity_flow(g: &MultiGraph) -> u64 {
    let n = g.vertices.len();
    if n <= 1 {
        return 0;
    }
    if !g.is_connected() {
        return 0;
    }
    let vs = &g.vertices;
    let adj: HashMap<VertexId, BTreeSet<VertexId>> = vs.iter().map(|v| (*v, g.neighbors(*v))).collect();
    let mut best = (n - 1) as u64;
    let mut found_pair = false;
    // fix a min-degree vertex; try it and its neighbors as sources
    let s0 = *vs.iter().min_by_key(|v| adj[v].len()).unwrap();
    let mut sources: Vec<VertexId> = vec![s0];
    sources.extend(adj[&s0].iter().copied());
    for s in sources {
        for &t in vs {
            if t == s || adj[&s].contains(&t) {
                continue;
            }
            found_pair = true;
            best = best.min(vertex_capacity_flow(g, s, t));
        }
    }
    if !found_pair {
        // complete graph (every pair adjacent)
        return (n - 1) as u64;
    }
    best
}

fn vertex_capacity_flow(g: &MultiGraph, s: VertexId, t: VertexId) -> u64 {
    // split each vertex v into v_in -> v_out with capacity 1 (infinite for s,t)
    let n = g.vertices.len();
    let idx: HashMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let big = (n * n) as u64 + 1;
    // node 2i = in, 2i+1 = out
    let mut head = Vec::new();
    let mut cap: Vec<u64> = Vec::new();
    let mut adjn = vec![Vec::new(); 2 * n];
    let add = |a: usize, b: usize, c: u64, head: &mut Vec<usize>, cap: &mut Vec<u64>, adjn: &mut Vec<Vec<usize>>| {
        adjn[a].push(head.len());
        head.push(b);
        cap.push(c);
        adjn[b].push(head.len());
        head.push(a);
        cap.push(0);
    };
    for (v, i) in &idx {
        let c = if *v == s || *v == t { big } else { 1 };
        add(2 * i, 2 * i + 1, c, &mut head, &mut cap, &mut adjn);
    }
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    for e in &g.edges {
        let (a, b) = (idx[&e.u], idx[&e.v]);
        // simple-graph semantics for vertex connectivity
        if pairs.insert((a.min(b), a.max(b))) {
            add(2 * a + 1, 2 * b, big, &mut head, &mut cap, &mut adjn);
            add(2 * b + 1, 2 * a, big, &mut head, &mut cap, &mut adjn);
        }
    }
    // Dinic on the split graph
    let (src, dst) = (2 * idx[&s] + 1, 2 * idx[&t]);
    let mut flow = 0u64;
    loop {
        let mut level = vec![-1i32; 2 * n];
        level[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &a in &adjn[u] {
                let v = head[a];
                if cap[a] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        if level[dst] < 0 {
            break;
        }
        let mut it = vec![0usize; 2 * n];
        #[allow(clippy::too_many_arguments)]
        fn dfs(
            u: usize,
            dst: usize,
            f: u64,
            head: &[usize],
            cap: &mut [u64],
            adjn: &[Vec<usize>],
            level: &[i32],
            it: &mut [usize],
        ) -> u64 {
            if u == dst {
                return f;
            }
            while it[u] < adjn[u].len() {
                let a = adjn[u][it[u]];
                let v = head[a];
                if cap[a] > 0 && level[v] == level[u] + 1 {
                    let d = dfs(v, dst, f.min(cap[a]), head, cap, adjn, level, it);
                    if d > 0 {
                        cap[a] -= d;
                        cap[a ^ 1] += d;
                        return d;
                    }
                }
                it[u] += 1;
            }
            0
        }
        loop {
            let pushed = dfs(src, dst, u64::MAX, &head, &mut cap, &adjn, &level, &mut it);
            if pushed == 0 {
                break;
            }
            flow += pushed;
        }
    }
    flow
}

pub fn is_k_vertex_connected(g: &MultiGraph, k: u64) -> bool {
    if (g.vertices.len() as u64) < k + 1 {
        return false;
    }
    vertex_connectivity_flow(g) >= k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn cycle(n: u32) -> MultiGraph {
        let edges = (0..n).map(|i| Edge { id: i, u: i, v: (i + 1) % n }).collect();
        MultiGraph::new((0..n).collect(), edges)
    }

    fn complete(n: u32) -> MultiGraph {
        let mut edges = Vec::new();
        let mut id = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push(Edge { id, u, v });
                id += 1;
            }
        }
        MultiGraph::new((0..n).collect(), edges)
    }

    #[test]
    fn min_cut_basics() {
        assert_eq!(min_cut_value(&cycle(5)).unwrap(), 2);
        assert_eq!(min_cut_value(&complete(4)).unwrap(), 3);
        let par = MultiGraph::new(
            vec![0, 1],
            vec![
                Edge { id: 0, u: 0, v: 1 },
                Edge { id: 1, u: 0, v: 1 },
                Edge { id: 2, u: 0, v: 1 },
            ],
        );
        assert_eq!(min_cut_value(&par).unwrap(), 3);
        assert!(is_k_edge_connected(&par, 3));
        assert!(!is_k_edge_connected(&par, 4));
    }

    #[test]
    fn gomory_hu_on_path() {
        let path = MultiGraph::new(vec![0, 1, 2], vec![Edge { id: 0, u: 0, v: 1 }, Edge { id: 1, u: 1, v: 2 }]);
        let t = gomory_hu(&path).unwrap();
        assert_eq!(t.edges.len(), 2);
        assert!(t.edges.iter().all(|(_, _, w)| *w == 1));
    }

    #[test]
    fn gomory_hu_matches_pairwise_flows() {
        for g in [cycle(6), complete(5)] {
            let t = gomory_hu(&g).unwrap();
            for &u in &g.vertices {
                for &v in &g.vertices {
                    if u < v {
                        let mut net = FlowNet::new(&g);
                        let f = net.max_flow(u, v, None);
                        assert_eq!(t.min_on_path(u, v), f, "pair {u},{v}");
                    }
                }
            }
            // tree edge bipartitions are genuine min cuts
            for (i, (u, v, w)) in t.edges.iter().enumerate() {
                let side = t.split(i);
                let crossing = g
                    .edges
                    .iter()
                    .filter(|e| side.contains(&e.u) != side.contains(&e.v))
                    .count() as u64;
                assert_eq!(crossing, *w, "tree edge {u},{v}");
            }
        }
    }

    #[test]
    fn enumerate_cuts_of_c4() {
        let g = cycle(4);
        let cuts = enumerate_k_cuts(&g, 2, 0).unwrap();
        // all 6 pairs of non-adjacent or adjacent arcs: the 2-cuts of C4 are
        // exactly the vertex sets inducing paths: {1},{2},{3},{1,2},{2,3},{1,2,3}
        let brute = enumerate_connected_cuts(&g, 0, 10)
            .unwrap()
            .into_iter()
            .filter(|s| g.edges.iter().filter(|e| s.contains(&e.u) != s.contains(&e.v)).count() == 2)
            .collect::<Vec<_>>();
        assert_eq!(cuts, brute);
        assert_eq!(cuts.len(), 6);
    }

    #[test]
    fn enumerate_matches_bruteforce_on_random_multigraphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(4..9u32);
            // random connected multigraph: random tree + extra edges
            let mut edges = Vec::new();
            let mut id = 0;
            for v in 1..n {
                let u = rng.gen_range(0..v);
                edges.push(Edge { id, u, v });
                id += 1;
            }
            for _ in 0..rng.gen_range(3..10) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    edges.push(Edge { id, u, v });
                    id += 1;
                }
            }
            let g = MultiGraph::new((0..n).collect(), edges);
            let k = min_cut_value(&g).unwrap();
            let cuts = enumerate_k_cuts(&g, k, 0).unwrap();
            let brute: Vec<BTreeSet<VertexId>> = {
                let others: Vec<u32> = (1..n).collect();
                let mut out = Vec::new();
                for mask in 1u64..(1 << others.len()) {
                    let s: BTreeSet<u32> = others
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, v)| *v)
                        .collect();
                    let crossing = g
                        .edges
                        .iter()
                        .filter(|e| s.contains(&e.u) != s.contains(&e.v))
                        .count() as u64;
                    if crossing == k {
                        out.push(s);
                    }
                }
                out.sort();
                out
            };
            assert_eq!(cuts, brute);
        }
    }


    #[test]
    fn k_cut_enumeration_errors() {
        let g = cycle(5);
        assert!(matches!(
            enumerate_k_cuts(&g, 3, 0),
            Err(CutError::MinCutMismatch { expected: 3, actual: 2 })
        ));
        let big = MultiGraph::new(
            (0..25).collect(),
            (0..25).map(|i| Edge { id: i, u: i, v: (i + 1) % 25 }).collect(),
        );
        assert!(matches!(
            enumerate_connected_cuts(&big, 0, 20),
            Err(CutError::OracleTooLarge(25, 20))
        ));
    }

    #[test]
    fn gomory_hu_k3_and_parallel_pair() {
        let t = gomory_hu(&complete(3)).unwrap();
        assert_eq!(t.edges.len(), 2);
        assert!(t.edges.iter().all(|(_, _, w)| *w == 2));
        let par = MultiGraph::new(
            vec![0, 1],
            (0..3).map(|i| Edge { id: i, u: 0, v: 1 }).collect(),
        );
        let t = gomory_hu(&par).unwrap();
        assert_eq!(t.edges, vec![(0, 1, 3)]);
    }

    #[test]
    fn vertex_connectivity_values() {
        assert_eq!(vertex_connectivity_flow(&complete(4)), 3);
        let path = MultiGraph::new(vec![0, 1, 2], vec![Edge { id: 0, u: 0, v: 1 }, Edge { id: 1, u: 1, v: 2 }]);
        assert_eq!(vertex_connectivity_flow(&path), 1);
        assert_eq!(vertex_connectivity_flow(&cycle(5)), 2);
    }
}
