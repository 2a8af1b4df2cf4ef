//! Tree decompositions: min-fill elimination heuristic, nice-form
//! conversion, and validation. Widths from the heuristic are upper bounds;
//! the DP over the decomposition is correct for any valid width.

use crate::graph::{MultiGraph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }
}

/// Min-fill elimination ordering, ties by vertex id.
pub fn min_fill_td(g: &MultiGraph) -> TreeDecomposition {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = g
        .vertices
        .iter()
        .map(|v| (*v, g.neighbors(*v)))
        .collect();
    for (v, nb) in adj.iter_mut() {
        nb.remove(v);
    }
    let mut order: Vec<VertexId> = Vec::new();
    let mut elim_bag: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut live: BTreeSet<VertexId> = g.vertices.iter().copied().collect();
    while !live.is_empty() {
        let (&v, _) = adj
            .iter()
            .filter(|(v, _)| live.contains(v))
            .min_by_key(|(v, nb)| {
                let nbr: Vec<VertexId> = nb.iter().filter(|x| live.contains(x)).copied().collect();
                let mut fill = 0usize;
                for i in 0..nbr.len() {
                    for j in (i + 1)..nbr.len() {
                        if !adj[&nbr[i]].contains(&nbr[j]) {
                            fill += 1;
                        }
                    }
                }
                (fill, nbr.len(), **v)
            })
            .unwrap();
        let nbr: BTreeSet<VertexId> = adj[&v].iter().filter(|x| live.contains(x)).copied().collect();
        let mut bag = nbr.clone();
        bag.insert(v);
        elim_bag.insert(v, bag);
        // make the neighborhood a clique
        let nb_list: Vec<VertexId> = nbr.iter().copied().collect();
        for i in 0..nb_list.len() {
            for j in (i + 1)..nb_list.len() {
                adj.get_mut(&nb_list[i]).unwrap().insert(nb_list[j]);
                adj.get_mut(&nb_list[j]).unwrap().insert(nb_list[i]);
            }
        }
        live.remove(&v);
        order.push(v);
    }
    // bag of v connects to the bag of its first-eliminated remaining neighbor
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut bag_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in &order {
        bags.push(elim_bag[v].clone());
        bag_of.insert(*v, bags.len() - 1);
    }
    let mut edges = Vec::new();
    for v in &order {
        let later: Option<VertexId> = elim_bag[v]
            .iter()
            .filter(|x| *x != v && pos[x] > pos[v])
            .min_by_key(|x| pos[x])
            .copied();
        if let Some(w) = later {
            edges.push((bag_of[v], bag_of[&w]));
        }
    }
    // if the graph was disconnected, chain the forest components
    let mut td = TreeDecomposition { bags, edges };
    connect_forest(&mut td);
    td
}

fn connect_forest(td: &mut TreeDecomposition) {
    let n = td.bags.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (a, b) in td.edges.clone() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    for w in reps.windows(2) {
        td.edges.push((w[0], w[1]));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BagKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    pub bags: Vec<BTreeSet<VertexId>>,
    pub kind: Vec<BagKind>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }

    /// Post-order traversal indices (children before parents).
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                out.push(i);
            } else {
                stack.push((i, true));
                for &c in &self.children[i] {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Standard validity checks plus the nice-shape constraints and the
    /// root-bag condition.
    pub fn validate(&self, vertices: &BTreeSet<VertexId>, edges: &[(VertexId, VertexId)], root_vertex: VertexId) -> Result<(), String> {
        if self.bags[self.root] != BTreeSet::from([root_vertex]) {
            return Err("root bag must be exactly {r}".into());
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for b in &self.bags {
            seen.extend(b.iter().copied());
        }
        if &seen != vertices {
            return Err("node coverage violated".into());
        }
        for (u, v) in edges {
            if !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                return Err(format!("edge ({u},{v}) not covered by any bag"));
            }
        }
        // connectivity of occurrences: for each vertex the bags form a subtree
        for v in vertices {
            let holds: Vec<usize> = (0..self.bags.len()).filter(|i| self.bags[*i].contains(v)).collect();
            if holds.is_empty() {
                return Err(format!("vertex {v} in no bag"));
            }
            let hold_set: BTreeSet<usize> = holds.iter().copied().collect();
            // count bags in holds whose parent is not in holds: must be 1
            let mut roots = 0;
            for &i in &holds {
                let has_parent_in = (0..self.bags.len())
                    .any(|p| self.children[p].contains(&i) && hold_set.contains(&p));
                if !has_parent_in {
                    roots += 1;
                }
            }
            if roots != 1 {
                return Err(format!("occurrences of {v} not connected"));
            }
        }
        for i in 0..self.bags.len() {
            match &self.kind[i] {
                BagKind::Leaf => {
                    if !self.children[i].is_empty() || self.bags[i].len() != 1 {
                        return Err("bad leaf bag".into());
                    }
                }
                BagKind::Introduce(w) => {
                    let [c] = self.children[i][..] else {
                        return Err("introduce bag needs one child".into());
                    };
                    let mut want = self.bags[c].clone();
                    if !want.insert(*w) {
                        return Err("introduced node already present".into());
                    }
                    if want != self.bags[i] {
                        return Err("introduce bag shape".into());
                    }
                }
                BagKind::Forget(w) => {
                    let [c] = self.children[i][..] else {
                        return Err("forget bag needs one child".into());
                    };
                    let mut want = self.bags[c].clone();
                    if !want.remove(w) {
                        return Err("forgotten node missing".into());
                    }
                    if want != self.bags[i] {
                        return Err("forget bag shape".into());
                    }
                }
                BagKind::Join => {
                    let [a, b] = self.children[i][..] else {
                        return Err("join bag needs two children".into());
                    };
                    if self.bags[a] != self.bags[i] || self.bags[b] != self.bags[i] {
                        return Err("join bag children differ".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convert to nice form rooted so that the root bag is exactly
/// {root_vertex}, by appending a forget chain above a bag containing it.
pub fn make_nice(td: &TreeDecomposition, root_vertex: VertexId) -> NiceTreeDecomposition {
    let n = td.bags.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in &td.edges {
        adj[*a].push(*b);
        adj[*b].push(*a);
    }
    let top = (0..n)
        .find(|i| td.bags[*i].contains(&root_vertex))
        .expect("some bag contains the root vertex");
    let mut out = NiceBuilder {
        bags: Vec::new(),
        kind: Vec::new(),
        children: Vec::new(),
    };
    let built = build_nice(&mut out, td, &adj, top, usize::MAX);
    // forget everything except the root vertex
    let mut cur = built;
    let mut bag = out.bags[cur].clone();
    let drop: Vec<VertexId> = bag.iter().copied().filter(|v| *v != root_vertex).collect();
    for v in drop {
        bag.remove(&v);
        cur = out.push(bag.clone(), BagKind::Forget(v), vec![cur]);
    }
    NiceTreeDecomposition {
        root: cur,
        bags: out.bags,
        kind: out.kind,
        children: out.children,
    }
}

struct NiceBuilder {
    bags: Vec<BTreeSet<VertexId>>,
    kind: Vec<BagKind>,
    children: Vec<Vec<usize>>,
}

impl NiceBuilder {
    fn push(&mut self, bag: BTreeSet<VertexId>, kind: BagKind, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kind.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }

    /// leaf-introduce chain building up `target` from scratch
    fn chain_up(&mut self, target: &BTreeSet<VertexId>) -> usize {
        let items: Vec<VertexId> = target.iter().copied().collect();
        let mut bag = BTreeSet::from([items[0]]);
        let mut cur = self.push(bag.clone(), BagKind::Leaf, vec![]);
        for v in &items[1..] {
            bag.insert(*v);
            cur = self.push(bag.clone(), BagKind::Introduce(*v), vec![cur]);
        }
        cur
    }

    /// forget/introduce chain transforming `from` (at index cur) into `to`
    fn transition(&mut self, mut cur: usize, from: &BTreeSet<VertexId>, to: &BTreeSet<VertexId>) -> usize {
        let mut bag = from.clone();
        for v in from.difference(to) {
            bag.remove(v);
            cur = self.push(bag.clone(), BagKind::Forget(*v), vec![cur]);
        }
        for v in to.difference(from) {
            bag.insert(*v);
            cur = self.push(bag.clone(), BagKind::Introduce(*v), vec![cur]);
        }
        cur
    }
}

fn build_nice(out: &mut NiceBuilder, td: &TreeDecomposition, adj: &[Vec<usize>], at: usize, parent: usize) -> usize {
    let children: Vec<usize> = adj[at].iter().copied().filter(|c| *c != parent).collect();
    let bag = &td.bags[at];
    if children.is_empty() {
        return out.chain_up(bag);
    }
    // convert each child subtree, then transition it to this bag's contents
    let mut arms: Vec<usize> = Vec::new();
    for c in children {
        let sub = build_nice(out, td, adj, c, at);
        let arm = out.transition(sub, &td.bags[c], bag);
        arms.push(arm);
    }
    // fold arms with join bags
    let mut cur = arms[0];
    for arm in &arms[1..] {
        cur = out.push(bag.clone(), BagKind::Join, vec![cur, *arm]);
    }
    cur
}
