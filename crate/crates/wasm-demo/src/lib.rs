//! Browser demo: three interactive scenes over the toolkit, returned as
//! JSON strings for the static page to draw. The scene builders are plain
//! Rust and tested on the host; the wasm-bindgen exports wrap them.

use plancon::cap;
use plancon::cost::Cost;
use plancon::cover::{build_safe_cover, ring_decomposition};
use plancon::ecss;
use plancon::graph::EdgeId;
use plancon::instances::{self, KecShape, LinkPattern};
use plancon::oracle;
use plancon::snug::find_snug_structure;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use wasm_bindgen::prelude::wasm_bindgen;

fn layout_json(layout: &instances::Layout) -> Vec<Value> {
    layout
        .iter()
        .map(|(v, (x, y))| json!({"id": v, "x": x, "y": y}))
        .collect()
}

fn edges_json(graph: &plancon::graph::PlanarMultigraph, classes: &BTreeMap<EdgeId, &str>) -> Vec<Value> {
    graph
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "u": e.u,
                "v": e.v,
                "kind": classes.get(&e.id).copied().unwrap_or("edge"),
            })
        })
        .collect()
}

/// Snug chain with its candidate links, the snug-path structure, and the
/// augmentation chosen by the PTAS next to the exact optimum.
pub fn chain_scene_value(n: u32, rich: bool, eps_str: &str) -> Result<Value, String> {
    let eps: Cost = eps_str.parse().map_err(|e| format!("bad eps: {e}"))?;
    let pattern = if rich { LinkPattern::Rich } else { LinkPattern::Minimal };
    let inst = instances::gen_snug_chain(n.clamp(4, 40), pattern);
    let res = cap::ptas_wcap(&inst, &eps).map_err(|e| e.to_string())?;
    let base = inst.base_graph();
    let snug = find_snug_structure(&base.as_multigraph(), inst.root, inst.k).map_err(|e| e.to_string())?;
    let mut classes: BTreeMap<EdgeId, &str> = BTreeMap::new();
    for id in &inst.links {
        classes.insert(*id, "link");
    }
    for id in &res.links {
        classes.insert(*id, "chosen");
    }
    let oracle_cost = if inst.links.len() <= 20 {
        let links: Vec<(EdgeId, u32, u32)> = inst
            .links
            .iter()
            .map(|id| {
                let e = inst.graph.edge(*id);
                (*id, e.u, e.v)
            })
            .collect();
        oracle::brute_wcap(&base.as_multigraph(), &links, &inst.costs, inst.k, 20)
            .ok()
            .map(|f| f.iter().map(|i| &inst.costs[i]).sum::<Cost>().to_f64())
    } else {
        None
    };
    Ok(json!({
        "vertices": layout_json(&inst.layout),
        "edges": edges_json(&inst.graph, &classes),
        "snug_paths": snug.paths.iter().map(|p| p.vertices.clone()).collect::<Vec<_>>(),
        "info": {
            "k": inst.k,
            "cost": res.cost.to_f64(),
            "certificate": res.certificate,
            "oracle_cost": oracle_cost,
            "snug_paths": snug.paths.len(),
            "links": inst.links.len(),
        },
    }))
}

/// Ring decomposition and safe cover of a random planar instance.
pub fn cover_scene_value(n: u32, k: u64, seed: u64, delta_str: &str) -> Result<Value, String> {
    let delta: Cost = delta_str.parse().map_err(|e| format!("bad delta: {e}"))?;
    let shape = if n >= 24 { KecShape::Strip } else { KecShape::Compact };
    let inst = instances::gen_planar_kec(n.clamp(4, 120), k.clamp(2, 3), seed, 3, shape);
    let root = *inst.graph.vertices().iter().min().unwrap();
    let rings = ring_decomposition(&inst.graph, root, inst.k).map_err(|e| e.to_string())?;
    let weights: BTreeMap<_, _> = BTreeMap::new();
    let (cover, pieces) =
        build_safe_cover(&inst.graph, &inst.costs, &weights, &delta, inst.k).map_err(|e| e.to_string())?;
    let mut classes: BTreeMap<EdgeId, &str> = BTreeMap::new();
    for id in &cover.e_u {
        classes.insert(*id, "bought");
    }
    Ok(json!({
        "vertices": layout_json(&inst.layout),
        "edges": edges_json(&inst.graph, &classes),
        "ring_of": rings.ring_of.iter().map(|(v, j)| json!([v, j])).collect::<Vec<_>>(),
        "cover": cover.to_json(),
        "v_u": cover.v_u.iter().copied().collect::<Vec<_>>(),
        "info": {
            "k": inst.k,
            "rings": rings.rings.len(),
            "pieces": pieces.len(),
            "m": cover.m,
            "offset": cover.offset,
        },
    }))
}

/// Spanning-subgraph PTAS on a random instance, with the exact optimum at
/// oracle scale.
pub fn ecss_scene_value(n: u32, k: u64, seed: u64, eps_str: &str) -> Result<Value, String> {
    let eps: Cost = eps_str.parse().map_err(|e| format!("bad eps: {e}"))?;
    let inst = instances::gen_planar_kec(n.clamp(4, 40), k.clamp(2, 3), seed, 3, KecShape::Compact);
    let (sol, stats) = ecss::ptas_wecss(&inst, &eps).map_err(|e| e.to_string())?;
    let dropped: BTreeSet<EdgeId> = inst
        .graph
        .edges()
        .iter()
        .map(|e| e.id)
        .filter(|id| !sol.edges.contains(id))
        .collect();
    let mut classes: BTreeMap<EdgeId, &str> = BTreeMap::new();
    for id in &dropped {
        classes.insert(*id, "dropped");
    }
    let oracle_cost = oracle::brute_wecss(&inst.graph.as_multigraph(), &inst.costs, inst.k, 24)
        .ok()
        .map(|s| s.cost.to_f64());
    Ok(json!({
        "vertices": layout_json(&inst.layout),
        "edges": edges_json(&inst.graph, &classes),
        "info": {
            "k": inst.k,
            "cost": sol.cost.to_f64(),
            "certificate": sol.certificate,
            "oracle_cost": oracle_cost,
            "pieces": stats.pieces,
            "total_cost": stats.total_cost.to_f64(),
        },
    }))
}

#[wasm_bindgen]
pub fn chain_scene(n: u32, rich: bool, eps: &str) -> String {
    wrap(chain_scene_value(n, rich, eps))
}

#[wasm_bindgen]
pub fn cover_scene(n: u32, k: u32, seed: u32, delta: &str) -> String {
    wrap(cover_scene_value(n, k as u64, seed as u64, delta))
}

#[wasm_bindgen]
pub fn ecss_scene(n: u32, k: u32, seed: u32, eps: &str) -> String {
    wrap(ecss_scene_value(n, k as u64, seed as u64, eps))
}

fn wrap(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}
