//! Command-line interface: generators, solvers, verifiers, benchmarks.

use crate::cap::{self, CapError};
use crate::cost::Cost;
use crate::cuts::min_cut_value;
use crate::ecss::{self, EcssError};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::hardness::{self, LinkedPlanar3Sat};
use crate::instances::{self, KecShape, LinkPattern, ParsedInstance};
use crate::oracle;
use crate::report::{InstanceStats, ResultBlock, RunReport};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "plancon", about = "planar connectivity design toolkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// PTAS for minimum-cost k-edge-connected spanning subgraphs
    SolveEcss(SolveArgs),
    /// PTAS for minimum-cost k-vertex-connected spanning subgraphs
    SolveVcss(SolveArgs),
    /// PTAS for connectivity augmentation (k to k+1)
    SolveCap(SolveCapArgs),
    /// Check a solution file against an instance
    Verify(VerifyArgs),
    /// Generate instances
    Gen(GenArgs),
    /// Sweep epsilon x seed and emit a CSV
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub k: Option<u64>,
    /// override the cover parameter (default eps/(6*Delta))
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct SolveCapArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub k: Option<u64>,
    /// override the thinning parameter (default eps/3)
    #[arg(long)]
    pub lambda: Option<String>,
    /// override the cover parameter (default eps^2/(6*345*Delta^2))
    #[arg(long)]
    pub delta: Option<String>,
    /// also solve exactly and report the ratio
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 22)]
    pub oracle_limit: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub what: GenCommand,
}

#[derive(Subcommand)]
pub enum GenCommand {
    /// ladder-like minimally 3-edge-connected chain with candidate links
    SnugChain {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rich: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// random planar k-edge-connected instance
    RandomKec {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        delta_target: i64,
        #[arg(long)]
        strip: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// random feasible augmentation instance
    RandomCap {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        delta_target: i64,
        #[arg(long, default_value_t = 6)]
        links: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// SAT-reduction hardness instance (DIMACS formula)
    Hardness {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
pub struct BenchArgs {
    /// cap or ecss
    #[arg(long, default_value = "cap")]
    pub problem: String,
    #[arg(long, default_value_t = 9)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u64,
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// comma-separated epsilon list
    #[arg(long, default_value = "1/2,1")]
    pub eps: String,
    #[arg(long, default_value_t = 22)]
    pub oracle_limit: usize,
    /// accepted for interface compatibility; runs are sequential and
    /// ordered by instance index
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            if msg.contains("INFEASIBLE") || msg.contains("NOT_K_CONNECTED") {
                2
            } else {
                1
            }
        }
    }
}

fn parse_cost(s: &str) -> Result<Cost, String> {
    s.parse().map_err(|e| format!("bad rational '{s}': {e}"))
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::SolveEcss(a) => solve_ecss(a, false),
        Command::SolveVcss(a) => solve_ecss(a, true),
        Command::SolveCap(a) => solve_cap(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
    }
}

fn load_wecss(path: &PathBuf, k: Option<u64>) -> Result<instances::WecssInstance, String> {
    match instances::parse_instance(path).map_err(|e| e.to_string())? {
        ParsedInstance::Wecss(mut w) => {
            if let Some(k) = k {
                w.k = k;
            }
            Ok(w)
        }
        ParsedInstance::Cap(_) => Err("instance has links; use solve-cap".into()),
    }
}

fn solve_ecss(a: SolveArgs, vertex: bool) -> Result<i32, String> {
    let start = Instant::now();
    let eps = parse_cost(&a.eps)?;
    let inst = load_wecss(&a.input, a.k)?;
    let delta_override = a.delta.as_deref().map(parse_cost).transpose()?;
    let run = if vertex {
        ecss::ptas_wvcss_with(&inst, &eps, delta_override.as_ref())
    } else {
        ecss::ptas_wecss_with(&inst, &eps, delta_override.as_ref())
    };
    let mut report = RunReport::new(if vertex { "solve-vcss".into() } else { "solve-ecss".into() });
    report.instance = InstanceStats {
        n: inst.graph.vertices().len(),
        m: inst.graph.edges().len(),
        links: 0,
        k: inst.k,
        delta: Some(inst.delta()),
    };
    report.parameters.insert("eps".into(), eps.to_string());
    if let Some(d) = &delta_override {
        report.parameters.insert("delta_override".into(), d.to_string());
    }
    match run {
        Ok((sol, stats)) => {
            report.stages.insert(
                "cover".into(),
                json!({
                    "pieces": stats.pieces,
                    "delta": stats.delta_cover.as_ref().map(|c| c.to_string()),
                    "e_u_cost": stats.e_u_cost.to_string(),
                    "piece_edges": stats.piece_edges,
                    "piece_millis": stats.piece_millis,
                }),
            );
            report.result = ResultBlock {
                cost: Some(sol.cost.clone()),
                edges: sol.edges.iter().copied().collect(),
                certificate: Some(sol.certificate),
                status: "ok".into(),
            };
            report.wall_clock_ms = start.elapsed().as_millis();
            emit_report(&report, a.report.as_deref())?;
            println!("cost {} certificate {}", sol.cost, sol.certificate);
            Ok(0)
        }
        Err(EcssError::Infeasible) => {
            report.result.status = "INFEASIBLE".into();
            report.wall_clock_ms = start.elapsed().as_millis();
            emit_report(&report, a.report.as_deref())?;
            eprintln!("INFEASIBLE");
            Ok(2)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn solve_cap(a: SolveCapArgs) -> Result<i32, String> {
    let start = Instant::now();
    let eps = parse_cost(&a.eps)?;
    let inst = match instances::parse_instance(&a.input).map_err(|e| e.to_string())? {
        ParsedInstance::Cap(mut c) => {
            if let Some(k) = a.k {
                c.k = k;
            }
            c
        }
        ParsedInstance::Wecss(_) => return Err("instance has no links; use solve-ecss".into()),
    };
    let lambda = a.lambda.as_deref().map(parse_cost).transpose()?;
    let delta = a.delta.as_deref().map(parse_cost).transpose()?;
    let mut report = RunReport::new("solve-cap".into());
    report.instance = InstanceStats {
        n: inst.graph.vertices().len(),
        m: inst.graph.edges().len() - inst.links.len(),
        links: inst.links.len(),
        k: inst.k,
        delta: Some(inst.delta()),
    };
    report.parameters.insert("eps".into(), eps.to_string());
    match cap::ptas_wcap_with(&inst, &eps, lambda.as_ref(), delta.as_ref()) {
        Ok(res) => {
            report.stages.insert(
                "pipeline".into(),
                json!({
                    "snug_paths": res.stats.snug_paths,
                    "thinned_links": res.stats.thinned_links,
                    "tilde_links": res.stats.tilde_links,
                    "q1": res.stats.q1,
                    "case2": res.stats.case2,
                    "q3": res.stats.q3,
                    "l_star_star_cost": res.stats.l_star_star_cost.to_string(),
                    "pieces": res.stats.pieces,
                    "piece_snug_tw": res.stats.piece_snug_tw,
                    "cover_delta": res.stats.delta_cover.to_string(),
                        "cover_sets": res.stats.cover_sets,
                }),
            );
            if a.oracle {
                if inst.links.len() > a.oracle_limit {
                    return Err(format!(
                        "ORACLE_TOO_LARGE: {} links exceeds --oracle-limit {}",
                        inst.links.len(),
                        a.oracle_limit
                    ));
                }
                let base = inst.base_graph().as_multigraph();
                let links: Vec<crate::graph::Edge> =
                    inst.links.iter().map(|id| *inst.graph.edge(*id)).collect();
                match cap::exact_wcap(&base, &links, &inst.costs, inst.k) {
                    Ok(f) => {
                        let oc: Cost = f.iter().map(|id| &inst.costs[id]).sum();
                        report
                            .stages
                            .insert("oracle".into(), json!({"cost": oc.to_string(), "links": f.len()}));
                    }
                    Err(e) => {
                        report.stages.insert("oracle".into(), json!({ "error": e.to_string() }));
                    }
                }
            }
            report.result = ResultBlock {
                cost: Some(res.cost.clone()),
                edges: res.links.iter().copied().collect(),
                certificate: Some(res.certificate),
                status: "ok".into(),
            };
            report.wall_clock_ms = start.elapsed().as_millis();
            emit_report(&report, a.report.as_deref())?;
            println!("cost {} certificate {}", res.cost, res.certificate);
            Ok(0)
        }
        Err(CapError::Infeasible) => {
            report.result.status = "INFEASIBLE".into();
            report.wall_clock_ms = start.elapsed().as_millis();
            emit_report(&report, a.report.as_deref())?;
            eprintln!("INFEASIBLE");
            Ok(2)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn emit_report(report: &RunReport, path: Option<&std::path::Path>) -> Result<(), String> {
    if let Some(p) = path {
        report.write(p).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<i32, String> {
    let inst = instances::parse_instance(&a.input).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&a.solution).map_err(|e| e.to_string())?;
    let sol: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let ids: BTreeSet<EdgeId> = sol
        .get("edges")
        .or_else(|| sol.get("links"))
        .and_then(|v| v.as_array())
        .map(|arr| arr.iter().filter_map(|x| x.as_u64().map(|y| y as u32)).collect())
        .ok_or("solution file needs an \"edges\" or \"links\" array")?;
    match inst {
        ParsedInstance::Wecss(w) => {
            let mg = w.graph.as_multigraph();
            let sub = MultiGraph {
                vertices: mg.vertices.clone(),
                edges: mg.edges.iter().copied().filter(|e| ids.contains(&e.id)).collect(),
            };
            if let Some(cut) = violating_cut(&sub, w.k) {
                eprintln!("FAIL: cut {{{}}} has fewer than {} solution edges", fmt_set(&cut), w.k);
                return Ok(2);
            }
            println!("ok: solution is {}-edge-connected", w.k);
            Ok(0)
        }
        ParsedInstance::Cap(c) => {
            let mut aug = c.base_graph().as_multigraph();
            let mut next = c.graph.max_edge_id() + 1;
            for id in &ids {
                if !c.links.contains(id) {
                    return Err(format!("solution id {id} is not a link of the instance"));
                }
                let l = c.graph.edge(*id);
                aug.edges.push(crate::graph::Edge { id: next, u: l.u, v: l.v });
                next += 1;
            }
            if let Some(cut) = violating_cut(&aug, c.k + 1) {
                eprintln!(
                    "FAIL: cut {{{}}} has fewer than {} crossing elements",
                    fmt_set(&cut),
                    c.k + 1
                );
                return Ok(2);
            }
            println!("ok: augmented graph is {}-edge-connected", c.k + 1);
            Ok(0)
        }
    }
}

fn fmt_set(s: &BTreeSet<VertexId>) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn violating_cut(g: &MultiGraph, k: u64) -> Option<BTreeSet<VertexId>> {
    if g.vertices.len() < 2 {
        return None;
    }
    let comps = g.components();
    if comps.len() > 1 {
        return comps.into_iter().next();
    }
    let value = min_cut_value(g).ok()?;
    if value >= k {
        return None;
    }
    let tree = crate::cuts::gomory_hu(g).ok()?;
    for (i, (_, _, w)) in tree.edges.iter().enumerate() {
        if *w == value {
            return Some(tree.split(i));
        }
    }
    None
}

fn gen(a: GenArgs) -> Result<i32, String> {
    match a.what {
        GenCommand::SnugChain { n, rich, out } => {
            let pattern = if rich { LinkPattern::Rich } else { LinkPattern::Minimal };
            let inst = instances::gen_snug_chain(n, pattern);
            instances::write_instance(&ParsedInstance::Cap(inst), &out).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        GenCommand::RandomKec { n, k, seed, delta_target, strip, out } => {
            let shape = if strip { KecShape::Strip } else { KecShape::Compact };
            let inst = instances::gen_planar_kec(n, k, seed, delta_target, shape);
            instances::write_instance(&ParsedInstance::Wecss(inst), &out).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        GenCommand::RandomCap { n, k, seed, delta_target, links, out } => {
            let inst = instances::gen_cap_instance(n, k, seed, delta_target, links);
            instances::write_instance(&ParsedInstance::Cap(inst), &out).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        GenCommand::Hardness { k, formula, out } => {
            let text = std::fs::read_to_string(&formula).map_err(|e| e.to_string())?;
            let sat = LinkedPlanar3Sat::parse_dimacs(&text).map_err(|e| e.to_string())?;
            let inst = hardness::lift_hardness(&sat, k).map_err(|e| e.to_string())?;
            instances::write_instance(&ParsedInstance::Cap(inst.cap), &out).map_err(|e| e.to_string())?;
            println!(
                "wrote {} (target cardinality {})",
                out.display(),
                inst.target_cardinality
            );
            Ok(0)
        }
    }
}

fn bench(a: BenchArgs) -> Result<i32, String> {
    let eps_list: Vec<Cost> = a
        .eps
        .split(',')
        .map(|s| parse_cost(s.trim()))
        .collect::<Result<_, _>>()?;
    let mut rows = vec!["instance_id,n,m,links,k,eps,ptas_cost,oracle_cost,ratio,millis".to_string()];
    let mut id = 0usize;
    for seed in 0..a.seeds {
        for eps in &eps_list {
            let started = Instant::now();
            let row = match a.problem.as_str() {
                "cap" => {
                    let inst = instances::gen_cap_instance(a.n, a.k, seed, 3, 6);
                    let res = cap::ptas_wcap(&inst, eps).map_err(|e| e.to_string())?;
                    let base = inst.base_graph().as_multigraph();
                    let raw: Vec<(EdgeId, u32, u32)> = inst
                        .links
                        .iter()
                        .map(|i| {
                            let e = inst.graph.edge(*i);
                            (*i, e.u, e.v)
                        })
                        .collect();
                    let oracle_cost = oracle::brute_wcap(&base, &raw, &inst.costs, a.k, a.oracle_limit)
                        .ok()
                        .map(|f| f.iter().map(|i| &inst.costs[i]).sum::<Cost>());
                    let ratio = oracle_cost
                        .as_ref()
                        .filter(|c| c.is_positive())
                        .map(|c| (&res.cost / c).to_string())
                        .unwrap_or_else(|| "NA".into());
                    format!(
                        "{id},{},{},{},{},{eps},{},{},{ratio},{}",
                        inst.graph.vertices().len(),
                        inst.graph.edges().len() - inst.links.len(),
                        inst.links.len(),
                        a.k,
                        res.cost,
                        oracle_cost.map(|c| c.to_string()).unwrap_or_else(|| "NA".into()),
                        started.elapsed().as_millis()
                    )
                }
                "ecss" => {
                    let inst = instances::gen_planar_kec(a.n, a.k, seed, 3, KecShape::Compact);
                    let (sol, _) = ecss::ptas_wecss(&inst, eps).map_err(|e| e.to_string())?;
                    let mg = inst.graph.as_multigraph();
                    let oracle_cost = oracle::brute_wecss(&mg, &inst.costs, a.k, 26)
                        .ok()
                        .map(|s| s.cost);
                    let ratio = oracle_cost
                        .as_ref()
                        .filter(|c| c.is_positive())
                        .map(|c| (&sol.cost / c).to_string())
                        .unwrap_or_else(|| "NA".into());
                    format!(
                        "{id},{},{},0,{},{eps},{},{},{ratio},{}",
                        inst.graph.vertices().len(),
                        inst.graph.edges().len(),
                        a.k,
                        sol.cost,
                        oracle_cost.map(|c| c.to_string()).unwrap_or_else(|| "NA".into()),
                        started.elapsed().as_millis()
                    )
                }
                other => return Err(format!("unknown problem '{other}'")),
            };
            rows.push(row);
            id += 1;
        }
    }
    let csv = rows.join("\n") + "\n";
    match &a.out {
        Some(p) => std::fs::write(p, csv).map_err(|e| e.to_string())?,
        None => print!("{csv}"),
    }
    Ok(0)
}
