//! Command-line front end: every operation as a subcommand over JSON inputs.

use crate::cocycle::{
    central_extension, disconnected_preimage_radius, is_coboundary, section_lift, short_vanishing_cocycle_search, symmetrize_on,
    two_covering_from_cocycle, validate_cocycle,
};
use crate::complexes::{fill_radius, is_k_simply_connected, k_universal_cover_ball, Verdict};
use crate::discreteness::{augment_genset, build_discrete_genset, build_padded_genset, n3_profile};
use crate::error::{malformed, Budget, Error, Result};
use crate::fox::{betti_bound, fox_matrix, product_presentation_counts, rank_over_fraction_field, specialized_rank, surface_product_counts, Gf16, LaurentMatrix, Presentation};
use crate::gluing::{
    admissible_edge_analysis, bilipschitz_compare, build_x0, build_xq, build_xtilde, check_cayley_triangle_condition, check_triangle_condition,
    choose_marking_genset, detect_vertical_relation, subgroup_membership, AdmissibleOutcome, GluedGraph, PartitionedBase,
};
use crate::graph::{automorphism_group, ball, families, is_r_locally, BallView, GraphJson, SimpleGraph};
use crate::group::{elem_from_json, elem_to_json, group_from_json, group_to_json, CocycleTable, Elem, GenSet, Group};
use crate::rigidity::{
    deck_quotient, extend_cover_along_tree, extension_radius, extension_radius_at, isometries_between, propagate_covering, residual_finiteness_probe,
    verify_covering, PartialMap, PropagationOutcome, PropagationParams, TreeDecomposition, TreeExtension,
};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "graph-rigidity", version, about = "Local-to-global rigidity of graphs")]
pub struct Cli {
    /// Node budget shared by exponential searches.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    pub budget: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the run report as JSON.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// Suppress the summary on standard output.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timing in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GraphArg {
    /// Graph JSON (path or inline) or a family: cycle:N, path:N, complete:N, petersen, torus:AxB, lattice:R, tree:D.
    #[arg(long)]
    pub graph: String,
}

#[derive(Args, Debug)]
pub struct GroupGens {
    /// Group JSON (path or inline), or shorthand Z/n, Z^d.
    #[arg(long)]
    pub group: String,
    /// JSON array of elements.
    #[arg(long)]
    pub gens: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rooted ball B(v, r).
    Ball {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long)]
        radius: u32,
    },
    /// Is every radius-r ball of the graph isometric to a ball of some model?
    IsRLocally {
        #[command(flatten)]
        g: GraphArg,
        /// Model graphs; every vertex ball of each is used.
        #[arg(long, required = true)]
        model: Vec<String>,
        #[arg(long)]
        radius: u32,
    },
    /// Automorphism group order, generators and orbits.
    Aut {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        labels: bool,
    },
    /// Ball of the k-universal cover.
    KCover {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Is P_k(X) simply connected?
    KSimplyConnected {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Filling radius Fill^k(r1).
    FillRadius {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r1: u32,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Check that a vertex map is a covering.
    VerifyCovering {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// JSON array: image of each source vertex.
        #[arg(long)]
        map: String,
    },
    /// Extension radius r2 for balls of radius r.
    ExtensionRadius {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: u32,
        /// Only self-isometries at this center.
        #[arg(long)]
        center: Option<usize>,
    },
    /// Propagate a ball isometry into a covering.
    Propagate {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0)]
        x0: usize,
        /// Seed map as [[x, y], ...]; found automatically when omitted.
        #[arg(long)]
        seed_map: Option<String>,
        #[arg(long, default_value_t = 0)]
        y0: usize,
        /// Radius of the automatically found seed isometry.
        #[arg(long, default_value_t = 3)]
        seed_radius: u32,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        rc: Option<u32>,
        #[arg(long)]
        r2: Option<u32>,
    },
    /// Deck group of a covering.
    Deck {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        map: String,
    },
    /// Residual-finiteness probe through a propagated covering.
    RfProbe {
        #[command(flatten)]
        gg: GroupGens,
        /// Finite quotient graph Y.
        #[arg(long)]
        quotient: String,
        #[arg(long)]
        n: u32,
        /// JSON array of elements to test.
        #[arg(long)]
        elements: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Extend a covering along a tree decomposition (single JSON input).
    TreeExtend {
        #[arg(long)]
        input: String,
    },
    /// Triangle counts N3(s, S).
    N3 {
        #[command(flatten)]
        gg: GroupGens,
    },
    /// One Δ-augmentation step.
    Augment {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        s0: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 200)]
        search_bound: u64,
    },
    /// Generating set whose triangle counts separate the classes of S0.
    DiscreteGenset {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 200)]
        search_bound: u64,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Cyclic padding Γ × F of a finite Cayley graph.
    PaddedGenset {
        #[command(flatten)]
        gg: GroupGens,
        /// JSON array: the subset S0.
        #[arg(long)]
        s0: String,
    },
    /// Check the cocycle identity.
    CocycleValidate {
        #[arg(long)]
        cocycle: String,
    },
    /// Is the cocycle a coboundary?
    Coboundary {
        #[arg(long)]
        cocycle: String,
    },
    /// Central extension and lifted generators.
    CentralExt {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Double cover of a Cayley graph from a cocycle.
    TwoCover {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        gens: String,
    },
    /// Non-coboundary cocycle vanishing on short pairs.
    VanishingSearch {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        n: u32,
    },
    /// X0 = Cay(H × Z/2, T').
    BuildX0 {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        subgroup_gens: String,
    },
    /// X_q from a double cover of (G, S).
    BuildXq {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        subgroup_gens: String,
        /// Cover graph Y.
        #[arg(long)]
        cover: String,
        /// JSON array: element of G under each vertex of Y.
        #[arg(long)]
        cover_map: String,
    },
    /// X̃ from a partitioned base and a double cover (single JSON input).
    BuildXtilde {
        #[arg(long)]
        input: String,
    },
    /// Triangle condition, Cayley form or graph form.
    TriangleCondition {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        subgroup_gens: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Enlarge T until max N3 + 1 < |T \ G|.
    MarkingGenset {
        #[command(flatten)]
        gg: GroupGens,
        #[arg(long)]
        subgroup_gens: String,
        /// Candidates: all elements (finite) or the box of this radius (Z^d).
        #[arg(long, default_value_t = 32)]
        candidate_radius: i64,
    },
    /// Recover fibers from triangle counts.
    DetectFibers {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Disconnecting admissible edge set of a glued graph.
    Admissible {
        #[arg(long)]
        glued: String,
    },
    /// Lipschitz constants of the fiber-matching bijection.
    Bilipschitz {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Fox matrices D1, D2 (and D3).
    Fox {
        #[arg(long)]
        presentation: String,
    },
    /// Rank over GF(2)(t), with random specializations.
    Rank {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// n ≥ q + 1 − (p + r).
    BettiBound {
        #[arg(long)]
        presentation: String,
    },
    /// Cell counts of a product presentation.
    ProductCounts {
        #[arg(long, default_value_t = 0)]
        p1: i64,
        #[arg(long, default_value_t = 0)]
        q1: i64,
        #[arg(long, default_value_t = 0)]
        p2: i64,
        #[arg(long, default_value_t = 0)]
        q2: i64,
        /// Surface genera g1,g2 instead.
        #[arg(long)]
        genus: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Positive,
    Negative,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
            Outcome::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs_digest: String,
    pub verdict: Outcome,
    pub summary: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

fn load_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') { arg.to_string() } else { std::fs::read_to_string(arg).map_err(|e| malformed(format!("{arg}: {e}")))? };
    let v: Value = serde_json::from_str(&text).map_err(|e| malformed(format!("{arg}: {e}")))?;
    // a saved run report stands for its result
    match v.get("result") {
        Some(r) if v.get("inputs_digest").is_some() => Ok(r.clone()),
        _ => Ok(v),
    }
}

fn scalar_to_z1(g: &Group, v: &Value) -> Value {
    match (g, v) {
        (Group::FreeAbelian(1), Value::Number(_)) => json!([v]),
        _ => v.clone(),
    }
}

pub fn load_graph(arg: &str) -> Result<SimpleGraph> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| malformed(format!("bad size in {arg}")));
    if let Some((fam, size)) = arg.split_once(':') {
        return match fam {
            "cycle" => Ok(families::cycle(num(size)?)),
            "path" => Ok(families::path(num(size)?)),
            "complete" => Ok(families::complete(num(size)?)),
            "lattice" => Ok(families::lattice_chunk(num(size)? as i64).0),
            "tree" => Ok(families::binary_tree(num(size)? as u32)),
            "torus" => {
                let (a, b) = size.split_once('x').ok_or_else(|| malformed("torus needs AxB"))?;
                Ok(families::torus(num(a)?, num(b)?))
            }
            _ => Err(malformed(format!("unknown graph family {fam}"))),
        };
    }
    if arg == "petersen" {
        return Ok(families::petersen());
    }
    graph_from_value(&load_json(arg)?)
}

fn graph_from_value(v: &Value) -> Result<SimpleGraph> {
    let j: GraphJson = serde_json::from_value(v.clone()).map_err(|e| malformed(format!("graph: {e}")))?;
    SimpleGraph::from_json(&j)
}

pub fn load_group(arg: &str) -> Result<Group> {
    if let Some(n) = arg.strip_prefix("Z/") {
        return Group::cyclic(n.parse().map_err(|_| malformed(format!("bad order in {arg}")))?);
    }
    if let Some(d) = arg.strip_prefix("Z^") {
        return Ok(Group::FreeAbelian(d.parse().map_err(|_| malformed(format!("bad rank in {arg}")))?));
    }
    if arg == "Z" {
        return Ok(Group::FreeAbelian(1));
    }
    group_from_json(&load_json(arg)?)
}

fn load_elems(g: &Group, arg: &str) -> Result<Vec<Elem>> {
    let v = load_json(arg)?;
    let a = v.as_array().ok_or_else(|| malformed("expected a JSON array of elements"))?;
    a.iter().map(|e| g.normalize(&elem_from_json(g, &scalar_to_z1(g, e))?)).collect()
}

fn load_elem(g: &Group, arg: &str) -> Result<Elem> {
    let v: Value = serde_json::from_str(arg).unwrap_or_else(|_| Value::String(arg.to_string()));
    g.normalize(&elem_from_json(g, &scalar_to_z1(g, &v))?)
}

fn load_gens(gg: &GroupGens) -> Result<(Group, GenSet)> {
    let g = load_group(&gg.group)?;
    let s = GenSet::symmetric_closure(&g, &load_elems(&g, &gg.gens)?)?;
    Ok((g, s))
}

fn load_usizes(arg: &str) -> Result<Vec<usize>> {
    serde_json::from_value(load_json(arg)?).map_err(|e| malformed(format!("expected an array of vertices: {e}")))
}

fn load_pairs(v: &Value) -> Result<PartialMap> {
    let p: Vec<(usize, usize)> = serde_json::from_value(v.clone()).map_err(|e| malformed(format!("expected [[x, y], ...]: {e}")))?;
    Ok(p.into_iter().collect())
}

fn load_cocycle(arg: &str) -> Result<CocycleTable> {
    let v = load_json(arg)?;
    let g = match v.get("group") {
        Some(Value::String(s)) => load_group(s)?,
        Some(g) => group_from_json(g)?,
        None => return Err(malformed("cocycle needs \"group\"")),
    };
    let spec = json!({"kind": "central_ext", "base": group_to_json(&g), "cocycle": {"entries": v.get("entries").cloned().unwrap_or(json!([]))}});
    match group_from_json(&spec)? {
        Group::CentralExt(t) => Ok((*t).clone()),
        _ => unreachable!(),
    }
}

fn cocycle_json(t: &CocycleTable) -> Value {
    let mut entries = Vec::new();
    for i in 0..t.len() {
        for j in 0..t.len() {
            if t.at(i, j) == 1 {
                entries.push(json!([elem_to_json(&t.elements[i]), elem_to_json(&t.elements[j]), 1]));
            }
        }
    }
    json!({"group": group_to_json(&t.base), "entries": entries})
}

fn ball_json(b: &BallView) -> Value {
    json!({"graph": b.carrier.to_json(), "root": b.root, "radius": b.radius, "ambient": b.ambient, "ambient_dist": b.ambient_dist})
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn elems_json(e: &[Elem]) -> Value {
    Value::Array(e.iter().map(elem_to_json).collect())
}

type Run = (Outcome, String, Value);

fn pos(summary: impl Into<String>, v: Value) -> Result<Run> {
    Ok((Outcome::Positive, summary.into(), v))
}

fn neg(summary: impl Into<String>, v: Value) -> Result<Run> {
    Ok((Outcome::Negative, summary.into(), v))
}

fn verdict(ok: bool, yes: &str, no: &str, v: Value) -> Result<Run> {
    if ok { pos(yes, v) } else { neg(no, v) }
}

fn auto_seed(x: &SimpleGraph, x0: usize, y: &SimpleGraph, y0: usize, r: u32, budget: &mut Budget) -> Result<PartialMap> {
    isometries_between(x, x0, y, y0, r, &[], 1, budget)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Failed(format!("B(x0, {r}) and B(y0, {r}) are not isometric")))
}

fn execute(cli: &Cli, budget: &mut Budget) -> Result<Run> {
    match &cli.command {
        Command::Ball { g, vertex, radius } => {
            let b = ball(&load_graph(&g.graph)?, *vertex, *radius)?;
            pos(format!("ball with {} vertices", b.len()), ball_json(&b))
        }
        Command::IsRLocally { g, model, radius } => {
            let y = load_graph(&g.graph)?;
            let mut models = Vec::new();
            for m in model {
                let x = load_graph(m)?;
                for v in 0..x.n() {
                    models.push(ball(&x, v, *radius)?);
                }
            }
            let rep = is_r_locally(&y, &models, *radius, budget)?;
            verdict(rep.verdict, "locally modelled", "some ball has no model", to_value(&rep))
        }
        Command::Aut { g, labels } => {
            let x = load_graph(&g.graph)?;
            let a = automorphism_group(&x, *labels, budget)?;
            pos(format!("|Aut| = {}", a.order), json!({"order": a.order.to_string(), "generators": a.generators, "orbits": a.orbits(x.n()), "vertex_orbit_count": a.vertex_orbit_count}))
        }
        Command::KCover { g, base, k, radius, fuel } => {
            let x = load_graph(&g.graph)?;
            let c = k_universal_cover_ball(&x, *base, *k, *radius, *fuel)?;
            let mut v = ball_json(&c.ball);
            v["projection"] = json!(c.projection);
            v["status"] = to_value(&c.status);
            verdict(c.status == crate::complexes::CoverStatus::Exact, &format!("cover ball with {} vertices", c.ball.len()), "fuel exhausted", v)
        }
        Command::KSimplyConnected { g, k, fuel } => {
            let rep = is_k_simply_connected(&load_graph(&g.graph)?, *k, *fuel)?;
            match rep.verdict {
                Verdict::Yes => pos("k-simply connected", to_value(&rep)),
                Verdict::No => neg("not k-simply connected", to_value(&rep)),
                Verdict::Unknown => Ok((Outcome::Error, "unknown: fuel exhausted".into(), to_value(&rep))),
            }
        }
        Command::FillRadius { g, k, r1, fuel } => {
            let rep = fill_radius(&load_graph(&g.graph)?, *k, *r1, *fuel)?;
            verdict(rep.r2.is_some(), &format!("fill radius {:?}", rep.r2), "no filling radius up to the diameter", to_value(&rep))
        }
        Command::VerifyCovering { source, target, map } => {
            let (z, x) = (load_graph(source)?, load_graph(target)?);
            match verify_covering(&load_usizes(map)?, &z, &x)? {
                Ok(c) => pos(format!("covering, fiber {:?}", c.fiber_size), to_value(&c)),
                Err(v) => neg(format!("not a covering at vertex {}", v.vertex), to_value(&v)),
            }
        }
        Command::ExtensionRadius { g, r, center } => {
            let x = load_graph(&g.graph)?;
            let r2 = match center {
                Some(c) => extension_radius_at(&x, *c, *r, budget)?,
                None => extension_radius(&x, *r, None, budget)?,
            };
            verdict(r2.is_some(), &format!("r2 = {r2:?}"), "no extension radius", json!({"r": r, "r2": r2}))
        }
        Command::Propagate { source, target, x0, seed_map, y0, seed_radius, k, rc, r2 } => {
            let (x, y) = (load_graph(source)?, load_graph(target)?);
            let seed = match seed_map {
                Some(s) => load_pairs(&load_json(s)?)?,
                None => auto_seed(&x, *x0, &y, *y0, *seed_radius, budget)?,
            };
            let params = PropagationParams { r_c: *rc, k: *k, r2: *r2, interior: None };
            let p = propagate_covering(&x, &y, *x0, &seed, &params, budget)?;
            let v = to_value(&p);
            match &p.outcome {
                PropagationOutcome::Covering(c) => pos(format!("covering, fiber {:?}", c.fiber_size), v),
                PropagationOutcome::PartialCovering { .. } => pos("partial covering", v),
                PropagationOutcome::Obstruction { cycle, .. } => neg(format!("obstruction along a cycle of length {}", cycle.len()), v),
                PropagationOutcome::NotCovering(w) => neg(format!("not a covering at vertex {}", w.vertex), v),
            }
        }
        Command::Deck { source, target, map } => {
            let (z, x) = (load_graph(source)?, load_graph(target)?);
            let c = verify_covering(&load_usizes(map)?, &z, &x)?.map_err(|v| malformed(format!("not a covering at vertex {}: {}", v.vertex, v.reason)))?;
            let d = deck_quotient(&c, &z, &x, budget)?;
            pos(format!("deck group of order {}", d.order), to_value(&d))
        }
        Command::RfProbe { gg, quotient, n, elements, k } => {
            let (g, s) = load_gens(gg)?;
            let f = load_elems(&g, elements)?;
            let rep = residual_finiteness_probe(&g, &s, &load_graph(quotient)?, *n, &f, *k, budget)?;
            verdict(rep.all_free, "all listed elements act freely", "some element has a fixed point", to_value(&rep))
        }
        Command::TreeExtend { input } => {
            let v = load_json(input)?;
            let get = |k: &str| v.get(k).ok_or_else(|| malformed(format!("tree-extend input needs \"{k}\"")));
            let num = |k: &str| -> Result<u64> { get(k)?.as_u64().ok_or_else(|| malformed(format!("\"{k}\" must be a number"))) };
            let x = graph_from_value(get("x")?)?;
            let y = graph_from_value(get("y")?)?;
            let d = TreeDecomposition {
                tree: graph_from_value(get("tree")?)?,
                pieces: serde_json::from_value(get("pieces")?.clone()).map_err(|e| malformed(format!("pieces: {e}")))?,
                r1: num("r1")? as u32,
            };
            let (x0, r, r2) = (num("x0")? as usize, num("r")? as u32, num("r2")? as u32);
            let seed = match v.get("seed") {
                Some(s) if !s.is_null() => load_pairs(s)?,
                _ => auto_seed(&x, x0, &y, v.get("y0").and_then(Value::as_u64).unwrap_or(0) as usize, r + r2, budget)?,
            };
            let out = extend_cover_along_tree(&x, &d, &y, x0, &seed, r, r2, None, budget)?;
            let val = to_value(&out);
            match out {
                TreeExtension::Covering(_) => pos("covering", val),
                TreeExtension::Conflict { vertex, .. } => neg(format!("pieces disagree at vertex {vertex}"), val),
                TreeExtension::NotCovering(w) => neg(format!("not a covering at vertex {}", w.vertex), val),
            }
        }
        Command::N3 { gg } => {
            let (g, s) = load_gens(gg)?;
            pos(format!("N3 profile of {} generators", s.len()), n3_profile(&g, &s)?.to_json())
        }
        Command::Augment { gg, s0, gamma, search_bound } => {
            let (g, s) = load_gens(gg)?;
            let (next, step) = augment_genset(&g, &s, &load_elem(&g, s0)?, &load_elem(&g, gamma)?, *search_bound)?;
            pos(format!("n = {}", step.n), json!({"genset": elems_json(&next.elements), "step": to_value(&step)}))
        }
        Command::DiscreteGenset { gg, gamma, search_bound, max_steps } => {
            let (g, s) = load_gens(gg)?;
            let d = build_discrete_genset(&g, &s, &load_elem(&g, gamma)?, *search_bound, *max_steps)?;
            let chain: Vec<Value> = d.chain.iter().map(|c| elems_json(c)).collect();
            pos(
                format!("{} generators after {} augmentations", d.genset.len(), d.steps.len()),
                json!({"genset": elems_json(&d.genset.elements), "chain": chain, "steps": to_value(&d.steps), "profile": d.profile.to_json()}),
            )
        }
        Command::PaddedGenset { gg, s0 } => {
            let (g, s) = load_gens(gg)?;
            let s0 = GenSet::symmetric_closure(&g, &load_elems(&g, s0)?)?;
            let p = build_padded_genset(&g, &s, &s0, budget)?;
            let v = json!({
                "clique_size": p.clique_size, "primes": p.primes, "classes": elems_json(&p.classes),
                "vertices": p.graph.graph.n(), "fibers_are_max_cliques": p.fibers_are_max_cliques,
                "fiber_edge_counts": p.fiber_edge_counts, "genset_size": p.genset.len(),
            });
            verdict(p.fibers_are_max_cliques, "fibers are the maximum cliques", "clique certificate failed", v)
        }
        Command::CocycleValidate { cocycle } => match validate_cocycle(&load_cocycle(cocycle)?, budget)? {
            Ok(n) => pos(format!("cocycle identity holds on {n} triples"), json!({"ok": true, "triples": n})),
            Err(v) => neg("cocycle identity fails", json!({"ok": false, "violation": to_value(&v)})),
        },
        Command::Coboundary { cocycle } => {
            let a = is_coboundary(&load_cocycle(cocycle)?, budget)?;
            verdict(a.is_coboundary(), "coboundary", "not a coboundary", to_value(&a))
        }
        Command::CentralExt { cocycle, gens } => {
            let t = load_cocycle(cocycle)?;
            let (t, lifted) = match gens {
                Some(gs) => {
                    let s = GenSet::symmetric_closure(&t.base, &load_elems(&t.base, gs)?)?;
                    let t = symmetrize_on(&t, &s, budget)?;
                    let e = central_extension(&t)?;
                    let l = section_lift(&e, &s)?;
                    (t, Some(l))
                }
                None => (t.clone(), None),
            };
            let e = central_extension(&t)?;
            pos("central extension", json!({"group": group_to_json(&e), "s_tau": lifted.map(|l| elems_json(&l.elements))}))
        }
        Command::TwoCover { cocycle, gens } => {
            let t = load_cocycle(cocycle)?;
            let s = GenSet::symmetric_closure(&t.base, &load_elems(&t.base, gens)?)?;
            let c = two_covering_from_cocycle(&t, &s, budget)?;
            let v = json!({
                "total": c.total.graph.to_json(), "base": c.base.graph.to_json(), "map": c.covering.map,
                "total_elements": elems_json(&c.total.elements), "base_elements": elems_json(&c.base.elements),
                "connected": c.connected, "coboundary": c.coboundary, "disconnected_preimage_radius": disconnected_preimage_radius(&c),
            });
            pos(format!("double cover on {} vertices, connected = {}", c.total.graph.n(), c.connected), v)
        }
        Command::VanishingSearch { gg, n } => {
            let (g, s) = load_gens(gg)?;
            match short_vanishing_cocycle_search(&g, &s, *n, budget)? {
                Some(t) => pos("found a non-coboundary vanishing cocycle", cocycle_json(&t)),
                None => neg("every vanishing cocycle is a coboundary", Value::Null),
            }
        }
        Command::BuildX0 { gg, subgroup_gens } => {
            let (h, t) = load_gens(gg)?;
            let in_g = subgroup_membership(&h, &load_elems(&h, subgroup_gens)?, budget)?;
            let x0 = build_x0(&h, &t, &*in_g, budget)?;
            pos(format!("X0 with {} vertices", x0.graph.n()), x0.to_json())
        }
        Command::BuildXq { gg, subgroup_gens, cover, cover_map } => {
            let (h, t) = load_gens(gg)?;
            let in_g = subgroup_membership(&h, &load_elems(&h, subgroup_gens)?, budget)?;
            let q = load_elems(&h, cover_map)?;
            let xq = build_xq(&h, &t, &*in_g, &load_graph(cover)?, &q, budget)?;
            pos(format!("X_q with {} vertices, connected = {}", xq.graph.n(), xq.graph.is_connected()), xq.to_json())
        }
        Command::BuildXtilde { input } => {
            let v = load_json(input)?;
            let get = |k: &str| v.get(k).ok_or_else(|| malformed(format!("build-xtilde input needs \"{k}\"")));
            let pieces: Vec<Vec<usize>> = serde_json::from_value(get("pieces")?.clone()).map_err(|e| malformed(format!("pieces: {e}")))?;
            let pb = PartitionedBase::new(graph_from_value(get("x")?)?, graph_from_value(get("y")?)?, pieces)?;
            let q: Vec<usize> = serde_json::from_value(get("q")?.clone()).map_err(|e| malformed(format!("q: {e}")))?;
            let xt = build_xtilde(&pb, &graph_from_value(get("ytilde")?)?, &q)?;
            pos(format!("X~ with {} vertices", xt.graph.n()), xt.to_json())
        }
        Command::TriangleCondition { group, gens, subgroup_gens, x, y } => {
            let c = match (group, gens, subgroup_gens, x, y) {
                (Some(g), Some(t), Some(s), _, _) => {
                    let h = load_group(g)?;
                    let t = GenSet::symmetric_closure(&h, &load_elems(&h, t)?)?;
                    let in_g = subgroup_membership(&h, &load_elems(&h, s)?, budget)?;
                    let s: Vec<Elem> = t.elements.iter().filter(|e| in_g(e)).cloned().collect();
                    check_cayley_triangle_condition(&h, &t, &GenSet::new(&h, &s)?)?
                }
                (_, _, _, Some(x), Some(y)) => check_triangle_condition(&load_graph(x)?, &load_graph(y)?),
                _ => return Err(malformed("give --group/--gens/--subgroup-gens or --x/--y")),
            };
            verdict(c.holds, &format!("holds with margin {}", c.margin), &format!("fails with margin {}", c.margin), to_value(&c))
        }
        Command::MarkingGenset { gg, subgroup_gens, candidate_radius } => {
            let (h, t1) = load_gens(gg)?;
            let in_g = subgroup_membership(&h, &load_elems(&h, subgroup_gens)?, budget)?;
            let cands: Vec<Elem> = match &h {
                Group::FreeAbelian(d) => box_elements(*d, *candidate_radius),
                _ => h.elements(budget)?,
            };
            let m = choose_marking_genset(&h, &*in_g, &t1, &cands, budget)?;
            pos(
                format!("|T| = {}, max N3 = {}, |T \\ G| = {}", m.t.len(), m.max_n3, m.outside_g),
                json!({"t": elems_json(&m.t.elements), "added": elems_json(&m.added), "profile": m.profile.to_json(), "max_n3": m.max_n3, "outside_g": m.outside_g}),
            )
        }
        Command::DetectFibers { g } => match detect_vertical_relation(&load_graph(&g.graph)?) {
            Ok(rel) => pos(format!("{} fibers of size {}", rel.fibers.len(), rel.fibers[0].len()), to_value(&rel)),
            Err(Error::Failed(why)) => neg(why.clone(), json!({"failure": why})),
            Err(e) => Err(e),
        },
        Command::Admissible { glued } => {
            let g = GluedGraph::from_json(&load_json(glued)?)?;
            let out = admissible_edge_analysis(&g, budget)?;
            let v = to_value(&out);
            match out {
                AdmissibleOutcome::Disconnecting { .. } => pos("disconnecting admissible set found", v),
                AdmissibleOutcome::None { .. } => neg("every admissible set connects the graph", v),
            }
        }
        Command::Bilipschitz { a, b } => {
            let (g1, g2) = (GluedGraph::from_json(&load_json(a)?)?, GluedGraph::from_json(&load_json(b)?)?);
            let r = bilipschitz_compare(&g1, &g2)?;
            let ok = [r.forward, r.backward].iter().all(|c| c.is_some_and(|(p, q)| p <= 2 * q));
            verdict(ok, &format!("constants {:?} and {:?}", r.forward, r.backward), "a constant exceeds 2", to_value(&r))
        }
        Command::Fox { presentation } => {
            let p = Presentation::from_json(&load_json(presentation)?)?;
            let m = fox_matrix(&p)?;
            let chain = m.chain_condition()?;
            let v = json!({"d1": m.d1.to_json(), "d2": m.d2.to_json(), "d3": m.d3.as_ref().map(LaurentMatrix::to_json), "chain_condition": chain});
            verdict(chain, "Fox matrices", "chain condition fails", v)
        }
        Command::Rank { matrix, trials } => {
            let m = LaurentMatrix::from_json(&load_json(matrix)?)?;
            let rank = rank_over_fraction_field(&m);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let mut equal = 0;
            let mut max_eval = 0;
            for _ in 0..*trials {
                let t0 = Gf16(rng.gen_range(2..=u16::MAX));
                let r = specialized_rank(&m, t0);
                max_eval = max_eval.max(r);
                equal += (r == rank) as usize;
            }
            verdict(max_eval <= rank, &format!("rank {rank}"), "a specialization exceeded the symbolic rank", json!({"rank": rank, "trials": trials, "equal": equal}))
        }
        Command::BettiBound { presentation } => {
            let b = betti_bound(&Presentation::from_json(&load_json(presentation)?)?)?;
            let v = json!({"n": b.n, "bound": b.bound, "certificate": b.certificate, "report": to_value(&b)});
            verdict(b.certificate, &format!("n = {} >= {}", b.n, b.bound), &format!("n = {}, no certificate", b.n), v)
        }
        Command::ProductCounts { p1, q1, p2, q2, genus } => match genus {
            Some(gs) => {
                let (g1, g2) = gs.split_once(',').ok_or_else(|| malformed("--genus needs g1,g2"))?;
                let g1: i64 = g1.trim().parse().map_err(|_| malformed("bad genus"))?;
                let g2: i64 = g2.trim().parse().map_err(|_| malformed("bad genus"))?;
                let (p, q, r) = surface_product_counts(g1, g2);
                pos(format!("q - (p + r) = {}", q - (p + r)), json!({"p": p, "q": q, "r": r, "excess": q - (p + r), "bound": q + 1 - (p + r)}))
            }
            None => {
                let c = product_presentation_counts(*p1, *q1, *p2, *q2)?;
                pos(format!("(p, q, r) = ({}, {}, {})", c.p, c.q, c.r), to_value(&c))
            }
        },
    }
}

fn box_elements(d: usize, r: i64) -> Vec<Elem> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (-r..=r).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out.into_iter().map(Elem::Vec).collect()
}

/// Digest of the arguments that affect the result; output flags are skipped.
fn digest(args: &[String]) -> String {
    let mut h = Sha256::new();
    let mut skip_next = false;
    for a in args {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        if a == "--json-out" || a == "--threads" {
            skip_next = true;
            continue;
        }
        if a == "--quiet" || a == "--timing" || a.starts_with("--json-out=") || a.starts_with("--threads=") {
            continue;
        }
        h.update(a.as_bytes());
        h.update([0]);
        // file arguments contribute their contents
        if let Ok(bytes) = std::fs::read(a) {
            h.update(&bytes);
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses `args` (program name first), runs, writes outputs; returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let name = args.iter().skip(1).find(|a| !a.starts_with('-') && Command::has_name(a)).cloned().unwrap_or_default();
    let start = Instant::now();
    let mut budget = Budget::new(cli.budget);
    let (verdict, summary, result) = match execute(&cli, &mut budget) {
        Ok(r) => r,
        Err(e) => (Outcome::Error, e.to_string(), json!({"error": e.to_string()})),
    };
    let report = RunReport {
        subcommand: name.clone(),
        inputs_digest: digest(&args[1..]),
        verdict,
        summary: summary.clone(),
        result,
        timing_ms: cli.timing.then(|| start.elapsed().as_millis()),
    };
    if let Some(path) = &cli.json_out {
        let text = serde_json::to_string_pretty(&report).unwrap_or_default();
        if let Err(e) = std::fs::write(path, text + "\n") {
            let _ = writeln!(err, "cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if verdict == Outcome::Error {
        let _ = writeln!(err, "{name}: {summary}");
    } else if !cli.quiet {
        let _ = writeln!(out, "{name}: {summary}");
        if cli.json_out.is_none() {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.result).unwrap_or_default());
        }
    }
    verdict.exit_code()
}

impl Command {
    fn has_name(s: &str) -> bool {
        use clap::CommandFactory;
        Cli::command().get_subcommands().any(|c| c.get_name() == s)
    }
}
