//! Glued graphs X₀, X_q and X̃ with inner, outer and vertical edges, and the
//! diagnostics that recover their structure.

use crate::discreteness::{n3_profile, TriangleProfile};
use crate::error::{malformed, precondition, Budget, Error, Result};
use crate::graph::{SimpleGraph, UNREACHED};
use crate::group::{cayley_graph, word_length, CayleyGraph, Elem, GenSet, Group};
use crate::rigidity::verify_covering;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Inner,
    Outer,
    Vertical,
}

#[derive(Clone, Debug)]
pub struct GluedGraph {
    pub graph: SimpleGraph,
    /// Kind of every edge, keyed by (u, v) with u < v.
    pub kinds: BTreeMap<(usize, usize), EdgeKind>,
    /// Vertex of the base graph under each vertex.
    pub projection: Vec<usize>,
    pub base: SimpleGraph,
}

impl GluedGraph {
    fn assemble(n: usize, edges: Vec<(usize, usize, EdgeKind)>, projection: Vec<usize>, base: SimpleGraph) -> Result<Self> {
        let mut kinds = BTreeMap::new();
        for &(u, v, k) in &edges {
            let key = (u.min(v), u.max(v));
            if let Some(old) = kinds.insert(key, k) {
                if old != k {
                    return Err(Error::Failed(format!("edge {key:?} is both {old:?} and {k:?}")));
                }
            }
        }
        let graph = SimpleGraph::from_edges(n, kinds.keys().copied())?;
        let g = GluedGraph { graph, kinds, projection, base };
        g.check_projection()?;
        Ok(g)
    }

    fn check_projection(&self) -> Result<()> {
        for (&(u, v), &k) in &self.kinds {
            let (a, b) = (self.projection[u], self.projection[v]);
            let ok = match k {
                EdgeKind::Vertical => a == b,
                _ => a != b && self.base.has_edge(a, b),
            };
            if !ok {
                return Err(Error::Failed(format!("{k:?} edge {u}-{v} does not project correctly")));
            }
        }
        Ok(())
    }

    pub fn kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        self.kinds.get(&(u.min(v), u.max(v))).copied()
    }

    /// Preimages of each base vertex, in vertex order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.base.n()];
        for (v, &b) in self.projection.iter().enumerate() {
            f[b].push(v);
        }
        f
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.kinds.values().filter(|&&k| k == kind).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self.graph.to_json()).unwrap_or_default();
        let kinds: Vec<EdgeKind> = self.graph.edges().iter().map(|&(a, b)| self.kind(a, b).unwrap()).collect();
        v["edge_kinds"] = serde_json::to_value(kinds).unwrap_or_default();
        v["projection"] = serde_json::to_value(&self.projection).unwrap_or_default();
        v["fibers"] = serde_json::to_value(self.fibers()).unwrap_or_default();
        v["base"] = serde_json::to_value(self.base.to_json()).unwrap_or_default();
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parse = |v: &serde_json::Value| -> Result<SimpleGraph> {
            let j: crate::graph::GraphJson = serde_json::from_value(v.clone()).map_err(|e| malformed(format!("graph: {e}")))?;
            SimpleGraph::from_json(&j)
        };
        let graph = parse(v)?;
        let base = parse(v.get("base").ok_or_else(|| malformed("glued graph needs \"base\""))?)?;
        let kinds: Vec<EdgeKind> = serde_json::from_value(v.get("edge_kinds").cloned().unwrap_or_default()).map_err(|e| malformed(format!("edge_kinds: {e}")))?;
        let projection: Vec<usize> = serde_json::from_value(v.get("projection").cloned().unwrap_or_default()).map_err(|e| malformed(format!("projection: {e}")))?;
        let edges = graph.edges();
        if kinds.len() != edges.len() || projection.len() != graph.n() {
            return Err(malformed("edge_kinds and projection must match the graph"));
        }
        if let Some(&b) = projection.iter().find(|&&b| b >= base.n()) {
            return Err(malformed(format!("projection hits {b}, outside the base")));
        }
        let g = GluedGraph { kinds: edges.into_iter().zip(kinds).collect(), graph, projection, base };
        g.check_projection()?;
        Ok(g)
    }
}

/// Membership in ⟨gens⟩: closure for finite groups, lattice reduction in Zᵈ.
pub fn subgroup_membership(g: &Group, gens: &[Elem], budget: &mut Budget) -> Result<Box<dyn Fn(&Elem) -> bool>> {
    match g {
        Group::FreeAbelian(d) => {
            let basis: Vec<Vec<i64>> = gens
                .iter()
                .map(|e| match e {
                    Elem::Vec(v) if v.len() == *d => Ok(v.clone()),
                    _ => Err(malformed("subgroup generators must be vectors of the right dimension")),
                })
                .collect::<Result<_>>()?;
            let h = crate::group::lattice::hnf(*d, &basis)?;
            Ok(Box::new(move |e: &Elem| matches!(e, Elem::Vec(v) if crate::group::lattice::reduce(&h, v).iter().all(|&x| x == 0))))
        }
        _ if g.is_finite() => {
            let mut seen: std::collections::HashSet<Elem> = std::collections::HashSet::from([g.identity()]);
            let mut stack = vec![g.identity()];
            while let Some(x) = stack.pop() {
                for s in gens {
                    budget.tick()?;
                    let y = g.mul(&x, s)?;
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
            Ok(Box::new(move |e: &Elem| seen.contains(e)))
        }
        _ => Err(precondition("subgroup membership is available for finite groups and Z^d only")),
    }
}

fn coset_data(h: &Group, t: &GenSet, in_g: &dyn Fn(&Elem) -> bool, budget: &mut Budget) -> Result<(CayleyGraph, Vec<Elem>)> {
    let base = cayley_graph(h, t, false, budget)?;
    let s: Vec<Elem> = t.elements.iter().filter(|x| in_g(x)).cloned().collect();
    if !in_g(&h.identity()) {
        return Err(precondition("the identity must lie in G"));
    }
    Ok((base, s))
}

/// Cayley graph of H × Z/2 for T′ = {(e,1)} ∪ S × {0} ∪ (T∖S) × {0,1}, S = T ∩ G.
pub fn build_x0(h: &Group, t: &GenSet, in_g: &dyn Fn(&Elem) -> bool, budget: &mut Budget) -> Result<GluedGraph> {
    let (base, s) = coset_data(h, t, in_g, budget)?;
    let n = base.elements.len();
    let mut edges = Vec::new();
    for (i, x) in base.elements.iter().enumerate() {
        edges.push((2 * i, 2 * i + 1, EdgeKind::Vertical));
        for y in &t.elements {
            let j = base.index_of(&h.mul(x, y)?)?;
            if s.contains(y) {
                edges.extend([(2 * i, 2 * j, EdgeKind::Inner), (2 * i + 1, 2 * j + 1, EdgeKind::Inner)]);
            } else {
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    edges.push((2 * i + a, 2 * j + b, EdgeKind::Outer));
                }
            }
        }
    }
    GluedGraph::assemble(2 * n, edges, (0..2 * n).map(|v| v / 2).collect(), base.graph)
}

/// X₀ with G × Z/2 replaced by the double cover q: Y → (G, S); `q[v]` is the
/// element of G under vertex v of Y.
pub fn build_xq(h: &Group, t: &GenSet, in_g: &dyn Fn(&Elem) -> bool, y: &SimpleGraph, q: &[Elem], budget: &mut Budget) -> Result<GluedGraph> {
    let (base, s) = coset_data(h, t, in_g, budget)?;
    if q.len() != y.n() {
        return Err(malformed("q must give one element of G per vertex of Y"));
    }
    let g_elems: Vec<usize> = (0..base.elements.len()).filter(|&i| in_g(&base.elements[i])).collect();
    let g_pos: HashMap<usize, usize> = g_elems.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut gs_edges = Vec::new();
    for (k, &i) in g_elems.iter().enumerate() {
        for x in &s {
            let j = base.index_of(&h.mul(&base.elements[i], x)?)?;
            let l = g_pos[&j];
            if k < l {
                gs_edges.push((k, l));
            }
        }
    }
    let gs = SimpleGraph::from_edges(g_elems.len(), gs_edges)?;
    let qmap: Vec<usize> = q
        .iter()
        .map(|e| {
            let i = base.index_of(e)?;
            g_pos.get(&i).copied().ok_or_else(|| precondition("q maps outside G"))
        })
        .collect::<Result<_>>()?;
    let cov = verify_covering(&qmap, y, &gs)?.map_err(|v| precondition(format!("q is not a covering of (G,S) at vertex {}: {}", v.vertex, v.reason)))?;
    if cov.fiber_size != Some(2) {
        return Err(precondition("q must be a 2-covering"));
    }
    // outside vertices first, then Y
    let outside: Vec<usize> = (0..base.elements.len()).filter(|i| !g_pos.contains_key(i)).collect();
    let out_pos: HashMap<usize, usize> = outside.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let off = 2 * outside.len();
    let mut proj: Vec<usize> = (0..off).map(|v| outside[v / 2]).collect();
    proj.extend(qmap.iter().map(|&k| g_elems[k]));
    let over: HashMap<usize, Vec<usize>> = proj.iter().enumerate().fold(HashMap::new(), |mut m, (v, &b)| {
        m.entry(b).or_default().push(v);
        m
    });
    let mut edges = Vec::new();
    for (k, &i) in outside.iter().enumerate() {
        edges.push((2 * k, 2 * k + 1, EdgeKind::Vertical));
        for x in &t.elements {
            let j = base.index_of(&h.mul(&base.elements[i], x)?)?;
            if s.contains(x) {
                let l = out_pos[&j];
                edges.extend([(2 * k, 2 * l, EdgeKind::Inner), (2 * k + 1, 2 * l + 1, EdgeKind::Inner)]);
            } else {
                for &w in &over[&j] {
                    edges.extend([(2 * k, w, EdgeKind::Outer), (2 * k + 1, w, EdgeKind::Outer)]);
                }
            }
        }
    }
    for (a, b) in y.edges() {
        edges.push((off + a, off + b, EdgeKind::Inner));
    }
    for a in 0..y.n() {
        for b in a + 1..y.n() {
            if qmap[a] == qmap[b] {
                edges.push((off + a, off + b, EdgeKind::Vertical));
            }
        }
    }
    GluedGraph::assemble(off + y.n(), edges, proj, base.graph)
}

/// X partitioned into copies Y_i = f_i(Y); `pieces[i][v]` = f_i(v).
#[derive(Clone, Debug)]
pub struct PartitionedBase {
    pub x: SimpleGraph,
    pub y: SimpleGraph,
    pub pieces: Vec<Vec<usize>>,
}

impl PartitionedBase {
    pub fn new(x: SimpleGraph, y: SimpleGraph, pieces: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; x.n()];
        for (i, f) in pieces.iter().enumerate() {
            if f.len() != y.n() {
                return Err(malformed(format!("piece {i} has {} vertices, Y has {}", f.len(), y.n())));
            }
            for &v in f {
                x.check_vertex(v)?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(malformed(format!("vertex {v} lies in two pieces")));
                }
            }
            for a in 0..y.n() {
                for b in a + 1..y.n() {
                    if y.has_edge(a, b) != x.has_edge(f[a], f[b]) {
                        return Err(malformed(format!("f_{i} is not an isomorphism onto its piece")));
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(malformed(format!("vertex {v} lies in no piece")));
        }
        Ok(PartitionedBase { x, y, pieces })
    }
}

/// X̃ on Ỹ × I; vertex (ỹ, i) has index i·|Ỹ| + ỹ.
pub fn build_xtilde(base: &PartitionedBase, ytilde: &SimpleGraph, q: &[usize]) -> Result<GluedGraph> {
    let cov = verify_covering(q, ytilde, &base.y)?.map_err(|v| precondition(format!("q is not a covering at vertex {}: {}", v.vertex, v.reason)))?;
    if cov.fiber_size != Some(2) {
        return Err(precondition("q must be a 2-covering"));
    }
    let m = ytilde.n();
    let k = base.pieces.len();
    let proj: Vec<usize> = (0..m * k).map(|v| base.pieces[v / m][q[v % m]]).collect();
    let mut edges = Vec::new();
    for i in 0..k {
        for (a, b) in ytilde.edges() {
            edges.push((i * m + a, i * m + b, EdgeKind::Inner));
        }
        for a in 0..m {
            for b in a + 1..m {
                if q[a] == q[b] {
                    edges.push((i * m + a, i * m + b, EdgeKind::Vertical));
                }
            }
        }
    }
    for u in 0..m * k {
        for v in u + 1..m * k {
            if u / m != v / m && base.x.has_edge(proj[u], proj[v]) {
                edges.push((u, v, EdgeKind::Outer));
            }
        }
    }
    GluedGraph::assemble(m * k, edges, proj, base.x.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCondition {
    pub holds: bool,
    pub lhs: i64,
    pub rhs: i64,
    /// rhs − lhs − 1; non-negative exactly when the condition holds.
    pub margin: i64,
}

impl TriangleCondition {
    fn from(lhs: i64, rhs: i64) -> Self {
        TriangleCondition { holds: lhs < rhs, lhs, rhs, margin: rhs - lhs - 1 }
    }
}

/// Every edge of X in fewer than m_X − M_Y − 1 triangles.
pub fn check_triangle_condition(x: &SimpleGraph, y: &SimpleGraph) -> TriangleCondition {
    let lhs = x.edges().iter().map(|&(u, v)| x.edge_triangle_count(u, v).unwrap_or(0)).max().unwrap_or(0) as i64;
    let mx = (0..x.n()).map(|v| x.degree(v)).min().unwrap_or(0) as i64;
    let my = (0..y.n()).map(|v| y.degree(v)).max().unwrap_or(0) as i64;
    TriangleCondition::from(lhs, mx - my - 1)
}

/// max_{t∈T} |tT ∩ T| < |T| − |S| − 1.
pub fn check_cayley_triangle_condition(h: &Group, t: &GenSet, s: &GenSet) -> Result<TriangleCondition> {
    let mut lhs = 0;
    for x in &t.elements {
        let mut c = 0;
        for y in &t.elements {
            if t.contains(&h.mul(x, y)?) {
                c += 1;
            }
        }
        lhs = lhs.max(c);
    }
    Ok(TriangleCondition::from(lhs, t.len() as i64 - s.len() as i64 - 1))
}

#[derive(Clone, Debug)]
pub struct MarkingGenset {
    pub t: GenSet,
    pub added: Vec<Elem>,
    pub profile: TriangleProfile,
    pub max_n3: usize,
    pub outside_g: usize,
}

/// Adjoins h, h⁻¹ (h ∉ G, |h|_T > 3, taken in `candidates` order) until
/// max N₃(t, T) + 1 < |T ∖ G|.
pub fn choose_marking_genset(h: &Group, in_g: &dyn Fn(&Elem) -> bool, t1: &GenSet, candidates: &[Elem], budget: &mut Budget) -> Result<MarkingGenset> {
    let mut t = t1.clone();
    let mut added = Vec::new();
    let mut cand = candidates.iter();
    loop {
        let profile = n3_profile(h, &t)?;
        let max_n3 = profile.entries.iter().filter(|(e, _)| !h.is_identity(e)).map(|e| e.1).max().unwrap_or(0);
        let outside_g = t.elements.iter().filter(|x| !in_g(x)).count();
        if max_n3 + 1 < outside_g {
            return Ok(MarkingGenset { t, added, profile, max_n3, outside_g });
        }
        let next = loop {
            let Some(c) = cand.next() else {
                return Err(Error::Failed(format!("candidates exhausted with max N3 = {max_n3} and |T \\ G| = {outside_g}")));
            };
            let c = h.normalize(c)?;
            if in_g(&c) || t.contains(&c) {
                continue;
            }
            match word_length(h, &t, &c, budget) {
                Ok(Some(l)) if l > 3 => break c,
                Ok(_) => continue,
                Err(Error::Truncation(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        let mut el = t.elements.clone();
        el.push(next.clone());
        t = GenSet::symmetric_closure(h, &el)?;
        added.push(next);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerticalRelation {
    pub fibers: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub threshold: usize,
    /// Triangle counts of vertical and of other edges, as (min, max).
    pub vertical_range: (usize, usize),
    pub other_range: Option<(usize, usize)>,
}

/// Recovers fibers blind from triangle counts. Thresholds are tried from the
/// largest count down; the first whose high-count edges form disjoint cliques
/// of one common size ≥ 2 covering every vertex is accepted.
pub fn detect_vertical_relation(g: &SimpleGraph) -> Result<VerticalRelation> {
    let edges = g.edges();
    let counts: Vec<usize> = edges.iter().map(|&(u, v)| g.edge_triangle_count(u, v)).collect::<Result<_>>()?;
    let mut levels = counts.clone();
    levels.sort_unstable();
    levels.dedup();
    let range = |pick: &dyn Fn(usize) -> bool| {
        let vals: Vec<usize> = counts.iter().copied().filter(|&c| pick(c)).collect();
        Some((*vals.iter().min()?, *vals.iter().max()?))
    };
    for &th in levels.iter().rev() {
        let vert: Vec<(usize, usize)> = edges.iter().zip(&counts).filter(|(_, &c)| c >= th).map(|(&e, _)| e).collect();
        let sub = SimpleGraph::from_edges(g.n(), vert.iter().copied())?;
        let comp = sub.components();
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut fibers = vec![Vec::new(); k];
        for (v, &c) in comp.iter().enumerate() {
            fibers[c].push(v);
        }
        let size = fibers[0].len();
        let cliques = fibers.iter().all(|f| f.len() == size && f.iter().all(|&a| f.iter().all(|&b| a == b || sub.has_edge(a, b))));
        if size >= 2 && cliques {
            return Ok(VerticalRelation {
                fibers,
                class_of: comp,
                threshold: th,
                vertical_range: range(&|c| c >= th).unwrap(),
                other_range: range(&|c| c < th),
            });
        }
    }
    Err(Error::Failed(format!("no triangle-count threshold separates vertical edges; counts range over {:?}", range(&|_| true))))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AdmissibleOutcome {
    /// An admissible edge set whose graph is disconnected.
    Disconnecting { edges: Vec<(usize, usize)>, side: Vec<bool> },
    /// Every admissible edge set connects the graph.
    None { forced_components: usize, partitions_checked: u64 },
}

/// Searches for an admissible edge set leaving the glued graph disconnected.
/// Forced edges (the unique edge from x into some neighbouring fiber) are
/// contracted first; the remaining components are then 2-coloured exhaustively.
pub fn admissible_edge_analysis(g: &GluedGraph, budget: &mut Budget) -> Result<AdmissibleOutcome> {
    let n = g.graph.n();
    let fibers = g.fibers();
    // requirements (x, b): candidate edges from x into the fiber over b
    let mut reqs: Vec<Vec<usize>> = Vec::new();
    let mut req_src = Vec::new();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let nx = uf[y];
            uf[y] = r;
            y = nx;
        }
        r
    }
    for x in 0..n {
        for &b in g.base.neighbors(g.projection[x]) {
            let cands: Vec<usize> = fibers[b].iter().copied().filter(|&y| g.graph.has_edge(x, y)).collect();
            if cands.is_empty() {
                return Err(Error::Failed(format!("vertex {x} has no edge over base edge {}-{b}", g.projection[x])));
            }
            if cands.len() == 1 {
                let (a, c) = (find(&mut uf, x), find(&mut uf, cands[0]));
                uf[a] = c;
            }
            reqs.push(cands);
            req_src.push(x);
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|v| find(&mut uf, v)).collect();
    let mut ids: HashMap<usize, usize> = HashMap::new();
    for r in roots.iter_mut() {
        let k = ids.len();
        *r = *ids.entry(*r).or_insert(k);
    }
    let c = ids.len();
    if c == 1 {
        return Ok(AdmissibleOutcome::None { forced_components: 1, partitions_checked: 0 });
    }
    if c > 40 {
        return Err(Error::Budget(budget.limit()));
    }
    let mut checked = 0u64;
    // component 0 always on side 0; masks over the other components
    for mask in 1u64..(1u64 << (c - 1)) {
        budget.tick()?;
        checked += 1;
        let side = |v: usize| roots[v] > 0 && (mask >> (roots[v] - 1)) & 1 == 1;
        if reqs.iter().zip(&req_src).all(|(cands, &x)| cands.iter().any(|&y| side(y) == side(x))) {
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for (cands, &x) in reqs.iter().zip(&req_src) {
                for &y in cands {
                    if side(y) == side(x) {
                        edges.push((x.min(y), x.max(y)));
                    }
                }
            }
            edges.sort_unstable();
            edges.dedup();
            return Ok(AdmissibleOutcome::Disconnecting { edges, side: (0..n).map(side).collect() });
        }
    }
    Ok(AdmissibleOutcome::None { forced_components: c, partitions_checked: checked })
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub map: Vec<usize>,
    /// max d₂(f u, f v) / d₁(u, v) as a reduced fraction; `None` when infinite.
    pub forward: Option<(u32, u32)>,
    pub backward: Option<(u32, u32)>,
}

fn lipschitz(g1: &SimpleGraph, g2: &SimpleGraph, f: &[usize]) -> Option<(u32, u32)> {
    let d2: Vec<Vec<u32>> = (0..g2.n()).map(|v| g2.bfs(v)).collect();
    let mut best = (0u32, 1u32);
    for u in 0..g1.n() {
        let d1 = g1.bfs(u);
        for v in 0..g1.n() {
            if u == v || d1[v] == UNREACHED {
                continue;
            }
            let num = d2[f[u]][f[v]];
            if num == UNREACHED {
                return None;
            }
            if num as u64 * best.1 as u64 > best.0 as u64 * d1[v] as u64 {
                best = (num, d1[v]);
            }
        }
    }
    let g = gcd(best.0, best.1).max(1);
    Some((best.0 / g, best.1 / g))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Lipschitz constants of f and f⁻¹ for a bijection f commuting with projections.
pub fn lipschitz_constants(g1: &GluedGraph, g2: &GluedGraph, f: &[usize]) -> Result<LipschitzReport> {
    if f.len() != g1.graph.n() || g1.graph.n() != g2.graph.n() {
        return Err(precondition("vertex counts differ"));
    }
    let mut inv = vec![usize::MAX; f.len()];
    for (u, &v) in f.iter().enumerate() {
        g2.graph.check_vertex(v)?;
        if g1.projection[u] != g2.projection[v] {
            return Err(precondition(format!("map does not commute with projections at {u}")));
        }
        inv[v] = u;
    }
    if inv.contains(&usize::MAX) {
        return Err(precondition("map is not a bijection"));
    }
    Ok(LipschitzReport { map: f.to_vec(), forward: lipschitz(&g1.graph, &g2.graph, f), backward: lipschitz(&g2.graph, &g1.graph, &inv) })
}

/// Matches fibers in vertex order and reports both Lipschitz constants.
pub fn bilipschitz_compare(g1: &GluedGraph, g2: &GluedGraph) -> Result<LipschitzReport> {
    if g1.base.n() != g2.base.n() {
        return Err(precondition("glued graphs lie over different bases"));
    }
    let (f1, f2) = (g1.fibers(), g2.fibers());
    let mut f = vec![usize::MAX; g1.graph.n()];
    for (a, b) in f1.iter().zip(&f2) {
        if a.len() != b.len() {
            return Err(precondition("fiber sizes differ"));
        }
        for (&u, &v) in a.iter().zip(b) {
            f[u] = v;
        }
    }
    lipschitz_constants(g1, g2, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::cycle;

    fn zn_set(n: u64, xs: &[i64]) -> GenSet {
        GenSet::symmetric_closure(&Group::Cyclic(n), &xs.iter().map(|&x| Elem::Int(x)).collect::<Vec<_>>()).unwrap()
    }

    fn even(e: &Elem) -> bool {
        matches!(e, Elem::Int(x) if x % 2 == 0)
    }

    #[test]
    fn x0_small() {
        let mut b = Budget::default();
        let x0 = build_x0(&Group::Cyclic(4), &zn_set(4, &[1, 2]), &even, &mut b).unwrap();
        assert_eq!(x0.graph.n(), 8);
        assert_eq!(x0.count(EdgeKind::Vertical), 4);
        let (u, v) = (0, 1);
        assert_eq!(x0.graph.edge_triangle_count(u, v).unwrap(), 2 * 2);
    }

    #[test]
    fn xtilde_over_c4_points() {
        let x = cycle(4);
        let pb = PartitionedBase::new(x, SimpleGraph::empty(1), (0..4).map(|i| vec![i]).collect()).unwrap();
        let xt = build_xtilde(&pb, &SimpleGraph::empty(2), &[0, 0]).unwrap();
        assert_eq!(xt.graph.n(), 8);
        assert_eq!(xt.count(EdgeKind::Vertical), 4);
        assert_eq!(xt.count(EdgeKind::Outer), 16);
        let x0 = build_x0(&Group::Cyclic(4), &zn_set(4, &[1]), &|e| matches!(e, Elem::Int(0)), &mut Budget::default()).unwrap();
        assert!(crate::graph::find_isomorphism(&xt.graph, &x0.graph, Default::default(), &mut Budget::default()).unwrap().is_some());
    }

    #[test]
    fn triangle_conditions() {
        let t = zn_set(11, &[1, 2, 3, 4, 5]);
        let c = check_cayley_triangle_condition(&Group::Cyclic(11), &t, &zn_set(11, &[1])).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds, c.margin), (9, 7, false, -3));
        let c = check_cayley_triangle_condition(&Group::Cyclic(16), &zn_set(16, &[2, 3]), &zn_set(16, &[2])).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn marking_genset_on_integers() {
        let z = Group::FreeAbelian(1);
        let t1 = GenSet::symmetric_closure(&z, &[Elem::Vec(vec![1]), Elem::Vec(vec![2])]).unwrap();
        let inz = |e: &Elem| matches!(e, Elem::Vec(v) if v[0] % 2 == 0);
        let cands: Vec<Elem> = (1..=32).map(|k| Elem::Vec(vec![k])).collect();
        let m = choose_marking_genset(&z, &inz, &t1, &cands, &mut Budget::default()).unwrap();
        assert_eq!(m.added, vec![Elem::Vec(vec![7])]);
        assert_eq!((m.max_n3, m.outside_g), (2, 4));
        let again = choose_marking_genset(&z, &inz, &m.t, &cands, &mut Budget::default()).unwrap();
        assert!(again.added.is_empty());
        let z6 = Group::Cyclic(6);
        let cands: Vec<Elem> = (0..6).map(Elem::Int).collect();
        assert!(choose_marking_genset(&z6, &even, &zn_set(6, &[1, 2]), &cands, &mut Budget::default()).is_err());
    }

    #[test]
    fn c6_has_no_fibers() {
        assert!(detect_vertical_relation(&cycle(6)).is_err());
    }

    fn carry_xq(h: u64, t: &GenSet, budget: &mut Budget) -> (GluedGraph, GluedGraph) {
        let m = h / 2;
        let c = crate::cocycle::two_covering_from_cocycle(&crate::cocycle::carry_cocycle(m).unwrap(), &zn_set(m, &[1]), budget).unwrap();
        let q: Vec<Elem> = c.total.elements.iter().map(|e| match e {
            Elem::Ext(_, g) => match **g { Elem::Int(k) => Elem::Int(2 * k), _ => unreachable!() },
            _ => unreachable!(),
        }).collect();
        let hg = Group::Cyclic(h);
        (build_x0(&hg, t, &even, budget).unwrap(), build_xq(&hg, t, &even, &c.total.graph, &q, budget).unwrap())
    }

    #[test]
    fn xq_on_z8() {
        let mut b = Budget::default();
        let (_, xq) = carry_xq(8, &zn_set(8, &[1, 2]), &mut b);
        assert_eq!(xq.graph.n(), 16);
        assert!(xq.graph.is_connected());
        for f in xq.fibers() {
            assert_eq!(f.len(), 2);
            assert!(xq.graph.has_edge(f[0], f[1]));
        }
    }

    #[test]
    fn z16_instance() {
        let mut b = Budget::default();
        let t = zn_set(16, &[2, 3]);
        let (x0, xq) = carry_xq(16, &t, &mut b);
        for (&(u, v), &k) in &x0.kinds {
            if k == EdgeKind::Vertical {
                assert_eq!(x0.graph.edge_triangle_count(u, v).unwrap(), 4);
            }
        }
        for g in [&x0, &xq] {
            let rel = detect_vertical_relation(&g.graph).unwrap();
            let mut want = g.fibers();
            want.sort();
            let mut got = rel.fibers.clone();
            got.sort();
            assert_eq!(got, want);
            let aut = crate::graph::automorphism_group(&g.graph, false, &mut b).unwrap();
            for p in &aut.generators {
                for (&(u, v), &k) in &g.kinds {
                    assert_eq!(k == EdgeKind::Vertical, g.kind(p[u], p[v]) == Some(EdgeKind::Vertical));
                }
            }
        }
        assert!(matches!(admissible_edge_analysis(&x0, &mut b).unwrap(), AdmissibleOutcome::Disconnecting { .. }));
        assert!(matches!(admissible_edge_analysis(&xq, &mut b).unwrap(), AdmissibleOutcome::None { .. }));
        let r = bilipschitz_compare(&x0, &xq).unwrap();
        for c in [r.forward.unwrap(), r.backward.unwrap()] {
            assert!(c.0 <= 2 * c.1);
        }
        let same = bilipschitz_compare(&x0, &x0).unwrap();
        assert_eq!(same.forward, Some((1, 1)));
        let mut swap: Vec<usize> = (0..x0.graph.n()).collect();
        swap.swap(0, 1);
        let r = lipschitz_constants(&x0, &x0, &swap).unwrap();
        assert_eq!(r.forward, Some((2, 1)));
    }
}
