//! Extension radii, germs, transport maps and covering propagation.

use super::covering::{verify_covering, verify_covering_on, CoveringMap, CoveringViolation};
use crate::error::{precondition, Budget, Error, Result};
use crate::graph::{automorphism_group, ball, empirical_rc, IsoOptions, IsoSearch, SimpleGraph, UNREACHED};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type PartialMap = BTreeMap<usize, usize>;

/// Rooted isometries B_X(xc, r) → B_Y(yc, r) extending `fixed`, as ambient vertex maps.
#[allow(clippy::too_many_arguments)]
pub fn isometries_between(
    x: &SimpleGraph,
    xc: usize,
    y: &SimpleGraph,
    yc: usize,
    r: u32,
    fixed: &[(usize, usize)],
    limit: usize,
    budget: &mut Budget,
) -> Result<Vec<PartialMap>> {
    let b1 = ball(x, xc, r)?;
    let b2 = ball(y, yc, r)?;
    if b1.len() != b2.len() || b1.carrier.edge_count() != b2.carrier.edge_count() {
        return Ok(Vec::new());
    }
    let labels = x.has_edge_labels() && y.has_edge_labels();
    let s = IsoSearch::new(&b1.carrier, &b2.carrier, IsoOptions { respect_edge_labels: labels, respect_vertex_labels: false, use_triangles: true });
    let mut ca: Vec<u32> = b1.intrinsic_dist.iter().map(|&d| d.saturating_add(1)).collect();
    let mut cb: Vec<u32> = b2.intrinsic_dist.iter().map(|&d| d.saturating_add(1)).collect();
    ca[b1.root] = 0;
    cb[b2.root] = 0;
    let mut fresh = ca.iter().chain(&cb).copied().filter(|&c| c != u32::MAX).max().unwrap_or(0) + 1;
    for &(a, b) in fixed {
        let Some(i) = b1.carrier_index(a) else { continue };
        let Some(j) = b2.carrier_index(b) else { return Ok(Vec::new()) };
        ca[i] = fresh;
        cb[j] = fresh;
        fresh += 1;
    }
    let maps = s.collect(ca, cb, limit, budget)?;
    Ok(maps.into_iter().map(|m| m.iter().enumerate().map(|(i, &j)| (b1.ambient[i], b2.ambient[j])).collect()).collect())
}

fn restrict(m: &PartialMap, dom: &[usize]) -> PartialMap {
    dom.iter().filter_map(|v| m.get(v).map(|&w| (*v, w))).collect()
}

fn extends_to_automorphism(x: &SimpleGraph, pairs: &PartialMap, budget: &mut Budget) -> Result<bool> {
    let s = IsoSearch::new(x, x, IsoOptions { respect_edge_labels: x.has_edge_labels(), ..Default::default() });
    let mut ca = vec![0u32; x.n()];
    let mut cb = vec![0u32; x.n()];
    for (c, (&a, &b)) in pairs.iter().enumerate() {
        ca[a] = c as u32 + 1;
        cb[b] = c as u32 + 1;
    }
    Ok(s.first(ca, cb, budget)?.is_some())
}

/// Least r₂ ≥ r such that every rooted isometry from a radius-r₂ ball into X
/// agrees on the radius-r ball with an automorphism. Centers default to one
/// vertex per Aut-orbit.
pub fn extension_radius(x: &SimpleGraph, r: u32, centers: Option<&[usize]>, budget: &mut Budget) -> Result<Option<u32>> {
    extension_radius_impl(x, r, centers, false, budget)
}

/// As `extension_radius` at one center, testing only self-isometries of
/// B(xc, r₂). For a chunk of a vertex-transitive graph this is the relevant
/// check, since translations are not automorphisms of the chunk.
pub fn extension_radius_at(x: &SimpleGraph, xc: usize, r: u32, budget: &mut Budget) -> Result<Option<u32>> {
    extension_radius_impl(x, r, Some(&[xc]), true, budget)
}

fn extension_radius_impl(x: &SimpleGraph, r: u32, centers: Option<&[usize]>, self_only: bool, budget: &mut Budget) -> Result<Option<u32>> {
    let reps: Vec<usize> = match centers {
        Some(c) => c.to_vec(),
        None => {
            let orbits = automorphism_group(x, x.has_edge_labels(), budget)?.orbits(x.n());
            (0..x.n()).filter(|&v| !orbits[..v].contains(&orbits[v])).collect()
        }
    };
    let diam = x.diameter().ok_or_else(|| precondition("graph must be connected"))?;
    for r2 in r..=diam.max(r) {
        let mut ok = true;
        let mut checked: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        'scan: for &xc in &reps {
            let inner = ball(x, xc, r)?.ambient;
            let targets: Vec<usize> = if self_only { vec![xc] } else { (0..x.n()).collect() };
            for yc in targets {
                for psi in isometries_between(x, xc, x, yc, r2, &[], usize::MAX, budget)? {
                    let part = restrict(&psi, &inner);
                    if !checked.insert(part.iter().map(|(&a, &b)| (a, b)).collect()) {
                        continue;
                    }
                    if !extends_to_automorphism(x, &part, budget)? {
                        ok = false;
                        break 'scan;
                    }
                }
            }
        }
        if ok {
            return Ok(Some(r2));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Germ {
    pub center: usize,
    /// Defined on B_X(center, r₁).
    pub map: PartialMap,
    /// Isometry on B_X(center, r₂) restricting to `map`.
    pub witness: PartialMap,
}

impl Germ {
    pub fn image_center(&self) -> usize {
        self.map[&self.center]
    }
}

/// All germs at `xc`, in order of image center then search order.
pub fn germ_set(x: &SimpleGraph, y: &SimpleGraph, xc: usize, r1: u32, r2: u32, budget: &mut Budget) -> Result<Vec<Germ>> {
    if r1 > r2 {
        return Err(precondition("r1 must not exceed r2"));
    }
    let inner = ball(x, xc, r1)?.ambient;
    let mut out = Vec::new();
    for yc in 0..y.n() {
        let mut seen = BTreeSet::new();
        for psi in isometries_between(x, xc, y, yc, r2, &[], usize::MAX, budget)? {
            let map = restrict(&psi, &inner);
            if seen.insert(map.clone()) {
                out.push(Germ { center: xc, map, witness: psi });
            }
        }
    }
    Ok(out)
}

/// The unique germ at `to` agreeing with `germ` on B(to, r_c).
#[allow(clippy::too_many_arguments)]
pub fn transport_germ(
    x: &SimpleGraph,
    y: &SimpleGraph,
    germ: &Germ,
    to: usize,
    r_c: u32,
    r1: u32,
    r2: u32,
    budget: &mut Budget,
) -> Result<Germ> {
    let core = ball(x, to, r_c)?.ambient;
    let mut fixed = Vec::new();
    for v in &core {
        match germ.map.get(v) {
            Some(&w) => fixed.push((*v, w)),
            None => return Err(precondition(format!("B({to}, r_c) is not inside the germ's domain at {}", germ.center))),
        }
    }
    let yc = germ.map[&to];
    let inner = ball(x, to, r1)?.ambient;
    let mut found: Vec<Germ> = Vec::new();
    for psi in isometries_between(x, to, y, yc, r2, &fixed, 1000, budget)? {
        let map = restrict(&psi, &inner);
        if !found.iter().any(|g| g.map == map) {
            found.push(Germ { center: to, map, witness: psi });
        }
        if found.len() > 1 {
            break;
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::Failed(format!("no germ at {to} extends the germ at {}: Y is not r2-locally X there", germ.center))),
        _ => Err(Error::Failed(format!("several germs at {to} agree on B({to}, {r_c}): r_c too small or stabilizer nontrivial"))),
    }
}

#[derive(Clone, Debug, Default)]
pub struct PropagationParams {
    pub r_c: Option<u32>,
    pub k: usize,
    pub r2: Option<u32>,
    /// Vertices where germs are computed; all when `None`.
    pub interior: Option<Vec<bool>>,
}

#[derive(Clone, Debug, Serialize)]
pub enum PropagationOutcome {
    Covering(CoveringMap),
    /// Covering of the induced subgraph on `domain` (star-bijective away from its boundary).
    PartialCovering { domain: Vec<usize>, covering: CoveringMap },
    Obstruction { cycle: Vec<usize>, edge: (usize, usize) },
    NotCovering(CoveringViolation),
}

#[derive(Clone, Debug, Serialize)]
pub struct Propagation {
    pub r_c: u32,
    pub t: u32,
    pub r1: u32,
    pub r2: u32,
    pub seed_radius: u32,
    /// The seed radius is below r₂ + t.
    pub seed_radius_short: bool,
    /// x ↦ φ_x(x); `None` outside the domain or after an obstruction.
    pub map: Vec<Option<usize>>,
    #[serde(skip)]
    pub germs: Vec<Option<Germ>>,
    pub outcome: PropagationOutcome,
}

/// Germ transport from `x0` along a BFS tree, closure check on every other
/// edge, then covering verification.
pub fn propagate_covering(x: &SimpleGraph, y: &SimpleGraph, x0: usize, seed: &PartialMap, params: &PropagationParams, budget: &mut Budget) -> Result<Propagation> {
    x.check_vertex(x0)?;
    let r_c = match params.r_c {
        Some(r) => r,
        None => empirical_rc(x, budget)?,
    };
    let t = params.k.div_ceil(2) as u32;
    let r1 = r_c + t;
    let r2 = match params.r2 {
        Some(r) => r.max(r1),
        None if params.interior.is_some() => extension_radius_at(x, x0, r1, budget)?
            .ok_or_else(|| Error::Failed(format!("no extension radius for r = {r1} up to the diameter")))?,
        None => extension_radius(x, r1, None, budget)?
            .ok_or_else(|| Error::Failed(format!("no extension radius for r = {r1} up to the diameter")))?,
    };
    let dx = x.bfs(x0);
    let mut seed_radius = 0;
    while (0..x.n()).filter(|&v| dx[v] != UNREACHED && dx[v] <= seed_radius + 1).all(|v| seed.contains_key(&v)) && seed_radius < x.n() as u32 {
        seed_radius += 1;
    }
    if !seed.contains_key(&x0) {
        return Err(precondition("seed must be defined at its center"));
    }
    if seed_radius < r2 {
        return Err(precondition(format!("seed radius {seed_radius} is below r2 = {r2}")));
    }
    let b2 = ball(x, x0, r2)?.ambient;
    let witness = restrict(seed, &b2);
    let fixed: Vec<(usize, usize)> = witness.iter().map(|(&a, &b)| (a, b)).collect();
    if isometries_between(x, x0, y, seed[&x0], r2, &fixed, 1, budget)?.is_empty() {
        return Err(precondition("seed is not a rooted isometry on B(x0, r2)"));
    }
    let g0 = Germ { center: x0, map: restrict(seed, &ball(x, x0, r1)?.ambient), witness };

    let inside = |v: usize| params.interior.as_ref().is_none_or(|i| i[v]);
    let n = x.n();
    let mut germs: Vec<Option<Germ>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![u32::MAX; n];
    depth[x0] = 0;
    germs[x0] = Some(g0);
    let mut q = VecDeque::from([x0]);
    while let Some(u) = q.pop_front() {
        for &v in x.neighbors(u) {
            if inside(v) && depth[v] == u32::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = u;
                let g = transport_germ(x, y, germs[u].as_ref().unwrap(), v, r_c, r1, r2, budget)?;
                germs[v] = Some(g);
                q.push_back(v);
            }
        }
    }
    let mut out = Propagation {
        r_c,
        t,
        r1,
        r2,
        seed_radius,
        seed_radius_short: seed_radius < r2 + t,
        map: vec![None; n],
        germs,
        outcome: PropagationOutcome::Obstruction { cycle: vec![], edge: (0, 0) },
    };
    for (u, v) in x.edges() {
        if depth[u] == u32::MAX || depth[v] == u32::MAX || parent[v] == u || parent[u] == v {
            continue;
        }
        let moved = transport_germ(x, y, out.germs[u].as_ref().unwrap(), v, r_c, r1, r2, budget)?;
        if moved.map != out.germs[v].as_ref().unwrap().map {
            out.outcome = PropagationOutcome::Obstruction { cycle: tree_cycle(&parent, &depth, u, v), edge: (u, v) };
            return Ok(out);
        }
    }
    for v in 0..n {
        out.map[v] = out.germs[v].as_ref().map(|g| g.map[&v]);
    }
    out.outcome = if out.map.iter().all(Option::is_some) {
        let m: Vec<usize> = out.map.iter().map(|v| v.unwrap()).collect();
        match verify_covering(&m, x, y)? {
            Ok(c) => PropagationOutcome::Covering(c),
            Err(v) => PropagationOutcome::NotCovering(v),
        }
    } else {
        let domain: Vec<usize> = (0..n).filter(|&v| out.map[v].is_some()).collect();
        let sub = x.induced(&domain);
        let m: Vec<usize> = domain.iter().map(|&v| out.map[v].unwrap()).collect();
        let interior: Vec<bool> = domain.iter().map(|&v| x.neighbors(v).iter().all(|&w| out.map[w].is_some())).collect();
        match verify_covering_on(&m, &sub, y, Some(&interior))? {
            Ok(c) => PropagationOutcome::PartialCovering { domain, covering: c },
            Err(mut viol) => {
                viol.vertex = domain[viol.vertex];
                PropagationOutcome::NotCovering(viol)
            }
        }
    };
    Ok(out)
}

/// Cycle through the tree paths from `u` and `v` to their common ancestor, closed by the edge.
fn tree_cycle(parent: &[usize], depth: &[u32], u: usize, v: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let (mut left, mut right) = (vec![a], vec![b]);
    while a != b {
        if depth[a] >= depth[b] {
            a = parent[a];
            left.push(a);
        } else {
            b = parent[b];
            right.push(b);
        }
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn b() -> Budget {
        Budget::new(50_000_000)
    }

    #[test]
    fn extension_radii() {
        let (z2, _) = lattice_chunk(8);
        assert_eq!(extension_radius_at(&z2, 0, 1, &mut b()).unwrap(), Some(2));
        assert_eq!(extension_radius(&cycle(6), 1, None, &mut b()).unwrap(), Some(1));
        assert_eq!(extension_radius(&torus(8, 8), 1, None, &mut b()).unwrap(), Some(2));
        assert_eq!(extension_radius(&path(5), 1, Some(&[2]), &mut b()).unwrap(), Some(2));
    }

    #[test]
    fn germ_counts() {
        let (zc, _) = lattice_chunk(1);
        let zline = path(9);
        let gs = germ_set(&zline, &cycle(12), 4, 1, 2, &mut b()).unwrap();
        assert_eq!(gs.len(), 24);
        assert!((0..12).all(|y| gs.iter().filter(|g| g.image_center() == y).count() == 2));
        let (z2, _) = lattice_chunk(5);
        let gs = germ_set(&z2, &torus(8, 8), 0, 1, 2, &mut b()).unwrap();
        assert_eq!(gs.len(), 64 * 8);
        let tri = complete(3);
        assert!(germ_set(&zc, &tri, 0, 1, 1, &mut b()).unwrap().is_empty());
    }

    #[test]
    fn transport_round_trip_on_torus() {
        let (z2, _) = lattice_chunk(6);
        let t = torus(8, 8);
        let gs = germ_set(&z2, &t, 0, 2, 2, &mut b()).unwrap();
        let next = z2.neighbors(0)[0];
        // r_c = 0 leaves the point stabilizer free
        assert!(transport_germ(&z2, &t, &gs[0], next, 0, 2, 2, &mut b()).is_err());
        for g in gs.iter().filter(|g| g.image_center() == 0) {
            let there = transport_germ(&z2, &t, g, next, 1, 2, 2, &mut b()).unwrap();
            let back = transport_germ(&z2, &t, &there, 0, 1, 2, 2, &mut b()).unwrap();
            assert_eq!(back.map, g.map);
        }
    }

    #[test]
    fn cycle_propagation() {
        let x = cycle(12);
        let rot: PartialMap = (0..12).map(|v| (v, (v + 5) % 12)).collect();
        let p = propagate_covering(&x, &x, 0, &rot, &PropagationParams { k: 3, ..Default::default() }, &mut b()).unwrap();
        match p.outcome {
            PropagationOutcome::Covering(c) => assert_eq!((c.fiber_size, c.map[0]), (Some(1), 5)),
            other => panic!("{other:?}"),
        }
        // C12 over C8 wraps the wrong number of times
        let y = cycle(8);
        let seed: PartialMap = [9, 10, 11, 0, 1, 2, 3].iter().map(|&v| (v, (v as i64 - if v > 6 { 12 } else { 0 }).rem_euclid(8) as usize)).collect();
        let p = propagate_covering(&x, &y, 0, &seed, &PropagationParams { k: 3, r_c: Some(1), r2: Some(3), interior: None }, &mut b()).unwrap();
        match p.outcome {
            PropagationOutcome::Obstruction { cycle, .. } => assert_eq!(cycle.len(), 12),
            other => panic!("{other:?}"),
        }
    }
}
