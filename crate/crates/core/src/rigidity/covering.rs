use crate::error::{precondition, Budget, Result};
use crate::graph::perm::{self, Perm};
use crate::graph::{automorphism_group_with, ball, AutOptions, SimpleGraph};
use serde::Serialize;
use std::collections::{HashSet, VecDeque};

#[derive(Clone, Debug, Serialize)]
pub struct CoveringMap {
    /// Target vertex per source vertex.
    pub map: Vec<usize>,
    pub fiber_size: Option<usize>,
    /// Largest R with the map injective on every checked ball B(z, R).
    pub injectivity_radius: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringViolation {
    pub vertex: usize,
    pub reason: String,
}

pub fn verify_covering(map: &[usize], z: &SimpleGraph, x: &SimpleGraph) -> Result<std::result::Result<CoveringMap, CoveringViolation>> {
    verify_covering_on(map, z, x, None)
}

/// Star bijectivity is required at `interior` vertices (all when `None`);
/// elsewhere the map must still send edges to edges injectively on stars.
pub fn verify_covering_on(
    map: &[usize],
    z: &SimpleGraph,
    x: &SimpleGraph,
    interior: Option<&[bool]>,
) -> Result<std::result::Result<CoveringMap, CoveringViolation>> {
    if map.len() != z.n() {
        return Err(precondition("covering map must be total on the source"));
    }
    if let Some(&bad) = map.iter().find(|&&t| t >= x.n()) {
        return Err(crate::Error::UnknownVertex(bad));
    }
    let inside = |v: usize| interior.is_none_or(|i| i[v]);
    for v in 0..z.n() {
        let p = map[v];
        let mut seen = HashSet::new();
        for &w in z.neighbors(v) {
            if !x.has_edge(p, map[w]) {
                return Ok(Err(CoveringViolation { vertex: v, reason: format!("edge {{{v},{w}}} maps to non-edge {{{p},{}}}", map[w]) }));
            }
            if !seen.insert(map[w]) {
                return Ok(Err(CoveringViolation { vertex: v, reason: format!("two neighbours map to {}", map[w]) }));
            }
        }
        if inside(v) && seen.len() != x.degree(p) {
            return Ok(Err(CoveringViolation { vertex: v, reason: format!("star of {v} misses {} neighbours of {p}", x.degree(p) - seen.len()) }));
        }
    }
    let mut counts = vec![0usize; x.n()];
    for &t in map {
        counts[t] += 1;
    }
    let fiber_size = (interior.is_none() && counts.iter().all(|&c| c == counts[0] && c > 0)).then_some(counts[0]);
    let centers: Vec<usize> = (0..z.n()).filter(|&v| inside(v)).collect();
    let limit = z.diameter().unwrap_or(z.n() as u32);
    let mut r = 0;
    'grow: while r < limit {
        for &c in &centers {
            let b = ball(z, c, r + 1)?;
            let mut img = HashSet::new();
            if !b.ambient.iter().all(|&u| img.insert(map[u])) {
                break 'grow;
            }
        }
        r += 1;
    }
    Ok(Ok(CoveringMap { map: map.to_vec(), fiber_size, injectivity_radius: r }))
}

#[derive(Clone, Debug, Serialize)]
pub struct DeckQuotient {
    pub generators: Vec<Perm>,
    pub order: u128,
    pub free: bool,
    pub abelian: bool,
    /// Largest element order, when the group was small enough to enumerate.
    pub exponent: Option<u64>,
    /// Orbit id per source vertex.
    pub orbits: Vec<usize>,
    /// Whether orbit ↦ image is an isomorphism H\source → target.
    pub quotient_matches: bool,
}

pub fn deck_quotient(p: &CoveringMap, source: &SimpleGraph, target: &SimpleGraph, budget: &mut Budget) -> Result<DeckQuotient> {
    let opts = AutOptions { vertex_colors: Some(p.map.iter().map(|&t| t as u32).collect()), ..Default::default() };
    let aut = automorphism_group_with(source, &opts, budget)?;
    let n = source.n();
    let orbits = perm::orbit_partition(n, &aut.generators);
    let k = orbits.iter().copied().max().map_or(0, |m| m + 1);
    let mut size = vec![0u128; k];
    for &o in &orbits {
        size[o] += 1;
    }
    let free = size.iter().all(|&s| s == aut.order);
    let abelian = aut.generators.iter().all(|a| aut.generators.iter().all(|b| perm::then(a, b) == perm::then(b, a)));
    let exponent = (aut.order <= 100_000).then(|| element_exponent(&aut.generators, n));
    // orbit -> target vertex, well defined since p∘h = p
    let mut img = vec![usize::MAX; k];
    for v in 0..n {
        img[orbits[v]] = p.map[v];
    }
    let mut quotient_matches = k == target.n() && img.iter().collect::<HashSet<_>>().len() == k;
    if quotient_matches {
        let mut qe = HashSet::new();
        for (u, v) in source.edges() {
            if orbits[u] == orbits[v] {
                quotient_matches = false;
            }
            let (a, b) = (img[orbits[u]], img[orbits[v]]);
            qe.insert((a.min(b), a.max(b)));
        }
        quotient_matches &= qe.len() == target.edge_count() && qe.iter().all(|&(a, b)| target.has_edge(a, b));
    }
    Ok(DeckQuotient { generators: aut.generators, order: aut.order, free, abelian, exponent, orbits, quotient_matches })
}

fn element_exponent(gens: &[Perm], n: usize) -> u64 {
    let id = perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut q = VecDeque::from([id]);
    let mut best = 1;
    while let Some(g) = q.pop_front() {
        let mut x = g.clone();
        let mut o = 1;
        while !perm::is_identity(&x) {
            x = perm::then(&x, &g);
            o += 1;
        }
        best = best.max(o);
        for s in gens {
            let h = perm::then(&g, s);
            if seen.insert(h.clone()) {
                q.push_back(h);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn cycle_coverings() {
        let c8 = cycle(8);
        let c4 = cycle(4);
        let m: Vec<usize> = (0..8).map(|v| v % 4).collect();
        let p = verify_covering(&m, &c8, &c4).unwrap().unwrap();
        assert_eq!(p.fiber_size, Some(2));
        let d = deck_quotient(&p, &c8, &c4, &mut Budget::default()).unwrap();
        assert_eq!((d.order, d.free, d.quotient_matches), (2, true, true));
        let bad: Vec<usize> = (0..6).map(|v| v % 4).collect();
        let v = verify_covering(&bad, &cycle(6), &c4).unwrap().unwrap_err();
        assert_eq!(v.vertex, 0);
    }

    #[test]
    fn identity_has_trivial_deck_group() {
        let p = petersen();
        let id: Vec<usize> = (0..10).collect();
        let c = verify_covering(&id, &p, &p).unwrap().unwrap();
        let d = deck_quotient(&c, &p, &p, &mut Budget::default()).unwrap();
        assert_eq!(d.order, 1);
        assert!(d.quotient_matches);
    }

    #[test]
    fn lattice_chunk_onto_torus() {
        let (z2, pts) = lattice_chunk(6);
        let t = torus(8, 8);
        let m: Vec<usize> = pts.iter().map(|&(a, b)| (a.rem_euclid(8) * 8 + b.rem_euclid(8)) as usize).collect();
        let interior: Vec<bool> = pts.iter().map(|&(a, b)| a.abs() + b.abs() < 6).collect();
        let c = verify_covering_on(&m, &z2, &t, Some(&interior)).unwrap().unwrap();
        assert_eq!(c.injectivity_radius, 3);
        assert!(verify_covering(&m, &z2, &t).unwrap().is_err());
    }

    #[test]
    fn big_torus_deck_group() {
        let x = torus(16, 16);
        let y = torus(8, 8);
        let m: Vec<usize> = (0..256).map(|v| (v / 16 % 8) * 8 + v % 16 % 8).collect();
        let c = verify_covering(&m, &x, &y).unwrap().unwrap();
        assert_eq!(c.fiber_size, Some(4));
        let d = deck_quotient(&c, &x, &y, &mut Budget::default()).unwrap();
        assert_eq!((d.order, d.free, d.abelian, d.exponent, d.quotient_matches), (4, true, true, Some(2), true));
    }
}
