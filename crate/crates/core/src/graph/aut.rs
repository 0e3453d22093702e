use super::iso::{IsoOptions, IsoSearch};
use super::perm::{orbit, orbit_partition, schreier_sims_order, Perm};
use super::{ball, SimpleGraph};
use crate::error::{Budget, Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    pub generators: Vec<Perm>,
    pub order: u128,
    pub vertex_orbit_count: usize,
    pub base: Vec<usize>,
    /// Basic orbit length at each base point.
    pub orbit_sizes: Vec<usize>,
}

impl AutGroup {
    pub fn orbits(&self, n: usize) -> Vec<usize> {
        orbit_partition(n, &self.generators)
    }

    /// Order recomputed from the generators alone.
    pub fn schreier_sims_order(&self, n: usize) -> Option<u128> {
        schreier_sims_order(n, &self.generators)
    }
}

#[derive(Clone, Debug, Default)]
pub struct AutOptions {
    pub respect_edge_labels: bool,
    pub respect_vertex_labels: bool,
    pub vertex_colors: Option<Vec<u32>>,
    /// Vertices fixed pointwise.
    pub fixed: Vec<usize>,
}

pub fn automorphism_group(g: &SimpleGraph, respect_labels: bool, budget: &mut Budget) -> Result<AutGroup> {
    let opts = AutOptions { respect_edge_labels: respect_labels, respect_vertex_labels: respect_labels, ..Default::default() };
    automorphism_group_with(g, &opts, budget)
}

/// Generators and exact order by a bottom-up search over a refinement base.
pub fn automorphism_group_with(g: &SimpleGraph, opts: &AutOptions, budget: &mut Budget) -> Result<AutGroup> {
    let n = g.n();
    let iso = IsoOptions { respect_edge_labels: opts.respect_edge_labels, respect_vertex_labels: opts.respect_vertex_labels, use_triangles: false };
    let s = IsoSearch::new(g, g, iso);
    let (mut c0, _) = s.base_colors();
    if let Some(vc) = &opts.vertex_colors {
        let k = c0.iter().copied().max().unwrap_or(0) as u64 + 1;
        for v in 0..n {
            c0[v] = (vc[v] as u64 * k + c0[v] as u64) as u32;
        }
    }
    for &f in &opts.fixed {
        g.check_vertex(f)?;
    }
    let mut fresh = c0.iter().copied().max().map_or(0, |m| m + 1);
    for &f in &opts.fixed {
        c0[f] = fresh;
        fresh += 1;
    }

    // base by repeated individualisation
    let mut levels: Vec<(usize, Vec<u32>, Vec<usize>)> = Vec::new();
    let mut c = c0;
    loop {
        budget.tick()?;
        let mut d = c.clone();
        s.refine(&mut c, &mut d);
        let k = c.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut size = vec![0usize; k];
        let mut first = vec![usize::MAX; k];
        for v in 0..n {
            size[c[v] as usize] += 1;
            first[c[v] as usize] = first[c[v] as usize].min(v);
        }
        let Some(cell) = (0..k).filter(|&x| size[x] > 1).min_by_key(|&x| (size[x], first[x])) else { break };
        let b = first[cell];
        let cands: Vec<usize> = (0..n).filter(|&v| c[v] == cell as u32).collect();
        levels.push((b, c.clone(), cands));
        c[b] = k as u32;
    }

    let mut gens: Vec<Perm> = Vec::new();
    let mut orbit_sizes = vec![0; levels.len()];
    for i in (0..levels.len()).rev() {
        let (b, ref colors, ref cands) = levels[i];
        let fresh = colors.iter().copied().max().unwrap() + 1;
        let mut orb = orbit_of(b, &gens, n);
        let mut excluded = vec![false; n];
        for &x in cands {
            if orb[x] || excluded[x] {
                continue;
            }
            let mut ca = colors.clone();
            let mut cb = colors.clone();
            ca[b] = fresh;
            cb[x] = fresh;
            match s.first(ca, cb, budget)? {
                Some(p) => {
                    gens.push(p);
                    orb = orbit_of(b, &gens, n);
                }
                None => {
                    for y in orbit(x, &gens_or_identity(&gens, n)) {
                        excluded[y] = true;
                    }
                }
            }
        }
        orbit_sizes[i] = orb.iter().filter(|&&o| o).count();
    }
    let mut order: u128 = 1;
    for &o in &orbit_sizes {
        order = order.checked_mul(o as u128).ok_or(Error::Overflow)?;
    }
    let vertex_orbit_count = orbit_partition(n, &gens).iter().copied().max().map_or(0, |m| m + 1);
    Ok(AutGroup { generators: gens, order, vertex_orbit_count, base: levels.iter().map(|l| l.0).collect(), orbit_sizes })
}

fn gens_or_identity(gens: &[Perm], n: usize) -> Vec<Perm> {
    if gens.is_empty() {
        vec![(0..n).collect()]
    } else {
        gens.to_vec()
    }
}

fn orbit_of(b: usize, gens: &[Perm], n: usize) -> Vec<bool> {
    let mut o = vec![false; n];
    for y in orbit(b, &gens_or_identity(gens, n)) {
        o[y] = true;
    }
    o
}

/// Order of the pointwise stabilizer of B(v, r) in Aut(g).
pub fn local_stabilizer_probe(g: &SimpleGraph, v: usize, r: u32, budget: &mut Budget) -> Result<u128> {
    let b = ball(g, v, r)?;
    let opts = AutOptions { fixed: b.ambient.clone(), ..Default::default() };
    Ok(automorphism_group_with(g, &opts, budget)?.order)
}

/// Least r such that every vertex's radius-r ball has trivial pointwise stabilizer.
/// Only one vertex per Aut-orbit is probed.
pub fn empirical_rc(g: &SimpleGraph, budget: &mut Budget) -> Result<u32> {
    let aut = automorphism_group(g, false, budget)?;
    let orbits = aut.orbits(g.n());
    let mut reps = Vec::new();
    for v in 0..g.n() {
        if !orbits[..v].contains(&orbits[v]) {
            reps.push(v);
        }
    }
    let diam = g.diameter().unwrap_or(g.n() as u32);
    for r in 0..=diam {
        let mut all = true;
        for &v in &reps {
            if local_stabilizer_probe(g, v, r, budget)? != 1 {
                all = false;
                break;
            }
        }
        if all {
            return Ok(r);
        }
    }
    Ok(diam)
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    fn order(g: &SimpleGraph) -> u128 {
        automorphism_group(g, false, &mut Budget::default()).unwrap().order
    }

    #[test]
    fn named_orders() {
        assert_eq!(order(&cycle(4)), 8);
        assert_eq!(order(&cycle(7)), 14);
        assert_eq!(order(&complete(5)), 120);
        assert_eq!(order(&petersen()), 120);
        assert_eq!(order(&path(4)), 2);
        assert_eq!(order(&torus(8, 8)), 64 * 8);
        assert_eq!(order(&SimpleGraph::empty(4)), 24);
    }

    #[test]
    fn schreier_sims_agrees() {
        for g in [petersen(), torus(4, 6), binary_tree(3), complete(4)] {
            let a = automorphism_group(&g, false, &mut Budget::default()).unwrap();
            assert_eq!(a.schreier_sims_order(g.n()), Some(a.order));
            for p in &a.generators {
                assert!(g.is_automorphism(p, false));
            }
        }
    }

    #[test]
    fn stabilizer_probes() {
        let mut b = Budget::default();
        assert_eq!(local_stabilizer_probe(&torus(8, 8), 0, 1, &mut b).unwrap(), 1);
        assert_eq!(local_stabilizer_probe(&cycle(6), 0, 1, &mut b).unwrap(), 1);
        assert_eq!(local_stabilizer_probe(&complete(4), 0, 0, &mut b).unwrap(), 6);
        assert_eq!(empirical_rc(&torus(8, 8), &mut b).unwrap(), 1);
    }
}
