//! Covering extension along a tree decomposition.

use super::covering::{verify_covering_on, CoveringMap, CoveringViolation};
use super::germ::{isometries_between, PartialMap};
use crate::error::{malformed, Budget, Error, Result};
use crate::graph::{ball, SimpleGraph, UNREACHED};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    pub tree: SimpleGraph,
    pub pieces: Vec<Vec<usize>>,
    pub r1: u32,
}

pub fn validate_tree_decomposition(x: &SimpleGraph, d: &TreeDecomposition) -> Result<std::result::Result<(), String>> {
    let t = &d.tree;
    if d.pieces.len() != t.n() {
        return Err(malformed("one piece per tree vertex is required"));
    }
    if !t.is_connected() || t.edge_count() + 1 != t.n() {
        return Ok(Err("the decomposition graph is not a tree".into()));
    }
    let mut covered = vec![false; x.n()];
    for (u, p) in d.pieces.iter().enumerate() {
        if p.is_empty() {
            return Ok(Err(format!("piece {u} is empty")));
        }
        for &v in p {
            x.check_vertex(v)?;
            covered[v] = true;
        }
        for &v in p {
            let dist = x.bfs(v);
            if let Some(&w) = p.iter().find(|&&w| dist[w] == UNREACHED || dist[w] > d.r1) {
                return Ok(Err(format!("piece {u} has diameter above {} (between {v} and {w})", d.r1)));
            }
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Ok(Err(format!("vertex {v} lies in no piece")));
    }
    let sets: Vec<BTreeSet<usize>> = d.pieces.iter().map(|p| p.iter().copied().collect()).collect();
    for u in 0..t.n() {
        for v in u + 1..t.n() {
            let meet = !sets[u].is_disjoint(&sets[v]);
            if meet != t.has_edge(u, v) {
                let why = if meet { "intersect without a tree edge" } else { "are tree neighbours but disjoint" };
                return Ok(Err(format!("pieces {u} and {v} {why}")));
            }
        }
    }
    Ok(Ok(()))
}

#[derive(Clone, Debug, Serialize)]
pub enum TreeExtension {
    Covering(CoveringMap),
    /// Two pieces disagree on a shared vertex.
    Conflict { tree_edge: (usize, usize), vertex: usize },
    NotCovering(CoveringViolation),
}

fn thicken(x: &SimpleGraph, piece: &[usize], r: u32) -> Vec<usize> {
    let mut d = vec![UNREACHED; x.n()];
    let mut q = VecDeque::new();
    for &v in piece {
        d[v] = 0;
        q.push_back(v);
    }
    while let Some(u) = q.pop_front() {
        if d[u] == r {
            continue;
        }
        for &w in x.neighbors(u) {
            if d[w] == UNREACHED {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    (0..x.n()).filter(|&v| d[v] != UNREACHED).collect()
}

/// Walks the tree from the pieces meeting B(x₀, r), extending at each new
/// piece by an isometry of radius r + r₂ that agrees with its parent's map on
/// the radius-r ball, then glues the pieces' maps.
#[allow(clippy::too_many_arguments)]
pub fn extend_cover_along_tree(
    x: &SimpleGraph,
    d: &TreeDecomposition,
    y: &SimpleGraph,
    x0: usize,
    seed: &PartialMap,
    r: u32,
    r2: u32,
    interior: Option<&[bool]>,
    budget: &mut Budget,
) -> Result<TreeExtension> {
    if let Err(why) = validate_tree_decomposition(x, d)? {
        return Err(malformed(format!("invalid tree decomposition: {why}")));
    }
    if r < d.r1 {
        return Err(crate::error::precondition("r must be at least r1"));
    }
    let big = r + r2;
    let near: BTreeSet<usize> = ball(x, x0, r)?.ambient.into_iter().collect();
    let t = &d.tree;
    let mut phi: Vec<Option<PartialMap>> = vec![None; t.n()];
    let mut q = VecDeque::new();
    for u in 0..t.n() {
        if d.pieces[u].iter().any(|v| near.contains(v)) {
            let dom = thicken(x, &d.pieces[u], r2);
            let m: PartialMap = dom.iter().filter_map(|v| seed.get(v).map(|&w| (*v, w))).collect();
            if let Some(v) = d.pieces[u].iter().find(|v| !m.contains_key(v)) {
                return Err(crate::error::precondition(format!("seed undefined at {v} in initial piece {u}")));
            }
            phi[u] = Some(m);
            q.push_back(u);
        }
    }
    if q.is_empty() {
        return Err(crate::error::precondition("no piece meets B(x0, r)"));
    }
    while let Some(u) = q.pop_front() {
        for &v in t.neighbors(u) {
            if phi[v].is_some() {
                continue;
            }
            let pu = phi[u].as_ref().unwrap();
            let shared = *d.pieces[u].iter().filter(|w| d.pieces[v].contains(w)).min().unwrap();
            let fixed: Vec<(usize, usize)> = ball(x, shared, r)?.ambient.iter().filter_map(|w| pu.get(w).map(|&z| (*w, z))).collect();
            let psi = isometries_between(x, shared, y, pu[&shared], big, &fixed, 1, budget)?
                .pop()
                .ok_or_else(|| Error::Failed(format!("no isometry extends piece {u} across tree edge ({u},{v})")))?;
            let dom = thicken(x, &d.pieces[v], r2);
            phi[v] = Some(dom.iter().filter_map(|w| psi.get(w).map(|&z| (*w, z))).collect());
            q.push_back(v);
        }
    }
    let mut glued: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for u in 0..t.n() {
        let pu = phi[u].as_ref().unwrap();
        for &v in &d.pieces[u] {
            let img = *pu.get(&v).ok_or_else(|| Error::Failed(format!("piece {u} map misses {v}")))?;
            match glued.get(&v) {
                Some(&(w, other)) if w != img => return Ok(TreeExtension::Conflict { tree_edge: (other.min(u), other.max(u)), vertex: v }),
                Some(_) => {}
                None => {
                    glued.insert(v, (img, u));
                }
            }
        }
    }
    let map: Vec<usize> = (0..x.n()).map(|v| glued[&v].0).collect();
    Ok(match verify_covering_on(&map, x, y, interior)? {
        Ok(c) => TreeExtension::Covering(c),
        Err(v) => TreeExtension::NotCovering(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn path_windows() -> TreeDecomposition {
        TreeDecomposition { tree: path(4), pieces: vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6], vec![6, 7, 8]], r1: 2 }
    }

    fn children_pieces(g: &SimpleGraph) -> TreeDecomposition {
        // rooted at 0; piece of u is u with its children
        let d = g.bfs(0);
        let pieces = (0..g.n()).map(|u| std::iter::once(u).chain(g.neighbors(u).iter().copied().filter(|&w| d[w] > d[u])).collect()).collect();
        TreeDecomposition { tree: g.clone(), pieces, r1: 2 }
    }

    #[test]
    fn validation() {
        let p9 = path(9);
        assert!(validate_tree_decomposition(&p9, &path_windows()).unwrap().is_ok());
        let mut bad = path_windows();
        bad.pieces[1] = vec![3];
        assert!(validate_tree_decomposition(&p9, &bad).unwrap().is_err());
        // star with 5 subdivided rays
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((0, 1 + 2 * i));
            e.push((1 + 2 * i, 2 + 2 * i));
        }
        let star = SimpleGraph::from_edges(11, e).unwrap();
        assert!(validate_tree_decomposition(&star, &children_pieces(&star)).unwrap().is_ok());
    }

    #[test]
    fn path_identity() {
        let p9 = path(9);
        let seed: PartialMap = (0..9).map(|v| (v, v)).collect();
        match extend_cover_along_tree(&p9, &path_windows(), &p9, 4, &seed, 2, 2, None, &mut Budget::default()).unwrap() {
            TreeExtension::Covering(c) => assert_eq!(c.map, (0..9).collect::<Vec<_>>()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn binary_tree_relabelled() {
        let x = binary_tree(4);
        // swap the two subtrees under vertex 1 and relabel
        let n = x.n();
        let mut sigma: Vec<usize> = (0..n).collect();
        let (mut a, mut b) = (vec![3], vec![4]);
        while !a.is_empty() {
            for (&u, &v) in a.iter().zip(&b) {
                sigma.swap(u, v);
            }
            a = a.iter().flat_map(|&u| [2 * u + 1, 2 * u + 2]).filter(|&u| u < n).collect();
            b = b.iter().flat_map(|&u| [2 * u + 1, 2 * u + 2]).filter(|&u| u < n).collect();
        }
        let y = SimpleGraph::from_edges(n, x.edges().into_iter().map(|(u, v)| (sigma[u], sigma[v]))).unwrap();
        let seed: PartialMap = ball(&x, 0, 3).unwrap().ambient.into_iter().map(|v| (v, sigma[v])).collect();
        match extend_cover_along_tree(&x, &children_pieces(&x), &y, 0, &seed, 2, 1, None, &mut Budget::default()).unwrap() {
            TreeExtension::Covering(c) => assert_eq!(c.fiber_size, Some(1)),
            other => panic!("{other:?}"),
        }
    }
}
