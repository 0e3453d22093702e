use super::iso::{IsoOptions, IsoSearch};
use super::{SimpleGraph, UNREACHED};
use crate::error::{precondition, Budget, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Rooted induced ball. Carrier vertex 0 is the root; carrier vertices are
/// listed in BFS order of the ambient graph.
#[derive(Clone, Debug)]
pub struct BallView {
    pub carrier: SimpleGraph,
    pub root: usize,
    pub radius: u32,
    /// Carrier index to ambient vertex.
    pub ambient: Vec<usize>,
    pub ambient_dist: Vec<u32>,
    /// Intrinsic distance from the root inside the carrier.
    pub intrinsic_dist: Vec<u32>,
}

impl BallView {
    pub fn from_parts(carrier: SimpleGraph, root: usize, radius: u32, ambient: Vec<usize>, ambient_dist: Vec<u32>) -> Self {
        let intrinsic_dist = carrier.bfs(root);
        BallView { carrier, root, radius, ambient, ambient_dist, intrinsic_dist }
    }

    pub fn len(&self) -> usize {
        self.carrier.n()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.n() == 0
    }

    /// Geodesic distance inside the carrier.
    pub fn intrinsic_distance(&self, u: usize, v: usize) -> Option<u32> {
        self.carrier.distance(u, v)
    }

    pub fn intrinsic_diameter(&self) -> Option<u32> {
        self.carrier.diameter()
    }

    pub fn carrier_index(&self, ambient_vertex: usize) -> Option<usize> {
        self.ambient.iter().position(|&a| a == ambient_vertex)
    }
}

pub fn ball(g: &SimpleGraph, v: usize, r: u32) -> Result<BallView> {
    g.check_vertex(v)?;
    let d = g.bfs_within(v, r);
    let mut vs: Vec<usize> = (0..g.n()).filter(|&u| d[u] != UNREACHED).collect();
    // stable: BFS layers, then vertex id
    vs.sort_by_key(|&u| (d[u], u));
    let carrier = g.induced(&vs);
    let ad = vs.iter().map(|&u| d[u]).collect();
    Ok(BallView::from_parts(carrier, 0, r, vs, ad))
}

#[derive(Clone, Debug)]
pub struct RootedIsometry {
    /// Carrier index in the source to carrier index in the target.
    pub vertex_map: Vec<usize>,
}

impl RootedIsometry {
    pub fn inverse(&self) -> RootedIsometry {
        let mut inv = vec![0; self.vertex_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            inv[j] = i;
        }
        RootedIsometry { vertex_map: inv }
    }

    pub fn compose(&self, then: &RootedIsometry) -> RootedIsometry {
        RootedIsometry { vertex_map: self.vertex_map.iter().map(|&j| then.vertex_map[j]).collect() }
    }

    pub fn is_valid(&self, b1: &BallView, b2: &BallView) -> bool {
        let m = &self.vertex_map;
        m.len() == b1.len()
            && b1.len() == b2.len()
            && m[b1.root] == b2.root
            && b1.carrier.edge_count() == b2.carrier.edge_count()
            && b1.carrier.edges().into_iter().all(|(u, v)| b2.carrier.has_edge(m[u], m[v]))
    }
}

/// Root-preserving isomorphism of ball carriers; labels are respected when
/// both carriers carry them.
pub fn ball_isometric(b1: &BallView, b2: &BallView, budget: &mut Budget) -> Result<Option<RootedIsometry>> {
    if b1.radius != b2.radius {
        return Err(precondition(format!("radius mismatch {} vs {}", b1.radius, b2.radius)));
    }
    if b1.len() != b2.len() || b1.carrier.edge_count() != b2.carrier.edge_count() {
        return Ok(None);
    }
    let labels = b1.carrier.has_edge_labels() && b2.carrier.has_edge_labels();
    let opts = IsoOptions { respect_edge_labels: labels, respect_vertex_labels: false, use_triangles: true };
    let s = IsoSearch::new(&b1.carrier, &b2.carrier, opts);
    // intrinsic distance to the root is an invariant of rooted isometries
    let mut ca: Vec<u32> = b1.intrinsic_dist.iter().map(|&d| d.saturating_add(1)).collect();
    let mut cb: Vec<u32> = b2.intrinsic_dist.iter().map(|&d| d.saturating_add(1)).collect();
    ca[b1.root] = 0;
    cb[b2.root] = 0;
    Ok(s.first(ca, cb, budget)?.map(|vertex_map| RootedIsometry { vertex_map }))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub verdict: bool,
    /// Matched model ball per vertex of Y, up to the first failure.
    pub witnesses: Vec<Option<usize>>,
    pub first_failure: Option<usize>,
}

/// Whether every radius-`r` ball of `y` is rooted-isometric to one of the model balls.
pub fn is_r_locally(y: &SimpleGraph, models: &[BallView], r: u32, budget: &Budget) -> Result<LocalityReport> {
    if models.iter().any(|m| m.radius != r) {
        return Err(precondition("model balls must have the requested radius"));
    }
    let per: Vec<Result<Option<usize>>> = (0..y.n())
        .into_par_iter()
        .map(|v| {
            let b = ball(y, v, r)?;
            let mut local = budget.clone();
            for (i, m) in models.iter().enumerate() {
                if ball_isometric(&b, m, &mut local)?.is_some() {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        })
        .collect();
    let mut witnesses = Vec::with_capacity(y.n());
    for p in per {
        let w = p?;
        witnesses.push(w);
        if w.is_none() {
            break;
        }
    }
    let first_failure = witnesses.iter().position(Option::is_none);
    Ok(LocalityReport { verdict: first_failure.is_none(), witnesses, first_failure })
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    #[test]
    fn cycle_ball_is_path() {
        let b = ball(&cycle(6), 2, 2).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.carrier.edge_count(), 4);
        assert_eq!(b.intrinsic_diameter(), Some(4));
        assert_eq!(b.ambient[b.root], 2);
    }

    #[test]
    fn lattice_star_has_intrinsic_distance_two() {
        let (g, _) = lattice_chunk(3);
        let b = ball(&g, 0, 1).unwrap();
        assert_eq!((b.len(), b.carrier.edge_count()), (5, 4));
        assert_eq!(b.intrinsic_distance(1, 2), Some(2));
    }

    #[test]
    fn complete_graph_ball_is_itself() {
        let b = ball(&complete(4), 1, 1).unwrap();
        assert_eq!((b.len(), b.carrier.edge_count()), (4, 6));
    }

    #[test]
    fn unknown_vertex() {
        assert!(ball(&cycle(4), 9, 1).is_err());
    }

    #[test]
    fn isometry_examples() {
        let mut bud = Budget::default();
        let c6 = cycle(6);
        let c4 = cycle(4);
        let m = ball_isometric(&ball(&c6, 0, 2).unwrap(), &ball(&c6, 3, 2).unwrap(), &mut bud).unwrap();
        assert!(m.is_some());
        assert!(ball_isometric(&ball(&c4, 0, 1).unwrap(), &ball(&c6, 0, 1).unwrap(), &mut bud).unwrap().is_some());
        assert!(ball_isometric(&ball(&c4, 0, 2).unwrap(), &ball(&c6, 0, 2).unwrap(), &mut bud).unwrap().is_none());
        assert!(ball_isometric(&ball(&c4, 0, 1).unwrap(), &ball(&c6, 0, 2).unwrap(), &mut bud).is_err());
    }

    #[test]
    fn root_is_fixed() {
        // a path 0-1-2 rooted at an end is not isometric to one rooted at the middle
        let p = path(3);
        let mut bud = Budget::default();
        let end = ball(&p, 0, 2).unwrap();
        let mid = ball(&p, 1, 2).unwrap();
        assert!(ball_isometric(&end, &mid, &mut bud).unwrap().is_none());
    }

    #[test]
    fn locality_examples() {
        let bud = Budget::default();
        let (z2, _) = lattice_chunk(4);
        let model = ball(&z2, 0, 2).unwrap();
        assert!(is_r_locally(&torus(8, 8), &[model], 2, &bud).unwrap().verdict);
        let line = ball(&path(5), 2, 1).unwrap();
        let r = is_r_locally(&cycle(3), &[line], 1, &bud).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.first_failure, Some(0));
        let p = petersen();
        let model = ball(&p, 0, 2).unwrap();
        assert!(is_r_locally(&p, &[model], 2, &bud).unwrap().verdict);
    }
}
