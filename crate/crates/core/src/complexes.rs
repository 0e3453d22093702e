//! Polygonal complexes P_k(X), k-universal covers and filling radii.

use crate::error::{Budget, Result};
use crate::graph::{ball, BallView, SimpleGraph, UNREACHED};
use serde::Serialize;
use std::collections::VecDeque;

/// Simple loops of length 3..=k, each stored once: starting at its least
/// vertex, oriented towards the smaller of the two neighbours.
#[derive(Clone, Debug)]
pub struct CellSet {
    pub k: usize,
    pub cells: Vec<Vec<usize>>,
}

impl CellSet {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Every rotation and reflection of every cell, grouped by starting vertex.
    fn traces(&self, n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut at = vec![Vec::new(); n];
        for c in &self.cells {
            let m = c.len();
            for i in 0..m {
                let fwd: Vec<usize> = (0..m).map(|j| c[(i + j) % m]).collect();
                let bwd: Vec<usize> = (0..m).map(|j| c[(i + m - j) % m]).collect();
                at[c[i]].push(fwd);
                at[c[i]].push(bwd);
            }
        }
        at
    }
}

pub fn short_cycle_cells(g: &SimpleGraph, k: usize, budget: &mut Budget) -> Result<CellSet> {
    let mut cells = Vec::new();
    if k >= 3 {
        let mut on_path = vec![false; g.n()];
        for s in 0..g.n() {
            let mut path = vec![s];
            on_path[s] = true;
            extend(g, k, s, &mut path, &mut on_path, &mut cells, budget)?;
            on_path[s] = false;
        }
    }
    Ok(CellSet { k, cells })
}

fn extend(g: &SimpleGraph, k: usize, s: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>, budget: &mut Budget) -> Result<()> {
    budget.tick()?;
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        if w == s && path.len() >= 3 && path[1] < last {
            out.push(path.clone());
        }
        if w > s && !on[w] && path.len() < k {
            on[w] = true;
            path.push(w);
            extend(g, k, s, path, on, out, budget)?;
            path.pop();
            on[w] = false;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverStatus {
    Exact,
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct CoverBall {
    pub ball: BallView,
    /// Base vertex per carrier vertex.
    pub projection: Vec<usize>,
    pub status: CoverStatus,
}

impl CoverBall {
    pub fn projection_injective(&self) -> bool {
        let mut p = self.projection.clone();
        p.sort_unstable();
        p.windows(2).all(|w| w[0] != w[1])
    }
}

const NONE: u32 = u32::MAX;

/// Path classes built by defining neighbours and folding along cells.
struct Cover<'a> {
    g: &'a SimpleGraph,
    traces: Vec<Vec<Vec<usize>>>,
    proj: Vec<usize>,
    // aligned with g.neighbors(proj[z])
    slots: Vec<Vec<u32>>,
    uf: Vec<u32>,
    dirty: bool,
}

impl<'a> Cover<'a> {
    fn new(g: &'a SimpleGraph, cells: &CellSet, base: usize) -> Self {
        let mut c = Cover { g, traces: cells.traces(g.n()), proj: Vec::new(), slots: Vec::new(), uf: Vec::new(), dirty: false };
        c.node(base);
        c
    }

    fn node(&mut self, p: usize) -> usize {
        self.proj.push(p);
        self.slots.push(vec![NONE; self.g.degree(p)]);
        self.uf.push(self.uf.len() as u32);
        self.dirty = true;
        self.uf.len() - 1
    }

    fn find(&mut self, mut z: usize) -> usize {
        while self.uf[z] as usize != z {
            let up = self.uf[self.uf[z] as usize];
            self.uf[z] = up;
            z = up as usize;
        }
        z
    }

    fn slot_of(&self, z: usize, w: usize) -> usize {
        self.g.neighbors(self.proj[z]).binary_search(&w).expect("cells follow edges")
    }

    fn step(&mut self, z: usize, w: usize, budget: &mut Budget) -> Result<usize> {
        let z = self.find(z);
        let i = self.slot_of(z, w);
        if self.slots[z][i] != NONE {
            return Ok(self.find(self.slots[z][i] as usize));
        }
        budget.tick()?;
        let y = self.node(w);
        self.slots[z][i] = y as u32;
        let j = self.slot_of(y, self.proj[z]);
        self.slots[y][j] = z as u32;
        Ok(y)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut q = vec![(a, b)];
        while let Some((a, b)) = q.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            self.dirty = true;
            let (r, o) = (a.min(b), a.max(b));
            self.uf[o] = r as u32;
            let os = std::mem::take(&mut self.slots[o]);
            for (i, &zo) in os.iter().enumerate() {
                if zo == NONE {
                    continue;
                }
                if self.slots[r][i] == NONE {
                    self.slots[r][i] = zo;
                } else {
                    q.push((self.slots[r][i] as usize, zo as usize));
                }
            }
        }
    }

    fn depths(&mut self) -> Vec<u32> {
        let mut d = vec![UNREACHED; self.proj.len()];
        let root = self.find(0);
        d[root] = 0;
        let mut q = VecDeque::from([root]);
        while let Some(z) = q.pop_front() {
            for i in 0..self.slots[z].len() {
                if self.slots[z][i] != NONE {
                    let y = self.find(self.slots[z][i] as usize);
                    if d[y] == UNREACHED {
                        d[y] = d[z] + 1;
                        q.push_back(y);
                    }
                }
            }
        }
        d
    }

    /// Saturates every class within distance `limit` of the root.
    fn saturate(&mut self, limit: u32, budget: &mut Budget) -> Result<()> {
        while self.dirty {
            self.dirty = false;
            let d = self.depths();
            for z in 0..d.len() {
                if d[z] >= limit || self.find(z) != z {
                    continue;
                }
                budget.tick()?;
                for &w in self.g.neighbors(self.proj[z]) {
                    self.step(z, w, budget)?;
                }
                let p = self.proj[z];
                for t in 0..self.traces[p].len() {
                    let m = self.traces[p][t].len();
                    let mut cur = z;
                    for j in 1..=m {
                        let w = self.traces[p][t][j % m];
                        cur = self.step(cur, w, budget)?;
                    }
                    if self.find(cur) != self.find(z) {
                        self.merge(cur, z);
                    }
                }
            }
        }
        Ok(())
    }

    fn ball(&mut self, r: u32, status: CoverStatus) -> CoverBall {
        let d = self.depths();
        let mut vs: Vec<usize> = (0..d.len()).filter(|&z| d[z] <= r).collect();
        vs.sort_by_key(|&z| (d[z], z));
        let pos: std::collections::HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let mut edges = std::collections::BTreeSet::new();
        for (i, &z) in vs.iter().enumerate() {
            for s in self.slots[z].clone() {
                if s != NONE {
                    let y = self.find(s as usize);
                    if let Some(&j) = pos.get(&y) {
                        edges.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
        let carrier = SimpleGraph::from_edges(vs.len(), edges).expect("cover is simple");
        let projection = vs.iter().map(|&z| self.proj[z]).collect();
        let ad = vs.iter().map(|&z| d[z]).collect();
        CoverBall { ball: BallView::from_parts(carrier, 0, r, vs, ad), projection, status }
    }
}

/// Radius-`r` ball about the base point in the k-universal cover.
pub fn k_universal_cover_ball(g: &SimpleGraph, base: usize, k: usize, r: u32, fuel: u64) -> Result<CoverBall> {
    g.check_vertex(base)?;
    let mut budget = Budget::new(fuel);
    let cells = match short_cycle_cells(g, k, &mut budget) {
        Ok(c) => c,
        Err(_) => {
            let one = ball(g, base, 0)?;
            return Ok(CoverBall { ball: one, projection: vec![base], status: CoverStatus::FuelExhausted });
        }
    };
    cover_with_cells(g, &cells, base, r, &mut budget)
}

fn cover_with_cells(g: &SimpleGraph, cells: &CellSet, base: usize, r: u32, budget: &mut Budget) -> Result<CoverBall> {
    let mut c = Cover::new(g, cells, base);
    let limit = r + cells.k as u32;
    let status = match c.saturate(limit, budget) {
        Ok(()) => CoverStatus::Exact,
        Err(crate::Error::Budget(_)) => CoverStatus::FuelExhausted,
        Err(e) => return Err(e),
    };
    Ok(c.ball(r, status))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplyConnectedReport {
    pub verdict: Verdict,
    pub exact: bool,
    /// Radius at which the cover ball first outgrows the base ball, for "no".
    pub witness_radius: Option<u32>,
    pub cover_size: usize,
    pub base_size: usize,
}

pub fn is_k_simply_connected(g: &SimpleGraph, k: usize, fuel: u64) -> Result<SimplyConnectedReport> {
    if !g.is_connected() || g.n() == 0 {
        return Err(crate::error::precondition("graph must be connected and nonempty"));
    }
    let diam = g.diameter().unwrap();
    let cb = k_universal_cover_ball(g, 0, k, diam + 1, fuel)?;
    let exact = cb.status == CoverStatus::Exact;
    let mut rep = SimplyConnectedReport { verdict: Verdict::Unknown, exact, witness_radius: None, cover_size: cb.ball.len(), base_size: g.n() };
    if !exact {
        return Ok(rep);
    }
    if cb.ball.len() == g.n() && cb.projection_injective() {
        rep.verdict = Verdict::Yes;
        return Ok(rep);
    }
    let base_d = g.bfs(0);
    for r in 0..=diam + 1 {
        let cover = cb.ball.ambient_dist.iter().filter(|&&d| d <= r).count();
        let basec = base_d.iter().filter(|&&d| d <= r).count();
        if cover > basec {
            rep.verdict = Verdict::No;
            rep.witness_radius = Some(r);
            break;
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct FillReport {
    /// Least filling radius, `None` when no radius up to the diameter works.
    pub r2: Option<u32>,
    pub explored: u32,
    pub exact: bool,
}

/// Least R₂ such that every loop in any B(x, R₁) contracts in P_k(B(x, R₂)).
pub fn fill_radius(g: &SimpleGraph, k: usize, r1: u32, fuel: u64) -> Result<FillReport> {
    let diam = g.diameter().ok_or_else(|| crate::error::precondition("graph must be connected"))?;
    let mut budget = Budget::new(fuel);
    let mut r2 = r1;
    let mut need = r1;
    for x in 0..g.n() {
        // radius needed at x is at least the global answer so far
        r2 = r2.max(need);
        loop {
            match fills_at(g, x, k, r1, r2, &mut budget) {
                Ok(true) => break,
                Ok(false) if r2 < diam.max(r1) => r2 += 1,
                Ok(false) => return Ok(FillReport { r2: None, explored: r2, exact: true }),
                Err(crate::Error::Budget(_)) => return Ok(FillReport { r2: None, explored: r2, exact: false }),
                Err(e) => return Err(e),
            }
        }
        need = r2;
    }
    Ok(FillReport { r2: Some(need), explored: need, exact: true })
}

fn fills_at(g: &SimpleGraph, x: usize, k: usize, r1: u32, r2: u32, budget: &mut Budget) -> Result<bool> {
    let big = ball(g, x, r2)?;
    let cells = short_cycle_cells(&big.carrier, k, budget)?;
    let mut c = Cover::new(&big.carrier, &cells, 0);
    c.saturate(r1 + 1 + k as u32, budget)?;
    // lift a BFS tree of B(x, r1), then check every non-tree edge closes up
    let inner: Vec<usize> = (0..big.len()).filter(|&i| big.ambient_dist[i] <= r1).collect();
    let mut lift = vec![usize::MAX; big.len()];
    lift[0] = c.find(0);
    let mut q = VecDeque::from([0usize]);
    while let Some(u) = q.pop_front() {
        for &w in big.carrier.neighbors(u) {
            if big.ambient_dist[w] <= r1 && lift[w] == usize::MAX {
                lift[w] = c.step(lift[u], w, budget)?;
                q.push_back(w);
            }
        }
    }
    for &u in &inner {
        for &w in big.carrier.neighbors(u) {
            if big.ambient_dist[w] <= r1 {
                let via = c.step(lift[u], w, budget)?;
                if c.find(via) != c.find(lift[w]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::ball_isometric;

    const FUEL: u64 = 5_000_000;

    #[test]
    fn cells() {
        let mut b = Budget::default();
        assert!(short_cycle_cells(&cycle(4), 3, &mut b).unwrap().is_empty());
        assert_eq!(short_cycle_cells(&cycle(4), 4, &mut b).unwrap().len(), 1);
        assert_eq!(short_cycle_cells(&complete(4), 3, &mut b).unwrap().len(), 4);
        // K4 has 3 four-cycles
        assert_eq!(short_cycle_cells(&complete(4), 4, &mut b).unwrap().len(), 7);
        assert_eq!(short_cycle_cells(&petersen(), 5, &mut b).unwrap().len(), 12);
    }

    #[test]
    fn cycle_covers() {
        let line = k_universal_cover_ball(&cycle(6), 2, 3, 4, FUEL).unwrap();
        assert_eq!(line.status, CoverStatus::Exact);
        let p = ball(&path(9), 4, 4).unwrap();
        assert!(ball_isometric(&line.ball, &p, &mut Budget::default()).unwrap().is_some());
        let own = k_universal_cover_ball(&cycle(6), 0, 6, 3, FUEL).unwrap();
        assert_eq!(own.ball.len(), 6);
        assert!(own.projection_injective());
    }

    #[test]
    fn torus_cover_is_lattice_locally() {
        let t = torus(8, 8);
        let (z2, _) = lattice_chunk(6);
        for r in 0..=3 {
            let cb = k_universal_cover_ball(&t, 0, 4, r, FUEL).unwrap();
            assert_eq!(cb.status, CoverStatus::Exact);
            let zb = ball(&z2, 0, r).unwrap();
            assert!(ball_isometric(&cb.ball, &zb, &mut Budget::default()).unwrap().is_some(), "radius {r}");
        }
    }

    #[test]
    fn simple_connectivity() {
        assert_eq!(is_k_simply_connected(&cycle(6), 6, FUEL).unwrap().verdict, Verdict::Yes);
        assert_eq!(is_k_simply_connected(&cycle(6), 5, FUEL).unwrap().verdict, Verdict::No);
        let t = is_k_simply_connected(&torus(8, 8), 4, FUEL).unwrap();
        assert_eq!((t.verdict, t.exact, t.witness_radius), (Verdict::No, true, Some(4)));
        assert_eq!(is_k_simply_connected(&torus(8, 8), 4, 10).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn fill_examples() {
        let (z2, _) = lattice_chunk(6);
        assert_eq!(fill_radius(&z2, 4, 2, FUEL).unwrap().r2, Some(2));
        assert_eq!(fill_radius(&cycle(6), 6, 3, FUEL).unwrap().r2, Some(3));
        assert_eq!(fill_radius(&binary_tree(3), 4, 2, FUEL).unwrap().r2, Some(2));
        assert_eq!(fill_radius(&cycle(6), 5, 3, FUEL).unwrap().r2, None);
    }
}
