//! Joint colour refinement over two graphs plus backtracking.

use super::SimpleGraph;
use crate::error::{Budget, Result};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, Default)]
pub struct IsoOptions {
    pub respect_edge_labels: bool,
    pub respect_vertex_labels: bool,
    /// Use per-edge triangle counts as an extra invariant.
    pub use_triangles: bool,
}

pub struct IsoSearch<'a> {
    a: &'a SimpleGraph,
    b: &'a SimpleGraph,
    ka: Vec<Vec<u32>>,
    kb: Vec<Vec<u32>>,
    opts: IsoOptions,
}

impl<'a> IsoSearch<'a> {
    pub fn new(a: &'a SimpleGraph, b: &'a SimpleGraph, opts: IsoOptions) -> Self {
        let mut keys: HashMap<(u32, u32), u32> = HashMap::new();
        let mut side = |g: &SimpleGraph| -> Vec<Vec<u32>> {
            let tri = opts.use_triangles.then(|| g.triangle_profile());
            (0..g.n())
                .map(|v| {
                    let labels = g.neighbor_labels(v);
                    (0..g.degree(v))
                        .map(|i| {
                            let l = if opts.respect_edge_labels { labels[i] } else { 0 };
                            let t = tri.as_ref().map_or(0, |t| t[v][i]);
                            let next = keys.len() as u32;
                            *keys.entry((l, t)).or_insert(next)
                        })
                        .collect()
                })
                .collect()
        };
        let ka = side(a);
        let kb = side(b);
        IsoSearch { a, b, ka, kb, opts }
    }

    /// Starting colours from vertex labels (or all zero).
    pub fn base_colors(&self) -> (Vec<u32>, Vec<u32>) {
        let f = |g: &SimpleGraph| match (self.opts.respect_vertex_labels, g.vertex_labels()) {
            (true, Some(l)) => l.to_vec(),
            _ => vec![0; g.n()],
        };
        (f(self.a), f(self.b))
    }

    /// Refines both colourings to a common stable partition. False when the
    /// colour class sizes diverge, i.e. no colour-preserving isomorphism exists.
    pub fn refine(&self, ca: &mut [u32], cb: &mut [u32]) -> bool {
        if ca.len() != cb.len() {
            return false;
        }
        let mut classes = distinct(ca);
        loop {
            let sig = |g: &SimpleGraph, k: &[Vec<u32>], c: &[u32], v: usize| -> Vec<u64> {
                let mut s: Vec<u64> = g.neighbors(v).iter().zip(&k[v]).map(|(&w, &key)| ((c[w] as u64) << 32) | key as u64).collect();
                s.sort_unstable();
                s.insert(0, c[v] as u64);
                s
            };
            let mut all: Vec<(Vec<u64>, bool, usize)> = Vec::with_capacity(ca.len() * 2);
            for v in 0..ca.len() {
                all.push((sig(self.a, &self.ka, ca, v), false, v));
                all.push((sig(self.b, &self.kb, cb, v), true, v));
            }
            all.sort_unstable();
            let mut id = 0u32;
            let mut count: i64 = 0;
            for i in 0..all.len() {
                if i > 0 && all[i].0 != all[i - 1].0 {
                    if count != 0 {
                        return false;
                    }
                    id += 1;
                }
                count += if all[i].1 { -1 } else { 1 };
                if all[i].1 {
                    cb[all[i].2] = id;
                } else {
                    ca[all[i].2] = id;
                }
            }
            if count != 0 {
                return false;
            }
            let now = id as usize + 1;
            if now == classes {
                return true;
            }
            classes = now;
        }
    }

    fn verify(&self, m: &[usize]) -> bool {
        if self.a.edge_count() != self.b.edge_count() {
            return false;
        }
        self.a.edges().into_iter().all(|(u, v)| {
            self.b.has_edge(m[u], m[v])
                && (!self.opts.respect_edge_labels || self.a.edge_label(u, v) == self.b.edge_label(m[u], m[v]))
        }) && (!self.opts.respect_vertex_labels
            || match (self.a.vertex_labels(), self.b.vertex_labels()) {
                (Some(x), Some(y)) => (0..m.len()).all(|v| x[v] == y[m[v]]),
                (None, None) => true,
                _ => false,
            })
    }

    /// Visits colour-preserving isomorphisms in deterministic order until
    /// `visit` returns false. Returns whether the visitor stopped the search.
    pub fn each(&self, ca: Vec<u32>, cb: Vec<u32>, budget: &mut Budget, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool> {
        budget.tick()?;
        let (mut ca, mut cb) = (ca, cb);
        if !self.refine(&mut ca, &mut cb) {
            return Ok(false);
        }
        let n = ca.len();
        let k = ca.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut size = vec![0usize; k];
        let mut first = vec![usize::MAX; k];
        for v in 0..n {
            size[ca[v] as usize] += 1;
            first[ca[v] as usize] = first[ca[v] as usize].min(v);
        }
        let target = (0..k).filter(|&c| size[c] > 1).min_by_key(|&c| (size[c], first[c]));
        let Some(c) = target else {
            let mut pos = vec![0usize; k];
            for w in 0..n {
                pos[cb[w] as usize] = w;
            }
            let m: Vec<usize> = ca.iter().map(|&c| pos[c as usize]).collect();
            return Ok(self.verify(&m) && !visit(&m));
        };
        let v = first[c];
        let fresh = k as u32;
        for w in (0..n).filter(|&w| cb[w] == c as u32) {
            let mut na = ca.clone();
            let mut nb = cb.clone();
            na[v] = fresh;
            nb[w] = fresh;
            if self.each(na, nb, budget, visit)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn first(&self, ca: Vec<u32>, cb: Vec<u32>, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        self.each(ca, cb, budget, &mut |m| {
            found = Some(m.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Up to `limit` isomorphisms.
    pub fn collect(&self, ca: Vec<u32>, cb: Vec<u32>, limit: usize, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        if limit == 0 {
            return Ok(out);
        }
        self.each(ca, cb, budget, &mut |m| {
            out.push(m.to_vec());
            out.len() < limit
        })?;
        Ok(out)
    }
}

fn distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

pub fn find_isomorphism(a: &SimpleGraph, b: &SimpleGraph, opts: IsoOptions, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
    if a.n() != b.n() {
        return Ok(None);
    }
    let s = IsoSearch::new(a, b, opts);
    let (ca, cb) = s.base_colors();
    s.first(ca, cb, budget)
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    #[test]
    fn petersen_relabelled() {
        let p = petersen();
        let perm = [3, 7, 1, 9, 0, 5, 2, 8, 6, 4];
        let q = SimpleGraph::from_edges(10, p.edges().into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        let m = find_isomorphism(&p, &q, IsoOptions::default(), &mut Budget::default()).unwrap().unwrap();
        assert!(p.edges().iter().all(|&(u, v)| q.has_edge(m[u], m[v])));
    }

    #[test]
    fn non_isomorphic_regular_graphs() {
        // C6 versus two triangles: same degree sequence.
        let two = SimpleGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(find_isomorphism(&cycle(6), &two, IsoOptions::default(), &mut Budget::default()).unwrap().is_none());
    }

    #[test]
    fn labels_matter() {
        let a = SimpleGraph::from_labeled_edges(3, [(0, 1, 0), (1, 2, 1)]).unwrap();
        let b = SimpleGraph::from_labeled_edges(3, [(0, 1, 0), (1, 2, 0)]).unwrap();
        let opts = IsoOptions { respect_edge_labels: true, ..Default::default() };
        assert!(find_isomorphism(&a, &b, opts, &mut Budget::default()).unwrap().is_none());
        assert!(find_isomorphism(&a, &b, IsoOptions::default(), &mut Budget::default()).unwrap().is_some());
    }

    #[test]
    fn budget_is_an_error() {
        let p = petersen();
        let mut b = Budget::new(1);
        assert!(find_isomorphism(&p, &p, IsoOptions::default(), &mut b).is_err());
    }
}
