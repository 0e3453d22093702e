use super::SimpleGraph;
use crate::error::Budget;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueBound {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub witness: Vec<usize>,
}

type Bits = Vec<u64>;

fn bits_of(n: usize, it: impl IntoIterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for v in it {
        b[v / 64] |= 1 << (v % 64);
    }
    b
}

fn members(b: &Bits) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &w) in b.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let t = w.trailing_zeros() as usize;
            out.push(i * 64 + t);
            w &= w - 1;
        }
    }
    out
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Greedy colouring of the candidate set; returns vertices and colour numbers
/// in increasing colour order.
fn color_sort(cands: &[usize], adj: &[Bits]) -> Vec<(usize, usize)> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in cands {
        let slot = classes.iter().position(|c| c.iter().all(|&u| adj[v][u / 64] >> (u % 64) & 1 == 0));
        match slot {
            Some(i) => classes[i].push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut out = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            out.push((v, i + 1));
        }
    }
    out
}

struct Search<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    // collect every clique of size >= threshold when set
    collect: Option<usize>,
    found: Vec<Vec<usize>>,
    budget: &'a mut Budget,
    aborted: bool,
}

impl Search<'_> {
    fn expand(&mut self, cur: &mut Vec<usize>, p: Bits) {
        if self.aborted || self.budget.tick().is_err() {
            self.aborted = true;
            return;
        }
        let cands = members(&p);
        if cands.is_empty() {
            if cur.len() > self.best.len() {
                self.best = cur.clone();
            }
            if let Some(t) = self.collect {
                if cur.len() >= t {
                    let mut c = cur.clone();
                    c.sort_unstable();
                    self.found.push(c);
                }
            }
            return;
        }
        let order = color_sort(&cands, self.adj);
        let mut p = p;
        for &(v, col) in order.iter().rev() {
            let need = match self.collect {
                Some(t) => t.max(1),
                None => self.best.len() + 1,
            };
            if cur.len() + col < need {
                return;
            }
            cur.push(v);
            self.expand(cur, and(&p, &self.adj[v]));
            cur.pop();
            p[v / 64] &= !(1 << (v % 64));
            if self.aborted {
                return;
            }
        }
        // maximal cliques only are reported, so nothing to do when candidates drain
    }
}

fn adjacency_bits(g: &SimpleGraph) -> Vec<Bits> {
    (0..g.n()).map(|v| bits_of(g.n(), g.neighbors(v).iter().copied())).collect()
}

pub fn max_clique_size(g: &SimpleGraph, budget: &mut Budget) -> CliqueBound {
    let n = g.n();
    let adj = adjacency_bits(g);
    let mut s = Search { adj: &adj, best: Vec::new(), collect: None, found: Vec::new(), budget, aborted: false };
    s.expand(&mut Vec::new(), bits_of(n, 0..n));
    let lower = s.best.len();
    let upper = if s.aborted { (0..n).map(|v| g.degree(v) + 1).max().unwrap_or(0).max(lower) } else { lower };
    CliqueBound { lower, upper, exact: !s.aborted, witness: s.best }
}

/// All cliques of maximum size, each sorted, in lexicographic order.
/// `None` when the budget runs out.
pub fn maximum_cliques(g: &SimpleGraph, budget: &mut Budget) -> Option<Vec<Vec<usize>>> {
    let size = max_clique_size(g, budget);
    if !size.exact {
        return None;
    }
    let n = g.n();
    let adj = adjacency_bits(g);
    let mut s = Search { adj: &adj, best: Vec::new(), collect: Some(size.lower), found: Vec::new(), budget, aborted: false };
    s.expand(&mut Vec::new(), bits_of(n, 0..n));
    if s.aborted {
        return None;
    }
    let mut f = s.found;
    f.sort();
    f.dedup();
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    #[test]
    fn small_cliques() {
        let mut b = Budget::default();
        assert_eq!(max_clique_size(&cycle(6), &mut b).lower, 2);
        assert_eq!(max_clique_size(&complete(5), &mut b).lower, 5);
        assert_eq!(max_clique_size(&petersen(), &mut b).lower, 2);
        assert_eq!(maximum_cliques(&complete(4), &mut b).unwrap().len(), 1);
        assert_eq!(maximum_cliques(&cycle(5), &mut b).unwrap().len(), 5);
    }

    #[test]
    fn budget_brackets() {
        let mut b = Budget::new(2);
        let r = max_clique_size(&complete(8), &mut b);
        assert!(!r.exact);
        assert!(r.lower <= 8 && r.upper >= 8);
    }
}
