//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use graph_rigidity::fox::Laurent;
use graph_rigidity::graph::SimpleGraph;
use graph_rigidity::group::{CocycleTable, Elem, GenSet, Group};
use graph_rigidity::Budget;
use rand::Rng;
use std::collections::{BTreeMap, HashSet};

pub fn zn(n: u64, xs: &[i64]) -> GenSet {
    GenSet::symmetric_closure(&Group::Cyclic(n), &xs.iter().map(|&x| Elem::Int(x)).collect::<Vec<_>>()).unwrap()
}

pub fn zd(xs: &[&[i64]]) -> GenSet {
    let d = xs[0].len();
    GenSet::symmetric_closure(&Group::FreeAbelian(d), &xs.iter().map(|x| Elem::Vec(x.to_vec())).collect::<Vec<_>>()).unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// |Aut(g)| by trying every permutation of the vertices.
pub fn brute_aut_order(g: &SimpleGraph) -> u128 {
    let n = g.n();
    let edges = g.edges();
    let mut p: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if edges.iter().all(|&(u, v)| g.has_edge(p[u], p[v])) {
            count += 1;
        }
        if !next_permutation(&mut p) {
            return count;
        }
    }
}

pub fn random_graph(n: usize, density: f64, rng: &mut impl Rng) -> SimpleGraph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                e.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, e).unwrap()
}

/// Multiplication table of a finite group, indexed like `CocycleTable::zero`.
pub fn mult_table(g: &Group) -> (Vec<Elem>, Vec<Vec<usize>>) {
    let t = CocycleTable::zero(g.clone(), &mut Budget::default()).unwrap();
    let m = t
        .elements
        .iter()
        .map(|a| t.elements.iter().map(|b| t.idx(&g.mul(a, b).unwrap()).unwrap()).collect())
        .collect();
    (t.elements.clone(), m)
}

pub fn delta(m: &[Vec<usize>], psi: &[u8]) -> Vec<u8> {
    let n = m.len();
    let mut out = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] = psi[a] ^ psi[b] ^ psi[m[a][b]];
        }
    }
    out
}

/// Every coboundary table dψ, and the homomorphisms G → Z/2 (dψ = 0).
pub fn coboundaries(m: &[Vec<usize>]) -> (HashSet<Vec<u8>>, Vec<Vec<u8>>) {
    let n = m.len();
    let mut all = HashSet::new();
    let mut homs = Vec::new();
    for mask in 0u32..(1 << n) {
        let psi: Vec<u8> = (0..n).map(|i| (mask >> i & 1) as u8).collect();
        let d = delta(m, &psi);
        if d.iter().all(|&b| b == 0) {
            homs.push(psi);
        }
        all.insert(d);
    }
    (all, homs)
}

pub fn table(g: &Group, bits: Vec<u8>) -> CocycleTable {
    let mut t = CocycleTable::zero(g.clone(), &mut Budget::default()).unwrap();
    t.bits = bits;
    t
}

/// Cocycles a(g)b(h) for homomorphisms a, b, each shifted by a random coboundary.
pub fn bilinear_cocycles(m: &[Vec<usize>], homs: &[Vec<u8>], rng: &mut impl Rng) -> Vec<Vec<u8>> {
    let n = m.len();
    let mut out = Vec::new();
    for a in homs {
        for b in homs {
            let psi: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let d = delta(m, &psi);
            out.push((0..n * n).map(|k| (a[k / n] & b[k % n]) ^ d[k]).collect());
        }
    }
    out
}

/// Laurent polynomial with integer coefficients, for the group-ring evaluator.
pub type ZLaurent = BTreeMap<i64, i64>;

fn zadd(a: &mut ZLaurent, b: &ZLaurent, sign: i64) {
    for (&k, &c) in b {
        *a.entry(k).or_insert(0) += sign * c;
    }
    a.retain(|_, c| *c != 0);
}

fn zshift(a: &ZLaurent, s: i64) -> ZLaurent {
    a.iter().map(|(&k, &c)| (k + s, c)).collect()
}

/// ∂w/∂x_j by the product rule ∂(uv) = ∂u + u ∂v, mapped through t^u over Z,
/// then reduced mod 2.
pub fn fox_by_product_rule(word: &[(usize, i8)], j: usize, u: &[i64]) -> Laurent {
    fn go(word: &[(usize, i8)], j: usize, u: &[i64]) -> (ZLaurent, i64) {
        match word {
            [] => (ZLaurent::new(), 0),
            [(g, e)] => {
                let mut d = ZLaurent::new();
                if *g == j {
                    if *e > 0 {
                        d.insert(0, 1);
                    } else {
                        d.insert(-u[*g], -1);
                    }
                }
                (d, *e as i64 * u[*g])
            }
            _ => {
                let (l, r) = word.split_at(word.len() / 2);
                let (dl, wl) = go(l, j, u);
                let (dr, wr) = go(r, j, u);
                let mut d = dl;
                zadd(&mut d, &zshift(&dr, wl), 1);
                (d, wl + wr)
            }
        }
    }
    let (d, _) = go(word, j, u);
    let odd: Vec<i64> = d.iter().filter(|(_, c)| c.rem_euclid(2) == 1).map(|(&k, _)| k).collect();
    Laurent::from_exponents(&odd)
}
