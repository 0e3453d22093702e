//! Group oracles: identity, multiplication, inversion and normal forms.

mod cayley;
mod json;
pub mod lattice;

pub use cayley::{build_s_n, cayley_ball, cayley_graph, distortion_rho, marked_cayley, word_length, CayleyBall, CayleyGraph, GenSet};
pub use json::{elem_from_json, elem_to_json, group_from_json, group_to_json};

use crate::error::{malformed, precondition, Budget, Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

/// Group element in the normal form of its oracle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(i64),
    Vec(Vec<i64>),
    /// Reduced word; `k > 0` is generator `k`, `-k` its inverse.
    Word(Vec<i32>),
    Perm(Vec<u32>),
    Pair(Box<Elem>, Box<Elem>),
    /// Central extension element `(bit, base element)`.
    Ext(u8, Box<Elem>),
}

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn ext(bit: u8, g: Elem) -> Elem {
        Elem::Ext(bit & 1, Box::new(g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Group {
    Cyclic(u64),
    FreeAbelian(usize),
    Perm { degree: usize, gens: Vec<Vec<u32>> },
    Free { rank: usize, trunc: usize },
    Product(Box<Group>, Box<Group>),
    /// `normal ⋊ Z/m`, the generator of Z/m acting on coordinates by `action`.
    Semidirect { normal: Box<Group>, m: u64, action: Vec<Vec<i64>> },
    CentralExt(Arc<CocycleTable>),
    /// Z^d modulo the lattice spanned by `hnf` (rows, upper triangular, full rank).
    LatticeQuotient { d: usize, hnf: Vec<Vec<i64>> },
}

/// Z/2-valued function on G x G for a finite group G, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTable {
    pub base: Group,
    pub elements: Vec<Elem>,
    pub index: HashMap<Elem, usize>,
    pub bits: Vec<u8>,
}

impl CocycleTable {
    pub fn zero(base: Group, budget: &mut Budget) -> Result<Self> {
        let elements = base.elements(budget)?;
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        Ok(CocycleTable { base, elements, index, bits: vec![0; n * n] })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn idx(&self, g: &Elem) -> Result<usize> {
        self.index.get(g).copied().ok_or_else(|| malformed(format!("{g:?} is not an element of the base group")))
    }

    pub fn get(&self, a: &Elem, b: &Elem) -> Result<u8> {
        Ok(self.bits[self.idx(a)? * self.len() + self.idx(b)?])
    }

    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, bit: u8) {
        let n = self.len();
        self.bits[i * n + j] = bit & 1;
    }
}

fn modn(a: i64, n: u64) -> i64 {
    a.rem_euclid(n as i64)
}

impl Group {
    pub fn cyclic(n: u64) -> Result<Group> {
        if n == 0 {
            return Err(malformed("cyclic group needs n >= 1"));
        }
        Ok(Group::Cyclic(n))
    }

    pub fn product(a: Group, b: Group) -> Group {
        Group::Product(Box::new(a), Box::new(b))
    }

    pub fn lattice_quotient(d: usize, basis: &[Vec<i64>]) -> Result<Group> {
        let hnf = lattice::hnf(d, basis)?;
        Ok(Group::LatticeQuotient { d, hnf })
    }

    pub fn semidirect(normal: Group, m: u64, action: Vec<Vec<i64>>) -> Result<Group> {
        let d = match &normal {
            Group::Cyclic(_) => 1,
            Group::FreeAbelian(d) | Group::LatticeQuotient { d, .. } => *d,
            _ => return Err(malformed("semidirect normal factor must be abelian with coordinates")),
        };
        if m == 0 || action.len() != d || action.iter().any(|r| r.len() != d) {
            return Err(malformed("semidirect action must be a d x d integer matrix and m >= 1"));
        }
        let g = Group::Semidirect { normal: Box::new(normal), m, action };
        // A^m must act trivially
        if let Group::Semidirect { normal, m, action } = &g {
            for i in 0..d {
                let mut e = vec![0i64; d];
                e[i] = 1;
                let v = g.normal_from_coords(normal, e.clone())?;
                let w = g.act(normal, action, *m, &v)?;
                if w != v {
                    return Err(precondition("action matrix has order not dividing m on the normal factor"));
                }
            }
        }
        Ok(g)
    }

    pub fn central_ext(table: CocycleTable) -> Group {
        Group::CentralExt(Arc::new(table))
    }

    pub fn identity(&self) -> Elem {
        match self {
            Group::Cyclic(_) => Elem::Int(0),
            Group::FreeAbelian(d) | Group::LatticeQuotient { d, .. } => Elem::Vec(vec![0; *d]),
            Group::Perm { degree, .. } => Elem::Perm((0..*degree as u32).collect()),
            Group::Free { .. } => Elem::Word(Vec::new()),
            Group::Product(a, b) => Elem::pair(a.identity(), b.identity()),
            Group::Semidirect { normal, .. } => Elem::pair(normal.identity(), Elem::Int(0)),
            Group::CentralExt(t) => {
                let e = t.base.identity();
                let bit = t.get(&e, &e).unwrap_or(0);
                Elem::ext(bit, e)
            }
        }
    }

    pub fn is_identity(&self, g: &Elem) -> bool {
        *g == self.identity()
    }

    /// Validates and normalises an element of this group.
    pub fn normalize(&self, g: &Elem) -> Result<Elem> {
        let bad = || malformed(format!("{g:?} is not an element of {}", self.kind()));
        Ok(match (self, g) {
            (Group::Cyclic(n), Elem::Int(a)) => Elem::Int(modn(*a, *n)),
            (Group::FreeAbelian(d), Elem::Vec(v)) if v.len() == *d => g.clone(),
            (Group::LatticeQuotient { d, hnf }, Elem::Vec(v)) if v.len() == *d => Elem::Vec(lattice::reduce(hnf, v)),
            (Group::Perm { degree, .. }, Elem::Perm(p)) => {
                let mut seen = vec![false; *degree];
                if p.len() != *degree || p.iter().any(|&x| (x as usize) >= *degree || std::mem::replace(&mut seen[x as usize], true)) {
                    return Err(bad());
                }
                g.clone()
            }
            (Group::Free { rank, trunc }, Elem::Word(w)) => {
                if w.iter().any(|&x| x == 0 || x.unsigned_abs() as usize > *rank) {
                    return Err(bad());
                }
                let r = free_reduce(w);
                if r.len() > *trunc {
                    return Err(Error::Truncation(*trunc));
                }
                Elem::Word(r)
            }
            (Group::Product(a, b), Elem::Pair(x, y)) => Elem::pair(a.normalize(x)?, b.normalize(y)?),
            (Group::Semidirect { normal, m, .. }, Elem::Pair(x, k)) => match **k {
                Elem::Int(k) => Elem::pair(normal.normalize(x)?, Elem::Int(modn(k, *m))),
                _ => return Err(bad()),
            },
            (Group::CentralExt(t), Elem::Ext(bit, x)) => {
                let x = t.base.normalize(x)?;
                t.idx(&x)?;
                Elem::ext(*bit, x)
            }
            _ => return Err(bad()),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Group::Cyclic(_) => "cyclic",
            Group::FreeAbelian(_) => "zd",
            Group::Perm { .. } => "perm",
            Group::Free { .. } => "free",
            Group::Product(..) => "product",
            Group::Semidirect { .. } => "semidirect",
            Group::CentralExt(_) => "central_ext",
            Group::LatticeQuotient { .. } => "lattice_quotient",
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let bad = || malformed(format!("cannot multiply {a:?} and {b:?} in {}", self.kind()));
        Ok(match (self, a, b) {
            (Group::Cyclic(n), Elem::Int(x), Elem::Int(y)) => Elem::Int(modn(x + y, *n)),
            (Group::FreeAbelian(_), Elem::Vec(x), Elem::Vec(y)) => {
                let mut s = Vec::with_capacity(x.len());
                for (p, q) in x.iter().zip(y) {
                    s.push(p.checked_add(*q).ok_or(Error::Overflow)?);
                }
                Elem::Vec(s)
            }
            (Group::LatticeQuotient { hnf, .. }, Elem::Vec(x), Elem::Vec(y)) => {
                Elem::Vec(lattice::reduce(hnf, &x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<_>>()))
            }
            // apply a, then b
            (Group::Perm { .. }, Elem::Perm(x), Elem::Perm(y)) => Elem::Perm(x.iter().map(|&i| y[i as usize]).collect()),
            (Group::Free { trunc, .. }, Elem::Word(x), Elem::Word(y)) => {
                let mut w = x.clone();
                for &c in y {
                    if w.last() == Some(&-c) {
                        w.pop();
                    } else {
                        w.push(c);
                    }
                }
                if w.len() > *trunc {
                    return Err(Error::Truncation(*trunc));
                }
                Elem::Word(w)
            }
            (Group::Product(g, h), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => Elem::pair(g.mul(a1, b1)?, h.mul(a2, b2)?),
            (Group::Semidirect { normal, m, action }, Elem::Pair(v1, k1), Elem::Pair(v2, k2)) => {
                let (Elem::Int(k1), Elem::Int(k2)) = (&**k1, &**k2) else { return Err(bad()) };
                let mut w = (**v2).clone();
                for _ in 0..*k1 {
                    w = self.act(normal, action, 1, &w)?;
                }
                Elem::pair(normal.mul(v1, &w)?, Elem::Int(modn(k1 + k2, *m)))
            }
            (Group::CentralExt(t), Elem::Ext(x, g), Elem::Ext(y, h)) => {
                let c = t.get(g, h)?;
                Elem::ext(x ^ y ^ c, t.base.mul(g, h)?)
            }
            _ => return Err(bad()),
        })
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        let bad = || malformed(format!("cannot invert {a:?} in {}", self.kind()));
        Ok(match (self, a) {
            (Group::Cyclic(n), Elem::Int(x)) => Elem::Int(modn(-x, *n)),
            (Group::FreeAbelian(_), Elem::Vec(x)) => Elem::Vec(x.iter().map(|v| -v).collect()),
            (Group::LatticeQuotient { hnf, .. }, Elem::Vec(x)) => Elem::Vec(lattice::reduce(hnf, &x.iter().map(|v| -v).collect::<Vec<_>>())),
            (Group::Perm { .. }, Elem::Perm(p)) => {
                let mut q = vec![0u32; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    q[x as usize] = i as u32;
                }
                Elem::Perm(q)
            }
            (Group::Free { .. }, Elem::Word(w)) => Elem::Word(w.iter().rev().map(|c| -c).collect()),
            (Group::Product(g, h), Elem::Pair(x, y)) => Elem::pair(g.inv(x)?, h.inv(y)?),
            (Group::Semidirect { normal, m, action }, Elem::Pair(v, k)) => {
                let Elem::Int(k) = **k else { return Err(bad()) };
                let ik = modn(-k, *m);
                let mut w = normal.inv(v)?;
                for _ in 0..ik {
                    w = self.act(normal, action, 1, &w)?;
                }
                Elem::pair(w, Elem::Int(ik))
            }
            (Group::CentralExt(t), Elem::Ext(x, g)) => {
                let gi = t.base.inv(g)?;
                let e = t.base.identity();
                Elem::ext(x ^ t.get(g, &gi)? ^ t.get(&e, &e)?, gi)
            }
            _ => return Err(bad()),
        })
    }

    pub fn pow(&self, a: &Elem, k: u64) -> Result<Elem> {
        let mut r = self.identity();
        for _ in 0..k {
            r = self.mul(&r, a)?;
        }
        Ok(r)
    }

    fn normal_coords(&self, normal: &Group, v: &Elem) -> Result<Vec<i64>> {
        match (normal, v) {
            (Group::Cyclic(_), Elem::Int(a)) => Ok(vec![*a]),
            (_, Elem::Vec(x)) => Ok(x.clone()),
            _ => Err(malformed("bad normal factor element")),
        }
    }

    fn normal_from_coords(&self, normal: &Group, c: Vec<i64>) -> Result<Elem> {
        match normal {
            Group::Cyclic(_) => normal.normalize(&Elem::Int(c[0])),
            _ => normal.normalize(&Elem::Vec(c)),
        }
    }

    /// Applies the action matrix `times` times.
    fn act(&self, normal: &Group, action: &[Vec<i64>], times: u64, v: &Elem) -> Result<Elem> {
        let mut c = self.normal_coords(normal, v)?;
        for _ in 0..times {
            let mut next = vec![0i64; c.len()];
            for (i, row) in action.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    next[i] = next[i].checked_add(a.checked_mul(c[j]).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                }
            }
            c = self.normal_coords(normal, &self.normal_from_coords(normal, next)?)?;
        }
        self.normal_from_coords(normal, c)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Group::Cyclic(_) | Group::Perm { .. } | Group::LatticeQuotient { .. } => true,
            Group::FreeAbelian(d) => *d == 0,
            Group::Free { rank, .. } => *rank == 0,
            Group::Product(a, b) => a.is_finite() && b.is_finite(),
            Group::Semidirect { normal, .. } => normal.is_finite(),
            Group::CentralExt(_) => true,
        }
    }

    /// Standard generators, used for enumeration.
    pub fn generators(&self) -> Vec<Elem> {
        match self {
            Group::Cyclic(n) => {
                if *n > 1 {
                    vec![Elem::Int(1)]
                } else {
                    vec![]
                }
            }
            Group::FreeAbelian(d) | Group::LatticeQuotient { d, .. } => (0..*d)
                .map(|i| {
                    let mut v = vec![0; *d];
                    v[i] = 1;
                    self.normalize(&Elem::Vec(v)).unwrap()
                })
                .collect(),
            Group::Perm { gens, .. } => gens.iter().map(|g| Elem::Perm(g.clone())).collect(),
            Group::Free { rank, .. } => (1..=*rank as i32).map(|k| Elem::Word(vec![k])).collect(),
            Group::Product(a, b) => a
                .generators()
                .into_iter()
                .map(|g| Elem::pair(g, b.identity()))
                .chain(b.generators().into_iter().map(|h| Elem::pair(a.identity(), h)))
                .collect(),
            Group::Semidirect { normal, m, .. } => {
                let mut g: Vec<Elem> = normal.generators().into_iter().map(|v| Elem::pair(v, Elem::Int(0))).collect();
                if *m > 1 {
                    g.push(Elem::pair(normal.identity(), Elem::Int(1)));
                }
                g
            }
            Group::CentralExt(t) => {
                let e = t.base.identity();
                let mut g: Vec<Elem> = t.base.generators().into_iter().map(|x| Elem::ext(0, x)).collect();
                g.push(Elem::ext(1 ^ t.get(&e, &e).unwrap_or(0), e));
                g
            }
        }
    }

    /// All elements of a finite group, identity first, in BFS order over `generators()`.
    pub fn elements(&self, budget: &mut Budget) -> Result<Vec<Elem>> {
        if !self.is_finite() {
            return Err(precondition(format!("{} group is infinite", self.kind())));
        }
        let gens = self.generators();
        let mut seen: HashSet<Elem> = HashSet::new();
        let e = self.identity();
        seen.insert(e.clone());
        let mut out = vec![e.clone()];
        let mut q = VecDeque::from([e]);
        while let Some(x) = q.pop_front() {
            for s in &gens {
                budget.tick()?;
                let y = self.mul(&x, s)?;
                if seen.insert(y.clone()) {
                    out.push(y.clone());
                    q.push_back(y);
                }
            }
        }
        Ok(out)
    }

    pub fn order_of(&self, a: &Elem) -> Order {
        let cap = 1_000_000u64;
        let e = self.identity();
        if *a == e {
            return Order::Finite(1);
        }
        match self {
            Group::FreeAbelian(_) | Group::Free { .. } => return Order::Infinite,
            Group::Product(g, h) => {
                if let Elem::Pair(x, y) = a {
                    return match (g.order_of(x), h.order_of(y)) {
                        (Order::Finite(p), Order::Finite(q)) => Order::Finite(p / gcd(p, q) * q),
                        (Order::Infinite, _) | (_, Order::Infinite) => Order::Infinite,
                        _ => Order::Unknown,
                    };
                }
                return Order::Unknown;
            }
            Group::Semidirect { normal, m, .. } if !normal.is_finite() => {
                let Ok(p) = self.pow(a, *m) else { return Order::Unknown };
                if p == e {
                    // order divides m
                    for k in 1..=*m {
                        if self.pow(a, k).ok() == Some(e.clone()) {
                            return Order::Finite(k);
                        }
                    }
                }
                return Order::Infinite;
            }
            _ => {}
        }
        let mut x = a.clone();
        for k in 1..=cap {
            if x == e {
                return Order::Finite(k);
            }
            match self.mul(&x, a) {
                Ok(y) => x = y,
                Err(_) => return Order::Unknown,
            }
        }
        Order::Unknown
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &c in w {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms(g: &Group, sample: &[Elem]) {
        let e = g.identity();
        for a in sample {
            assert_eq!(g.mul(a, &e).unwrap(), *a);
            assert_eq!(g.mul(&e, a).unwrap(), *a);
            assert_eq!(g.mul(a, &g.inv(a).unwrap()).unwrap(), e);
            for b in sample {
                for c in sample.iter().take(6) {
                    let l = g.mul(&g.mul(a, b).unwrap(), c).unwrap();
                    let r = g.mul(a, &g.mul(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn finite_group_axioms() {
        let mut b = Budget::default();
        let s4 = Group::Perm { degree: 4, gens: vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]] };
        let lq = Group::lattice_quotient(2, &[vec![4, 2], vec![0, 6]]).unwrap();
        let dih = Group::semidirect(Group::Cyclic(5), 2, vec![vec![-1]]).unwrap();
        let prod = Group::product(Group::Cyclic(3), s4.clone());
        for g in [Group::Cyclic(6), s4, lq, dih, prod] {
            let els = g.elements(&mut b).unwrap();
            axioms(&g, &els);
        }
    }

    #[test]
    fn sizes() {
        let mut b = Budget::default();
        assert_eq!(Group::lattice_quotient(2, &[vec![8, 0], vec![0, 8]]).unwrap().elements(&mut b).unwrap().len(), 64);
        assert_eq!(Group::lattice_quotient(2, &[vec![4, 2], vec![0, 6]]).unwrap().elements(&mut b).unwrap().len(), 24);
        assert_eq!(Group::semidirect(Group::Cyclic(5), 2, vec![vec![-1]]).unwrap().elements(&mut b).unwrap().len(), 10);
        assert!(Group::semidirect(Group::Cyclic(5), 2, vec![vec![2]]).is_err());
    }

    #[test]
    fn free_group_truncation() {
        let f = Group::Free { rank: 2, trunc: 3 };
        let a = Elem::Word(vec![1, 2, 1]);
        assert_eq!(f.mul(&a, &Elem::Word(vec![-1])).unwrap(), Elem::Word(vec![1, 2]));
        assert_eq!(f.mul(&a, &Elem::Word(vec![2])), Err(Error::Truncation(3)));
        assert_eq!(f.order_of(&a), Order::Infinite);
    }

    #[test]
    fn orders() {
        assert_eq!(Group::Cyclic(12).order_of(&Elem::Int(8)), Order::Finite(3));
        assert_eq!(Group::FreeAbelian(2).order_of(&Elem::Vec(vec![1, 0])), Order::Infinite);
        let inf_dih = Group::semidirect(Group::FreeAbelian(1), 2, vec![vec![-1]]).unwrap();
        let refl = Elem::pair(Elem::Vec(vec![3]), Elem::Int(1));
        let tr = Elem::pair(Elem::Vec(vec![3]), Elem::Int(0));
        assert_eq!(inf_dih.order_of(&refl), Order::Finite(2));
        assert_eq!(inf_dih.order_of(&tr), Order::Infinite);
        axioms(&inf_dih, &[refl, tr, Elem::pair(Elem::Vec(vec![-2]), Elem::Int(1))]);
    }
}
