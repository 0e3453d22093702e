//! Generating sets, Cayley graphs and Cayley balls, word metrics.

use super::{Elem, Group};
use crate::error::{malformed, precondition, Budget, Error, Result};
use crate::graph::{BallView, SimpleGraph};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Finite symmetric identity-free subset, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    pub elements: Vec<Elem>,
}

impl GenSet {
    pub fn new(g: &Group, elems: &[Elem]) -> Result<GenSet> {
        let mut out: Vec<Elem> = Vec::new();
        for e in elems {
            let e = g.normalize(e)?;
            if g.is_identity(&e) {
                return Err(malformed("generating set contains the identity"));
            }
            if out.contains(&e) {
                return Err(malformed(format!("duplicate generator {e:?}")));
            }
            out.push(e);
        }
        for e in &out {
            if !out.contains(&g.inv(e)?) {
                return Err(malformed(format!("generating set not symmetric: inverse of {e:?} missing")));
            }
        }
        Ok(GenSet { elements: out })
    }

    /// Adds missing inverses and drops the identity and duplicates.
    pub fn symmetric_closure(g: &Group, elems: &[Elem]) -> Result<GenSet> {
        let mut out: Vec<Elem> = Vec::new();
        for e in elems {
            let e = g.normalize(e)?;
            for x in [e.clone(), g.inv(&e)?] {
                if !g.is_identity(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        Ok(GenSet { elements: out })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.elements.contains(e)
    }

    /// Inversion class id per element, numbered by first appearance.
    pub fn label_classes(&self, g: &Group) -> Result<Vec<u32>> {
        let mut ids = vec![u32::MAX; self.len()];
        let mut next = 0;
        for i in 0..self.len() {
            if ids[i] != u32::MAX {
                continue;
            }
            ids[i] = next;
            let inv = g.inv(&self.elements[i])?;
            if let Some(j) = self.elements.iter().position(|x| *x == inv) {
                ids[j] = next;
            }
            next += 1;
        }
        Ok(ids)
    }
}

#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub ball: BallView,
    /// Group element per carrier vertex.
    pub elements: Vec<Elem>,
    pub center: Elem,
}

impl CayleyBall {
    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }
}

fn cayley_ball_impl(g: &Group, s: &GenSet, r: u32, marked: bool, budget: &mut Budget) -> Result<CayleyBall> {
    let labels = if marked { s.label_classes(g)? } else { vec![0; s.len()] };
    let e = g.identity();
    let mut elements = vec![e.clone()];
    let mut depth = vec![0u32];
    let mut index: HashMap<Elem, usize> = HashMap::from([(e.clone(), 0)]);
    let mut edges: BTreeSet<(usize, usize, u32)> = BTreeSet::new();
    let mut i = 0;
    while i < elements.len() {
        let x = elements[i].clone();
        for (k, t) in s.elements.iter().enumerate() {
            budget.tick()?;
            let y = match g.mul(&x, t) {
                Ok(y) => y,
                // a product leaving the truncation has length > depth[i] >= r
                Err(Error::Truncation(_)) if depth[i] == r => continue,
                Err(err) => return Err(err),
            };
            let j = match index.get(&y) {
                Some(&j) => j,
                None if depth[i] < r => {
                    elements.push(y.clone());
                    depth.push(depth[i] + 1);
                    index.insert(y, elements.len() - 1);
                    elements.len() - 1
                }
                None => continue,
            };
            edges.insert((i.min(j), i.max(j), labels[k]));
        }
        i += 1;
    }
    let n = elements.len();
    let carrier = if marked {
        SimpleGraph::from_labeled_edges(n, edges)?
    } else {
        SimpleGraph::from_edges(n, edges.into_iter().map(|(a, b, _)| (a, b)))?
    };
    Ok(CayleyBall { ball: BallView::from_parts(carrier, 0, r, (0..n).collect(), depth), elements, center: e })
}

/// Ball of radius `r` about the identity in the Cayley graph (component of the identity).
pub fn cayley_ball(g: &Group, s: &GenSet, r: u32, budget: &mut Budget) -> Result<CayleyBall> {
    cayley_ball_impl(g, s, r, false, budget)
}

/// As `cayley_ball`, each edge labelled by the inversion class of its generator.
pub fn marked_cayley(g: &Group, s: &GenSet, r: u32, budget: &mut Budget) -> Result<CayleyBall> {
    cayley_ball_impl(g, s, r, true, budget)
}

/// Full Cayley graph of a finite group.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub graph: SimpleGraph,
    pub elements: Vec<Elem>,
    pub index: HashMap<Elem, usize>,
}

impl CayleyGraph {
    pub fn index_of(&self, e: &Elem) -> Result<usize> {
        self.index.get(e).copied().ok_or_else(|| malformed(format!("{e:?} is not a vertex")))
    }
}

pub fn cayley_graph(g: &Group, s: &GenSet, marked: bool, budget: &mut Budget) -> Result<CayleyGraph> {
    let elements = g.elements(budget)?;
    let index: HashMap<Elem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let labels = if marked { s.label_classes(g)? } else { vec![0; s.len()] };
    let mut edges = BTreeSet::new();
    for (i, x) in elements.iter().enumerate() {
        for (k, t) in s.elements.iter().enumerate() {
            budget.tick()?;
            let j = index[&g.mul(x, t)?];
            edges.insert((i.min(j), i.max(j), labels[k]));
        }
    }
    let n = elements.len();
    let graph = if marked {
        SimpleGraph::from_labeled_edges(n, edges)?
    } else {
        SimpleGraph::from_edges(n, edges.into_iter().map(|(a, b, _)| (a, b)))?
    };
    Ok(CayleyGraph { graph, elements, index })
}

/// |x|_S by breadth-first search; `None` when the budget runs out first.
pub fn word_length(g: &Group, s: &GenSet, x: &Elem, budget: &mut Budget) -> Result<Option<u32>> {
    let x = g.normalize(x)?;
    let mut seen: HashSet<Elem> = HashSet::from([g.identity()]);
    let mut layer = vec![g.identity()];
    let mut d = 0;
    loop {
        if layer.contains(&x) {
            return Ok(Some(d));
        }
        if layer.is_empty() {
            return Err(precondition("element is not in the subgroup generated by S"));
        }
        let mut next = Vec::new();
        for y in &layer {
            for t in &s.elements {
                if budget.tick().is_err() {
                    return Ok(None);
                }
                let z = g.mul(y, t)?;
                if seen.insert(z.clone()) {
                    next.push(z);
                }
            }
        }
        layer = next;
        d += 1;
    }
}

/// ρ(R) = max |g|_S over g in G with |g|_T <= R. `in_g` decides membership in G.
pub fn distortion_rho(h: &Group, t: &GenSet, s: &GenSet, in_g: &dyn Fn(&Elem) -> bool, r: u32, budget: &mut Budget) -> Result<u32> {
    for x in &s.elements {
        if !t.contains(x) || !in_g(x) {
            return Err(precondition(format!("generator {x:?} of S is not in T and G")));
        }
    }
    let ball = cayley_ball(h, t, r, budget)?;
    let mut want: HashSet<Elem> = ball.elements.iter().filter(|x| in_g(x)).cloned().collect();
    let mut seen: HashSet<Elem> = HashSet::from([h.identity()]);
    let mut layer = vec![h.identity()];
    let mut d = 0;
    let mut rho = 0;
    while !want.is_empty() {
        for x in &layer {
            if want.remove(x) {
                rho = d;
            }
        }
        if want.is_empty() {
            break;
        }
        if layer.is_empty() {
            return Err(precondition("some elements of G in the T-ball are not generated by S"));
        }
        let mut next = Vec::new();
        for y in &layer {
            for x in &s.elements {
                budget.tick()?;
                let z = h.mul(y, x)?;
                if seen.insert(z.clone()) {
                    next.push(z);
                }
            }
        }
        layer = next;
        d += 1;
    }
    Ok(rho)
}

/// All elements of S₁-length 1..=N.
pub fn build_s_n(g: &Group, s1: &GenSet, n: u32, budget: &mut Budget) -> Result<GenSet> {
    if (n as usize) <= s1.len() {
        return Err(precondition(format!("N = {n} must exceed |S1| = {}", s1.len())));
    }
    let b = cayley_ball(g, s1, n, budget)?;
    Ok(GenSet { elements: b.elements[1..].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::automorphism_group;

    fn ints(g: &Group, xs: &[i64]) -> GenSet {
        GenSet::new(g, &xs.iter().map(|&x| Elem::Int(x)).collect::<Vec<_>>()).unwrap()
    }

    fn zvec(xs: &[&[i64]]) -> Vec<Elem> {
        xs.iter().map(|v| Elem::Vec(v.to_vec())).collect()
    }

    #[test]
    fn genset_checks() {
        let z5 = Group::Cyclic(5);
        assert!(GenSet::new(&z5, &[Elem::Int(1)]).is_err());
        assert!(GenSet::new(&z5, &[Elem::Int(0)]).is_err());
        assert_eq!(GenSet::symmetric_closure(&z5, &[Elem::Int(1), Elem::Int(0)]).unwrap().len(), 2);
    }

    #[test]
    fn small_balls() {
        let mut b = Budget::default();
        let z = Group::FreeAbelian(1);
        let s = GenSet::new(&z, &zvec(&[&[1], &[-1]])).unwrap();
        let cb = cayley_ball(&z, &s, 3, &mut b).unwrap();
        assert_eq!((cb.ball.len(), cb.ball.carrier.edge_count()), (7, 6));
        let c4 = cayley_graph(&Group::Cyclic(4), &ints(&Group::Cyclic(4), &[1, 3]), false, &mut b).unwrap();
        assert_eq!(c4.graph.edge_count(), 4);
        let v4 = Group::product(Group::Cyclic(2), Group::Cyclic(2));
        let s = GenSet::new(&v4, &[Elem::pair(Elem::Int(1), Elem::Int(0))]).unwrap();
        let g = cayley_graph(&v4, &s, false, &mut b).unwrap();
        assert_eq!((g.graph.edge_count(), g.graph.component_count()), (2, 2));
    }

    #[test]
    fn marked_balls() {
        let mut b = Budget::default();
        let z2 = Group::FreeAbelian(2);
        let s = GenSet::new(&z2, &zvec(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap();
        let m = marked_cayley(&z2, &s, 1, &mut b).unwrap();
        let mut labels: Vec<u32> = (1..5).map(|v| m.ball.carrier.edge_label(0, v).unwrap()).collect();
        labels.sort();
        assert_eq!(labels, vec![0, 0, 1, 1]);
        let z7 = Group::Cyclic(7);
        let g = cayley_graph(&z7, &ints(&z7, &[1, 6, 2, 5, 3, 4]), true, &mut b).unwrap();
        let aut = automorphism_group(&g.graph, true, &mut b).unwrap();
        assert_eq!(aut.order, 14);
    }

    #[test]
    fn word_lengths_and_distortion() {
        let mut b = Budget::default();
        let z = Group::FreeAbelian(1);
        let s = GenSet::new(&z, &zvec(&[&[1], &[-1]])).unwrap();
        let t = GenSet::new(&z, &zvec(&[&[1], &[-1], &[3], &[-3]])).unwrap();
        assert_eq!(word_length(&z, &s, &Elem::Vec(vec![-5]), &mut b).unwrap(), Some(5));
        assert_eq!(word_length(&z, &t, &Elem::Vec(vec![7]), &mut b).unwrap(), Some(3));
        assert_eq!(distortion_rho(&z, &t, &s, &|_| true, 2, &mut b).unwrap(), 6);
        assert_eq!(distortion_rho(&z, &s, &s, &|_| true, 4, &mut b).unwrap(), 4);
        let z2 = Group::FreeAbelian(2);
        let t2 = GenSet::new(&z2, &zvec(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap();
        let s2 = GenSet::new(&z2, &zvec(&[&[1, 0], &[-1, 0]])).unwrap();
        let on_axis = |e: &Elem| matches!(e, Elem::Vec(v) if v[1] == 0);
        assert_eq!(distortion_rho(&z2, &t2, &s2, &on_axis, 3, &mut b).unwrap(), 3);
    }

    #[test]
    fn s_n_sets() {
        let mut b = Budget::default();
        let z = Group::FreeAbelian(1);
        let s = GenSet::new(&z, &zvec(&[&[1], &[-1]])).unwrap();
        let s3 = build_s_n(&z, &s, 3, &mut b).unwrap();
        let mut v: Vec<i64> = s3.elements.iter().map(|e| if let Elem::Vec(x) = e { x[0] } else { 0 }).collect();
        v.sort();
        assert_eq!(v, vec![-3, -2, -1, 1, 2, 3]);
        let z7 = Group::Cyclic(7);
        assert_eq!(build_s_n(&z7, &ints(&z7, &[1, 6]), 3, &mut b).unwrap().len(), 6);
        let f2 = Group::Free { rank: 2, trunc: 5 };
        let gens: Vec<Elem> = [1, -1, 2, -2].iter().map(|&k| Elem::Word(vec![k])).collect();
        let sf = GenSet::new(&f2, &gens).unwrap();
        assert_eq!(build_s_n(&f2, &sf, 5, &mut b).unwrap().len(), 484);
        assert!(build_s_n(&z, &s, 2, &mut b).is_err());
    }
}
