//! Triangle counts N₃, Δ-augmentation, discrete generating sets and cyclic padding.

use crate::error::{precondition, Budget, Error, Result};
use crate::graph::{local_stabilizer_probe, maximum_cliques, max_clique_size, SimpleGraph};
use crate::group::{cayley_graph, elem_to_json, CayleyGraph, Elem, GenSet, Group, Order};
use serde::Serialize;
use std::collections::HashSet;

/// N₃(s, S) = |{t ∈ S : s⁻¹t ∈ S}|, zero when s ∉ S.
pub fn n3(g: &Group, s: &Elem, set: &GenSet) -> Result<usize> {
    if !set.contains(s) {
        return Ok(0);
    }
    let si = g.inv(s)?;
    let mut c = 0;
    for t in &set.elements {
        if set.contains(&g.mul(&si, t)?) {
            c += 1;
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleProfile {
    pub entries: Vec<(Elem, usize)>,
}

impl TriangleProfile {
    pub fn get(&self, s: &Elem) -> usize {
        self.entries.iter().find(|(e, _)| e == s).map_or(0, |x| x.1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.entries.iter().map(|(e, c)| serde_json::json!([elem_to_json(e), c])).collect())
    }
}

pub fn n3_profile(g: &Group, set: &GenSet) -> Result<TriangleProfile> {
    let members: HashSet<&Elem> = set.elements.iter().collect();
    let mut entries = Vec::with_capacity(set.len());
    for s in &set.elements {
        let si = g.inv(s)?;
        let mut c = 0;
        for t in &set.elements {
            if members.contains(&g.mul(&si, t)?) {
                c += 1;
            }
        }
        entries.push((s.clone(), c));
    }
    Ok(TriangleProfile { entries })
}

/// Admissible (ΔN₃(s₀), ΔN₃(s₀²)) pairs by the order of s₀.
pub fn increment_table(order: Order) -> &'static [(i64, i64)] {
    match order {
        Order::Finite(2) => &[(2, 0), (4, 0)],
        Order::Finite(3) => &[(1, 1), (2, 2), (3, 3)],
        Order::Finite(4) => &[(1, 0), (2, 0), (2, 2)],
        _ => &[(1, 0), (2, 0), (2, 1)],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AugmentationStep {
    #[serde(serialize_with = "ser_elem")]
    pub s0: Elem,
    #[serde(serialize_with = "ser_elem")]
    pub gamma: Elem,
    pub n: u64,
    #[serde(serialize_with = "ser_elems")]
    pub delta: Vec<Elem>,
    pub increment: (i64, i64),
    /// Rejected exponents with the failing condition.
    pub rejected: Vec<(u64, String)>,
}

fn ser_elem<S: serde::Serializer>(e: &Elem, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&elem_to_json(e), s)
}

fn ser_elems<S: serde::Serializer>(e: &[Elem], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&e.iter().map(elem_to_json).collect::<Vec<_>>(), s)
}

fn require_infinite(g: &Group, gamma: &Elem) -> Result<()> {
    match g.order_of(gamma) {
        Order::Infinite => Ok(()),
        Order::Finite(k) => Err(precondition(format!("gamma has finite order {k}; an element of infinite order is required"))),
        Order::Unknown => Err(precondition("order of gamma is unknown; supply an element of provably infinite order")),
    }
}

/// S ∪ Δ for the least n ≤ `search_bound` meeting all four conclusions of the lemma.
pub fn augment_genset(g: &Group, set: &GenSet, s0: &Elem, gamma: &Elem, search_bound: u64) -> Result<(GenSet, AugmentationStep)> {
    let s0 = g.normalize(s0)?;
    if !set.contains(&s0) {
        return Err(precondition("s0 must lie in S"));
    }
    require_infinite(g, gamma)?;
    let mut short: HashSet<Elem> = HashSet::from([g.identity()]);
    let mut squares: HashSet<Elem> = HashSet::new();
    for a in &set.elements {
        short.insert(a.clone());
        squares.insert(g.mul(a, a)?);
        for b in &set.elements {
            short.insert(g.mul(a, b)?);
        }
    }
    let before = n3_profile(g, set)?;
    let s0sq = g.mul(&s0, &s0)?;
    let s0i = g.inv(&s0)?;
    let special = [s0.clone(), s0i.clone(), s0sq.clone(), g.inv(&s0sq)?];
    let table = increment_table(g.order_of(&s0));
    let base_s0 = n3(g, &s0, set)? as i64;
    let base_sq = n3(g, &s0sq, set)? as i64;
    let mut rejected = Vec::new();
    for n in 1..=search_bound {
        let gn = g.pow(gamma, n)?;
        let gmn = g.inv(&gn)?;
        let mut delta: Vec<Elem> = Vec::new();
        for d in [gn.clone(), gmn.clone(), g.mul(&s0i, &gn)?, g.mul(&gmn, &s0)?] {
            if !delta.contains(&d) {
                delta.push(d);
            }
        }
        if let Some(d) = delta.iter().find(|d| short.contains(*d)) {
            rejected.push((n, format!("{} has S-length below 3", elem_to_json(d))));
            continue;
        }
        if delta.iter().any(|d| squares.contains(d)) {
            rejected.push((n, "Delta meets the squares of S".into()));
            continue;
        }
        let mut elems = set.elements.clone();
        elems.extend(delta.iter().cloned());
        let next = GenSet::new(g, &elems)?;
        let after = n3_profile(g, &next)?;
        if let Some(d) = delta.iter().find(|d| after.get(d) > 6) {
            rejected.push((n, format!("new generator {} lies in {} triangles", elem_to_json(d), after.get(d))));
            continue;
        }
        if let Some((s, c)) = before.entries.iter().find(|(s, c)| !special.contains(s) && after.get(s) != *c) {
            rejected.push((n, format!("N3 of {} changed from {c}", elem_to_json(s))));
            continue;
        }
        let inc = (n3(g, &s0, &next)? as i64 - base_s0, n3(g, &s0sq, &next)? as i64 - base_sq);
        if !table.contains(&inc) {
            rejected.push((n, format!("increment {inc:?} not in the table for s0")));
            continue;
        }
        let step = AugmentationStep { s0, gamma: gamma.clone(), n, delta, increment: inc, rejected };
        return Ok((next, step));
    }
    let why = rejected.last().map_or(String::new(), |r| r.1.clone());
    Err(Error::Failed(format!("no admissible n up to {search_bound}; last rejection: {why}")))
}

/// Increments T_{i+1} ∖ T_i of a maximal chain of symmetric subsets of S₀
/// closed under "s² ∈ T ⇒ s ∈ T".
pub fn maximal_chain(g: &Group, s0: &GenSet) -> Result<Vec<Vec<Elem>>> {
    let close = |base: &[Elem], t: &Elem| -> Result<Vec<Elem>> {
        let mut u: Vec<Elem> = base.to_vec();
        let mut pending = vec![t.clone()];
        while let Some(x) = pending.pop() {
            for y in [x.clone(), g.inv(&x)?] {
                if !u.contains(&y) {
                    u.push(y);
                }
            }
            for s in &s0.elements {
                if !u.contains(s) && u.contains(&g.mul(s, s)?) {
                    pending.push(s.clone());
                }
            }
        }
        Ok(u)
    };
    let mut cur: Vec<Elem> = Vec::new();
    let mut steps = Vec::new();
    while cur.len() < s0.len() {
        let mut best: Option<Vec<Elem>> = None;
        for t in s0.elements.iter().filter(|t| !cur.contains(t)) {
            let u = close(&cur, t)?;
            if best.as_ref().is_none_or(|b| u.len() < b.len()) {
                best = Some(u);
            }
        }
        let u = best.unwrap();
        steps.push(u[cur.len()..].to_vec());
        cur = u;
    }
    Ok(steps)
}

#[derive(Clone, Debug)]
pub struct DiscreteGenset {
    pub genset: GenSet,
    pub chain: Vec<Vec<Elem>>,
    pub steps: Vec<AugmentationStep>,
    pub profile: TriangleProfile,
}

/// Builds S ⊇ S₀ whose N₃ values separate the inversion classes of S₀ from
/// each other and from every added generator.
pub fn build_discrete_genset(g: &Group, s0: &GenSet, gamma: &Elem, search_bound: u64, max_steps: usize) -> Result<DiscreteGenset> {
    require_infinite(g, gamma)?;
    let chain = maximal_chain(g, s0)?;
    let mut set = s0.clone();
    let mut steps = Vec::new();
    let mut done: Vec<Elem> = Vec::new();
    for inc in &chain {
        // classes of the increment ordered t, t², t⁴, ... when they are powers
        let mut order: Vec<Elem> = Vec::new();
        let mut t = inc[0].clone();
        while inc.contains(&t) && !order.iter().any(|o| *o == t || g.inv(o).ok().as_ref() == Some(&t)) {
            order.push(t.clone());
            t = g.mul(&t, &t)?;
        }
        for e in inc {
            if !order.iter().any(|o| o == e || g.inv(o).ok().as_ref() == Some(e)) {
                order.push(e.clone());
            }
        }
        loop {
            let floor = done.iter().map(|s| n3(g, s, &set)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0).max(6);
            let vals = order.iter().map(|s| n3(g, s, &set)).collect::<Result<Vec<_>>>()?;
            // the largest index whose separation constraint fails
            let bad = (0..order.len()).rev().find(|&k| if k + 1 == order.len() { vals[k] <= floor } else { vals[k] <= vals[k + 1] });
            let Some(k) = bad else { break };
            if steps.len() >= max_steps {
                return Err(Error::Failed(format!("separation not reached within {max_steps} augmentation steps")));
            }
            let (next, step) = augment_genset(g, &set, &order[k], gamma, search_bound)?;
            set = next;
            steps.push(step);
        }
        done.extend(inc.iter().cloned());
    }
    let profile = n3_profile(g, &set)?;
    for s in &s0.elements {
        let si = g.inv(s)?;
        if profile.get(s) < 7 {
            return Err(Error::Failed(format!("N3({}) = {} is below 7", elem_to_json(s), profile.get(s))));
        }
        for (t, c) in &profile.entries {
            let same = *t == *s || *t == si;
            if (*c == profile.get(s)) != same {
                return Err(Error::Failed(format!("N3 does not separate {} from {}", elem_to_json(s), elem_to_json(t))));
            }
        }
    }
    for (t, c) in &profile.entries {
        if !s0.contains(t) && *c > 6 {
            return Err(Error::Failed(format!("added generator {} has N3 = {c}", elem_to_json(t))));
        }
    }
    Ok(DiscreteGenset { genset: set, chain, steps, profile })
}

/// Least r ≤ probe_radius with trivial pointwise stabilizers of all radius-r
/// balls centred in `interior` (all vertices when `None`).
pub fn discreteness_certificate(g: &SimpleGraph, probe_radius: u32, interior: Option<&[bool]>, budget: &mut Budget) -> Result<Option<u32>> {
    let centers: Vec<usize> = (0..g.n()).filter(|&v| interior.is_none_or(|i| i[v])).collect();
    for r in 0..=probe_radius {
        let mut ok = true;
        for &v in &centers {
            if local_stabilizer_probe(g, v, r, budget)? != 1 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct PaddedGenset {
    pub clique_size: usize,
    pub primes: Vec<u64>,
    /// Inversion classes s₁..s_n of S, one representative each.
    pub classes: Vec<Elem>,
    pub group: Group,
    pub genset: GenSet,
    pub graph: CayleyGraph,
    /// The maximum cliques are exactly the fibers {γ} × F.
    pub fibers_are_max_cliques: bool,
    /// Edges between {e} × F and {s_i} × F, per class.
    pub fiber_edge_counts: Vec<usize>,
}

fn primes_above(r: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = r + 1;
    while out.len() < n {
        if p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            out.push(p);
        }
        p += 1;
    }
    out
}

fn f_group(primes: &[u64]) -> Group {
    let mut it = primes.iter().rev();
    let mut g = Group::Cyclic(*it.next().unwrap());
    for &p in it {
        g = Group::product(Group::Cyclic(p), g);
    }
    g
}

fn f_elem(coords: &[i64]) -> Elem {
    let mut it = coords.iter().rev();
    let mut e = Elem::Int(*it.next().unwrap());
    for &c in it {
        e = Elem::pair(Elem::Int(c), e);
    }
    e
}

/// Γ × F with S̃ = ⋃ {s_i, s_i⁻¹} × Z/p_i ∪ {1} × (F ∖ 0), for finite Γ.
pub fn build_padded_genset(gamma: &Group, s: &GenSet, s0: &GenSet, budget: &mut Budget) -> Result<PaddedGenset> {
    if s.len() < 3 {
        return Err(precondition("S needs at least 3 elements"));
    }
    for x in &s0.elements {
        if !s.contains(x) {
            return Err(precondition(format!("{} is in S0 but not in S", elem_to_json(x))));
        }
        let mut ok = false;
        for y in &s.elements {
            let xy = gamma.mul(x, y)?;
            if s.contains(&xy) && ![y.clone(), gamma.inv(y)?, xy.clone(), gamma.inv(&xy)?].contains(x) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(precondition(format!("no s' in S works for s = {}", elem_to_json(x))));
        }
    }
    let base = cayley_graph(gamma, s, false, budget)?;
    let cb = max_clique_size(&base.graph, budget);
    if !cb.exact {
        return Err(Error::Budget(budget.limit()));
    }
    let labels = s.label_classes(gamma)?;
    let ncls = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
    let classes: Vec<Elem> = (0..ncls as u32).map(|c| s.elements[labels.iter().position(|&l| l == c).unwrap()].clone()).collect();
    let primes = primes_above(cb.lower as u64, ncls);
    let f = f_group(&primes);
    let group = Group::product(gamma.clone(), f.clone());
    let mut gens = Vec::new();
    for (i, x) in s.elements.iter().enumerate() {
        let c = labels[i] as usize;
        for a in 0..primes[c] as i64 {
            let mut coords = vec![0i64; ncls];
            coords[c] = a;
            gens.push(Elem::pair(x.clone(), f_elem(&coords)));
        }
    }
    for fe in f.elements(budget)?.into_iter().skip(1) {
        gens.push(Elem::pair(gamma.identity(), fe));
    }
    let genset = GenSet::new(&group, &gens)?;
    let graph = cayley_graph(&group, &genset, false, budget)?;
    let fsize: usize = primes.iter().product::<u64>() as usize;
    let fiber_of = |e: &Elem| match e {
        Elem::Pair(a, _) => (**a).clone(),
        _ => unreachable!(),
    };
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    for x in &base.elements {
        let mut f: Vec<usize> = (0..graph.elements.len()).filter(|&i| fiber_of(&graph.elements[i]) == *x).collect();
        f.sort_unstable();
        fibers.push(f);
    }
    fibers.sort();
    let fibers_are_max_cliques = match maximum_cliques(&graph.graph, budget) {
        Some(cl) => cl.first().is_some_and(|c| c.len() == fsize) && cl == fibers,
        None => return Err(Error::Budget(budget.limit())),
    };
    let e_fiber: HashSet<usize> = (0..graph.elements.len()).filter(|&i| gamma.is_identity(&fiber_of(&graph.elements[i]))).collect();
    let mut fiber_edge_counts = Vec::new();
    for c in &classes {
        let other: HashSet<usize> = (0..graph.elements.len()).filter(|&i| fiber_of(&graph.elements[i]) == *c).collect();
        let count = e_fiber.iter().map(|&u| graph.graph.neighbors(u).iter().filter(|w| other.contains(w)).count()).sum();
        fiber_edge_counts.push(count);
    }
    Ok(PaddedGenset { clique_size: cb.lower, primes, classes, group, genset, graph, fibers_are_max_cliques, fiber_edge_counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cayley_ball;

    fn zs(xs: &[i64]) -> GenSet {
        let g = Group::FreeAbelian(1);
        GenSet::symmetric_closure(&g, &xs.iter().map(|&x| Elem::Vec(vec![x])).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn profiles() {
        let z = Group::FreeAbelian(1);
        let one = Elem::Vec(vec![1]);
        assert_eq!(n3(&z, &one, &zs(&[1])).unwrap(), 0);
        let p = n3_profile(&z, &zs(&[1, 2])).unwrap();
        assert_eq!(p.get(&one), 2);
        assert_eq!(p.get(&Elem::Vec(vec![-2])), 1);
        let z5 = Group::Cyclic(5);
        let s = GenSet::new(&z5, &[1, 4, 2, 3].map(Elem::Int)).unwrap();
        assert!(n3_profile(&z5, &s).unwrap().entries.iter().all(|e| e.1 == 3));
    }

    #[test]
    fn augment_integers() {
        let z = Group::FreeAbelian(1);
        let one = Elem::Vec(vec![1]);
        let (next, step) = augment_genset(&z, &zs(&[1]), &one, &one, 50).unwrap();
        assert_eq!(step.n, 4);
        let mut got: Vec<i64> = step.delta.iter().map(|e| if let Elem::Vec(v) = e { v[0] } else { 0 }).collect();
        got.sort();
        assert_eq!(got, vec![-4, -3, 3, 4]);
        assert_eq!(step.increment, (2, 0));
        assert_eq!(next.len(), 6);
        assert!(augment_genset(&Group::Cyclic(7), &GenSet::new(&Group::Cyclic(7), &[Elem::Int(1), Elem::Int(6)]).unwrap(), &Elem::Int(1), &Elem::Int(1), 5).is_err());
    }

    #[test]
    fn chain_respects_squares() {
        let z7 = Group::Cyclic(7);
        // 2 = 1+1 and 4 = 2+2, 1 = 4+4 (mod 7): one block
        let s = GenSet::new(&z7, &[1, 6, 2, 5, 4, 3].map(Elem::Int)).unwrap();
        let ch = maximal_chain(&z7, &s).unwrap();
        assert_eq!(ch.len(), 1);
        let z = Group::FreeAbelian(1);
        let ch = maximal_chain(&z, &zs(&[1, 2])).unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch[0].contains(&Elem::Vec(vec![1])));
    }

    #[test]
    fn discrete_genset_for_integers() {
        let z = Group::FreeAbelian(1);
        let d = build_discrete_genset(&z, &zs(&[1]), &Elem::Vec(vec![1]), 200, 64).unwrap();
        assert!(d.profile.get(&Elem::Vec(vec![1])) >= 7);
        let ball = cayley_ball(&z, &d.genset, 2, &mut Budget::default()).unwrap();
        for (s, c) in &d.profile.entries {
            let v = ball.index_of(s).unwrap();
            assert_eq!(ball.ball.carrier.edge_triangle_count(0, v).unwrap(), *c);
        }
    }

    #[test]
    fn torsion_gamma_is_rejected() {
        let v = Group::product(Group::Cyclic(2), Group::product(Group::Cyclic(2), Group::Cyclic(2)));
        let x = Elem::pair(Elem::Int(1), Elem::pair(Elem::Int(0), Elem::Int(0)));
        let s = GenSet::new(&v, std::slice::from_ref(&x)).unwrap();
        assert!(matches!(build_discrete_genset(&v, &s, &x, 10, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn tree_ball_is_not_discrete() {
        let f2 = Group::Free { rank: 2, trunc: 4 };
        let s = GenSet::new(&f2, &[1, -1, 2, -2].map(|k| Elem::Word(vec![k]))).unwrap();
        let b = cayley_ball(&f2, &s, 3, &mut Budget::default()).unwrap();
        let interior: Vec<bool> = b.ball.ambient_dist.iter().map(|&d| d <= 1).collect();
        assert_eq!(discreteness_certificate(&b.ball.carrier, 1, Some(&interior), &mut Budget::default()).unwrap(), None);
    }

    #[test]
    fn padded_z5() {
        let z5 = Group::Cyclic(5);
        let s = GenSet::new(&z5, &[1, 4, 2, 3].map(Elem::Int)).unwrap();
        let s0 = GenSet::new(&z5, &[1, 4].map(Elem::Int)).unwrap();
        let p = build_padded_genset(&z5, &s, &s0, &mut Budget::new(200_000_000)).unwrap();
        assert_eq!(p.clique_size, 5);
        assert_eq!(p.primes, vec![7, 11]);
        assert_eq!(p.graph.graph.n(), 385);
        assert!(p.fibers_are_max_cliques);
        assert_eq!(p.fiber_edge_counts, vec![77 * 7, 77 * 11]);
        let bad = GenSet::new(&z5, &[1, 4].map(Elem::Int)).unwrap();
        assert!(build_padded_genset(&z5, &bad, &bad, &mut Budget::default()).is_err());
    }

    #[test]
    fn discrete_genset_for_z2() {
        let z2 = Group::FreeAbelian(2);
        let s0 = GenSet::symmetric_closure(&z2, &[Elem::Vec(vec![1, 0]), Elem::Vec(vec![0, 1])]).unwrap();
        let d = build_discrete_genset(&z2, &s0, &Elem::Vec(vec![1, 0]), 200, 64).unwrap();
        let a = d.profile.get(&Elem::Vec(vec![1, 0]));
        let b = d.profile.get(&Elem::Vec(vec![0, 1]));
        assert!(a >= 7 && b >= 7 && a != b);
    }
}
