//! Z/2-valued 2-cocycles on finite groups, central extensions and double covers.

use crate::error::{precondition, Budget, Error, Result};
use crate::gf2::Gf2Matrix;
use crate::group::{cayley_graph, elem_to_json, CayleyGraph, CocycleTable, Elem, GenSet, Group};
use crate::rigidity::{verify_covering, CoveringMap};
use serde::Serialize;
use std::collections::HashMap;

/// Multiplication table of a finite group, identity at index 0.
pub struct MulTable {
    pub elements: Vec<Elem>,
    pub index: HashMap<Elem, usize>,
    mul: Vec<usize>,
}

impl MulTable {
    pub fn new(g: &Group, budget: &mut Budget) -> Result<Self> {
        let elements = g.elements(budget)?;
        let index: HashMap<Elem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                budget.tick()?;
                let c = g.mul(a, b)?;
                mul.push(*index.get(&c).ok_or_else(|| Error::Failed(format!("product {c:?} escaped the enumeration")))?);
            }
        }
        Ok(MulTable { elements, index, mul })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.len() + j]
    }

    pub fn inv(&self, i: usize) -> usize {
        (0..self.len()).find(|&j| self.mul(i, j) == 0).unwrap()
    }

    pub fn order(&self, i: usize) -> usize {
        let (mut x, mut k) = (i, 1);
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }
}

fn table_for(t: &CocycleTable, budget: &mut Budget) -> Result<MulTable> {
    let m = MulTable::new(&t.base, budget)?;
    if m.elements != t.elements {
        return Err(Error::Failed("cocycle table and group enumeration disagree".into()));
    }
    Ok(m)
}

/// φ(a, b) = [a + b ≥ n] on Z/n with representatives 0..n-1.
pub fn carry_cocycle(n: u64) -> Result<CocycleTable> {
    let g = Group::cyclic(n)?;
    let mut t = CocycleTable::zero(g, &mut Budget::unlimited())?;
    for i in 0..t.len() {
        for j in 0..t.len() {
            let (Elem::Int(a), Elem::Int(b)) = (&t.elements[i], &t.elements[j]) else { unreachable!() };
            t.set(i, j, (a + b >= n as i64) as u8);
        }
    }
    Ok(t)
}

/// dψ(g, h) = ψ(g) + ψ(h) + ψ(gh), with ψ indexed like the table's elements.
pub fn coboundary_of(base: &Group, psi: &[u8], budget: &mut Budget) -> Result<CocycleTable> {
    let mut t = CocycleTable::zero(base.clone(), budget)?;
    let m = table_for(&t, budget)?;
    for i in 0..m.len() {
        for j in 0..m.len() {
            t.set(i, j, psi[i] ^ psi[j] ^ psi[m.mul(i, j)]);
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleViolation {
    pub triple: [serde_json::Value; 3],
}

/// Checks φ(a, bc) + φ(b, c) = φ(ab, c) + φ(a, b) on all triples; returns
/// the number of triples checked.
pub fn validate_cocycle(t: &CocycleTable, budget: &mut Budget) -> Result<std::result::Result<usize, CocycleViolation>> {
    let m = table_for(t, budget)?;
    let n = m.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                budget.tick()?;
                if t.at(a, m.mul(b, c)) ^ t.at(b, c) ^ t.at(m.mul(a, b), c) ^ t.at(a, b) != 0 {
                    let triple = [a, b, c].map(|i| elem_to_json(&m.elements[i]));
                    return Ok(Err(CocycleViolation { triple }));
                }
            }
        }
    }
    Ok(Ok(n * n * n))
}

pub fn is_normalized(t: &CocycleTable) -> bool {
    let e = t.idx(&t.base.identity()).unwrap_or(0);
    (0..t.len()).all(|g| t.at(e, g) == 0 && t.at(g, e) == 0)
}

/// Adds the constant coboundary d(φ(e,e)), which zeroes φ(e,·) and φ(·,e) for a cocycle.
pub fn normalize(t: &CocycleTable) -> Result<CocycleTable> {
    let e = t.idx(&t.base.identity())?;
    let c = t.at(e, e);
    let mut out = t.clone();
    if c == 1 {
        for b in out.bits.iter_mut() {
            *b ^= 1;
        }
    }
    Ok(out)
}

fn coboundary_matrix(m: &MulTable) -> Gf2Matrix {
    let n = m.len();
    let mut a = Gf2Matrix::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            for k in [i, j, m.mul(i, j)] {
                a.flip(i * n + j, k);
            }
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum CoboundaryAnswer {
    /// φ = dψ.
    Coboundary { psi: Vec<u8> },
    /// Pairs (g, h) whose φ-values sum to 1 while every coboundary sums to 0 over them.
    NotCoboundary { functional: Vec<(usize, usize)> },
}

impl CoboundaryAnswer {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryAnswer::Coboundary { .. })
    }
}

pub fn is_coboundary(t: &CocycleTable, budget: &mut Budget) -> Result<CoboundaryAnswer> {
    let m = table_for(t, budget)?;
    let n = m.len();
    budget.charge((n * n * n) as u64)?;
    let a = coboundary_matrix(&m);
    if let Some(psi) = a.solve(&t.bits) {
        return Ok(CoboundaryAnswer::Coboundary { psi });
    }
    let y = a.separating_functional(&t.bits).ok_or_else(|| Error::Failed("elimination produced no certificate".into()))?;
    let functional = (0..n * n).filter(|&k| y[k] == 1).map(|k| (k / n, k % n)).collect();
    Ok(CoboundaryAnswer::NotCoboundary { functional })
}

/// Normalizes φ, then adds dψ with ψ supported on S so that φ(s, s⁻¹) = 0
/// for every s ∈ S. The cohomology class is unchanged; an involution with
/// φ(s, s) = 1 cannot be fixed and is an error.
pub fn symmetrize_on(t: &CocycleTable, s: &GenSet, budget: &mut Budget) -> Result<CocycleTable> {
    let t = normalize(t)?;
    let mut psi = vec![0u8; t.len()];
    for x in &s.elements {
        let xi = t.base.inv(x)?;
        let (i, j) = (t.idx(x)?, t.idx(&xi)?);
        if i == j {
            if t.at(i, i) == 1 {
                return Err(precondition(format!("involution {} lifts to an element of order 4", elem_to_json(x))));
            }
        } else if i < j {
            psi[j] = t.at(i, j);
        }
    }
    let d = coboundary_of(&t.base, &psi, budget)?;
    let mut out = t.clone();
    for (b, c) in out.bits.iter_mut().zip(&d.bits) {
        *b ^= c;
    }
    Ok(out)
}

/// E = Z/2 ×_φ G after normalization.
pub fn central_extension(t: &CocycleTable) -> Result<Group> {
    Ok(Group::central_ext(normalize(t)?))
}

/// S_τ = {(0, s) : s ∈ S}; errors when it is not closed under inversion in E.
pub fn section_lift(ext: &Group, s: &GenSet) -> Result<GenSet> {
    let Group::CentralExt(t) = ext else { return Err(precondition("section_lift needs a central extension")) };
    let lifted: Vec<Elem> = s.elements.iter().map(|x| Elem::ext(0, x.clone())).collect();
    for (x, l) in s.elements.iter().zip(&lifted) {
        let li = ext.inv(l)?;
        if !lifted.contains(&li) {
            let xi = t.base.inv(x)?;
            return Err(precondition(format!("S_tau is not symmetric: phi({}, {}) = 1", elem_to_json(x), elem_to_json(&xi))));
        }
    }
    GenSet::new(ext, &lifted)
}

#[derive(Clone, Debug)]
pub struct TwoCover {
    pub ext: Group,
    pub s_tau: GenSet,
    pub total: CayleyGraph,
    pub base: CayleyGraph,
    pub covering: CoveringMap,
    pub connected: bool,
    pub coboundary: bool,
}

/// q: (E, S_τ) → (G, S), (a, g) ↦ g.
pub fn two_covering_from_cocycle(t: &CocycleTable, s: &GenSet, budget: &mut Budget) -> Result<TwoCover> {
    if let Err(v) = validate_cocycle(t, budget)? {
        return Err(precondition(format!("not a cocycle: violating triple {:?}", v.triple)));
    }
    let ext = central_extension(&symmetrize_on(t, s, budget)?)?;
    let s_tau = section_lift(&ext, s)?;
    let total = cayley_graph(&ext, &s_tau, false, budget)?;
    let base = cayley_graph(&t.base, s, false, budget)?;
    let mut map = Vec::with_capacity(total.elements.len());
    for e in &total.elements {
        let Elem::Ext(_, g) = e else { unreachable!() };
        map.push(base.index_of(g)?);
    }
    let covering = verify_covering(&map, &total.graph, &base.graph)?.map_err(|v| Error::Failed(format!("double cover fails at vertex {}: {}", v.vertex, v.reason)))?;
    if covering.fiber_size != Some(2) {
        return Err(Error::Failed("fibers are not of size 2".into()));
    }
    let connected = total.graph.is_connected();
    let coboundary = is_coboundary(t, budget)?.is_coboundary();
    if !coboundary && !connected {
        return Err(Error::Failed("non-coboundary cocycle gave a disconnected cover".into()));
    }
    Ok(TwoCover { ext, s_tau, total, base, covering, connected, coboundary })
}

/// Largest m such that q⁻¹(B(x, m)) is disconnected for every x.
pub fn disconnected_preimage_radius(c: &TwoCover) -> Option<u32> {
    let mut best = None;
    let diam = c.base.graph.diameter()?;
    for m in 0..=diam {
        let all = (0..c.base.graph.n()).all(|x| {
            let d = c.base.graph.bfs(x);
            let verts: Vec<usize> = (0..c.total.graph.n()).filter(|&v| d[c.covering.map[v]] <= m).collect();
            c.total.graph.induced(&verts).component_count() >= 2
        });
        if !all {
            break;
        }
        best = Some(m);
    }
    best
}

/// A normalized cocycle vanishing on pairs with |g|_S + |h|_S ≤ n that is
/// not a coboundary, or `None` when every such cocycle is one.
pub fn short_vanishing_cocycle_search(g: &Group, s: &GenSet, n: u32, budget: &mut Budget) -> Result<Option<CocycleTable>> {
    let mut t = CocycleTable::zero(g.clone(), budget)?;
    let m = table_for(&t, budget)?;
    let k = m.len();
    let base = cayley_graph(g, s, false, budget)?;
    let e = base.index_of(&g.identity())?;
    let dist = base.graph.bfs(e);
    let len: Vec<u32> = m.elements.iter().map(|x| base.index_of(x).map(|i| dist[i])).collect::<Result<_>>()?;
    budget.charge((k * k * k) as u64)?;
    let mut c = Gf2Matrix::zeros(0, k * k);
    for a in 0..k {
        for b in 0..k {
            for d in 0..k {
                let mut row = vec![0u8; k * k];
                for p in [a * k + m.mul(b, d), b * k + d, m.mul(a, b) * k + d, a * k + b] {
                    row[p] ^= 1;
                }
                if row.contains(&1) {
                    c.push_row(&row);
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            if a == 0 || b == 0 || len[a].saturating_add(len[b]) <= n {
                let mut row = vec![0u8; k * k];
                row[a * k + b] = 1;
                c.push_row(&row);
            }
        }
    }
    let cob = coboundary_matrix(&m);
    for v in c.nullspace() {
        if cob.solve(&v).is_none() {
            t.bits = v;
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// An isomorphism of finite groups as (element of g1, image in g2) pairs.
pub fn find_group_isomorphism(g1: &Group, g2: &Group, budget: &mut Budget) -> Result<Option<Vec<(Elem, Elem)>>> {
    let a = MulTable::new(g1, budget)?;
    let b = MulTable::new(g2, budget)?;
    if a.len() != b.len() {
        return Ok(None);
    }
    let n = a.len();
    let closure = |gens: &[usize]| -> Vec<bool> {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = a.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let mut gens: Vec<usize> = Vec::new();
    let mut span = closure(&gens);
    for x in 0..n {
        if !span[x] {
            gens.push(x);
            span = closure(&gens);
        }
    }
    let ob: Vec<usize> = (0..n).map(|i| b.order(i)).collect();
    let mut images = vec![0usize; gens.len()];
    fn extend(a: &MulTable, b: &MulTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = a.len();
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; n];
        f[0] = 0;
        used[0] = true;
        let mut queue = std::collections::VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (s, &t) in gens.iter().zip(images) {
                let y = a.mul(x, *s);
                let fy = b.mul(f[x], t);
                if f[y] == usize::MAX {
                    if used[fy] {
                        return None;
                    }
                    f[y] = fy;
                    used[fy] = true;
                    queue.push_back(y);
                } else if f[y] != fy {
                    return None;
                }
            }
        }
        Some(f)
    }
    fn search(a: &MulTable, b: &MulTable, ob: &[usize], gens: &[usize], images: &mut [usize], k: usize, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
        if k == gens.len() {
            return Ok(extend(a, b, gens, images));
        }
        let want = a.order(gens[k]);
        for c in 0..b.len() {
            if ob[c] == want {
                budget.tick()?;
                images[k] = c;
                if let Some(f) = search(a, b, ob, gens, images, k + 1, budget)? {
                    return Ok(Some(f));
                }
            }
        }
        Ok(None)
    }
    Ok(search(&a, &b, &ob, &gens, &mut images, 0, budget)?.map(|f| (0..n).map(|i| (a.elements[i].clone(), b.elements[f[i]].clone())).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm1(n: u64) -> GenSet {
        GenSet::new(&Group::Cyclic(n), &[Elem::Int(1), Elem::Int(n as i64 - 1)]).unwrap()
    }

    #[test]
    fn carry_cocycle_pipeline() {
        let mut b = Budget::default();
        let t = carry_cocycle(4).unwrap();
        assert_eq!(validate_cocycle(&t, &mut b).unwrap(), Ok(64));
        assert!(!is_coboundary(&t, &mut b).unwrap().is_coboundary());
        let e = central_extension(&t).unwrap();
        assert!(find_group_isomorphism(&e, &Group::Cyclic(8), &mut b).unwrap().is_some());
        let c = two_covering_from_cocycle(&t, &pm1(4), &mut b).unwrap();
        assert!(c.connected);
        assert_eq!(c.total.graph.n(), 8);
        assert_eq!(disconnected_preimage_radius(&c), Some(1));
    }

    #[test]
    fn zero_cocycle_splits() {
        let mut b = Budget::default();
        let t = CocycleTable::zero(Group::Cyclic(4), &mut b).unwrap();
        assert_eq!(is_coboundary(&t, &mut b).unwrap(), CoboundaryAnswer::Coboundary { psi: vec![0; 4] });
        let c = two_covering_from_cocycle(&t, &pm1(4), &mut b).unwrap();
        assert_eq!(c.total.graph.component_count(), 2);
        let z4z2 = Group::product(Group::Cyclic(4), Group::Cyclic(2));
        assert!(find_group_isomorphism(&c.ext, &z4z2, &mut b).unwrap().is_some());
        assert!(find_group_isomorphism(&c.ext, &Group::Cyclic(8), &mut b).unwrap().is_none());
    }

    #[test]
    fn z2_carry_gives_z4() {
        let t = carry_cocycle(2).unwrap();
        let e = central_extension(&t).unwrap();
        assert_eq!(e.order_of(&Elem::ext(0, Elem::Int(1))), crate::group::Order::Finite(4));
    }

    #[test]
    fn broken_table_is_reported() {
        let mut t = CocycleTable::zero(Group::Cyclic(3), &mut Budget::default()).unwrap();
        t.set(1, 2, 1);
        assert!(validate_cocycle(&t, &mut Budget::default()).unwrap().is_err());
    }

    #[test]
    fn unnormalized_cocycle() {
        let mut b = Budget::default();
        let t = coboundary_of(&Group::Cyclic(3), &[1, 0, 0], &mut b).unwrap();
        assert!(!is_normalized(&t));
        assert!(is_normalized(&normalize(&t).unwrap()));
        assert!(is_coboundary(&t, &mut b).unwrap().is_coboundary());
    }

    #[test]
    fn vanishing_search() {
        let mut b = Budget::default();
        let z4 = Group::Cyclic(4);
        // (0,1)^4 = (φ(1,1)+φ(2,1)+φ(3,1), 0) and the same for 3 force φ(3,3) = 1 in the Z/8 class
        assert!(short_vanishing_cocycle_search(&z4, &pm1(4), 2, &mut b).unwrap().is_none());
        let phi = short_vanishing_cocycle_search(&z4, &pm1(4), 1, &mut b).unwrap().unwrap();
        assert!(!is_coboundary(&phi, &mut b).unwrap().is_coboundary());
        let c = two_covering_from_cocycle(&phi, &pm1(4), &mut b).unwrap();
        assert_eq!(disconnected_preimage_radius(&c), Some(1));
        assert!(short_vanishing_cocycle_search(&z4, &pm1(4), 4, &mut b).unwrap().is_none());
        let z2 = Group::Cyclic(2);
        let s = GenSet::new(&z2, &[Elem::Int(1)]).unwrap();
        assert!(short_vanishing_cocycle_search(&z2, &s, 2, &mut b).unwrap().is_none());
        assert!(short_vanishing_cocycle_search(&z2, &s, 1, &mut b).unwrap().is_some());
    }
}
