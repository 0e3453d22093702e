use super::germ::{isometries_between, propagate_covering, PropagationOutcome, PropagationParams};
use crate::error::{precondition, Budget, Error, Result};
use crate::graph::{is_r_locally, local_stabilizer_probe, SimpleGraph};
use crate::group::{cayley_ball, elem_to_json, Elem, GenSet, Group};
use crate::rigidity::extension_radius_at;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize)]
pub struct ElementAction {
    pub element: serde_json::Value,
    pub skipped_identity: bool,
    pub word: Vec<usize>,
    pub fixed_points: usize,
    pub free: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub r_c: u32,
    pub r1: u32,
    pub r2: u32,
    pub chunk_radius: u32,
    /// Permutation of V(Y) per generator of S (right multiplication).
    pub action: Vec<Vec<usize>>,
    pub elements: Vec<ElementAction>,
    pub all_free: bool,
}

/// Transports right multiplication by Γ to Y through a propagated covering
/// of a Γ-ball and reports which elements of F act without fixed points.
pub fn residual_finiteness_probe(gamma: &Group, s: &GenSet, y: &SimpleGraph, n: u32, f: &[Elem], k: usize, budget: &mut Budget) -> Result<ProbeReport> {
    let model = cayley_ball(gamma, s, n, budget)?;
    if !is_r_locally(y, std::slice::from_ref(&model.ball), n, budget)?.verdict {
        return Err(precondition(format!("Y is not {n}-locally the Cayley graph")));
    }
    let diam = y.diameter().ok_or_else(|| precondition("Y must be connected"))?;
    // r_c and r2 measured at the center of a chunk
    let probe_chunk = cayley_ball(gamma, s, 2 * n + 2, budget)?;
    let mut r_c = 0;
    while local_stabilizer_probe(&probe_chunk.ball.carrier, 0, r_c, budget)? != 1 {
        r_c += 1;
        if r_c > n {
            return Err(Error::Failed("pointwise ball stabilizers stay nontrivial up to n".into()));
        }
    }
    let t = k.div_ceil(2) as u32;
    let r1 = r_c + t;
    let r2 = extension_radius_at(&probe_chunk.ball.carrier, 0, r1, budget)?.ok_or_else(|| Error::Failed("no extension radius".into()))?;
    if r2 > n {
        return Err(precondition(format!("r2 = {r2} exceeds n = {n}")));
    }
    let chunk_radius = diam + 1 + r2;
    let chunk = cayley_ball(gamma, s, chunk_radius, budget)?;
    let x = &chunk.ball.carrier;
    let interior: Vec<bool> = chunk.ball.ambient_dist.iter().map(|&d| d + r2 <= chunk_radius).collect();
    let seed = isometries_between(x, 0, y, 0, n, &[], 1, budget)?.pop().ok_or_else(|| Error::Failed("no seed isometry".into()))?;
    let params = PropagationParams { r_c: Some(r_c), k, r2: Some(r2), interior: Some(interior) };
    let prop = propagate_covering(x, y, 0, &seed, &params, budget)?;
    if !matches!(prop.outcome, PropagationOutcome::PartialCovering { .. } | PropagationOutcome::Covering(_)) {
        return Err(Error::Failed(format!("propagation failed: {:?}", prop.outcome)));
    }
    let index: HashMap<&Elem, usize> = chunk.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut action = Vec::with_capacity(s.len());
    for g in &s.elements {
        let mut sigma = vec![usize::MAX; y.n()];
        for (i, e) in chunk.elements.iter().enumerate() {
            let Some(from) = prop.map[i] else { continue };
            let Some(&j) = index.get(&gamma.mul(e, g)?) else { continue };
            let Some(to) = prop.map[j] else { continue };
            if sigma[from] == usize::MAX {
                sigma[from] = to;
            } else if sigma[from] != to {
                return Err(Error::Failed(format!("right multiplication is not well defined at vertex {from}")));
            }
        }
        if sigma.contains(&usize::MAX) {
            return Err(Error::Failed("chunk too small to define the action everywhere".into()));
        }
        action.push(sigma);
    }
    let mut elements = Vec::new();
    for e in f {
        let e = gamma.normalize(e)?;
        if gamma.is_identity(&e) {
            elements.push(ElementAction { element: elem_to_json(&e), skipped_identity: true, word: vec![], fixed_points: 0, free: false });
            continue;
        }
        let word = shortest_word(gamma, s, &chunk.elements, &index, &e)?;
        if word.len() as u32 > 2 * n {
            return Err(precondition(format!("{} has word length {} > 2n", elem_to_json(&e), word.len())));
        }
        let fixed_points = (0..y.n())
            .filter(|&v| {
                let mut w = v;
                for &g in &word {
                    w = action[g][w];
                }
                w == v
            })
            .count();
        elements.push(ElementAction { element: elem_to_json(&e), skipped_identity: false, word, fixed_points, free: fixed_points == 0 });
    }
    let all_free = elements.iter().all(|a| a.skipped_identity || a.free);
    Ok(ProbeReport { r_c, r1, r2, chunk_radius, action, elements, all_free })
}

fn shortest_word(g: &Group, s: &GenSet, elems: &[Elem], index: &HashMap<&Elem, usize>, target: &Elem) -> Result<Vec<usize>> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; elems.len()];
    let mut seen = vec![false; elems.len()];
    seen[0] = true;
    let mut q = std::collections::VecDeque::from([0usize]);
    while let Some(i) = q.pop_front() {
        if elems[i] == *target {
            let mut word = Vec::new();
            let mut c = i;
            while let Some((p, k)) = prev[c] {
                word.push(k);
                c = p;
            }
            word.reverse();
            return Ok(word);
        }
        for (k, x) in s.elements.iter().enumerate() {
            if let Some(&j) = index.get(&g.mul(&elems[i], x)?) {
                if !seen[j] {
                    seen[j] = true;
                    prev[j] = Some((i, k));
                    q.push_back(j);
                }
            }
        }
    }
    Err(precondition("element lies outside the explored ball"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::torus;

    #[test]
    fn lattice_acts_freely_on_torus() {
        let z2 = Group::FreeAbelian(2);
        let v = |a: i64, b: i64| Elem::Vec(vec![a, b]);
        let s = GenSet::new(&z2, &[v(1, 0), v(-1, 0), v(0, 1), v(0, -1)]).unwrap();
        let f = [v(1, 0), v(1, 1), v(2, 0), v(0, 0)];
        let rep = residual_finiteness_probe(&z2, &s, &torus(8, 8), 3, &f, 4, &mut Budget::new(100_000_000)).unwrap();
        assert!(rep.all_free);
        assert!(rep.elements[3].skipped_identity);
        assert_eq!(rep.elements[2].word.len(), 2);
    }

    #[test]
    fn single_vertex_is_not_locally_the_lattice() {
        let z2 = Group::FreeAbelian(2);
        let v = |a: i64, b: i64| Elem::Vec(vec![a, b]);
        let s = GenSet::new(&z2, &[v(1, 0), v(-1, 0), v(0, 1), v(0, -1)]).unwrap();
        let r = residual_finiteness_probe(&z2, &s, &SimpleGraph::empty(1), 3, &[], 4, &mut Budget::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
