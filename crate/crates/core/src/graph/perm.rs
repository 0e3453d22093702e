//! Permutations on `0..n` and a Schreier-Sims order computation.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// Apply `a` first, then `b`.
pub fn then(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Orbit of `x` under `gens`, in discovery order.
pub fn orbit(x: usize, gens: &[Perm]) -> Vec<usize> {
    let n = gens.first().map_or(x + 1, Vec::len);
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut out = vec![x];
    let mut i = 0;
    while i < out.len() {
        let y = out[i];
        for g in gens {
            if !seen[g[y]] {
                seen[g[y]] = true;
                out.push(g[y]);
            }
        }
        i += 1;
    }
    out
}

/// Orbit id per point (numbered by smallest member).
pub fn orbit_partition(n: usize, gens: &[Perm]) -> Vec<usize> {
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if id[x] == usize::MAX {
            for y in orbit(x, gens) {
                id[y] = next;
            }
            next += 1;
        }
    }
    id
}

struct Level {
    point: usize,
    gens: Vec<Perm>,
    // transversal[p] maps `point` to p
    transversal: Vec<Option<Perm>>,
}

/// Group order from a stabilizer chain built by deterministic Schreier-Sims.
pub fn schreier_sims_order(n: usize, gens: &[Perm]) -> Option<u128> {
    let mut chain: Vec<Level> = Vec::new();
    for g in gens {
        let (j, h) = sift(&chain, 0, g.clone());
        if !is_identity(&h) {
            add(&mut chain, j, h, n);
        }
    }
    loop {
        let mut pending = None;
        'outer: for j in (0..chain.len()).rev() {
            rebuild(&mut chain, j, n);
            let pts: Vec<usize> = (0..n).filter(|&p| chain[j].transversal[p].is_some()).collect();
            let sgens: Vec<Perm> = chain[j..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
            for &p in &pts {
                let up = chain[j].transversal[p].clone().unwrap();
                for s in &sgens {
                    let q = s[p];
                    let uq = chain[j].transversal[q].as_ref().unwrap();
                    let sch = then(&then(&up, s), &inverse(uq));
                    let (r, h) = sift(&chain, j + 1, sch);
                    if !is_identity(&h) {
                        pending = Some((r, h));
                        break 'outer;
                    }
                }
            }
        }
        match pending {
            Some((r, h)) => add(&mut chain, r, h, n),
            None => break,
        }
    }
    let mut order: u128 = 1;
    for l in &chain {
        let size = l.transversal.iter().filter(|t| t.is_some()).count() as u128;
        order = order.checked_mul(size)?;
    }
    Some(order)
}

fn sift(chain: &[Level], from: usize, mut h: Perm) -> (usize, Perm) {
    for (j, l) in chain.iter().enumerate().skip(from) {
        match &l.transversal[h[l.point]] {
            Some(u) => h = then(&h, &inverse(u)),
            None => return (j, h),
        }
    }
    (chain.len(), h)
}

fn add(chain: &mut Vec<Level>, j: usize, h: Perm, n: usize) {
    if j == chain.len() {
        let point = (0..n).find(|&x| h[x] != x).expect("non-identity");
        chain.push(Level { point, gens: Vec::new(), transversal: vec![None; n] });
    }
    chain[j].gens.push(h);
    for i in (0..=j).rev() {
        rebuild(chain, i, n);
    }
}

fn rebuild(chain: &mut [Level], j: usize, n: usize) {
    let gens: Vec<Perm> = chain[j..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
    let b = chain[j].point;
    let mut t: Vec<Option<Perm>> = vec![None; n];
    t[b] = Some(identity(n));
    let mut queue = vec![b];
    let mut i = 0;
    while i < queue.len() {
        let p = queue[i];
        let up = t[p].clone().unwrap();
        for g in &gens {
            let q = g[p];
            if t[q].is_none() {
                t[q] = Some(then(&up, g));
                queue.push(q);
            }
        }
        i += 1;
    }
    chain[j].transversal = t;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_orders() {
        let s5 = vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]];
        assert_eq!(schreier_sims_order(5, &s5), Some(120));
        let c5 = vec![vec![1, 2, 3, 4, 0]];
        assert_eq!(schreier_sims_order(5, &c5), Some(5));
        assert_eq!(schreier_sims_order(4, &[]), Some(1));
        // A4 from two 3-cycles
        let a4 = vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]];
        assert_eq!(schreier_sims_order(4, &a4), Some(12));
    }

    #[test]
    fn orbits() {
        let g = vec![vec![1, 0, 2, 4, 3]];
        assert_eq!(orbit_partition(5, &g), vec![0, 0, 1, 2, 2]);
    }
}
