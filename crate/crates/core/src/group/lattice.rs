//! Hermite normal form for full-rank sublattices of Z^d.

use crate::error::{malformed, Result};

/// Upper-triangular row basis with positive pivots on the diagonal.
pub fn hnf(d: usize, basis: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if basis.iter().any(|r| r.len() != d) {
        return Err(malformed("lattice basis rows must have length d"));
    }
    let mut rows: Vec<Vec<i64>> = basis.to_vec();
    let mut out = Vec::with_capacity(d);
    for c in 0..d {
        // Euclid on column c over the remaining rows
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][c].div_euclid(rows[p][c]);
                    let pr = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        let Some(p) = (0..rows.len()).find(|&i| rows[i][c] != 0) else {
            return Err(malformed("lattice basis must have full rank"));
        };
        let mut r = rows.remove(p);
        if r[c] < 0 {
            r.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(r);
    }
    if rows.iter().any(|r| r.iter().any(|&x| x != 0)) {
        return Err(malformed("lattice basis rows are inconsistent"));
    }
    Ok(out)
}

pub fn reduce(hnf: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    for (i, row) in hnf.iter().enumerate() {
        let q = v[i].div_euclid(row[i]);
        if q != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
    }
    v
}
