//! Dense GF(2) matrices with bit-packed rows.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Gf2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        ((self.data[i * self.words + j / 64] >> (j % 64)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, b: u8) {
        let w = &mut self.data[i * self.words + j / 64];
        if b & 1 == 1 {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn push_row(&mut self, row: &[u8]) {
        self.rows += 1;
        self.data.extend(std::iter::repeat_n(0, self.words));
        let i = self.rows - 1;
        for (j, &b) in row.iter().enumerate() {
            self.set(i, j, b);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) == 1 {
                    t.set(j, i, 1);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        (0..self.rows).map(|i| (0..self.cols).fold(0, |acc, j| acc ^ (self.get(i, j) & x[j]))).collect()
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.data[src * w + k];
            self.data[dst * w + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let w = self.words;
            for k in 0..w {
                self.data.swap(a * w + k, b * w + k);
            }
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) == 1) else { continue };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) == 1 {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Some x with Ax = b, free variables set to 0.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        let mut aug = Gf2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Basis of {x : Ax = 0}.
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0; self.cols];
                x[f] = 1;
                for (r, &c) in piv.iter().enumerate() {
                    x[c] = m.get(r, f);
                }
                x
            })
            .collect()
    }

    /// A functional y with yA = 0 and y·b = 1, when b is outside the column space.
    pub fn separating_functional(&self, b: &[u8]) -> Option<Vec<u8>> {
        let mut sys = self.transpose();
        sys.push_row(b);
        let mut rhs = vec![0; sys.rows()];
        rhs[sys.rows() - 1] = 1;
        sys.solve(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_certify() {
        let a = Gf2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3);
        assert_eq!(a.rank(), 2);
        let x = a.solve(&[1, 1, 0]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1, 1, 0]);
        assert!(a.solve(&[1, 0, 0]).is_none());
        let y = a.separating_functional(&[1, 0, 0]).unwrap();
        assert_eq!(a.transpose().mul_vec(&y), vec![0, 0, 0]);
        assert_eq!(y[0], 1);
        for v in a.nullspace() {
            assert_eq!(a.mul_vec(&v), vec![0, 0, 0]);
        }
        assert_eq!(a.nullspace().len(), 1);
    }

    #[test]
    fn wide_rows() {
        let mut m = Gf2Matrix::zeros(2, 130);
        m.set(0, 129, 1);
        m.set(1, 129, 1);
        m.set(1, 3, 1);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullspace().len(), 128);
    }
}
