//! Dense exact linear algebra over the prime field `F_p` with runtime `p`.
//! Matrices stay tiny here (Čech slice complexes, witness searches), so a
//! plain row-reduction suite is all that is needed.

/// Scalar arithmetic mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp(pub u64);

pub fn normalize(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a ≠ 0
    debug_assert!(a % p != 0);
    pow(a % p, p - 2, p)
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Mat {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Mat::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row.into_iter().map(|x| x % p));
        }
        Mat {
            rows: r,
            cols,
            p,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (a, b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                let (a, b) = (self.get(r, j), self.get(pr, j));
                self.set(r, j, b);
                self.set(pr, j, a);
            }
            let s = inv(self.get(r, c), self.p);
            for j in 0..self.cols {
                let v = self.get(r, j) * s % self.p;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in 0..self.cols {
                        let v = (self.get(i, j) + (self.p - f) * self.get(r, j)) % self.p;
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the kernel `{v : M v = 0}`, as rows.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vker = vec![0u64; self.cols];
            vker[free] = 1;
            for (c, pr) in pivot_of_col.iter().enumerate() {
                if let Some(r) = pr {
                    vker[c] = (self.p - m.get(*r, free)) % self.p;
                }
            }
            basis.push(vker);
        }
        basis
    }

    /// Solve `M x = b`; returns one solution if consistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// Row space spanned by `rows`, reduced; membership tests for vectors.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub p: u64,
    pub cols: usize,
    reduced: Mat,
    rank: usize,
}

impl RowSpace {
    pub fn span(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Self {
        let mut m = Mat::from_rows(rows, cols, p);
        let rank = m.rref().len();
        RowSpace {
            p,
            cols,
            reduced: m,
            rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows: Vec<Vec<u64>> = (0..self.rank).map(|i| self.reduced.row(i).to_vec()).collect();
        rows.push(v.to_vec());
        let mut m = Mat::from_rows(rows, self.cols, self.p);
        m.rref().len() == self.rank
    }

    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rank).map(|i| self.reduced.row(i).to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let mut m = Mat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]], 3, 5);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_and_solve() {
        let m = Mat::from_rows(vec![vec![1, 1, 0], vec![0, 1, 1]], 3, 3);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert_eq!(m.mul_vec(v), vec![0, 0]);
        }
        let x = m.solve(&[2, 1]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![2, 1]);
        assert!(m.solve(&[0, 0]).is_some());
    }

    #[test]
    fn inverse_arithmetic() {
        for p in [2u64, 3, 5, 7] {
            for a in 1..p {
                assert_eq!(a * inv(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn rowspace_membership() {
        let s = RowSpace::span(vec![vec![1, 0, 1], vec![0, 1, 1]], 3, 2);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 1, 0]));
        assert!(!s.contains(&[0, 0, 1]));
    }
}
