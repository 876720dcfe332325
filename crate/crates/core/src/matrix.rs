//! Small dense real matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::pattern::{Sign, SignPattern};

/// Square row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "data length must be n*n");
        RealMatrix { n, data }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "rows must have length n");
            data.extend_from_slice(r);
        }
        RealMatrix { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        RealMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: f64) -> RealMatrix {
        RealMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// `self - alpha * I`.
    pub fn shift(&self, alpha: f64) -> RealMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= alpha;
        }
        m
    }

    pub fn add(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        RealMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = RealMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `y^T A` as a vector.
    pub fn vec_mul(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| y[i] * self[(i, j)]).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn sign_pattern(&self) -> SignPattern {
        SignPattern::from_fn(self.n, |i, j| Sign::of(self[(i, j)]))
    }

    pub fn lu(&self) -> Lu {
        Lu::new(self)
    }

    pub fn det(&self) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        self.lu().det()
    }

    /// Adjugate by cofactors: `adj[s][r] = (-1)^(r+s) det(A without row r, column s)`.
    pub fn adjugate(&self) -> RealMatrix {
        let n = self.n;
        if n == 1 {
            return RealMatrix::identity(1);
        }
        RealMatrix::from_fn(n, |s, r| {
            let minor = self.minor(r, s);
            let d = minor.det();
            if (r + s) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Matrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> RealMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        RealMatrix { n: n - 1, data }
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:.6}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    odd: bool,
}

impl Lu {
    fn new(a: &RealMatrix) -> Lu {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = lu[k * n + k];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Lu { n, lu, perm, odd }
    }

    pub fn det(&self) -> f64 {
        let d: f64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.odd {
            -d
        } else {
            d
        }
    }

    /// Solve `A x = b`, replacing exactly-zero or tiny pivots by `floor`.
    /// With a positive floor this is the solve used by inverse iteration.
    pub fn solve_regularized(&self, b: &[f64], floor: f64) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[i * n + k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[i * n + k] * x[k];
            }
            let mut piv = self.lu[i * n + i];
            if piv.abs() < floor {
                piv = if piv < 0.0 { -floor } else { floor };
            }
            x[i] /= piv;
        }
        x
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.solve_regularized(b, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_adjugate() {
        let a = RealMatrix::from_rows(&[&[2.0, 1.0], &[-3.0, 4.0]]);
        assert!((a.det() - 11.0).abs() < 1e-12);
        let adj = a.adjugate();
        assert_eq!(adj, RealMatrix::from_rows(&[&[4.0, -1.0], &[3.0, 2.0]]));
        let prod = a.mul(&adj);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 11.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let a = RealMatrix::from_rows(&[
            &[1.0, 2.0, 0.5],
            &[-1.0, 0.3, 2.0],
            &[0.7, -0.2, 1.5],
        ]);
        let d = a.det();
        let p = a.adjugate().mul(&a);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d } else { 0.0 };
                assert!((p[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lu_solve() {
        let a = RealMatrix::from_rows(&[&[0.0, 2.0], &[1.0, 1.0]]);
        let x = a.lu().solve(&[4.0, 3.0]);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!((a.det() + 2.0).abs() < 1e-14);
    }
}
