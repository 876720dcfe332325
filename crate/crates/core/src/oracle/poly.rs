//! Real polynomials as coefficient lists, lowest degree first.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Characteristic polynomial `det(xI - B)` by Faddeev-LeVerrier.
/// Monic, `n + 1` coefficients.
pub fn char_poly(b: &RealMatrix) -> Vec<f64> {
    let n = b.n();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = RealMatrix::zeros(n);
    for k in 1..=n {
        // M_k = B M_{k-1} + c_{n-k+1} I
        let mut next = b.mul(&m);
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -b.mul(&m).trace() / k as f64;
    }
    c
}

/// Horner evaluation.
pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `p(x) = q(x) (x - lambda) + r`; returns `(q, r)`.
pub fn divide_linear(p: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let d = p.len() - 1;
    if d == 0 {
        return (Vec::new(), p[0]);
    }
    let mut q = vec![0.0; d];
    let mut carry = 0.0;
    for k in (1..=d).rev() {
        carry = carry * lambda + p[k];
        q[k - 1] = carry;
    }
    (q, carry * lambda + p[0])
}

/// `q` divided out of `p` at `lambda`, rejecting a remainder larger than
/// `rel_tol` relative to `sum |p_k| |lambda|^k`.
pub fn divide_exact(p: &[f64], lambda: f64, rel_tol: f64) -> Result<Vec<f64>> {
    let (q, r) = divide_linear(p, lambda);
    let scale: f64 = p
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * lambda.abs().powi(k as i32))
        .sum();
    if r.abs() > rel_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotAnEigenvalue {
            lambda,
            remainder: r,
        });
    }
    Ok(q)
}

/// `p(B)` by Horner's scheme.
pub fn eval_matrix(p: &[f64], b: &RealMatrix) -> RealMatrix {
    let n = b.n();
    let mut acc = RealMatrix::zeros(n);
    for &c in p.iter().rev() {
        acc = acc.mul(b);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}
