//! Dense nonsymmetric eigenvalues: balancing, Householder reduction to
//! upper Hessenberg form, and the Francis double-shift QR iteration
//! (EISPACK `balanc`/`orthes`/`hqr`). Eigenvectors come from inverse
//! iteration on the original matrix.

use num_complex::Complex64;

use super::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Largest order accepted by [`eigen`].
pub const EIGEN_ORDER_BOUND: usize = 64;


#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub imag_tol: f64,
    pub sep_tol: f64,
    pub pos_tol: f64,
}

impl Spectrum {
    pub fn is_real(&self, k: usize) -> bool {
        self.eigenvalues[k].im.abs() <= self.imag_tol
    }

    /// Distance from eigenvalue `k` to every other one exceeds `sep_tol`.
    pub fn is_separated(&self, k: usize) -> bool {
        let z = self.eigenvalues[k];
        self.eigenvalues
            .iter()
            .enumerate()
            .all(|(j, w)| j == k || (z - w).norm() > self.sep_tol)
    }

    /// Indices of real, separated eigenvalues, by decreasing real part.
    pub fn real_simple(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&k| self.is_real(k) && self.is_separated(k))
            .collect();
        idx.sort_by(|&a, &b| {
            self.eigenvalues[b]
                .re
                .partial_cmp(&self.eigenvalues[a].re)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        idx
    }
}

/// Eigenvalues of `b` with tolerances scaled by its Frobenius norm.
pub fn eigen(b: &RealMatrix, tols: &Tolerances) -> Result<Spectrum> {
    let norm = b.frobenius_norm();
    Ok(Spectrum {
        eigenvalues: eigenvalues(b)?,
        imag_tol: tols.imag_rel * norm,
        sep_tol: tols.sep_rel * norm,
        pos_tol: tols.pos,
    })
}

pub fn eigenvalues(b: &RealMatrix) -> Result<Vec<Complex64>> {
    let n = b.n();
    if n > EIGEN_ORDER_BOUND {
        return Err(Error::BoundExceeded {
            n,
            bound: EIGEN_ORDER_BOUND,
        });
    }
    if !b.is_finite() {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| b[(i, j)]).collect()).collect();
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a)
}

/// Diagonal similarity by powers of two so rows and columns have
/// comparable norms.
fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    for m in 1..n - 1 {
        let scale: f64 = (m..n).map(|i| a[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..n).rev() {
            ort[i] = a[i][m - 1] / scale;
            h += ort[i] * ort[i];
        }
        let g = if ort[m] > 0.0 { -h.sqrt() } else { h.sqrt() };
        h -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let f = (m..n).map(|i| ort[i] * a[i][j]).sum::<f64>() / h;
            for i in m..n {
                a[i][j] -= f * ort[i];
            }
        }
        for row in a.iter_mut() {
            let f = (m..n).map(|j| ort[j] * row[j]).sum::<f64>() / h;
            for j in m..n {
                row[j] -= f * ort[j];
            }
        }
        a[m][m - 1] = scale * g;
        for i in m + 1..n {
            a[i][m - 1] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix; destroys `a`.
fn hqr(a: &mut [Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    // Some well-conditioned inputs stall for a few dozen sweeps before the
    // exceptional shifts break the cycle.
    let max_its = 30 * n.max(10);
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if its == max_its {
                return Err(Error::EigenNonConvergence { n });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k + 1 <= nu {
                let notlast = k + 1 != nu;
                let mut xk = 0.0;
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if notlast { a[k + 2][k - 1] } else { 0.0 };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != 0.0 {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * xk;
                    }
                    p += s;
                    let xx = p / s;
                    let yy = q / s;
                    let zz = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if notlast {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * zz;
                        }
                        a[k + 1][j] -= pp * yy;
                        a[k][j] -= pp * xx;
                    }
                    let mmin = nu.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = xx * a[i][k] + yy * a[i][k + 1];
                        if notlast {
                            pp += zz * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Right eigenvector for the real eigenvalue `lambda` by inverse
/// iteration, normalized so its largest-magnitude entry is `+1`.
/// Returns the vector and its residual `||Bx - lambda x||_inf`.
pub fn right_eigenvector(b: &RealMatrix, lambda: f64) -> (Vec<f64>, f64) {
    let n = b.n();
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    let lu = b.shift(lambda).lu();
    let floor = f64::EPSILON * scale;
    // Start away from any coordinate hyperplane.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (i as f64 + 1.0) / n as f64).collect();
    let mut best = (x.clone(), f64::INFINITY);
    for _ in 0..6 {
        let mut y = lu.solve_regularized(&x, floor);
        if !normalize_inf(&mut y) {
            break;
        }
        let res = residual(b, lambda, &y);
        x = y;
        if res < best.1 {
            best = (x.clone(), res);
        }
        if res <= 1e-14 * scale {
            break;
        }
    }
    best
}

pub fn left_eigenvector(b: &RealMatrix, lambda: f64) -> (Vec<f64>, f64) {
    right_eigenvector(&b.transpose(), lambda)
}

/// Scale so the largest-magnitude entry is `+1`; false for zero or
/// non-finite vectors.
pub(crate) fn normalize_inf(v: &mut [f64]) -> bool {
    let mut k = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    let m = v[k];
    if m == 0.0 || !m.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x /= m;
    }
    v.iter().all(|x| x.is_finite())
}

pub(crate) fn residual(b: &RealMatrix, lambda: f64, x: &[f64]) -> f64 {
    b.mul_vec(x)
        .iter()
        .zip(x)
        .fold(0.0, |m, (bx, xi)| m.max((bx - lambda * xi).abs()))
}
