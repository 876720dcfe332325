//! Algebraic positivity of a single real matrix: a simple real eigenvalue
//! with entrywise positive left and right eigenvectors.

use super::eigen::{eigen, left_eigenvector, right_eigenvector, Spectrum};
use super::poly::{char_poly, divide_exact, eval_matrix};
use super::{Reason, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct APCertificate {
    pub lambda: f64,
    /// Largest-magnitude entry normalized to `+1`.
    pub right_vec: Vec<f64>,
    pub left_vec: Vec<f64>,
    pub tolerances: Tolerances,
}

/// How a real, separated eigenvalue fared.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub lambda: f64,
    pub right_vec: Vec<f64>,
    pub left_vec: Vec<f64>,
    pub residual: f64,
    /// Smallest entry over both normalized eigenvectors.
    pub min_entry: f64,
    /// `|y.x| / (|y| |x|)`.
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApAnalysis {
    pub spectrum: Spectrum,
    pub candidates: Vec<Candidate>,
    pub certificate: Option<APCertificate>,
}

impl ApAnalysis {
    /// Why the matrix failed, when it did.
    pub fn failure_reason(&self) -> Option<Reason> {
        if self.certificate.is_some() {
            return None;
        }
        if self.candidates.is_empty() {
            return Some(Reason::NoRealSimpleEig);
        }
        let pos = self.spectrum.pos_tol;
        if self.candidates.iter().any(|c| c.min_entry.abs() <= pos) {
            Some(Reason::ZeroEntryEigvec)
        } else {
            Some(Reason::NonPositiveEigvec)
        }
    }
}

const OVERLAP_FLOOR: f64 = 1e-8;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Every real, separated eigenvalue examined, with a certificate for the
/// first (largest) one that passes.
pub fn analyze(b: &RealMatrix, tols: &Tolerances) -> Result<ApAnalysis> {
    let spectrum = eigen(b, tols)?;
    let res_tol = tols.residual_rel * b.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut candidates = Vec::new();
    let mut certificate = None;
    for k in spectrum.real_simple() {
        let lambda = spectrum.eigenvalues[k].re;
        let (x, rx) = right_eigenvector(b, lambda);
        let (y, ry) = left_eigenvector(b, lambda);
        let residual = rx.max(ry);
        if residual > res_tol {
            return Err(Error::EigenvectorResidual {
                residual,
                tolerance: res_tol,
            });
        }
        let min_entry = x.iter().chain(&y).fold(f64::INFINITY, |m, &v| m.min(v));
        let overlap = dot(&x, &y).abs() / (norm2(&x) * norm2(&y));
        if certificate.is_none() && min_entry > tols.pos && overlap > OVERLAP_FLOOR {
            certificate = Some(APCertificate {
                lambda,
                right_vec: x.clone(),
                left_vec: y.clone(),
                tolerances: *tols,
            });
        }
        candidates.push(Candidate {
            lambda,
            right_vec: x,
            left_vec: y,
            residual,
            min_entry,
            overlap,
        });
    }
    Ok(ApAnalysis {
        spectrum,
        candidates,
        certificate,
    })
}

pub fn is_algebraically_positive(b: &RealMatrix, tols: &Tolerances) -> Result<Option<APCertificate>> {
    Ok(analyze(b, tols)?.certificate)
}

/// Non-AP with a margin: no real separated eigenvalue has both eigenvectors
/// within `margin` of nonnegative. Used to accept random counterexamples
/// only when small perturbations of the tolerances cannot flip the answer.
pub fn is_robustly_not_ap(b: &RealMatrix, tols: &Tolerances, margin: f64) -> bool {
    let loose = Tolerances {
        pos: -margin,
        sep_rel: tols.sep_rel * 1e-2,
        ..*tols
    };
    match analyze(b, &loose) {
        Ok(a) => a.certificate.is_none() && analyze(b, tols).map_or(false, |s| s.certificate.is_none()),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Coefficients, lowest degree first.
    pub coefficients: Vec<f64>,
    /// `q(B)` scaled so its largest entry is 1.
    pub value: RealMatrix,
    pub min_entry: f64,
}

/// `q(x) = +-p(x)/(x - lambda)` for the characteristic polynomial `p` of
/// `b`; the sign makes `q(B)` entrywise positive.
pub fn witness_polynomial(b: &RealMatrix, cert: &APCertificate) -> Result<Witness> {
    let p = char_poly(b);
    let mut q = divide_exact(&p, cert.lambda, 1e-8)?;
    let mut value = eval_matrix(&q, b);
    let sum: f64 = value.data().iter().sum();
    if sum < 0.0 {
        q.iter_mut().for_each(|c| *c = -*c);
        value = value.scale(-1.0);
    }
    let top = value.max_abs();
    if top > 0.0 {
        value = value.scale(1.0 / top);
    }
    let n = b.n();
    let (mut min, mut at) = (f64::INFINITY, (0, 0));
    for i in 0..n {
        for j in 0..n {
            if value[(i, j)] < min {
                min = value[(i, j)];
                at = (i, j);
            }
        }
    }
    if !(min > cert.tolerances.pos) {
        return Err(Error::WitnessNotPositive {
            min,
            row: at.0 + 1,
            col: at.1 + 1,
        });
    }
    Ok(Witness {
        coefficients: q,
        value,
        min_entry: min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn perron_case() {
        let b = RealMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let c = is_algebraically_positive(&b, &t()).unwrap().unwrap();
        assert!((c.lambda - 1.0).abs() < 1e-12);
        assert!(c.right_vec.iter().chain(&c.left_vec).all(|v| (v - 1.0).abs() < 1e-12));
        let w = witness_polynomial(&b, &c).unwrap();
        assert!((w.coefficients[0] - 1.0).abs() < 1e-12 && (w.coefficients[1] - 1.0).abs() < 1e-12);
        assert!(w.value.data().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rotation_is_not_ap() {
        let b = RealMatrix::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let a = analyze(&b, &t()).unwrap();
        assert!(a.certificate.is_none());
        assert_eq!(a.failure_reason(), Some(Reason::NoRealSimpleEig));
    }

    #[test]
    fn three_cycle() {
        let b = RealMatrix::from_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let c = is_algebraically_positive(&b, &t()).unwrap().unwrap();
        assert!((c.lambda - 1.0).abs() < 1e-12);
        let w = witness_polynomial(&b, &c).unwrap();
        for (got, want) in w.coefficients.iter().zip([1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(w.value.data().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn wrong_lambda_is_rejected() {
        let b = RealMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let mut c = is_algebraically_positive(&b, &t()).unwrap().unwrap();
        c.lambda = 2.0;
        assert!(matches!(witness_polynomial(&b, &c), Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn zero_entry_eigenvector() {
        // e1 is a right eigenvector for 1, and 1 is the top eigenvalue.
        let b = RealMatrix::from_rows(&[&[1.0, 1.0], &[0.0, -1.0]]);
        let a = analyze(&b, &t()).unwrap();
        assert!(a.certificate.is_none());
        assert_eq!(a.failure_reason(), Some(Reason::ZeroEntryEigvec));
    }
}
