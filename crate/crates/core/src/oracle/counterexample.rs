//! Constructive members of `Q(A)` that are not algebraically positive.
//!
//! Each strategy builds a candidate; a candidate is returned only after its
//! sign pattern is checked against `A` and the eigen test rejects it.

use rand::Rng;

use super::ap::{analyze, is_robustly_not_ap};
use super::eigen::eigenvalues;
use super::{sample_rng, Reason, Tolerances};
use crate::matrix::RealMatrix;
use crate::pattern::{QSampleConfig, Sign, SignPattern};

const RANDOM_TRIES: usize = 500;
const ROBUST_MARGIN: f64 = 1e-7;
const SUBSET_ORDER_BOUND: usize = 16;

fn rejected(b: &RealMatrix, a: &SignPattern, tols: &Tolerances) -> bool {
    b.is_finite()
        && b.sign_pattern() == *a
        && analyze(b, tols).map_or(false, |an| an.certificate.is_none())
}

/// First successful strategy, in the order: even-order skew instantiation,
/// alternating kernel vector, column balancing (rows and columns), random
/// search, and a stability search for patterns with a row or column free
/// of `-`.
pub fn counterexample_search(
    a: &SignPattern,
    cfg: &QSampleConfig,
    tols: &Tolerances,
) -> Option<(RealMatrix, Reason)> {
    if let Some(b) = skew_instance(a) {
        if rejected(&b, a, tols) {
            return Some((b, Reason::SkewSymmetric));
        }
    }
    if let Some(b) = alternating_kernel(a) {
        if rejected(&b, a, tols) {
            return Some((b, Reason::ZeroEntryEigvec));
        }
    }
    if let Some(m) = column_balance(a, tols) {
        return Some((m.matrix, Reason::ColumnSumConstruction));
    }
    if let Some(m) = column_balance(&a.transpose(), tols) {
        return Some((m.matrix.transpose(), Reason::ColumnSumConstruction));
    }
    if let Some(b) = random_search(a, cfg, tols) {
        return Some((b, Reason::RandomSearch));
    }
    if has_line_without_minus(a) {
        if let Some(b) = stability_search(a, cfg, tols) {
            return Some((b, Reason::SemistabilitySearch));
        }
    }
    None
}

/// The `+-1` member when it is skew-symmetric of even order.
pub fn skew_instance(a: &SignPattern) -> Option<RealMatrix> {
    let n = a.n();
    if n % 2 == 1 {
        return None;
    }
    let skew = (0..n).all(|i| (0..n).all(|j| a.get(i, j) == -a.get(j, i)));
    skew.then(|| a.unit_matrix())
}

/// The `+-1` member when the 0/1 alternating vector (either phase) is a
/// right or left null vector.
pub fn alternating_kernel(a: &SignPattern) -> Option<RealMatrix> {
    let n = a.n();
    let b = a.unit_matrix();
    for phase in 0..2 {
        let x: Vec<f64> = (0..n).map(|i| if i % 2 == phase { 1.0 } else { 0.0 }).collect();
        let zero = |v: Vec<f64>| v.iter().all(|&t| t == 0.0);
        if zero(b.mul_vec(&x)) || zero(b.vec_mul(&x)) {
            return Some(b);
        }
    }
    None
}

/// Attainable sign set of a sum of terms with given signs and free
/// positive magnitudes: bit 0 negative, bit 1 zero, bit 2 positive.
fn attainable(signs: impl Iterator<Item = Sign>) -> u8 {
    let (mut pos, mut neg) = (false, false);
    for s in signs {
        match s {
            Sign::Plus => pos = true,
            Sign::Minus => neg = true,
            Sign::Zero => {}
        }
    }
    match (pos, neg) {
        (false, false) => 0b010,
        (true, false) => 0b100,
        (false, true) => 0b001,
        (true, true) => 0b111,
    }
}

/// Magnitudes for the nonzero signs of one column so the signed sum is `t`.
fn balance_column(signs: &[Sign], t: f64) -> Vec<f64> {
    let kp = signs.iter().filter(|&&s| s == Sign::Plus).count() as f64;
    let km = signs.iter().filter(|&&s| s == Sign::Minus).count() as f64;
    signs
        .iter()
        .map(|&s| match s {
            Sign::Zero => 0.0,
            Sign::Plus if km == 0.0 => t / kp,
            Sign::Minus if kp == 0.0 => -t / km,
            Sign::Plus if t >= 0.0 => (t + km) / kp,
            Sign::Minus if t < 0.0 => (-t + kp) / km,
            _ => 1.0,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalancedMember {
    pub matrix: RealMatrix,
    /// 0/1 left eigenvector.
    pub left_vec: Vec<f64>,
    pub lambda: f64,
}

/// Left eigenvector `x = 1_S` for a nonempty proper subset `S`: every
/// column outside `S` must sum to 0 over the rows in `S`, and every column
/// inside to a common `lambda`. Tries all subsets in increasing bitmask
/// order.
pub fn column_balance(a: &SignPattern, tols: &Tolerances) -> Option<BalancedMember> {
    let n = a.n();
    if n < 2 || n > SUBSET_ORDER_BOUND {
        return None;
    }
    for mask in 1u32..(1u32 << n) - 1 {
        let in_s = |i: usize| mask >> i & 1 == 1;
        let mut allowed = 0b111u8;
        let mut ok = true;
        for j in 0..n {
            let set = attainable((0..n).filter(|&i| in_s(i)).map(|i| a.get(i, j)));
            if in_s(j) {
                allowed &= set;
            } else if set & 0b010 == 0 {
                ok = false;
                break;
            }
        }
        if !ok || allowed == 0 {
            continue;
        }
        let lambda = if allowed & 0b100 != 0 {
            1.0
        } else if allowed & 0b001 != 0 {
            -1.0
        } else {
            0.0
        };
        let mut b = a.unit_matrix();
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&i| in_s(i)).collect();
            let signs: Vec<Sign> = rows.iter().map(|&i| a.get(i, j)).collect();
            let t = if in_s(j) { lambda } else { 0.0 };
            for (&i, m) in rows.iter().zip(balance_column(&signs, t)) {
                if a.get(i, j).is_nonzero() {
                    b[(i, j)] = a.get(i, j).unit() * m;
                }
            }
        }
        if rejected(&b, a, tols) {
            return Some(BalancedMember {
                matrix: b,
                left_vec: (0..n).map(|i| if in_s(i) { 1.0 } else { 0.0 }).collect(),
                lambda,
            });
        }
    }
    None
}

fn random_search(a: &SignPattern, cfg: &QSampleConfig, tols: &Tolerances) -> Option<RealMatrix> {
    let stream_base = 1u64 << 32;
    for k in 0..RANDOM_TRIES {
        let mut rng = sample_rng(cfg.seed, stream_base + k as u64);
        let b = if k % 2 == 0 {
            a.sample_q_with(cfg.lo, cfg.hi, &mut rng)
        } else {
            log_uniform_sample(a, &mut rng, 1e-2, 1e2)
        };
        if b.sign_pattern() == *a && is_robustly_not_ap(&b, tols, ROBUST_MARGIN) {
            return Some(b);
        }
    }
    None
}

fn log_uniform_sample<R: Rng>(a: &SignPattern, rng: &mut R, lo: f64, hi: f64) -> RealMatrix {
    let (l, h) = (lo.ln(), hi.ln());
    RealMatrix::from_fn(a.n(), |i, j| match a.get(i, j) {
        Sign::Zero => 0.0,
        s => s.unit() * rng.gen_range(l..h).exp(),
    })
}

pub fn has_line_without_minus(a: &SignPattern) -> bool {
    let n = a.n();
    (0..n).any(|i| a.row(i).iter().all(|&s| s != Sign::Minus))
        || (0..n).any(|j| a.col(j).all(|s| s != Sign::Minus))
}

/// Spectral abscissa relative to the Frobenius norm.
fn relative_abscissa(b: &RealMatrix) -> Option<f64> {
    let ev = eigenvalues(b).ok()?;
    let norm = b.frobenius_norm();
    if norm == 0.0 {
        return Some(0.0);
    }
    Some(ev.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re)) / norm)
}

/// Random local search over log-magnitudes minimizing the relative
/// spectral abscissa; a stable member is returned once found.
fn stability_search(a: &SignPattern, cfg: &QSampleConfig, tols: &Tolerances) -> Option<RealMatrix> {
    const STARTS: u64 = 8;
    const STEPS: usize = 400;
    let support: Vec<(usize, usize)> = (0..a.n())
        .flat_map(|i| (0..a.n()).map(move |j| (i, j)))
        .filter(|&(i, j)| a.get(i, j).is_nonzero())
        .collect();
    let build = |theta: &[f64]| {
        let mut b = RealMatrix::zeros(a.n());
        for (&(i, j), t) in support.iter().zip(theta) {
            b[(i, j)] = a.get(i, j).unit() * t.exp();
        }
        b
    };
    for start in 0..STARTS {
        let mut rng = sample_rng(cfg.seed, (2u64 << 32) + start);
        let mut theta: Vec<f64> = support.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut best = relative_abscissa(&build(&theta))?;
        let mut step = 1.0;
        for _ in 0..STEPS {
            if best < -1e-6 {
                let b = build(&theta);
                if rejected(&b, a, tols) {
                    return Some(b);
                }
                break;
            }
            let trial: Vec<f64> = theta
                .iter()
                .map(|t| (t + rng.gen_range(-step..step)).clamp(-6.0, 6.0))
                .collect();
            match relative_abscissa(&build(&trial)) {
                Some(v) if v < best => {
                    best = v;
                    theta = trial;
                }
                _ => step = (step * 0.97).max(0.05),
            }
        }
    }
    None
}
