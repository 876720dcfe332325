//! Two constructions used when proving that whole blocks of a cycle pattern
//! force positive eigenvectors: forward substitution through a tridiagonal
//! matrix, and the row/column normalization of an `n x (n+1)` pattern to the
//! staircase ("standard") form.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::pattern::{ExtendedSign, ExtendedSignPattern, Sign, SignPattern};

pub const STANDARD_FORM_ROW_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub y: Vec<f64>,
    /// `(B - alpha I) y`.
    pub residual: Vec<f64>,
    /// Whether `B x = 0` held (relative to `|B| |x|`), so the conclusion
    /// below was checked.
    pub hypothesis_met: bool,
    /// Last entry of `residual`.
    pub last_entry: f64,
}

fn is_tridiagonal(b: &RealMatrix) -> bool {
    let n = b.n();
    (0..n).all(|i| (0..n).all(|j| i.abs_diff(j) <= 1 || b[(i, j)] == 0.0))
}

/// `y_1 = x_1`, then rows `1..n-1` of `(B - alpha I) y` are zeroed in turn by
/// solving for the next entry through the superdiagonal.
///
/// When `B x = 0` also holds, `y >= x` entrywise and a negative last
/// residual entry are checked; a violation is a `Precondition` error.
pub fn propagate_positive_solution(b: &RealMatrix, alpha: f64, x: &[f64]) -> Result<Propagation> {
    let n = b.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("vector of length {}", x.len()),
        });
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !is_tridiagonal(b) {
        return Err(Error::Precondition("matrix is not tridiagonal".into()));
    }
    if !(alpha > 0.0) || x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition("alpha and x must be positive".into()));
    }
    for i in 0..n.saturating_sub(1) {
        if b[(i, i + 1)] == 0.0 {
            return Err(Error::ZeroSuperdiagonal { index: i + 1 });
        }
        if !(b[(i + 1, i)] > 0.0 && b[(i, i + 1)] > 0.0) {
            return Err(Error::Precondition(format!("off-diagonal pair {} not positive", i + 1)));
        }
    }
    if (0..n).any(|i| !(b[(i, i)] - alpha < 0.0)) {
        return Err(Error::Precondition("diag(B) - alpha must be negative".into()));
    }

    let c = b.shift(alpha);
    let mut y = vec![0.0; n];
    y[0] = x[0];
    for i in 0..n - 1 {
        let lower = if i > 0 { c[(i, i - 1)] * y[i - 1] } else { 0.0 };
        y[i + 1] = -(lower + c[(i, i)] * y[i]) / c[(i, i + 1)];
    }
    let residual = c.mul_vec(&y);
    let last_entry = residual[n - 1];

    let bx = b.mul_vec(x);
    let scale = b.max_abs() * x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let hypothesis_met = bx.iter().all(|v| v.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    if hypothesis_met {
        if let Some(i) = (0..n).find(|&i| y[i] < x[i] * (1.0 - 1e-12)) {
            return Err(Error::Precondition(format!("y_{} < x_{}", i + 1, i + 1)));
        }
        if !(last_entry < 0.0) {
            return Err(Error::Precondition("last residual entry is not negative".into()));
        }
    }
    Ok(Propagation {
        y,
        residual,
        hypothesis_met,
        last_entry,
    })
}

/// Row and column moves that bring a pattern into the staircase template.
/// Target row `i` is source row `row_order[i]`, multiplied by `-` when
/// `negated[i]`; target column `p` is source column `col_order[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardFormWitness {
    pub row_order: Vec<usize>,
    pub negated: Vec<bool>,
    pub col_order: Vec<usize>,
}

impl StandardFormWitness {
    pub fn apply(&self, m: &ExtendedSignPattern) -> ExtendedSignPattern {
        ExtendedSignPattern::from_fn(m.rows(), m.cols(), |i, p| {
            let e = m.get(self.row_order[i], self.col_order[p]);
            if self.negated[i] {
                negate_ext(e)
            } else {
                e
            }
        })
    }
}

fn negate_ext(e: ExtendedSign) -> ExtendedSign {
    match e {
        ExtendedSign::Plus => ExtendedSign::Minus,
        ExtendedSign::Minus => ExtendedSign::Plus,
        ExtendedSign::PlusZero => ExtendedSign::MinusZero,
        ExtendedSign::MinusZero => ExtendedSign::PlusZero,
        e => e,
    }
}

/// Delete row `pivot` of the square pattern `a` and search for a witness.
pub fn standard_form_transformable(
    a: &SignPattern,
    pivot: usize,
) -> Result<Option<StandardFormWitness>> {
    if pivot >= a.n() {
        return Err(Error::Precondition(format!("pivot row {} out of range", pivot + 1)));
    }
    standard_form_witness(&a.delete_row(pivot))
}

struct Search {
    /// Per source row: (plus columns, minus columns) as bitmasks.
    rows: Vec<(u32, u32)>,
    n: usize,
    dead: HashSet<(u32, u32)>,
    choice: Vec<(usize, bool)>,
}

impl Search {
    /// Target rows `0..i` placed, `used` source rows, `committed` columns
    /// sitting at positions `<= i`.
    fn go(&mut self, i: usize, used: u32, committed: u32) -> bool {
        if i == self.n {
            return true;
        }
        if self.dead.contains(&(used, committed)) {
            return false;
        }
        for r in 0..self.n {
            if used >> r & 1 == 1 {
                continue;
            }
            for neg in [false, true] {
                let (plus, minus) = if neg {
                    (self.rows[r].1, self.rows[r].0)
                } else {
                    self.rows[r]
                };
                let low = committed | minus;
                if low.count_ones() as usize > i + 1 || plus.count_ones() > 1 || plus & low != 0 {
                    continue;
                }
                self.choice.push((r, neg));
                if self.go(i + 1, used | 1 << r, low | plus) {
                    return true;
                }
                self.choice.pop();
            }
        }
        self.dead.insert((used, committed));
        false
    }
}

/// Search over `T1` (row swaps), `T2` (row negation) and `T3` (column swaps)
/// for a map of the `n x (n+1)` pattern `m` onto a subpattern of the
/// staircase: `-` or `0` on and below the diagonal, `+` or `0` on the
/// superdiagonal, `0` above.
pub fn standard_form_witness(m: &ExtendedSignPattern) -> Result<Option<StandardFormWitness>> {
    let n = m.rows();
    if m.cols() != n + 1 {
        return Err(Error::DimensionMismatch {
            left: format!("{}x{}", m.rows(), m.cols()),
            right: format!("{}x{}", n, n + 1),
        });
    }
    if n > STANDARD_FORM_ROW_BOUND {
        return Err(Error::BoundExceeded {
            n,
            bound: STANDARD_FORM_ROW_BOUND,
        });
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (mut plus, mut minus) = (0u32, 0u32);
        for j in 0..=n {
            match m.get(i, j).as_sign() {
                Some(Sign::Plus) => plus |= 1 << j,
                Some(Sign::Minus) => minus |= 1 << j,
                Some(Sign::Zero) => {}
                None => {
                    return Err(Error::Precondition(format!(
                        "entry ({},{}) is not a definite sign",
                        i + 1,
                        j + 1
                    )))
                }
            }
        }
        rows.push((plus, minus));
    }
    let mut s = Search {
        rows,
        n,
        dead: HashSet::new(),
        choice: Vec::new(),
    };
    if !s.go(0, 0, 0) {
        return Ok(None);
    }

    // Lay columns out: minus columns fill the lowest free slots up to `i`,
    // the plus column goes to slot `i + 1`, and untouched columns fill the
    // rest.
    let mut slots: Vec<Option<usize>> = vec![None; n + 1];
    let mut placed = 0u32;
    for (i, &(r, neg)) in s.choice.iter().enumerate() {
        let (plus, minus) = if neg {
            (s.rows[r].1, s.rows[r].0)
        } else {
            s.rows[r]
        };
        for j in 0..=n {
            if minus >> j & 1 == 1 && placed >> j & 1 == 0 {
                let p = (0..=i).find(|&p| slots[p].is_none()).expect("free low slot");
                slots[p] = Some(j);
                placed |= 1 << j;
            }
        }
        if plus != 0 {
            let j = plus.trailing_zeros() as usize;
            slots[i + 1] = Some(j);
            placed |= 1 << j;
        }
    }
    let mut rest = (0..=n).filter(|&j| placed >> j & 1 == 0);
    let col_order = slots
        .into_iter()
        .map(|s| s.unwrap_or_else(|| rest.next().expect("column count")))
        .collect();
    Ok(Some(StandardFormWitness {
        row_order: s.choice.iter().map(|c| c.0).collect(),
        negated: s.choice.iter().map(|c| c.1).collect(),
        col_order,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(s: &str) -> ExtendedSignPattern {
        ExtendedSignPattern::parse(s).unwrap()
    }

    fn admitted(m: &ExtendedSignPattern, w: &StandardFormWitness) -> bool {
        let t = ExtendedSignPattern::standard_form_subpatterns(m.rows());
        w.apply(m).is_admitted_by(&t).unwrap()
    }

    #[test]
    fn staircase_is_identity() {
        let m = ExtendedSignPattern::standard_form(3);
        let w = standard_form_witness(&m).unwrap().unwrap();
        assert_eq!(w.row_order, vec![0, 1, 2]);
        assert_eq!(w.negated, vec![false; 3]);
        assert_eq!(w.col_order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn swapped_rows_recovered() {
        let m = ext("- - + 0\n- + 0 0\n- - - +");
        let w = standard_form_witness(&m).unwrap().unwrap();
        assert_eq!(w.row_order, vec![1, 0, 2]);
        assert!(admitted(&m, &w));
    }

    #[test]
    fn negated_and_permuted() {
        // Staircase with columns reordered, one row negated and two rows swapped.
        let m = ext("- - + -\n- + 0 +\n0 - 0 +");
        let w = standard_form_witness(&m).unwrap().unwrap();
        assert!(admitted(&m, &w));
    }

    #[test]
    fn all_plus_row_has_no_witness() {
        let m = ext("+ + + +\n- + 0 0\n0 - + 0");
        assert_eq!(standard_form_witness(&m).unwrap(), None);
    }

    #[test]
    fn bound_and_shape() {
        assert!(standard_form_witness(&ext("+ -\n- +")).is_err());
        let big = ExtendedSignPattern::standard_form(9);
        assert!(matches!(standard_form_witness(&big), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn substitution_on_swap_matrix() {
        let b = RealMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let p = propagate_positive_solution(&b, 1.0, &[1.0, 1.0]).unwrap();
        assert_eq!(p.y, vec![1.0, 1.0]);
        assert_eq!(p.residual, vec![0.0, 0.0]);
        assert!(!p.hypothesis_met);
    }

    #[test]
    fn substitution_grows() {
        let b = RealMatrix::from_rows(&[&[-1.0, 1.0, 0.0], &[2.0, -3.0, 1.0], &[0.0, 1.0, -1.0]]);
        let x = [1.0, 1.0, 1.0];
        let p = propagate_positive_solution(&b, 0.5, &x).unwrap();
        assert!(p.hypothesis_met);
        assert!(p.y.iter().zip(&x).all(|(y, x)| y >= x));
        assert!(p.last_entry < 0.0);
        assert!(p.residual[..2].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn zero_superdiagonal_rejected() {
        let b = RealMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert!(matches!(
            propagate_positive_solution(&b, 1.0, &[1.0, 1.0]),
            Err(Error::ZeroSuperdiagonal { index: 1 })
        ));
    }
}
