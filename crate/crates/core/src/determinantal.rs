//! Determinant-expansion reasoning over sign patterns: nonzero terms, sign
//! nonsingularity, requiring singularity, and qualitative adjugate signs.

use crate::digraph::signed_paths_bounded;
use crate::error::{Error, Result};
use crate::pattern::{ExtendedSign, ExtendedSignPattern, Sign, SignPattern};

/// Largest order accepted by the term enumeration.
pub const DET_ENUMERATION_BOUND: usize = 10;

/// A permutation together with the sign of its term
/// `sgn(sigma) * a_{1 sigma(1)} * ... * a_{n sigma(n)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermTerm {
    pub sigma: Vec<usize>,
    pub sign: Sign,
}

/// Backtracking enumeration of the nonzero terms of the determinant
/// expansion of the submatrix `a[rows, cols]`.
///
/// Columns are tried in increasing order, so terms come out in
/// lexicographic order of `sigma`. `sigma[k]` indexes into `cols`.
pub struct DetTerms<'a> {
    a: &'a SignPattern,
    rows: Vec<usize>,
    cols: Vec<usize>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    next: Vec<usize>,
    depth: usize,
    done: bool,
}

impl<'a> DetTerms<'a> {
    fn new(a: &'a SignPattern, rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        DetTerms {
            a,
            rows,
            cols,
            sigma: vec![0; k],
            used: vec![false; k],
            next: vec![0; k + 1],
            depth: 0,
            done: false,
        }
    }

    fn term(&self) -> PermTerm {
        let mut sign = Sign::parity(odd_permutation(&self.sigma));
        for (k, &c) in self.sigma.iter().enumerate() {
            sign = sign * self.a.get(self.rows[k], self.cols[c]);
        }
        PermTerm {
            sigma: self.sigma.clone(),
            sign,
        }
    }
}

impl Iterator for DetTerms<'_> {
    type Item = PermTerm;

    fn next(&mut self) -> Option<PermTerm> {
        let k = self.rows.len();
        if self.done {
            return None;
        }
        if k == 0 {
            self.done = true;
            return Some(PermTerm {
                sigma: Vec::new(),
                sign: Sign::Plus,
            });
        }
        loop {
            if self.depth == k {
                let t = self.term();
                // Backtrack one level so the next call resumes the search.
                self.depth -= 1;
                self.used[self.sigma[self.depth]] = false;
                return Some(t);
            }
            let d = self.depth;
            let row = self.rows[d];
            let mut advanced = false;
            while self.next[d] < k {
                let c = self.next[d];
                self.next[d] += 1;
                if !self.used[c] && self.a.get(row, self.cols[c]).is_nonzero() {
                    self.sigma[d] = c;
                    self.used[c] = true;
                    self.depth += 1;
                    self.next[self.depth] = 0;
                    advanced = true;
                    break;
                }
            }
            if advanced {
                continue;
            }
            if d == 0 {
                self.done = true;
                return None;
            }
            self.depth -= 1;
            self.used[self.sigma[self.depth]] = false;
        }
    }
}

fn odd_permutation(sigma: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

fn check_bound(n: usize) -> Result<()> {
    if n > DET_ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            n,
            bound: DET_ENUMERATION_BOUND,
        });
    }
    Ok(())
}

/// Nonzero terms of the standard determinant expansion of `a`.
pub fn det_terms(a: &SignPattern) -> Result<DetTerms<'_>> {
    check_bound(a.n())?;
    let idx: Vec<usize> = (0..a.n()).collect();
    Ok(DetTerms::new(a, idx.clone(), idx))
}

/// Nonzero terms of the principal submatrix of `a` on `keep` (possibly
/// empty, in which case the single term of the empty product is `+`).
pub fn principal_det_terms<'a>(a: &'a SignPattern, keep: &[usize]) -> Result<DetTerms<'a>> {
    check_bound(keep.len())?;
    Ok(DetTerms::new(a, keep.to_vec(), keep.to_vec()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnsReport {
    pub is_sns: bool,
    /// One term when SNS; two opposite-signed terms or nothing otherwise.
    pub witness_terms: Vec<PermTerm>,
}

impl SnsReport {
    /// Common sign of every nonzero term, for SNS patterns.
    pub fn determinant_sign(&self) -> Option<Sign> {
        if self.is_sns {
            self.witness_terms.first().map(|t| t.sign)
        } else {
            None
        }
    }
}

pub fn is_sns(a: &SignPattern) -> Result<SnsReport> {
    sns_of_terms(det_terms(a)?)
}

fn sns_of_terms(terms: impl Iterator<Item = PermTerm>) -> Result<SnsReport> {
    let mut first: Option<PermTerm> = None;
    for t in terms {
        match &first {
            None => first = Some(t),
            Some(f) if f.sign != t.sign => {
                return Ok(SnsReport {
                    is_sns: false,
                    witness_terms: vec![f.clone(), t],
                })
            }
            _ => {}
        }
    }
    Ok(match first {
        Some(t) => SnsReport {
            is_sns: true,
            witness_terms: vec![t],
        },
        None => SnsReport {
            is_sns: false,
            witness_terms: Vec::new(),
        },
    })
}

/// Every member of the qualitative class is singular exactly when the
/// expansion has no nonzero term.
pub fn requires_singularity(a: &SignPattern) -> Result<bool> {
    Ok(det_terms(a)?.next().is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjSignReport {
    /// `entries.get(s, r)` is the sign of `adj(B)[s][r]` over the class;
    /// `Any` when it varies.
    pub entries: ExtendedSignPattern,
}

fn fold_sign(acc: ExtendedSign, s: Sign) -> ExtendedSign {
    match (acc, s) {
        (_, Sign::Zero) => acc,
        (ExtendedSign::Zero, s) => s.into(),
        (ExtendedSign::Plus, Sign::Plus) | (ExtendedSign::Minus, Sign::Minus) => acc,
        _ => ExtendedSign::Any,
    }
}

/// Sign of every adjugate entry across the qualitative class of an SNS
/// pattern.
///
/// Off-diagonal `(s, r)`: every path `s -> r` of length `l` contributes
/// `(-1)^l * sign(path) * sign(term)` for each nonzero term of the pattern
/// with the path's vertices deleted. Diagonal `(r, r)`: the terms of the
/// principal minor without `r`.
pub fn adjugate_sign(a: &SignPattern) -> Result<AdjSignReport> {
    let n = a.n();
    check_bound(n)?;
    if !is_sns(a)?.is_sns {
        return Err(Error::NotSns);
    }
    let mut entries = ExtendedSignPattern::filled(n, n, ExtendedSign::Zero);
    for r in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&k| k != r).collect();
        let acc = principal_det_terms(a, &keep)?.fold(ExtendedSign::Zero, |acc, t| {
            fold_sign(acc, t.sign)
        });
        entries.set(r, r, acc);
    }
    if n == 1 {
        return Ok(AdjSignReport { entries });
    }
    for s in 0..n {
        for r in 0..n {
            if s == r {
                continue;
            }
            let mut acc = ExtendedSign::Zero;
            for path in signed_paths_bounded(a, s, r, DET_ENUMERATION_BOUND)? {
                let mut on_path = vec![false; n];
                for &v in &path.vertices {
                    on_path[v] = true;
                }
                let keep: Vec<usize> = (0..n).filter(|&k| !on_path[k]).collect();
                let lead = if path.len() % 2 == 1 { -path.sign } else { path.sign };
                for t in principal_det_terms(a, &keep)? {
                    acc = fold_sign(acc, lead * t.sign);
                    if acc == ExtendedSign::Any {
                        break;
                    }
                }
                if acc == ExtendedSign::Any {
                    break;
                }
            }
            entries.set(s, r, acc);
        }
    }
    Ok(AdjSignReport { entries })
}
