//! Sign algebra and sign pattern matrices.
//!
//! Indices in the API are 0-based. Positions reported in parse errors are
//! 1-based (row = line, col = token index) because they point into text.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Plus, Sign::Minus, Sign::Zero];
    pub const NONZERO: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Plus
        } else if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    #[inline]
    pub fn is_nonzero(self) -> bool {
        self != Sign::Zero
    }

    /// +1, -1 or 0.
    pub fn unit(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
            Sign::Zero => 0.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }

    /// Sign of a permutation parity: even -> Plus, odd -> Minus.
    pub fn parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A sign symbol that may stand for a set of signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtendedSign {
    Plus,
    Minus,
    Zero,
    /// Nonnegative: `+` or `0`.
    PlusZero,
    /// Nonpositive: `-` or `0`.
    MinusZero,
    /// Arbitrary.
    Any,
}

impl ExtendedSign {
    pub fn admits(self, s: Sign) -> bool {
        match self {
            ExtendedSign::Plus => s == Sign::Plus,
            ExtendedSign::Minus => s == Sign::Minus,
            ExtendedSign::Zero => s == Sign::Zero,
            ExtendedSign::PlusZero => s != Sign::Minus,
            ExtendedSign::MinusZero => s != Sign::Plus,
            ExtendedSign::Any => true,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ExtendedSign::Plus => "+",
            ExtendedSign::Minus => "-",
            ExtendedSign::Zero => "0",
            ExtendedSign::PlusZero => "+0",
            ExtendedSign::MinusZero => "-0",
            ExtendedSign::Any => "#",
        }
    }

    pub fn from_symbol(s: &str) -> Option<ExtendedSign> {
        Some(match s {
            "+" => ExtendedSign::Plus,
            "-" => ExtendedSign::Minus,
            "0" => ExtendedSign::Zero,
            "+0" | "+_0" => ExtendedSign::PlusZero,
            "-0" | "-_0" => ExtendedSign::MinusZero,
            "#" => ExtendedSign::Any,
            _ => return None,
        })
    }

    /// The plain sign when this symbol admits exactly one sign.
    pub fn as_sign(self) -> Option<Sign> {
        match self {
            ExtendedSign::Plus => Some(Sign::Plus),
            ExtendedSign::Minus => Some(Sign::Minus),
            ExtendedSign::Zero => Some(Sign::Zero),
            _ => None,
        }
    }
}

impl From<Sign> for ExtendedSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => ExtendedSign::Plus,
            Sign::Minus => ExtendedSign::Minus,
            Sign::Zero => ExtendedSign::Zero,
        }
    }
}

impl fmt::Display for ExtendedSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Square matrix over `{+, -, 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    n: usize,
    entries: Vec<Sign>,
}

/// Verdict-preserving transformations of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symmetry {
    Negate,
    Transpose,
    /// `PermuteSimilar(perm)` maps entry `(i, j)` of the result to entry
    /// `(perm[i], perm[j])` of the input, i.e. `P^T A P`.
    PermuteSimilar(Vec<usize>),
}

/// `A_+`, `A_-` and `B_A = A_+ - A_-^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitParts {
    pub plus: SignPattern,
    pub minus: SignPattern,
    pub b_a: SignPattern,
}

impl SignPattern {
    pub fn new(n: usize, entries: Vec<Sign>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: format!("{n}x{n}"),
                right: format!("{} entries", entries.len()),
            });
        }
        Ok(SignPattern { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "sign pattern order must be positive");
        SignPattern {
            n,
            entries: vec![Sign::Zero; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Sign) -> Self {
        assert!(n > 0, "sign pattern order must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SignPattern { n, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Sign {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: Sign) {
        self.entries[i * self.n + j] = s;
    }

    pub fn entries(&self) -> &[Sign] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Sign] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = Sign> + '_ {
        (0..self.n).map(move |i| self.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|s| s.is_zero())
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    pub fn negate(&self) -> SignPattern {
        SignPattern {
            n: self.n,
            entries: self.entries.iter().map(|&s| -s).collect(),
        }
    }

    pub fn transpose(&self) -> SignPattern {
        SignPattern::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn permute_similar(&self, perm: &[usize]) -> Result<SignPattern> {
        check_permutation(perm, self.n)?;
        Ok(SignPattern::from_fn(self.n, |i, j| {
            self.get(perm[i], perm[j])
        }))
    }

    pub fn apply_symmetry(&self, sym: &Symmetry) -> Result<SignPattern> {
        match sym {
            Symmetry::Negate => Ok(self.negate()),
            Symmetry::Transpose => Ok(self.transpose()),
            Symmetry::PermuteSimilar(perm) => self.permute_similar(perm),
        }
    }

    pub fn split_parts(&self) -> SplitParts {
        let n = self.n;
        let keep = |s: Sign| SignPattern {
            n,
            entries: self
                .entries
                .iter()
                .map(|&e| if e == s { e } else { Sign::Zero })
                .collect(),
        };
        let b_a = SignPattern::from_fn(n, |i, j| {
            if self.get(i, j) == Sign::Plus || self.get(j, i) == Sign::Minus {
                Sign::Plus
            } else {
                Sign::Zero
            }
        });
        SplitParts {
            plus: keep(Sign::Plus),
            minus: keep(Sign::Minus),
            b_a,
        }
    }

    /// Draw a member of the qualitative class with magnitudes uniform on
    /// `[cfg.lo, cfg.hi]`.
    pub fn sample_q(&self, cfg: &QSampleConfig) -> RealMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        self.sample_q_with(cfg.lo, cfg.hi, &mut rng)
    }

    pub fn sample_q_with<R: Rng + ?Sized>(&self, lo: f64, hi: f64, rng: &mut R) -> RealMatrix {
        let data = self
            .entries
            .iter()
            .map(|s| match s {
                Sign::Zero => 0.0,
                s => {
                    let m = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                    s.unit() * m
                }
            })
            .collect();
        RealMatrix::from_vec(self.n, data)
    }

    /// The `±1` member of the qualitative class.
    pub fn unit_matrix(&self) -> RealMatrix {
        RealMatrix::from_vec(self.n, self.entries.iter().map(|s| s.unit()).collect())
    }

    pub fn matches_template(&self, template: &ExtendedSignPattern) -> Result<bool> {
        if template.rows() != self.n || template.cols() != self.n {
            return Err(Error::DimensionMismatch {
                left: format!("{0}x{0}", self.n),
                right: format!("{}x{}", template.rows(), template.cols()),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(template.entries())
            .all(|(&s, t)| t.admits(s)))
    }

    /// True when `self` is obtained from `other` by zeroing some nonzero
    /// entries.
    pub fn is_subpattern(&self, other: &SignPattern) -> Result<bool> {
        self.check_same_order(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| a.is_zero() || a == b))
    }

    pub fn qual_product(&self, other: &SignPattern) -> Result<ExtendedSignPattern> {
        self.check_same_order(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExtendedSign::Zero;
                for k in 0..n {
                    let t = self.get(i, k) * other.get(k, j);
                    acc = match (acc, t) {
                        (_, Sign::Zero) => acc,
                        (ExtendedSign::Zero, t) => t.into(),
                        (ExtendedSign::Plus, Sign::Plus) | (ExtendedSign::Minus, Sign::Minus) => acc,
                        _ => ExtendedSign::Any,
                    };
                }
                entries.push(acc);
            }
        }
        Ok(ExtendedSignPattern {
            rows: n,
            cols: n,
            entries,
        })
    }

    /// `A(i,:)`: the pattern with row `i` deleted, as an `(n-1) x n` grid.
    pub fn delete_row(&self, i: usize) -> ExtendedSignPattern {
        let rows: Vec<usize> = (0..self.n).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.n).collect();
        self.submatrix(&rows, &cols)
    }

    /// `A(:,j)`: the pattern with column `j` deleted, as an `n x (n-1)` grid.
    pub fn delete_col(&self, j: usize) -> ExtendedSignPattern {
        let rows: Vec<usize> = (0..self.n).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExtendedSignPattern {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).into());
            }
        }
        ExtendedSignPattern {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Principal submatrix on `indices` (kept in the given order).
    pub fn principal(&self, indices: &[usize]) -> Result<SignPattern> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(SignPattern::from_fn(indices.len(), |i, j| {
            self.get(indices[i], indices[j])
        }))
    }

    /// Rows joined by `/`, e.g. `0+0/00+/+00`.
    pub fn to_compact(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for i in 0..self.n {
            if i > 0 {
                s.push('/');
            }
            s.extend(self.row(i).iter().map(|x| x.symbol()));
        }
        s
    }

    pub fn from_compact(text: &str) -> Result<SignPattern> {
        let rows: Vec<&str> = text.trim().split('/').collect();
        let spaced = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n");
        parse_pattern(&spaced)
    }

    fn check_same_order(&self, other: &SignPattern) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: format!("{0}x{0}", self.n),
                right: format!("{0}x{0}", other.n),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, s) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::NotPermutation {
            perm: perm.to_vec(),
            n,
        });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotPermutation {
                perm: perm.to_vec(),
                n,
            });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Parse one pattern: rows of whitespace-separated `+`, `-`, `0` tokens.
pub fn parse_pattern(text: &str) -> Result<SignPattern> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    parse_block(&lines)
}

/// Parse a file holding several patterns. Lines starting with `#` are
/// comments; blank lines separate patterns. Each pattern is returned with
/// the line number of its first row.
pub fn parse_patterns(text: &str) -> Result<Vec<(usize, SignPattern)>> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !block.is_empty() {
                out.push((block[0].0, parse_block(&block)?));
                block.clear();
            }
            continue;
        }
        block.push((idx + 1, line));
    }
    if !block.is_empty() {
        out.push((block[0].0, parse_block(&block)?));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

fn parse_block(lines: &[(usize, &str)]) -> Result<SignPattern> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut width = None;
    let mut entries = Vec::new();
    for &(row, line) in lines {
        let mut count = 0;
        for (c, tok) in line.split_whitespace().enumerate() {
            let s = match tok {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                "0" => Sign::Zero,
                _ => {
                    return Err(Error::UnknownToken {
                        token: tok.to_string(),
                        row,
                        col: c + 1,
                    })
                }
            };
            entries.push(s);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(Error::RaggedRows {
                    row,
                    expected: w,
                    found: count,
                })
            }
            _ => {}
        }
    }
    let n = lines.len();
    let w = width.unwrap_or(0);
    if w != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: w,
            row: lines[n - 1].0,
        });
    }
    SignPattern::new(n, entries)
}

/// Rectangular grid of [`ExtendedSign`]; used for templates and for
/// qualitative products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedSignPattern {
    rows: usize,
    cols: usize,
    entries: Vec<ExtendedSign>,
}

impl ExtendedSignPattern {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExtendedSign>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: format!("{rows}x{cols}"),
                right: format!("{} entries", entries.len()),
            });
        }
        Ok(ExtendedSignPattern {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ExtendedSign,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExtendedSignPattern {
            rows,
            cols,
            entries,
        }
    }

    /// Parse whitespace-separated extended symbols (`+ - 0 +0 -0 #`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = 0;
        let mut cols = None;
        let mut entries = Vec::new();
        for (r, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut count = 0;
            for (c, tok) in line.split_whitespace().enumerate() {
                let e = ExtendedSign::from_symbol(tok).ok_or_else(|| Error::UnknownToken {
                    token: tok.to_string(),
                    row: r + 1,
                    col: c + 1,
                })?;
                entries.push(e);
                count += 1;
            }
            match cols {
                None => cols = Some(count),
                Some(w) if w != count => {
                    return Err(Error::RaggedRows {
                        row: r + 1,
                        expected: w,
                        found: count,
                    })
                }
                _ => {}
            }
            rows += 1;
        }
        if rows == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(ExtendedSignPattern {
            rows,
            cols: cols.unwrap_or(0),
            entries,
        })
    }

    pub fn filled(rows: usize, cols: usize, e: ExtendedSign) -> Self {
        ExtendedSignPattern {
            rows,
            cols,
            entries: vec![e; rows * cols],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ExtendedSign {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: ExtendedSign) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[ExtendedSign] {
        &self.entries
    }

    /// Every entry of `self` is a plain sign admitted by `template`.
    pub fn is_admitted_by(&self, template: &ExtendedSignPattern) -> Result<bool> {
        if self.rows != template.rows || self.cols != template.cols {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", template.rows, template.cols),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&template.entries)
            .all(|(e, t)| e.as_sign().is_some_and(|s| t.admits(s))))
    }

    /// The plain pattern, when square and free of compound symbols.
    pub fn to_sign_pattern(&self) -> Option<SignPattern> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.as_sign())
            .collect::<Option<Vec<_>>>()?;
        SignPattern::new(self.rows, entries).ok()
    }

    /// Tridiagonal template with `diag` on the diagonal, `+` above and
    /// `sub` below.
    pub fn tridiagonal(k: usize, diag: ExtendedSign, sub: ExtendedSign) -> Self {
        Self::from_fn(k, k, |i, j| {
            if i == j {
                diag
            } else if j == i + 1 {
                ExtendedSign::Plus
            } else if i == j + 1 {
                sub
            } else {
                ExtendedSign::Zero
            }
        })
    }

    /// Order-`k` Type-I block: `-0` diagonal, `+` superdiagonal, `-`
    /// subdiagonal.
    pub fn type_i(k: usize) -> Self {
        Self::tridiagonal(k, ExtendedSign::MinusZero, ExtendedSign::Minus)
    }

    /// Order-`k` Type-II block: `#` diagonal, `+` super- and subdiagonal.
    pub fn type_ii(k: usize) -> Self {
        Self::tridiagonal(k, ExtendedSign::Any, ExtendedSign::Plus)
    }

    /// The `k x (k+1)` staircase with `-` on and below the diagonal and `+`
    /// on the superdiagonal.
    pub fn standard_form(k: usize) -> Self {
        Self::from_fn(k, k + 1, |i, j| {
            if j <= i {
                ExtendedSign::Minus
            } else if j == i + 1 {
                ExtendedSign::Plus
            } else {
                ExtendedSign::Zero
            }
        })
    }

    /// Template admitting every subpattern of [`Self::standard_form`].
    pub fn standard_form_subpatterns(k: usize) -> Self {
        Self::from_fn(k, k + 1, |i, j| {
            if j <= i {
                ExtendedSign::MinusZero
            } else if j == i + 1 {
                ExtendedSign::PlusZero
            } else {
                ExtendedSign::Zero
            }
        })
    }
}

impl fmt::Display for ExtendedSignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSampleConfig {
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
}

impl QSampleConfig {
    pub fn new(lo: f64, hi: f64, seed: u64) -> Result<Self> {
        if !(lo > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!("lo must be positive, got {lo}")));
        }
        if hi < lo {
            return Err(Error::InvalidConfig(format!("hi {hi} < lo {lo}")));
        }
        Ok(QSampleConfig { lo, hi, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        QSampleConfig { seed, ..self }
    }
}

impl Default for QSampleConfig {
    fn default() -> Self {
        QSampleConfig {
            lo: 0.5,
            hi: 2.0,
            seed: 0,
        }
    }
}
