//! Batch classification with optional oracle cross-checks, and the
//! enumeration of cycle-form patterns behind the census.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, FailedCondition, Failure, Outcome, Rule, Verdict};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::oracle::{
    counterexample_search, mc_requires_with, sample_rng, witness_polynomial, OracleVerdict, Reason,
    Tolerances,
};
use crate::pattern::{QSampleConfig, Sign, SignPattern};

pub const EXHAUSTIVE_ORDER_BOUND: usize = 4;
pub const DEFAULT_SAMPLES: usize = 50;

/// (forward, backward) sign pairs per cycle edge; the first three have a
/// positive forward arc.
pub const EDGE_OPTIONS: [(Sign, Sign); 8] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Plus, Sign::Zero),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
    (Sign::Minus, Sign::Zero),
    (Sign::Zero, Sign::Plus),
    (Sign::Zero, Sign::Minus),
];

const DIAG_OPTIONS: [Sign; 3] = [Sign::Plus, Sign::Minus, Sign::Zero];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusConfig {
    pub n: usize,
    pub zero_diag: bool,
    pub forward_positive: bool,
    pub dedupe: bool,
    pub mode: Mode,
    /// 0 skips the oracle.
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl CensusConfig {
    pub fn new(n: usize) -> Self {
        CensusConfig {
            n,
            zero_diag: false,
            forward_positive: false,
            dedupe: false,
            mode: Mode::Exhaustive,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!("order {} is below 3", self.n)));
        }
        match self.mode {
            Mode::Exhaustive if self.n > EXHAUSTIVE_ORDER_BOUND => Err(Error::BoundExceeded {
                n: self.n,
                bound: EXHAUSTIVE_ORDER_BOUND,
            }),
            Mode::Random(0) => Err(Error::InvalidConfig("random count must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// Number of patterns in the (filtered) enumeration.
    pub fn space_size(&self) -> u64 {
        let e = self.edge_options().len() as u64;
        let d = self.diag_options().len() as u64;
        (e * d).pow(self.n as u32)
    }

    fn edge_options(&self) -> &'static [(Sign, Sign)] {
        if self.forward_positive {
            &EDGE_OPTIONS[..3]
        } else {
            &EDGE_OPTIONS
        }
    }

    fn diag_options(&self) -> &'static [Sign] {
        if self.zero_diag {
            &DIAG_OPTIONS[2..]
        } else {
            &DIAG_OPTIONS
        }
    }

    /// Pattern number `index` in mixed radix: edge choices (edge 1 most
    /// significant), then loops (vertex 1 most significant).
    pub fn pattern_at(&self, index: u64) -> SignPattern {
        let n = self.n;
        let edges = self.edge_options();
        let diag = self.diag_options();
        let mut rest = index;
        let mut loops = vec![0usize; n];
        for v in (0..n).rev() {
            loops[v] = (rest % diag.len() as u64) as usize;
            rest /= diag.len() as u64;
        }
        let mut pairs = vec![0usize; n];
        for e in (0..n).rev() {
            pairs[e] = (rest % edges.len() as u64) as usize;
            rest /= edges.len() as u64;
        }
        let mut a = SignPattern::zeros(n);
        for v in 0..n {
            a.set(v, v, diag[loops[v]]);
        }
        for (i, &k) in pairs.iter().enumerate() {
            let (f, b) = edges[k];
            a.set(i, (i + 1) % n, f);
            a.set((i + 1) % n, i, b);
        }
        a
    }
}

/// The `2n` rotations and reflections of the cycle `1..n`, as permutations
/// for [`SignPattern::permute_similar`].
pub fn dihedral_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n {
        out.push((0..n).map(|i| (i + r) % n).collect());
        out.push((0..n).map(|i| (r + n - i) % n).collect());
    }
    out
}

/// Every image of `a` under relabeling along the cycle and negation.
pub fn orbit(a: &SignPattern) -> Vec<SignPattern> {
    let mut out = Vec::with_capacity(4 * a.n());
    for p in dihedral_perms(a.n()) {
        let b = a.permute_similar(&p).expect("valid permutation");
        out.push(b.negate());
        out.push(b);
    }
    out
}

/// Orbit member with the lexicographically least compact text.
pub fn canonical_form(a: &SignPattern) -> SignPattern {
    orbit(a)
        .into_iter()
        .min_by(|x, y| x.to_compact().cmp(&y.to_compact()))
        .expect("nonempty orbit")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Agree,
    Disagree,
    Skipped,
    Inconclusive,
}

impl OracleStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleStatus::Agree => "agree",
            OracleStatus::Disagree => "disagree",
            OracleStatus::Skipped => "skipped",
            OracleStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: u64,
    pub n: usize,
    pub pattern: String,
    pub verdict: String,
    pub rule: String,
    pub gate: String,
    pub oracle: OracleStatus,
    pub samples: usize,
    pub seed: u64,
}

impl ReportRow {
    pub fn new(id: u64, a: &SignPattern, v: &Verdict, check: &OracleCheck, seed: u64) -> Self {
        ReportRow {
            id,
            n: a.n(),
            pattern: a.to_compact(),
            verdict: v.verdict_str().to_string(),
            rule: v.rule_str(),
            gate: v.gate_str(),
            oracle: check.status,
            samples: check.samples,
            seed,
        }
    }
}

/// The oracle's reading of one verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub status: OracleStatus,
    /// Samples drawn for a `Requires` check, 0 otherwise.
    pub samples: usize,
    pub counterexample: Option<(RealMatrix, Reason)>,
    pub certificates: usize,
    /// Certificates whose witness polynomial was not entrywise positive.
    pub witness_failures: usize,
}

impl OracleCheck {
    pub fn skipped() -> Self {
        OracleCheck {
            status: OracleStatus::Skipped,
            samples: 0,
            counterexample: None,
            certificates: 0,
            witness_failures: 0,
        }
    }
}

/// `Requires` is tested by sampling `Q(A)`, `NotRequires` by searching for
/// a counterexample. With `check_witness` every certificate also has its
/// witness polynomial evaluated.
pub fn check_verdict(
    a: &SignPattern,
    v: &Verdict,
    samples: usize,
    seed: u64,
    tols: &Tolerances,
    check_witness: bool,
) -> Result<OracleCheck> {
    let cfg = QSampleConfig::default().with_seed(seed);
    match &v.outcome {
        Outcome::NotCycle => Ok(OracleCheck::skipped()),
        Outcome::Requires(_) => {
            let (mut certs, mut bad) = (0, 0);
            let res = mc_requires_with(a, samples, &cfg, tols, |b, cert| {
                certs += 1;
                if check_witness && witness_polynomial(b, cert).is_err() {
                    bad += 1;
                }
            })?;
            let (status, cx) = match res {
                OracleVerdict::AllSamplesAP(_) => (OracleStatus::Agree, None),
                OracleVerdict::CounterexampleFound(b, r) => (OracleStatus::Disagree, Some((b, r))),
                OracleVerdict::Inconclusive(_) => (OracleStatus::Inconclusive, None),
            };
            Ok(OracleCheck {
                status,
                samples,
                counterexample: cx,
                certificates: certs,
                witness_failures: bad,
            })
        }
        Outcome::NotRequires(_) => {
            let cx = counterexample_search(a, &cfg, tols);
            Ok(OracleCheck {
                status: if cx.is_some() {
                    OracleStatus::Agree
                } else {
                    OracleStatus::Disagree
                },
                samples: 0,
                counterexample: cx,
                certificates: 0,
                witness_failures: 0,
            })
        }
    }
}

/// Swap `Requires` and `NotRequires`; a harness self-test.
pub fn corrupt(v: &Verdict) -> Verdict {
    let mut c = v.clone();
    c.outcome = match &v.outcome {
        Outcome::Requires(_) => Outcome::NotRequires(Failure::Condition(FailedCondition::UniformSign)),
        Outcome::NotRequires(_) => Outcome::Requires(Rule::UniformSign),
        Outcome::NotCycle => Outcome::NotCycle,
    };
    c
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRecord {
    pub pattern: SignPattern,
    pub verdict: Verdict,
    pub check: OracleCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub config: CensusConfig,
    pub records: Vec<CensusRecord>,
}

impl CensusReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        self.records
            .iter()
            .enumerate()
            .map(|(k, r)| ReportRow::new(k as u64 + 1, &r.pattern, &r.verdict, &r.check, self.config.seed))
            .collect()
    }

    /// Pattern count per verdict and rule (or gate) code.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.records {
            *m.entry(summary_key(&r.verdict)).or_insert(0) += 1;
        }
        m
    }

    pub fn oracle_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for r in &self.records {
            *m.entry(r.check.status.as_str()).or_insert(0) += 1;
        }
        m
    }
}

pub fn summary_key(v: &Verdict) -> String {
    match &v.outcome {
        Outcome::Requires(r) => format!("Requires {}", r.code()),
        Outcome::NotRequires(Failure::Condition(c)) => format!("NotRequires {}", c.code()),
        Outcome::NotRequires(Failure::Gate(g)) => format!("NotRequires {}", g.rule.code()),
        Outcome::NotCycle => "NotCycle".to_string(),
    }
}

/// Indices of the patterns to visit, in output order.
fn indices(cfg: &CensusConfig) -> Vec<u64> {
    match cfg.mode {
        Mode::Exhaustive => (0..cfg.space_size()).collect(),
        Mode::Random(m) => {
            let size = cfg.space_size();
            let mut rng = sample_rng(cfg.seed, 3u64 << 32);
            (0..m).map(|_| rng.gen_range(0..size)).collect()
        }
    }
}

pub fn enumerate(cfg: &CensusConfig) -> Result<Vec<SignPattern>> {
    cfg.validate()?;
    let all: Vec<SignPattern> = indices(cfg).into_iter().map(|i| cfg.pattern_at(i)).collect();
    if !cfg.dedupe {
        return Ok(all);
    }
    let mut seen = HashSet::new();
    Ok(all
        .into_iter()
        .map(|a| canonical_form(&a))
        .filter(|c| seen.insert(c.to_compact()))
        .collect())
}

/// Classify (and, with `samples > 0`, oracle-check) every pattern of the
/// census in parallel; records come back in enumeration order.
pub fn run_census(cfg: &CensusConfig) -> Result<CensusReport> {
    let patterns = enumerate(cfg)?;
    let records = patterns
        .into_par_iter()
        .map(|a| {
            let verdict = classify(&a);
            let check = if cfg.samples == 0 {
                OracleCheck::skipped()
            } else {
                check_verdict(&a, &verdict, cfg.samples, cfg.seed, &cfg.tolerances, false)?
            };
            Ok(CensusRecord {
                pattern: a,
                verdict,
                check,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusReport {
        config: cfg.clone(),
        records,
    })
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn read_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Io(e.to_string())))
        .collect()
}
