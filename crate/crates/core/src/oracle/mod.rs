//! Numerical ground truth for the classifier.

pub mod ap;
pub mod counterexample;
pub mod eigen;
pub mod lemmas;
pub mod poly;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use ap::{analyze, is_algebraically_positive, witness_polynomial, APCertificate, ApAnalysis, Witness};
pub use counterexample::counterexample_search;
pub use eigen::{eigen, Spectrum};
pub use lemmas::{
    propagate_positive_solution, standard_form_transformable, Propagation, StandardFormWitness,
};

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::pattern::{QSampleConfig, SignPattern};

/// Relative tolerances; `imag_rel`, `sep_rel` and `residual_rel` are
/// multiplied by the Frobenius norm of the matrix under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub imag_rel: f64,
    pub sep_rel: f64,
    pub pos: f64,
    pub residual_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            imag_rel: 1e-9,
            sep_rel: 1e-7,
            pos: 1e-9,
            residual_rel: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    NoRealSimpleEig,
    NonPositiveEigvec,
    ZeroEntryEigvec,
    SkewSymmetric,
    ColumnSumConstruction,
    RandomSearch,
    /// A stable member of a pattern with a row or column free of `-`.
    SemistabilitySearch,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::NoRealSimpleEig => "NoRealSimpleEig",
            Reason::NonPositiveEigvec => "NonPositiveEigvec",
            Reason::ZeroEntryEigvec => "ZeroEntryEigvec",
            Reason::SkewSymmetric => "SkewSymmetric",
            Reason::ColumnSumConstruction => "ColumnSumConstruction",
            Reason::RandomSearch => "RandomSearch",
            Reason::SemistabilitySearch => "SemistabilitySearch",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdict {
    AllSamplesAP(usize),
    CounterexampleFound(RealMatrix, Reason),
    /// Number of eigen computations that failed.
    Inconclusive(usize),
}

/// Random number stream for sample `index` of a run seeded with `seed`.
/// Streams are independent of each other, so samples can be drawn in any
/// order or in parallel with the same result.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw `samples` members of `Q(A)` and test each for algebraic
/// positivity, stopping at the first failure.
pub fn mc_requires(
    a: &SignPattern,
    samples: usize,
    cfg: &QSampleConfig,
    tols: &Tolerances,
) -> Result<OracleVerdict> {
    mc_requires_with(a, samples, cfg, tols, |_, _| {})
}

/// As [`mc_requires`], handing every certificate to `on_cert`.
pub fn mc_requires_with(
    a: &SignPattern,
    samples: usize,
    cfg: &QSampleConfig,
    tols: &Tolerances,
    mut on_cert: impl FnMut(&RealMatrix, &APCertificate),
) -> Result<OracleVerdict> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let mut failures = 0;
    for k in 0..samples {
        let mut rng = sample_rng(cfg.seed, k as u64);
        let b = a.sample_q_with(cfg.lo, cfg.hi, &mut rng);
        match analyze(&b, tols) {
            Ok(an) => match &an.certificate {
                Some(cert) => on_cert(&b, cert),
                None => {
                    let reason = an.failure_reason().expect("no certificate");
                    return Ok(OracleVerdict::CounterexampleFound(b, reason));
                }
            },
            Err(_) => failures += 1,
        }
    }
    // More than 1% failed eigen computations.
    if failures * 100 > samples {
        Ok(OracleVerdict::Inconclusive(failures))
    } else {
        Ok(OracleVerdict::AllSamplesAP(samples))
    }
}
