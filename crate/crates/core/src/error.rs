use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty pattern text")]
    EmptyInput,

    #[error("unknown token '{token}' at ({row},{col})")]
    UnknownToken {
        token: String,
        row: usize,
        col: usize,
    },

    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("pattern is not square: {rows} rows of {cols} entries (rows end at line {row})")]
    NotSquare { rows: usize, cols: usize, row: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("not a permutation of 0..{n}: {perm:?}")]
    NotPermutation { perm: Vec<usize>, n: usize },

    #[error("order {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("pattern is not in cycle normal form: {0}")]
    NotCycleForm(String),

    #[error("pattern is not sign-nonsingular")]
    NotSns,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("eigenvalue iteration did not converge (order {n})")]
    EigenNonConvergence { n: usize },

    #[error("eigenvector residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    EigenvectorResidual { residual: f64, tolerance: f64 },

    #[error("{lambda} is not an eigenvalue: division remainder {remainder:.3e}")]
    NotAnEigenvalue { lambda: f64, remainder: f64 },

    #[error("witness polynomial value has a non-positive entry {min:.3e} at ({row},{col})")]
    WitnessNotPositive { min: f64, row: usize, col: usize },

    #[error("zero superdiagonal entry at row {index}")]
    ZeroSuperdiagonal { index: usize },

    #[error("i/o: {0}")]
    Io(String),
}
