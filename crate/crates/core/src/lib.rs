//! Sign patterns whose graph is a cycle: deciding whether every real matrix
//! with the pattern is algebraically positive, with a numerical oracle to
//! check each verdict.

pub mod census;
pub mod classify;
pub mod determinantal;
pub mod digraph;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod pattern;

pub use error::{Error, Result};
pub use matrix::RealMatrix;
pub use pattern::{ExtendedSign, ExtendedSignPattern, QSampleConfig, Sign, SignPattern, Symmetry};
