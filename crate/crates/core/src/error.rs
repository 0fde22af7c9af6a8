use std::fmt;

use thiserror::Error;

use crate::rational::{format_rational, Q};

pub type Result<T> = std::result::Result<T, Error>;

/// Which structural identity a candidate algebra fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Antisymmetry,
    Jacobi,
    Graded,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Antisymmetry => "antisymmetry",
            Identity::Jacobi => "jacobi",
            Identity::Graded => "graded",
        })
    }
}

/// First violated identity found while validating structure constants.
///
/// `witness` holds basis labels. For antisymmetry and grading it is the
/// offending entry `(i, j, k)` of `[X_i, X_j] = c X_k`; for Jacobi it is the
/// triple `(X_i, X_j, X_k)` and `component` names the basis direction where
/// the cyclic sum is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub identity: Identity,
    pub witness: (String, String, String),
    pub component: Option<String>,
    pub residual: Q,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = &self.witness;
        write!(
            f,
            "{} violated at ({a}, {b}, {c}), residual {}",
            self.identity,
            format_rational(&self.residual)
        )?;
        if let Some(comp) = &self.component {
            write!(f, " along {comp}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(Box<ValidationError>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dilation scale must be positive")]
    NonpositiveScale,
    #[error("parameter {0} outside the family domain")]
    OutOfDomain(String),
    #[error("signature {0} is not present in the stratum table")]
    UnknownSignature(String),
    #[error("generator images do not generate the target algebra (rank {rank} < {dim})")]
    NotGenerating { rank: usize, dim: usize },
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("map is not a Lie algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("source basis violates the adapted Jordan-Hölder ordering: {0}")]
    ConventionMismatch(String),
    #[error("frame mismatch: expected {expected}, got {got}")]
    FrameMismatch { expected: String, got: String },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("input does not vanish at the origin: |f| = {value:e} near 0 exceeds {bound:e}")]
    NotVanishingAtOrigin { value: f64, bound: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::Validation(Box::new(e))
    }
}
