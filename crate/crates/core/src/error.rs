use thiserror::Error;

/// Errors raised by the positivity computations.
///
/// The variants are grouped by how a caller is expected to react: input
/// errors mean the request was malformed, domain errors mean the request was
/// well formed but the class lies outside the region where the operation is
/// defined, and regime refusals mean a numerical run was declined up front.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("not pseudoeffective: {0}")]
    NotPseudoeffective(String),

    #[error("not nef: {0}")]
    NotNef(String),

    #[error("derivative undefined at volume-zero class: {0}")]
    NotBig(String),

    #[error("class outside the declared region of the instance: {0}")]
    OutsideRegion(String),

    #[error("unbounded polytope")]
    Unbounded,

    #[error("regime refusal: {0}")]
    Regime(String),
}

impl Error {
    /// Process exit code for this error, following the CLI convention
    /// (2 input, 3 domain, 4 regime refusal).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::DimensionMismatch { .. } | Error::Instance(_) | Error::Unbounded => 2,
            Error::NotPseudoeffective(_) | Error::NotNef(_) | Error::NotBig(_) | Error::OutsideRegion(_) => 3,
            Error::Regime(_) => 4,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn instance(msg: impl Into<String>) -> Self {
        Error::Instance(msg.into())
    }

    pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got })
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
