use thiserror::Error;

/// Errors surfaced by the engine.  Mathematical assertion failures are not
/// errors: verification ops return reports with explicit verdicts instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid algebra presentation: {0}")]
    Algebra(String),

    #[error("non-admissible presentation: path enumeration exceeded {bound} paths")]
    NonAdmissible { bound: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid complex: {0}")]
    Complex(String),

    #[error("invalid chain map: {0}")]
    ChainMap(String),

    #[error("algebra mismatch: operands live over different algebra instances")]
    AlgebraMismatch,

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("not in F within max_len (stalled at stage {stage})")]
    NotInFiltration { stage: usize },

    #[error("silting certificate violated for {object}: no shift up to {bound} admits a filtration")]
    CertificateFailed { object: String, bound: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
