use thiserror::Error;

use crate::symexpr::{EvalError, Witness};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error(
        "no admissible sample point among {attempts} draws; check the domain and excluded loci"
    )]
    NoAdmissibleSample { attempts: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("distribution is not contact: (dα|D)^n vanishes")]
    NotContact,
    #[error("normalization impossible over the reals: (dα0|D)^n has the wrong sign for even n")]
    SignObstruction,
    #[error("(dα0|D)^n changes sign on the sample domain (witness {0:?})")]
    SignChange(Witness),
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("degenerate plane spanned by frame vectors {0} and {1}")]
    DegeneratePlane(usize, usize),
    #[error("expected a nonzero expression for {0}")]
    ZeroScale(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("internal cross-check failed: {0}")]
    EngineDefect(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
