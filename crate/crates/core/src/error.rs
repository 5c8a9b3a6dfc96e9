use thiserror::Error;

use crate::flagcomb::Subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<u8>),
    #[error("letter {letter} out of range for n = {n}")]
    InvalidLetter { letter: u8, n: usize },
    #[error("invalid subset {elements:?} of [{n}]")]
    InvalidSubset { elements: Vec<u8>, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("{v} is not below {w} in the Bruhat order")]
    NotBruhatLeq { v: String, w: String },
    #[error("positive distinguished subexpression check failed: {0}")]
    SubexpressionCheck(String),
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial has a negative coefficient: {0}")]
    NegativeCoefficient(String),
    #[error("parameter {index} is not positive")]
    NonPositiveParameter { index: usize },
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("support of point does not match the cell support")]
    SupportMismatch,
    #[error("extremal coordinate {index} is not a monomial: {poly}")]
    NonMonomial { index: Subset, poly: String },
    #[error("gauge coordinate {index} of a cell is {poly}, expected 1")]
    GaugeNotUnit { index: Subset, poly: String },
    #[error("exponent system has rank {rank} < {params}")]
    RankDeficient { rank: usize, params: usize },
    #[error("exponent system has no integer left inverse")]
    NoIntegerInverse,
    #[error("linear system for the cell parameters is inconsistent")]
    InconsistentSystem,
    #[error("three-term propagation stalled; unknown coordinates {0:?}")]
    PropagationStalled(Vec<Subset>),
    #[error("point is not a flag: relation {0} does not vanish")]
    NotAFlag(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("atlas invariant violated: {0}")]
    AtlasInvariant(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
