use thiserror::Error;

use crate::scalars::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("invalid Cartan datum: {}", .0.join("; "))]
    InvalidDatum(Vec<String>),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("node {0} has no restricted reflection (c_{{i,τi}} not in {{-1, 0, 2}})")]
    NotRestricted(usize),
    #[error("degree budget exceeded: {degree} letters > {budget}")]
    DegreeBudget { degree: usize, budget: usize },
    #[error("missing image for generator {0}")]
    MissingImage(String),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("outside conjecture's hypothesis: {0}")]
    OutsideHypothesis(String),
    #[error("bad sample, resample attempts exhausted")]
    SamplingExhausted,
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
