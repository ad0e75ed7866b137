use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} requires n >= {min}, got n = {n}")]
    TooFewSquares {
        what: &'static str,
        min: usize,
        n: usize,
    },

    #[error("invalid link '{0}'")]
    InvalidLink(String),

    #[error("unknown index '{0}'")]
    UnknownIndex(String),

    #[error("degree pair ({0},{1}) lies outside {{2,3,4}}")]
    DegreeOutOfDomain(u32, u32),

    #[error("cannot mix rational and float values")]
    ModeMismatch,

    #[error("{0} requires exact rational arithmetic")]
    RequiresRational(&'static str),

    #[error("index document: {0}")]
    Document(String),

    #[error("exhaustive search refused for n = {n}: cap is {cap} ({evaluations} chain evaluations)")]
    OracleCap {
        n: usize,
        cap: usize,
        evaluations: u128,
    },

    #[error("classifier inconsistency: {0}")]
    Inconsistent(String),
}
