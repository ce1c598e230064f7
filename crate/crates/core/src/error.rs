use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown family `{name}` at byte {offset}")]
    UnknownFamily { name: String, offset: usize },

    #[error("parameter `{param}` of `{family}` at byte {offset}: {reason}")]
    Parameter {
        family: String,
        param: String,
        offset: usize,
        reason: String,
    },

    #[error("mixture weight at byte {offset} must be positive, got {weight}")]
    NonPositiveWeight { offset: usize, weight: f64 },

    #[error("cannot read sample file {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {reason}", path.display())]
    SampleValue {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("empirical distribution needs at least one positive value")]
    EmptySample,

    #[error("price must be positive, got {0}")]
    NonPositivePrice(f64),

    #[error("distribution has atoms; F(V) is not uniform")]
    HasAtoms,

    #[error("distribution has infinite expectation")]
    InfiniteExpectation,

    #[error("closeness parameter delta is zero; the proof chain is vacuous")]
    DegenerateDelta,

    #[error("Lambert W argument {0} is below -1/e")]
    LambertDomain(f64),

    #[error("revenue search inconsistent: price {price} earns {revenue}, above reported optimum {optimum}")]
    Inconsistent {
        price: f64,
        revenue: f64,
        optimum: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
