use thiserror::Error;

use crate::pretzel::TwistVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse twist vector {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("{0} is a link, not a knot")]
    NotAKnot(TwistVector),

    #[error("hypothesis violated for {vector}: {reason}")]
    Hypothesis { vector: TwistVector, reason: String },

    #[error("torus parameters ({p}, {q}) are not coprime positive integers")]
    NotCoprime { p: i64, q: i64 },

    #[error("no crossing with id {0}")]
    UnknownCrossing(usize),

    #[error("expected a {expected}-component diagram, found {found} components")]
    ComponentCount { expected: usize, found: usize },

    #[error("diagram has {crossings} crossings, above the oracle cap of {cap}")]
    OracleCap { crossings: usize, cap: usize },

    #[error("value {0} is not an integer")]
    NonIntegral(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("a2 methods disagree on {vector}: {detail}")]
    Mismatch { vector: TwistVector, detail: String },

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("knot table line {line}: {reason}")]
    Table { line: u64, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Exit code contract of the command-line tool.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Mismatch { .. } | Error::Invariant(_) | Error::NonIntegral(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
