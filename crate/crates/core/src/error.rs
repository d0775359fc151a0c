use thiserror::Error;

use crate::code::{CodeSolution, Dyadic};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("code exceeds the bit budget of {budget} bits")]
    BitBudget { budget: u64 },

    #[error("size budget exceeded: {0}")]
    SizeBudget(String),

    #[error("working precision must be at least 8 bits, got {0}")]
    PrecisionTooLow(u32),

    #[error("precision exhausted at {precision} bits; best width {width}")]
    PrecisionExhausted {
        precision: u32,
        width: Dyadic,
        best: Option<Box<CodeSolution>>,
    },

    #[error("iteration cap of {0} reached before convergence")]
    IterationCap(u64),

    #[error("nodes not reachable from the point: {}", .0.join(", "))]
    Unreachable(Vec<String>),

    #[error("invalid set system: {0}")]
    InvalidSystem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
