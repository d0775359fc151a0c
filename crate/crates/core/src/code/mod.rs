//! Certified evaluation of real-valued codes with directed rounding.

mod dyadic;
mod enclosure;
mod pow2;
mod sequence;
mod solver;

pub use dyadic::{Dyadic, Round};
pub use enclosure::Enclosure;
pub use pow2::{pow2_neg, MIN_PRECISION};
pub use sequence::{code_approx, code_approximations, delta_seq, CodeApproximations};
pub use solver::{
    omega, ra_code, solve, CodeEvaluator, CodeSolution, SolveOptions, SolveStatus, TraceStep,
    DEFAULT_MAX_ITERATIONS, DEFAULT_MAX_PRECISION,
};
