//! Ackermann codes of hereditarily finite sets and certified real-valued
//! codes `R_A(x) = Σ_{y∈x} 2^{-R_A(y)}` of hereditarily finite hypersets.
//!
//! * [`hf`]: hash-consed well-founded sets, the Ackermann bijection with the
//!   naturals, the Ackermann ordering and the successor machinery.
//! * [`system`]: set systems, pointed graphs, bisimulation and quotienting.
//! * [`approx`]: set- and multiset-approximating sequences of a system.
//! * [`code`]: directed-rounding dyadic arithmetic and the enclosure solver
//!   for code systems.
//! * [`lab`]: experiments around the injectivity of `R_A`.

pub mod approx;
pub mod code;
mod error;
pub mod hf;
mod intern;
pub mod lab;
pub mod system;

pub use error::{Error, Result};
