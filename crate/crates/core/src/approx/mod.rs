//! Set- and multiset-approximating sequences of a set system.

mod multiset;
mod sequence;

pub use multiset::HfMultiset;
pub use sequence::{
    distinguished_step, multiset_approx, multiset_approximations, set_approx, set_approximations,
    set_stabilization, ApproxTuple, Approximations, DistinctionTable, Kind, Stabilization, Term,
};
