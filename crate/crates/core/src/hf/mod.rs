//! Well-founded hereditarily finite sets and the Ackermann codec.

mod ackermann;
mod set;

pub use ackermann::{
    ack_decode, ack_decode_u64, ack_decode_with_budget, ack_encode, ack_encode_with_budget, low,
    successor_set, AckCode, Decoder, DEFAULT_BIT_BUDGET,
};
pub use set::{ack_compare, HfSet};

/// `{∅}^n`.
pub fn iterated_singleton(n: usize) -> HfSet {
    HfSet::iterated_singleton(n)
}

/// Von Neumann rank.
pub fn rank(h: &HfSet) -> u64 {
    h.rank()
}
