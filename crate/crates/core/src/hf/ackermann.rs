//! Ackermann's bijection between HF and the natural numbers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::set::HfSet;
use crate::error::{Error, Result};

/// Default cap on the number of bits of a code.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

/// The Ackermann code of a set: bit `j` is set iff `h_j` is a member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AckCode(pub BigUint);

impl AckCode {
    pub fn from_u64(i: u64) -> AckCode {
        AckCode(BigUint::from(i))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for AckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for AckCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<AckCode> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                1,
                format!("not a decimal natural number: '{s}'"),
            ));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(AckCode)
            .ok_or_else(|| Error::parse(1, format!("not a decimal natural number: '{s}'")))
    }
}

impl Serialize for AckCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

/// `N_A(h) = Σ_{h'∈h} 2^{N_A(h')}` with the default bit budget.
pub fn ack_encode(h: &HfSet) -> Result<AckCode> {
    ack_encode_with_budget(h, DEFAULT_BIT_BUDGET)
}

pub fn ack_encode_with_budget(h: &HfSet, budget: u64) -> Result<AckCode> {
    let mut memo = HashMap::new();
    encode_rec(h, budget, &mut memo).map(AckCode)
}

fn encode_rec(h: &HfSet, budget: u64, memo: &mut HashMap<HfSet, BigUint>) -> Result<BigUint> {
    if let Some(v) = memo.get(h) {
        return Ok(v.clone());
    }
    let mut code = BigUint::zero();
    for child in h.children() {
        let exponent = encode_rec(child, budget, memo)?
            .to_u64()
            .filter(|&e| e < budget)
            .ok_or(Error::BitBudget { budget })?;
        code.set_bit(exponent, true);
    }
    memo.insert(h.clone(), code.clone());
    Ok(code)
}

/// Inverse of [`ack_encode`], reading the binary expansion of the code.
pub fn ack_decode(code: &AckCode) -> Result<HfSet> {
    ack_decode_with_budget(code, DEFAULT_BIT_BUDGET)
}

pub fn ack_decode_with_budget(code: &AckCode, budget: u64) -> Result<HfSet> {
    if code.0.bits() > budget {
        return Err(Error::BitBudget { budget });
    }
    let mut decoder = Decoder::default();
    let children = (0..code.0.bits())
        .filter(|&j| code.0.bit(j))
        .map(|j| decoder.decode(j))
        .collect();
    Ok(HfSet::from_canonical(children))
}

/// `h_i` for a machine-sized index.
pub fn ack_decode_u64(i: u64) -> HfSet {
    Decoder::default().decode(i)
}

/// Memoizing decoder for machine-sized indices.
#[derive(Default)]
pub struct Decoder {
    memo: HashMap<u64, HfSet>,
}

impl Decoder {
    pub fn decode(&mut self, i: u64) -> HfSet {
        if let Some(h) = self.memo.get(&i) {
            return h.clone();
        }
        // Bits are visited in increasing order, so children come out ascending.
        let children = (0..64 - i.leading_zeros() as u64)
            .filter(|&j| i >> j & 1 == 1)
            .map(|j| self.decode(j))
            .collect();
        let h = HfSet::from_canonical(children);
        self.memo.insert(i, h.clone());
        h
    }
}

/// Position of the lowest zero bit of `i`: the least `j` with `h_j ∉ h_i`.
pub fn low(i: &AckCode) -> u64 {
    i.0.trailing_ones()
}

/// `h_{i+1}` computed structurally from `h_i`:
/// drop `h_0, …, h_{low(i)-1}` and add `h_{low(i)}`.
pub fn successor_set(h: &HfSet) -> HfSet {
    let mut decoder = Decoder::default();
    let children = h.children();
    let mut k = 0;
    while k < children.len() && children[k] == decoder.decode(k as u64) {
        k += 1;
    }
    // Every remaining child exceeds h_k, so prepending keeps the order canonical.
    let mut next = Vec::with_capacity(children.len() - k + 1);
    next.push(decoder.decode(k as u64));
    next.extend_from_slice(&children[k..]);
    HfSet::from_canonical(next)
}
