//! Directed-rounding evaluation of `2^{-x}` for dyadic `x`.
//!
//! `x = k + f` with integer `k` and `f ∈ [0, 1)`; then `2^{-x} = 2^{-k}·e^{-f ln 2}`.
//! The second factor is computed in fixed point with `w` fractional bits and an
//! explicit error bound counted in units of `2^{-w}`, and the bound is applied
//! before the final directed rounding to the requested precision.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 8;

const GUARD_BITS: u32 = 48;

/// `2^{-x}` rounded in `dir` to `prec` significant bits.
///
/// The result lies on the requested side of the true value and within two
/// units in the last place of it. Integer `x` gives exact powers of two.
/// Negative `x` is accepted as well.
pub fn pow2_neg(x: &Dyadic, dir: Round, prec: u32) -> Result<Dyadic> {
    if prec < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(prec));
    }
    let k = x
        .floor()
        .to_i64()
        .filter(|k| k.unsigned_abs() < 1 << 40)
        .ok_or_else(|| Error::InvalidArgument(format!("exponent {x} out of range")))?;
    Ok(pow2_neg_split(x, k, dir, prec))
}

/// Callers guarantee `prec >= MIN_PRECISION` and a moderate exponent.
pub(crate) fn pow2_neg_unchecked(x: &Dyadic, dir: Round, prec: u32) -> Dyadic {
    let k = x.floor().to_i64().expect("codes stay far below 2^63");
    pow2_neg_split(x, k, dir, prec)
}

/// `Σ 2^{-x}` over `xs`, each term and the total rounded in `dir`.
pub(crate) fn sum_pow2_neg<'a>(
    xs: impl IntoIterator<Item = &'a Dyadic>,
    dir: Round,
    prec: u32,
) -> Dyadic {
    let mut acc = Dyadic::zero();
    for x in xs {
        acc = &acc + &pow2_neg_unchecked(x, dir, prec);
    }
    acc.round(prec, dir)
}

fn pow2_neg_split(x: &Dyadic, k: i64, dir: Round, prec: u32) -> Dyadic {
    let frac = x - &Dyadic::from_int(k);
    if frac.is_zero() {
        return Dyadic::pow2(-k);
    }
    let w = prec + GUARD_BITS + 2 * (32 - prec.leading_zeros());
    let (lo, hi) = two_pow_neg_frac(&frac, w);
    let scale = -i64::from(w) - k;
    match dir {
        Round::Down => Dyadic::new(lo, scale).round(prec, Round::Down),
        Round::Up => Dyadic::new(hi, scale).round(prec, Round::Up),
    }
}

/// Bounds `lo ≤ 2^{-f}·2^w ≤ hi` for `f ∈ (0, 1)`.
fn two_pow_neg_frac(frac: &Dyadic, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let ln2 = ln2_fixed(w);
    // f_fix ≤ f·2^w < f_fix + 1
    let f_fix = frac.mul_pow2(i64::from(w)).floor();
    // |y − f·ln2·2^w| < 5
    let y = (&f_fix * &*ln2) >> w;

    // e^{-y} by its alternating Taylor series. Each truncated term is within
    // 4 units of the exact one and the first vanishing term bounds the tail.
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut k: u32 = 1;
    loop {
        term = ((&term * &y) >> w) / k;
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    let err = BigInt::from(4 * u64::from(k) + 16);
    let half = &one >> 1u32;
    let lo = (&sum - &err).max(half);
    let hi = (&sum + &err).min(one);
    (lo, hi)
}

static LN2_CACHE: LazyLock<Mutex<HashMap<u32, Arc<BigInt>>>> = LazyLock::new(Default::default);

/// `ln 2 · 2^w` to within 2 units: `Σ_{k≥1} 1/(k·2^k)` summed with 32 extra bits.
fn ln2_fixed(w: u32) -> Arc<BigInt> {
    if let Some(v) = LN2_CACHE.lock().unwrap_or_else(|e| e.into_inner()).get(&w) {
        return v.clone();
    }
    let wide = u64::from(w) + 32;
    let mut acc = BigInt::zero();
    for k in 1..=wide {
        acc += (BigInt::one() << (wide - k)) / k;
    }
    let v = Arc::new(acc >> 32u32);
    LN2_CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(w, v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    // 2^{-1/2} to 60 digits, from tests/oracles/oracle.py.
    const INV_SQRT2: &str = "0.70710678118654752440084436210484903928483593768847403658834";

    fn dec(s: &str, dir: Round) -> Dyadic {
        Dyadic::parse(s, dir, 400).unwrap()
    }

    #[test]
    fn exact_at_integers() {
        for dir in [Round::Down, Round::Up] {
            assert_eq!(pow2_neg(&Dyadic::zero(), dir, 64).unwrap(), Dyadic::one());
            assert_eq!(pow2_neg(&Dyadic::one(), dir, 64).unwrap(), Dyadic::pow2(-1));
            assert_eq!(
                pow2_neg(&Dyadic::from_int(-3), dir, 64).unwrap(),
                Dyadic::from_int(8)
            );
        }
    }

    #[test]
    fn inverse_sqrt2_within_two_ulps() {
        let half = Dyadic::pow2(-1);
        let truth_lo = dec(INV_SQRT2, Round::Down);
        let truth_hi = dec(INV_SQRT2, Round::Up);
        for prec in [8u32, 24, 53, 64, 128, 180] {
            let ulp = Dyadic::pow2(-i64::from(prec));
            let down = pow2_neg(&half, Round::Down, prec).unwrap();
            let up = pow2_neg(&half, Round::Up, prec).unwrap();
            assert!(down <= truth_lo, "prec {prec}");
            assert!(up >= truth_hi, "prec {prec}");
            let two_ulps = &ulp + &ulp;
            assert!(&truth_hi - &down <= two_ulps, "prec {prec}");
            assert!(&up - &truth_lo <= two_ulps, "prec {prec}");
        }
    }

    #[test]
    fn agrees_with_f64_exp2() {
        for i in 1..200 {
            let x = i as f64 * 0.037;
            let d = Dyadic::from_f64(x).unwrap();
            let lo = pow2_neg(&d, Round::Down, 64).unwrap().to_f64();
            let hi = pow2_neg(&d, Round::Up, 64).unwrap().to_f64();
            let r = (-x).exp2();
            assert!((lo - r).abs() <= 2.0 * f64::EPSILON * r, "x = {x}");
            assert!((hi - r).abs() <= 2.0 * f64::EPSILON * r, "x = {x}");
        }
    }

    #[test]
    fn rejects_tiny_precision() {
        assert!(matches!(
            pow2_neg(&Dyadic::one(), Round::Down, 7),
            Err(Error::PrecisionTooLow(7))
        ));
    }

    #[test]
    fn ln2_is_accurate() {
        // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
        let l = ln2_fixed(200);
        let got = Dyadic::new((*l).clone(), -200);
        let truth = dec(
            "0.693147180559945309417232121458176568075500134360255254120680",
            Round::Down,
        );
        assert!((&got - &truth).abs() <= Dyadic::pow2(-198));
    }
}
