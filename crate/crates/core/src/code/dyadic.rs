use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Round {
    /// Toward −∞.
    Down,
    /// Toward +∞.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact binary rational `significand · 2^exponent`.
///
/// Kept normalized (odd significand, or zero with exponent 0), so derived
/// equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `⌊m / 2^s⌋`.
fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if m.sign() != Sign::Minus {
        m >> s
    } else {
        -((-m - 1u8) >> s) - 1u8
    }
}

/// `⌈m / 2^s⌉`.
fn shr_ceil(m: &BigInt, s: u64) -> BigInt {
    -shr_floor(&-m, s)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        match mant.trailing_zeros() {
            None => Dyadic::zero(),
            Some(0) => Dyadic { mant, exp },
            Some(tz) => Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            },
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(i: i64) -> Dyadic {
        Dyadic::new(BigInt::from(i), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | 1 << 52, biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * m), e))
    }

    pub fn significand(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Number of significant bits.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `self · 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= u64::from(prec) {
            return self.clone();
        }
        let shift = bits - u64::from(prec);
        let mant = match dir {
            Round::Down => shr_floor(&self.mant, shift),
            Round::Up => shr_ceil(&self.mant, shift),
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// `⌊self⌋`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, self.exp.unsigned_abs())
        }
    }

    /// `⌊self⌋` or `⌈self⌉`.
    pub fn to_integer(&self, dir: Round) -> BigInt {
        match dir {
            Round::Down => self.floor(),
            Round::Up => -(-self).floor(),
        }
    }

    /// Exact midpoint of two dyadics.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }

    /// Nearest `f64` (up to double rounding); saturates to ±∞ or 0 outside range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let drop = mag.bits().saturating_sub(64);
        let mut top = (mag >> drop).to_u64().expect("at most 64 bits remain");
        // Sticky bit so the final conversion rounds correctly.
        if drop > 0 && mag.trailing_zeros().is_some_and(|tz| tz < drop) {
            top |= 1;
        }
        let top = if self.is_negative() {
            -(top as f64)
        } else {
            top as f64
        };
        let e = self.exp + drop as i64;
        let e = e.clamp(-1_200, 1_200) as i32;
        if e < -1_000 {
            top * 2f64.powi(-600) * 2f64.powi(e + 600)
        } else {
            top * 2f64.powi(e)
        }
    }

    /// Fixed-point decimal with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: usize, dir: Round) -> String {
        let scaled = self * &Dyadic::new(BigInt::from(10u8).pow(digits as u32), 0);
        let q = scaled.to_integer(dir);
        let negative = q.is_negative();
        let mut s = q.abs().to_string();
        if digits > 0 {
            if s.len() <= digits {
                s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
            }
            s.insert(s.len() - digits, '.');
        }
        if negative {
            s.insert(0, '-');
        }
        s
    }

    /// Parses `2^k`, an integer, or a decimal with optional exponent
    /// (`1e-30`, `0.25`, `-3.5E2`). Non-dyadic values are rounded in `dir`
    /// to `prec` significant bits.
    pub fn parse(text: &str, dir: Round, prec: u32) -> Result<Dyadic> {
        let t = text.trim();
        let bad = || Error::InvalidArgument(format!("not a number: '{text}'"));
        if let Some(e) = t.strip_prefix("2^") {
            let e: i64 = e
                .trim_start_matches(['(', ' '])
                .trim_end_matches([')', ' '])
                .parse()
                .map_err(|_| bad())?;
            return Ok(Dyadic::pow2(e));
        }
        let (mantissa, exp10) = match t.find(['e', 'E']) {
            Some(p) => (&t[..p], t[p + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (negative, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part
                .bytes()
                .chain(frac_part.bytes())
                .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let exp10 = exp10 - frac_part.len() as i64;
        if exp10.unsigned_abs() > 100_000 {
            return Err(bad());
        }
        let ten = BigInt::from(10u8);
        let (num, den) = if exp10 >= 0 {
            (num * ten.pow(exp10 as u32), BigInt::one())
        } else {
            (num, ten.pow(exp10.unsigned_abs() as u32))
        };
        Ok(Dyadic::from_ratio(&num, &den, dir, prec))
    }

    /// `num / den` (den > 0) rounded in `dir` to `prec` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, dir: Round, prec: u32) -> Dyadic {
        assert!(den.is_positive(), "denominator must be positive");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let shift = i64::from(prec) + 2 + den.bits() as i64 - num.bits() as i64;
        let (n, d) = if shift >= 0 {
            (num << shift as u64, den.clone())
        } else {
            (num.clone(), den << shift.unsigned_abs())
        };
        let (q, r) = n.div_mod_floor(&d);
        let q = if dir == Round::Up && !r.is_zero() {
            q + 1u8
        } else {
            q
        };
        Dyadic::new(q, -shift).round(prec, dir)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << (self.exp - e) as u64,
            &other.mant << (other.exp - e) as u64,
            e,
        )
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &-other
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, other: Dyadic) -> Dyadic {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (a, b) if a != b => a.cmp(&b),
            _ => {
                let (a, b, _) = self.aligned(other);
                a.cmp(&b)
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(i: i64) -> Dyadic {
        Dyadic::from_int(i)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{} (≈{:e})", self.mant, self.exp, self.to_f64())
    }
}

/// `{"significand": "<decimal>", "exponent": <int>}`.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Dyadic", 2)?;
        st.serialize_field("significand", &self.mant.to_string())?;
        st.serialize_field("exponent", &self.exp)?;
        st.end()
    }
}
