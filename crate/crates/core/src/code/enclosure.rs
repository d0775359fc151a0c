use std::fmt;

use serde::Serialize;

use super::dyadic::{Dyadic, Round};

/// A certified interval `[lo, hi]` around an exact real value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl Enclosure {
    /// Panics if `lo > hi`; that would be a broken certificate.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Enclosure {
        assert!(lo <= hi, "inverted enclosure [{lo:?}, {hi:?}]");
        Enclosure { lo, hi }
    }

    pub fn exact(x: Dyadic) -> Enclosure {
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True iff `other ⊆ self`.
    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified lower bound on `|x − y|` over the two intervals, if positive.
    pub fn gap(&self, other: &Enclosure) -> Option<Dyadic> {
        if self.hi < other.lo {
            Some(&other.lo - &self.hi)
        } else if other.hi < self.lo {
            Some(&self.lo - &other.hi)
        } else {
            None
        }
    }

    /// Interval difference `self − other`.
    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Widens by `r` on both sides.
    pub fn inflate(&self, r: &Dyadic) -> Enclosure {
        Enclosure::new(&self.lo - r, &self.hi + r)
    }

    /// Both bounds as fixed-point decimals, rounded outward.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up),
        )
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        let (lo, hi) = self.to_decimal(digits);
        write!(f, "[{lo}, {hi}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(lo: f64, hi: f64) -> Enclosure {
        Enclosure::new(Dyadic::from_f64(lo).unwrap(), Dyadic::from_f64(hi).unwrap())
    }

    #[test]
    fn interval_relations() {
        let a = e(0.0, 1.0);
        let b = e(0.5, 2.0);
        let c = e(1.5, 3.0);
        assert!(a.overlaps(&b) && b.overlaps(&c) && !a.overlaps(&c));
        assert_eq!(a.gap(&c), Some(Dyadic::from_f64(0.5).unwrap()));
        assert_eq!(c.gap(&a), a.gap(&c));
        assert_eq!(a.gap(&b), None);
        assert_eq!(c.sub(&a), e(0.5, 3.0));
        assert_eq!(format!("{:.2}", e(0.125, 0.5)), "[0.12, 0.50]");
        assert!(e(0.0, 4.0).contains_enclosure(&b));
    }

    #[test]
    #[should_panic]
    fn inverted_is_rejected() {
        e(1.0, 0.0);
    }
}
