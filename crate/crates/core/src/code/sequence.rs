use super::dyadic::{Dyadic, Round};
use super::enclosure::Enclosure;
use super::pow2::{sum_pow2_neg, MIN_PRECISION};
use crate::error::{Error, Result};
use crate::system::SetSystem;

/// Image of one equation under the antitone code map: the lower bound comes
/// from the upper bounds of the members and vice versa.
pub(crate) fn image(
    row: &[usize],
    lower: &[Dyadic],
    upper: &[Dyadic],
    prec: u32,
) -> (Dyadic, Dyadic) {
    let lo = sum_pow2_neg(row.iter().map(|&u| &upper[u]), Round::Down, prec);
    let hi = sum_pow2_neg(row.iter().map(|&u| &lower[u]), Round::Up, prec);
    (lo, hi)
}

pub(crate) fn check_precision(prec: u32) -> Result<()> {
    if prec < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(prec));
    }
    Ok(())
}

/// Enclosures of the code-approximating sequence, starting with all zeros.
pub struct CodeApproximations<'a> {
    system: &'a SetSystem,
    prec: u32,
    step: usize,
    lower: Vec<Dyadic>,
    upper: Vec<Dyadic>,
}

impl CodeApproximations<'_> {
    /// Index of the tuple the next call to `next` returns.
    pub fn step(&self) -> usize {
        self.step
    }
}

impl Iterator for CodeApproximations<'_> {
    type Item = Vec<Enclosure>;

    fn next(&mut self) -> Option<Vec<Enclosure>> {
        let out = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| Enclosure::new(lo.clone(), hi.clone()))
            .collect();
        let (lower, upper): (Vec<Dyadic>, Vec<Dyadic>) = self
            .system
            .equations()
            .iter()
            .map(|row| image(row, &self.lower, &self.upper, self.prec))
            .unzip();
        self.lower = lower;
        self.upper = upper;
        self.step += 1;
        Some(out)
    }
}

pub fn code_approximations(s: &SetSystem, prec: u32) -> Result<CodeApproximations<'_>> {
    check_precision(prec)?;
    Ok(CodeApproximations {
        system: s,
        prec,
        step: 0,
        lower: vec![Dyadic::zero(); s.len()],
        upper: vec![Dyadic::zero(); s.len()],
    })
}

/// Enclosures of the `j`-th code approximations `R(μ_i^j)`.
pub fn code_approx(s: &SetSystem, j: usize, prec: u32) -> Result<Vec<Enclosure>> {
    Ok(code_approximations(s, prec)?
        .nth(j)
        .expect("sequence is infinite"))
}

/// Enclosures of the increments `δ_i^j = R(μ_i^{j+1}) − R(μ_i^j)`.
pub fn delta_seq(s: &SetSystem, j: usize, prec: u32) -> Result<Vec<Enclosure>> {
    let mut seq = code_approximations(s, prec)?.skip(j);
    let a = seq.next().expect("sequence is infinite");
    let b = seq.next().expect("sequence is infinite");
    Ok(b.iter().zip(&a).map(|(y, x)| y.sub(x)).collect())
}
