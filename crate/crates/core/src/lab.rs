//! Experiments around injectivity of the real-valued code on HF.
//!
//! Enclosures can only ever certify `≠`. Pairs that still overlap at the
//! precision limit are reported as unresolved.

use std::collections::{BTreeSet, HashMap};
use std::thread;

use serde::Serialize;

use crate::code::{CodeEvaluator, Dyadic, Enclosure};
use crate::error::{Error, Result};
use crate::hf::{Decoder, HfSet};

/// Largest `j` accepted by [`delta_gap`].
pub const MAX_DELTA_J: u32 = 20;
/// Largest `n` accepted by [`unbounded_witness`].
pub const MAX_WITNESS_N: u32 = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub index: u64,
    pub code: Enclosure,
    /// Took part in at least one overlapping pair.
    pub refined: bool,
    pub unresolved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnresolvedPair {
    pub i: u64,
    pub j: u64,
    pub precision: u32,
    pub width: Dyadic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: u64,
    pub eps: Dyadic,
    /// Precision at which every code reached width `eps`.
    pub precision: u32,
    pub max_precision: u32,
    /// Entries in index order.
    pub entries: Vec<ScanEntry>,
    pub overlapping_pairs: usize,
    pub unresolved: Vec<UnresolvedPair>,
    /// Smallest certified gap between neighbouring codes in sorted order.
    pub min_gap: Option<Dyadic>,
    pub min_gap_pair: Option<(u64, u64)>,
}

fn check_eps(eps: &Dyadic) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    Ok(())
}

fn decode_range(n: u64) -> Vec<HfSet> {
    let mut d = Decoder::default();
    (0..n).map(|i| d.decode(i)).collect()
}

/// Codes of `sets` at a fixed precision, computed on up to `jobs` threads.
fn evaluate(sets: &[HfSet], prec: u32, jobs: usize) -> Result<Vec<Enclosure>> {
    CodeEvaluator::new(prec)?;
    let jobs = jobs.clamp(1, sets.len().max(1));
    let chunk = sets.len().div_ceil(jobs).max(1);
    let parts: Vec<Vec<Enclosure>> = thread::scope(|scope| {
        let handles: Vec<_> = sets
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut ev = CodeEvaluator::new(prec).expect("precision checked");
                    part.iter().map(|h| ev.eval(h)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("evaluator thread panicked"))
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Doubles precision from 64 bits until every code has width at most `eps`.
fn evaluate_to(
    sets: &[HfSet],
    eps: &Dyadic,
    max_precision: u32,
    jobs: usize,
) -> Result<(Vec<Enclosure>, u32)> {
    let mut prec = 64.min(max_precision);
    loop {
        let codes = evaluate(sets, prec, jobs)?;
        let width = codes.iter().map(Enclosure::width).max().unwrap_or_default();
        if &width <= eps {
            return Ok((codes, prec));
        }
        if prec >= max_precision {
            return Err(Error::PrecisionExhausted {
                precision: prec,
                width,
                best: None,
            });
        }
        prec = prec.saturating_mul(2).min(max_precision);
    }
}

enum PairOutcome {
    Separated {
        gap: Dyadic,
        precision: u32,
        width: Dyadic,
    },
    Unresolved {
        precision: u32,
        width: Dyadic,
    },
}

/// Re-evaluates overlapping pairs with doubled precision until they separate
/// or `max_precision` is reached. Results follow the order of `pairs`.
fn refine(
    sets: &[HfSet],
    pairs: &[(usize, usize)],
    start: u32,
    max_precision: u32,
) -> Result<Vec<PairOutcome>> {
    let mut out: Vec<Option<PairOutcome>> = pairs.iter().map(|_| None).collect();
    let mut open: Vec<usize> = (0..pairs.len()).collect();
    let mut prec = start;
    while !open.is_empty() {
        let last = prec >= max_precision;
        prec = prec.saturating_mul(2).min(max_precision);
        let mut ev = CodeEvaluator::new(prec)?;
        open.retain(|&p| {
            let (a, b) = pairs[p];
            let (x, y) = (ev.eval(&sets[a]), ev.eval(&sets[b]));
            if let Some(gap) = x.gap(&y) {
                out[p] = Some(PairOutcome::Separated {
                    gap,
                    precision: prec,
                    width: x.width().max(y.width()),
                });
                return false;
            }
            if last || prec >= max_precision {
                out[p] = Some(PairOutcome::Unresolved {
                    precision: prec,
                    width: x.width().max(y.width()),
                });
                return false;
            }
            true
        });
    }
    Ok(out
        .into_iter()
        .map(|o| o.expect("every pair settled"))
        .collect())
}

/// All pairs of overlapping intervals, by sweeping sorted endpoints.
fn overlapping_pairs(codes: &[Enclosure]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..codes.len()).collect();
    order.sort_by(|&a, &b| codes[a].lo().cmp(codes[b].lo()).then(a.cmp(&b)));
    let mut active: Vec<usize> = Vec::new();
    let mut pairs = BTreeSet::new();
    for &v in &order {
        active.retain(|&u| codes[u].hi() >= codes[v].lo());
        for &u in &active {
            pairs.insert((u.min(v), u.max(v)));
        }
        active.push(v);
    }
    pairs.into_iter().collect()
}

/// Codes of `h_0, …, h_{n-1}` to width `eps`, with every overlap refined.
pub fn scan(n: u64, eps: &Dyadic, max_precision: u32, jobs: usize) -> Result<ScanReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "scan needs at least two indices".into(),
        ));
    }
    check_eps(eps)?;
    let len = usize::try_from(n).map_err(|_| Error::SizeBudget(format!("{n} indices")))?;
    let sets = decode_range(n);
    let (codes, precision) = evaluate_to(&sets, eps, max_precision, jobs)?;
    let pairs = overlapping_pairs(&codes);
    let outcomes = refine(&sets, &pairs, precision, max_precision)?;

    let mut entries: Vec<ScanEntry> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| ScanEntry {
            index: i as u64,
            code: c.clone(),
            refined: false,
            unresolved: false,
        })
        .collect();
    let mut unresolved = Vec::new();
    let mut refined_gap = HashMap::new();
    for (&(a, b), o) in pairs.iter().zip(&outcomes) {
        entries[a].refined = true;
        entries[b].refined = true;
        match o {
            PairOutcome::Separated { gap, .. } => {
                refined_gap.insert((a, b), gap.clone());
            }
            PairOutcome::Unresolved { precision, width } => {
                entries[a].unresolved = true;
                entries[b].unresolved = true;
                unresolved.push(UnresolvedPair {
                    i: a as u64,
                    j: b as u64,
                    precision: *precision,
                    width: width.clone(),
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| {
        codes[a]
            .midpoint()
            .cmp(&codes[b].midpoint())
            .then(a.cmp(&b))
    });
    let mut min_gap: Option<(Dyadic, (u64, u64))> = None;
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        let gap = codes[a]
            .gap(&codes[b])
            .or_else(|| refined_gap.get(&(a.min(b), a.max(b))).cloned());
        if let Some(g) = gap {
            if min_gap.as_ref().is_none_or(|(m, _)| &g < m) {
                min_gap = Some((g, (a as u64, b as u64)));
            }
        }
    }

    Ok(ScanReport {
        n,
        eps: eps.clone(),
        precision,
        max_precision,
        entries,
        overlapping_pairs: pairs.len(),
        unresolved,
        min_gap_pair: min_gap.as_ref().map(|(_, p)| *p),
        min_gap: min_gap.map(|(g, _)| g),
    })
}

/// Certificate that the codes of `h_i` and `h_j` differ.
#[derive(Clone, Debug, Serialize)]
pub struct PairCertificate {
    pub i: u64,
    pub j: u64,
    /// Certified lower bound on `|R(h_i) − R(h_j)|`; `None` if inconclusive.
    pub gap: Option<Dyadic>,
    /// Precision of the deciding evaluation.
    pub precision: u32,
    /// Widest of the two enclosures at that precision.
    pub width: Dyadic,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjacentReport {
    pub n: u64,
    pub all_certified: bool,
    /// For each `i < n`, the pairs `(i, i+1)` and `(i, i+2)`.
    pub certificates: Vec<PairCertificate>,
}

impl AdjacentReport {
    pub fn inconclusive(&self) -> impl Iterator<Item = &PairCertificate> {
        self.certificates.iter().filter(|c| c.gap.is_none())
    }
}

/// Certifies `R(h_i) ≠ R(h_{i+1})` and `R(h_i) ≠ R(h_{i+2})` for all `i < n`.
pub fn check_adjacent(
    n: u64,
    eps: &Dyadic,
    max_precision: u32,
    jobs: usize,
) -> Result<AdjacentReport> {
    if n < 3 {
        return Err(Error::InvalidArgument("check_adjacent needs n ≥ 3".into()));
    }
    check_eps(eps)?;
    let sets = decode_range(n + 2);
    let (codes, precision) = evaluate_to(&sets, eps, max_precision, jobs)?;
    let len = n as usize;
    let pairs: Vec<(usize, usize)> = (0..len).flat_map(|i| [(i, i + 1), (i, i + 2)]).collect();
    let open: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(a, b)| codes[a].overlaps(&codes[b]))
        .collect();
    let outcomes = refine(&sets, &open, precision, max_precision)?;

    let mut certificates = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        let cert = match codes[a].gap(&codes[b]) {
            Some(g) => PairCertificate {
                i: a as u64,
                j: b as u64,
                gap: Some(g),
                precision,
                width: codes[a].width().max(codes[b].width()),
            },
            None => {
                let k = open
                    .binary_search(&(a, b))
                    .expect("overlapping pair was refined");
                match &outcomes[k] {
                    PairOutcome::Separated {
                        gap,
                        precision,
                        width,
                    } => PairCertificate {
                        i: a as u64,
                        j: b as u64,
                        gap: Some(gap.clone()),
                        precision: *precision,
                        width: width.clone(),
                    },
                    PairOutcome::Unresolved { precision, width } => PairCertificate {
                        i: a as u64,
                        j: b as u64,
                        gap: None,
                        precision: *precision,
                        width: width.clone(),
                    },
                }
            }
        };
        certificates.push(cert);
    }
    Ok(AdjacentReport {
        n,
        all_certified: certificates.iter().all(|c| c.gap.is_some()),
        certificates,
    })
}

/// `Δ_j = R(h_{2^j}) − R(h_{2^j − 1})` with both terms.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaGap {
    pub j: u32,
    /// `R(h_{2^j})`.
    pub upper_index_code: Enclosure,
    /// `R(h_{2^j − 1})`.
    pub lower_index_code: Enclosure,
    pub delta: Enclosure,
    /// `Δ_j ≠ −1` is certified by the enclosure.
    pub not_minus_one: bool,
    pub precision: u32,
}

pub fn delta_gap(j: u32, eps: &Dyadic, max_precision: u32) -> Result<DeltaGap> {
    if j > MAX_DELTA_J {
        return Err(Error::SizeBudget(format!(
            "delta_gap supports j ≤ {MAX_DELTA_J}, got {j}"
        )));
    }
    check_eps(eps)?;
    let mut d = Decoder::default();
    let hi_set = d.decode(1u64 << j);
    let lo_set = d.decode((1u64 << j) - 1);
    let half_eps = eps.mul_pow2(-1);
    let minus_one = Dyadic::from_int(-1);
    let mut prec = 64.min(max_precision);
    loop {
        let mut ev = CodeEvaluator::new(prec)?;
        let a = ev.eval(&hi_set);
        let b = ev.eval(&lo_set);
        let delta = a.sub(&b);
        let not_minus_one = !delta.contains(&minus_one);
        let narrow = a.width() <= half_eps && b.width() <= half_eps;
        if (narrow && not_minus_one) || prec >= max_precision {
            return Ok(DeltaGap {
                j,
                upper_index_code: a,
                lower_index_code: b,
                delta,
                not_minus_one,
                precision: prec,
            });
        }
        prec = prec.saturating_mul(2).min(max_precision);
    }
}

/// A set whose code exceeds `n`: `{{h_k'} : k' ≤ 4n}`.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub n: u32,
    pub k: u64,
    #[serde(serialize_with = "serialize_display")]
    pub set: HfSet,
    pub code: Enclosure,
    /// Lower end of `code` is above `n`.
    pub certified: bool,
}

fn serialize_display<S: serde::Serializer>(
    h: &HfSet,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(h)
}

pub fn unbounded_witness(n: u32) -> Result<Witness> {
    if n == 0 || n > MAX_WITNESS_N {
        return Err(Error::SizeBudget(format!(
            "witness supports 1 ≤ n ≤ {MAX_WITNESS_N}, got {n}"
        )));
    }
    let k = 4 * u64::from(n);
    let mut d = Decoder::default();
    let set = HfSet::from_elements((0..=k).map(|i| d.decode(i).singleton()));
    let code = crate::code::ra_code(&set, &Dyadic::pow2(-40), 4096)?;
    let certified = code.lo() > &Dyadic::from_int(i64::from(n));
    Ok(Witness {
        n,
        k,
        set,
        code,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_finds_nested_overlaps() {
        let e = |a: i64, b: i64| Enclosure::new(Dyadic::from_int(a), Dyadic::from_int(b));
        let codes = vec![e(0, 10), e(1, 2), e(5, 6), e(11, 12)];
        assert_eq!(overlapping_pairs(&codes), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn small_scans() {
        let r = scan(2, &Dyadic::pow2(-40), 4096, 1).unwrap();
        assert_eq!(r.min_gap, Some(Dyadic::one()));
        let r = scan(4, &Dyadic::pow2(-40), 4096, 2).unwrap();
        assert!(r.unresolved.is_empty() && r.overlapping_pairs == 0);
        let expected = [0.0, 1.0, 0.5, 1.5];
        for (entry, x) in r.entries.iter().zip(expected) {
            assert_eq!(entry.code, Enclosure::exact(Dyadic::from_f64(x).unwrap()));
        }
        assert!(scan(1, &Dyadic::one(), 64, 1).is_err());
    }

    #[test]
    fn adjacent_small() {
        let r = check_adjacent(64, &Dyadic::pow2(-60), 4096, 3).unwrap();
        assert!(r.all_certified);
        assert_eq!(r.certificates[0].gap, Some(Dyadic::one()));
        assert_eq!(r.certificates[3].gap, Some(Dyadic::pow2(-1)));
    }

    #[test]
    fn first_deltas() {
        let eps = Dyadic::pow2(-60);
        assert_eq!(
            delta_gap(0, &eps, 4096).unwrap().delta,
            Enclosure::exact(Dyadic::one())
        );
        assert_eq!(
            delta_gap(1, &eps, 4096).unwrap().delta,
            Enclosure::exact(Dyadic::from_f64(-0.5).unwrap())
        );
        assert!(delta_gap(MAX_DELTA_J + 1, &eps, 4096).is_err());
    }

    #[test]
    fn witness_shape() {
        let w = unbounded_witness(1).unwrap();
        assert_eq!(w.set.len(), 5);
        assert!(w.certified);
        assert!(unbounded_witness(0).is_err());
    }
}
