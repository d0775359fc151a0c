use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::dyadic::{Dyadic, Round};
use super::enclosure::Enclosure;
use super::pow2::sum_pow2_neg;
use super::sequence::{check_precision, image};
use crate::error::{Error, Result};
use crate::hf::HfSet;
use crate::system::{grounded_order, is_well_founded, normalize, SetSystem};

/// How a solution was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SolveStatus {
    /// Well-founded system, evaluated by recursion over its finite depth.
    ExactStabilized,
    /// Alternating enclosures shrank to width at most `eps`.
    Converged { eps: Dyadic },
}

/// Lower and upper vectors of one solver iteration, in normalized indices.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub precision: u32,
    pub lower: Vec<Dyadic>,
    pub upper: Vec<Dyadic>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeSolution {
    /// One enclosure per unknown of the input system.
    pub enclosures: Vec<Enclosure>,
    pub iterations: u64,
    pub status: SolveStatus,
    /// Working precision in bits at termination.
    pub precision: u32,
    /// True when the input was not normal and had to be quotiented.
    pub normalized: bool,
    /// Input unknown → unknown of the normal system that was solved.
    pub mapping: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
    /// Geometric mean of the per-iteration width ratio over the last iterations.
    pub observed_rate: Option<f64>,
}

impl CodeSolution {
    pub fn max_width(&self) -> Dyadic {
        self.enclosures
            .iter()
            .map(Enclosure::width)
            .max()
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub eps: Dyadic,
    pub initial_precision: u32,
    pub max_precision: u32,
    pub max_iterations: u64,
    /// Evaluate well-founded systems by recursion instead of iterating.
    pub fast_path: bool,
    pub record_trace: bool,
}

pub const DEFAULT_MAX_PRECISION: u32 = 4096;
pub const DEFAULT_MAX_ITERATIONS: u64 = 1_000_000;

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps: Dyadic::pow2(-60),
            initial_precision: 64,
            max_precision: DEFAULT_MAX_PRECISION,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            fast_path: true,
            record_trace: false,
        }
    }
}

impl SolveOptions {
    pub fn with_eps(eps: Dyadic) -> Self {
        SolveOptions {
            eps,
            ..Default::default()
        }
    }
}

const STALL_WINDOW: usize = 8;
/// A stalled width within this many bits of the precision floor counts as
/// precision-limited.
const FLOOR_SLACK: i64 = 20;

/// Certified enclosures of the code system's unique solution.
///
/// Non-normal input is quotiented first; `normalized` is set on the result.
pub fn solve(s: &SetSystem, opts: &SolveOptions) -> Result<CodeSolution> {
    if !opts.eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    check_precision(opts.initial_precision)?;
    if opts.max_precision < opts.initial_precision {
        return Err(Error::InvalidArgument(
            "max precision below initial precision".into(),
        ));
    }
    let (sys, mapping) = normalize(s);
    let normalized = sys.len() != s.len();
    let mut sol = if opts.fast_path && is_well_founded(&sys) {
        solve_recursive(&sys, opts)
    } else {
        solve_alternating(&sys, opts)
    }
    .map_err(|e| match e {
        Error::PrecisionExhausted {
            precision,
            width,
            best,
        } => Error::PrecisionExhausted {
            precision,
            width,
            best: best.map(|b| Box::new(expand(*b, &mapping, normalized))),
        },
        e => e,
    })?;
    sol = expand(sol, &mapping, normalized);
    Ok(sol)
}

fn expand(mut sol: CodeSolution, mapping: &[usize], normalized: bool) -> CodeSolution {
    sol.enclosures = mapping.iter().map(|&b| sol.enclosures[b].clone()).collect();
    sol.mapping = mapping.to_vec();
    sol.normalized = normalized;
    sol
}

fn max_width(lower: &[Dyadic], upper: &[Dyadic]) -> Dyadic {
    lower
        .iter()
        .zip(upper)
        .map(|(l, u)| u - l)
        .max()
        .unwrap_or_default()
}

fn enclosures(lower: &[Dyadic], upper: &[Dyadic]) -> Vec<Enclosure> {
    lower
        .iter()
        .zip(upper)
        .map(|(l, u)| Enclosure::new(l.clone(), u.clone()))
        .collect()
}

/// `log2` of a positive dyadic, rounded up.
fn log2_ceil(x: &Dyadic) -> i64 {
    x.exponent() + x.bits() as i64
}

fn solve_recursive(s: &SetSystem, opts: &SolveOptions) -> Result<CodeSolution> {
    let order = grounded_order(s);
    let mut height = vec![0u64; s.len()];
    for &i in &order {
        height[i] = s.rhs(i).iter().map(|&u| height[u] + 1).max().unwrap_or(0);
    }
    let depth = height.iter().copied().max().unwrap_or(0);
    let mut prec = opts.initial_precision;
    loop {
        let mut lower = vec![Dyadic::zero(); s.len()];
        let mut upper = vec![Dyadic::zero(); s.len()];
        for &i in &order {
            let (lo, hi) = image(s.rhs(i), &lower, &upper, prec);
            lower[i] = lo;
            upper[i] = hi;
        }
        let width = max_width(&lower, &upper);
        let sol = CodeSolution {
            enclosures: enclosures(&lower, &upper),
            iterations: depth,
            status: SolveStatus::ExactStabilized,
            precision: prec,
            normalized: false,
            mapping: Vec::new(),
            trace: Vec::new(),
            observed_rate: None,
        };
        if width <= opts.eps {
            return Ok(sol);
        }
        if prec >= opts.max_precision {
            let status = SolveStatus::Converged { eps: width.clone() };
            return Err(Error::PrecisionExhausted {
                precision: prec,
                width,
                best: Some(Box::new(CodeSolution { status, ..sol })),
            });
        }
        prec = prec.saturating_mul(2).min(opts.max_precision);
    }
}

fn solve_alternating(s: &SetSystem, opts: &SolveOptions) -> Result<CodeSolution> {
    let n = s.len();
    let mut prec = opts.initial_precision;
    let mut lower = vec![Dyadic::zero(); n];
    let mut upper: Vec<Dyadic> = (0..n)
        .map(|i| Dyadic::from_int(s.arity(i) as i64))
        .collect();
    let mut trace = Vec::new();
    let mut widths: VecDeque<Dyadic> = VecDeque::with_capacity(STALL_WINDOW + 1);
    let mut all_widths: VecDeque<Dyadic> = VecDeque::with_capacity(STALL_WINDOW + 1);
    let mut iterations: u64 = 0;
    let mut polished = false;
    let scale = upper
        .iter()
        .max()
        .map_or(0, |m| if m.is_zero() { 0 } else { log2_ceil(m) });

    loop {
        if opts.record_trace {
            trace.push(TraceStep {
                precision: prec,
                lower: lower.clone(),
                upper: upper.clone(),
            });
        }
        let width = max_width(&lower, &upper);
        if all_widths.len() > STALL_WINDOW {
            all_widths.pop_front();
        }
        all_widths.push_back(width.clone());
        let solution = |status, trace| CodeSolution {
            enclosures: enclosures(&lower, &upper),
            iterations,
            status,
            precision: prec,
            normalized: false,
            mapping: Vec::new(),
            trace,
            observed_rate: observed_rate(&all_widths),
        };
        if width <= opts.eps {
            // One extra sweep once the target is met; it can only tighten.
            if polished || width.is_zero() {
                return Ok(solution(
                    SolveStatus::Converged {
                        eps: opts.eps.clone(),
                    },
                    trace,
                ));
            }
            polished = true;
        } else {
            if iterations >= opts.max_iterations {
                return Err(Error::IterationCap(opts.max_iterations));
            }
            if widths.len() > STALL_WINDOW {
                widths.pop_front();
            }
            widths.push_back(width.clone());
            let stalled = widths.len() > STALL_WINDOW && widths[0] < width.mul_pow2(1);
            let at_floor = log2_ceil(&width) <= scale - i64::from(prec) + FLOOR_SLACK;
            if stalled && at_floor {
                if prec >= opts.max_precision {
                    let status = SolveStatus::Converged { eps: width.clone() };
                    let best = solution(status, Vec::new());
                    return Err(Error::PrecisionExhausted {
                        precision: prec,
                        width,
                        best: Some(Box::new(best)),
                    });
                }
                prec = prec.saturating_mul(2).min(opts.max_precision);
                widths.clear();
            }
        }

        for (i, row) in s.equations().iter().enumerate() {
            let lo = sum_pow2_neg(row.iter().map(|&u| &upper[u]), Round::Down, prec);
            if lo > lower[i] {
                lower[i] = lo;
            }
        }
        for (i, row) in s.equations().iter().enumerate() {
            let hi = sum_pow2_neg(row.iter().map(|&u| &lower[u]), Round::Up, prec);
            if hi < upper[i] {
                upper[i] = hi;
            }
        }
        iterations += 1;
    }
}

fn observed_rate(widths: &VecDeque<Dyadic>) -> Option<f64> {
    let first = widths.front()?.to_f64();
    let last = widths.back()?.to_f64();
    let steps = widths.len().checked_sub(1).filter(|&k| k > 0)?;
    (first > 0.0 && last > 0.0).then(|| (last / first).powf(1.0 / steps as f64))
}

/// The code `Ω` of `Ω = {Ω}`, the solution of `x = 2^{-x}`.
pub fn omega(eps: &Dyadic) -> Result<Enclosure> {
    let s: SetSystem = "omega = {omega}".parse().expect("fixed system");
    let sol = solve(&s, &SolveOptions::with_eps(eps.clone()))?;
    Ok(sol.enclosures[0].clone())
}

/// Memoized evaluation of codes of well-founded sets at a fixed precision.
pub struct CodeEvaluator {
    precision: u32,
    memo: HashMap<HfSet, Enclosure>,
}

impl CodeEvaluator {
    pub fn new(precision: u32) -> Result<CodeEvaluator> {
        check_precision(precision)?;
        Ok(CodeEvaluator {
            precision,
            memo: HashMap::new(),
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Enclosure of `R_A(h)`, with rounding errors accumulated bottom-up.
    pub fn eval(&mut self, h: &HfSet) -> Enclosure {
        if let Some(e) = self.memo.get(h) {
            return e.clone();
        }
        let mut stack = vec![(h.clone(), false)];
        while let Some((x, expanded)) = stack.pop() {
            if self.memo.contains_key(&x) {
                continue;
            }
            if expanded {
                let kids = x.children();
                let encl: Vec<&Enclosure> = kids.iter().map(|c| &self.memo[c]).collect();
                let lo = sum_pow2_neg(encl.iter().map(|e| e.hi()), Round::Down, self.precision);
                let hi = sum_pow2_neg(encl.iter().map(|e| e.lo()), Round::Up, self.precision);
                self.memo.insert(x, Enclosure::new(lo, hi));
            } else {
                stack.push((x.clone(), true));
                for c in x.children() {
                    if !self.memo.contains_key(c) {
                        stack.push((c.clone(), false));
                    }
                }
            }
        }
        self.memo[h].clone()
    }
}

/// `R_A(h)` to width at most `eps`, doubling precision from 64 bits as needed.
pub fn ra_code(h: &HfSet, eps: &Dyadic, max_precision: u32) -> Result<Enclosure> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mut prec = 64.min(max_precision);
    loop {
        let e = CodeEvaluator::new(prec)?.eval(h);
        if &e.width() <= eps {
            return Ok(e);
        }
        if prec >= max_precision {
            return Err(Error::PrecisionExhausted {
                precision: prec,
                width: e.width(),
                best: None,
            });
        }
        prec = prec.saturating_mul(2).min(max_precision);
    }
}
