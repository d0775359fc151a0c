use std::cmp::Ordering;

use hfcode::approx::{multiset_approximations, set_approximations, ApproxTuple, Term};
use hfcode::code::{ra_code, solve as solve_system, CodeSolution, Enclosure, SolveOptions};
use hfcode::hf::{ack_compare, ack_decode, ack_encode, successor_set, AckCode, HfSet};
use hfcode::lab;
use hfcode::system::{
    is_normal, is_well_founded, normalize, random_normal_system, random_system, SetSystem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::{read_set, read_source, read_system};
use crate::render::{interval, print_json, sci, EnclosureJson};
use crate::{ApproxKind, Config, Failure, Format, InputFormat};

pub fn encode(cfg: &Config, term: Option<&str>) -> Result<(), Failure> {
    let text = match term {
        Some(t) => t.to_string(),
        None => read_source(None)?,
    };
    let h: HfSet = text.trim().parse()?;
    let code = ack_encode(&h)?;
    match cfg.format {
        Format::Text => println!("{code}"),
        Format::Json => {
            print_json(&serde_json::json!({ "set": h.to_string(), "code": code.to_string() }))?
        }
    }
    Ok(())
}

pub fn decode(cfg: &Config, code: &str) -> Result<(), Failure> {
    let code: AckCode = code.trim().parse()?;
    let h = ack_decode(&code)?;
    match cfg.format {
        Format::Text => println!("{h}"),
        Format::Json => print_json(&serde_json::json!({
            "code": code.to_string(),
            "set": h.to_string(),
            "pretty": h.to_pretty(),
            "rank": h.rank(),
        }))?,
    }
    Ok(())
}

pub fn compare(cfg: &Config, a: &str, b: &str, input: InputFormat) -> Result<(), Failure> {
    let x = read_set(a, input)?;
    let y = read_set(b, input)?;
    let (word, sym) = match ack_compare(&x, &y) {
        Ordering::Less => ("less", "<"),
        Ordering::Equal => ("equal", "="),
        Ordering::Greater => ("greater", ">"),
    };
    match cfg.format {
        Format::Text => println!("{x} {sym} {y}"),
        Format::Json => print_json(
            &serde_json::json!({ "a": x.to_string(), "b": y.to_string(), "ordering": word }),
        )?,
    }
    Ok(())
}

pub fn succ(cfg: &Config, term: &str, input: InputFormat) -> Result<(), Failure> {
    let h = read_set(term, input)?;
    let next = successor_set(&h);
    match cfg.format {
        Format::Text => println!("{next}"),
        Format::Json => print_json(&serde_json::json!({
            "set": h.to_string(),
            "successor": next.to_string(),
            "code": ack_encode(&next)?.to_string(),
        }))?,
    }
    Ok(())
}

fn solve_options(cfg: &Config, trace: bool) -> SolveOptions {
    SolveOptions {
        max_precision: cfg.max_precision,
        record_trace: trace,
        ..SolveOptions::with_eps(cfg.eps.clone())
    }
}

fn normalization_warning(s: &SetSystem, sol: &CodeSolution) -> Option<String> {
    sol.normalized.then(|| {
        let classes = sol.mapping.iter().max().map_or(0, |m| m + 1);
        format!("input is not normal; solved its quotient by bisimilarity ({} unknowns, {classes} classes)", s.len())
    })
}

#[derive(Serialize)]
struct SolveJson<'a> {
    eps: &'a str,
    max_precision: u32,
    normalized: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    status: &'a hfcode::code::SolveStatus,
    iterations: u64,
    precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    observed_rate: Option<f64>,
    point: &'a str,
    unknowns: Vec<EnclosureJson<'a>>,
    classes: &'a [usize],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    trace: &'a [hfcode::code::TraceStep],
}

pub fn solve(
    cfg: &Config,
    file: Option<&str>,
    input: InputFormat,
    trace: bool,
) -> Result<(), Failure> {
    let (s, point) = read_system(file, input)?;
    let sol = solve_system(&s, &solve_options(cfg, trace))?;
    let warning = normalization_warning(&s, &sol);
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    match cfg.format {
        Format::Text => {
            let width = s
                .names()
                .iter()
                .map(|n| n.chars().count())
                .max()
                .unwrap_or(0);
            for (i, e) in sol.enclosures.iter().enumerate() {
                let mark = if i == point && input == InputFormat::Graph {
                    " (point)"
                } else {
                    ""
                };
                println!(
                    "{:<width$} ∈ {}  width {}{mark}",
                    s.name(i),
                    interval(e, cfg.digits),
                    sci(&e.width())
                );
            }
            println!(
                "iterations {}, precision {} bits",
                sol.iterations, sol.precision
            );
        }
        Format::Json => print_json(&SolveJson {
            eps: &cfg.eps_text,
            max_precision: cfg.max_precision,
            normalized: sol.normalized,
            warnings: warning.into_iter().collect(),
            status: &sol.status,
            iterations: sol.iterations,
            precision: sol.precision,
            observed_rate: sol.observed_rate,
            point: s.name(point),
            unknowns: sol
                .enclosures
                .iter()
                .enumerate()
                .map(|(i, e)| EnclosureJson::new(Some(s.name(i)), e, cfg.digits))
                .collect(),
            classes: &sol.mapping,
            trace: &sol.trace,
        })?,
    }
    Ok(())
}

fn print_enclosure(cfg: &Config, label: &str, e: &Enclosure) -> Result<(), Failure> {
    match cfg.format {
        Format::Text => println!(
            "{label} ∈ {}  width {}",
            interval(e, cfg.digits),
            sci(&e.width())
        ),
        Format::Json => print_json(&EnclosureJson::new(Some(label), e, cfg.digits))?,
    }
    Ok(())
}

pub fn ra(
    cfg: &Config,
    term: Option<&str>,
    input: InputFormat,
    point: Option<&str>,
) -> Result<(), Failure> {
    match input {
        InputFormat::Braces | InputFormat::AckermannIndex => {
            let text = match term {
                Some(t) => t.to_string(),
                None => read_source(None)?,
            };
            let h = read_set(&text, input)?;
            let e = ra_code(&h, &cfg.eps, cfg.max_precision)?;
            print_enclosure(cfg, &h.to_string(), &e)
        }
        InputFormat::System | InputFormat::Graph => {
            let (s, default_point) = read_system(term, input)?;
            let p = match point {
                Some(name) => s
                    .index_of(name)
                    .ok_or_else(|| Failure::Usage(format!("no unknown named '{name}'")))?,
                None => default_point,
            };
            let sol = solve_system(&s, &solve_options(cfg, false))?;
            if let Some(w) = normalization_warning(&s, &sol) {
                eprintln!("warning: {w}");
            }
            print_enclosure(cfg, s.name(p), &sol.enclosures[p])
        }
    }
}

pub fn omega(cfg: &Config) -> Result<(), Failure> {
    let s: SetSystem = "omega = {omega}".parse()?;
    let sol = solve_system(&s, &solve_options(cfg, false))?;
    print_enclosure(cfg, "omega", &sol.enclosures[0])
}

pub fn minimize(cfg: &Config, file: Option<&str>, input: InputFormat) -> Result<(), Failure> {
    let (s, point) = read_system(file, input)?;
    let (q, mapping) = normalize(&s);
    match cfg.format {
        Format::Text => {
            print!("{q}");
            if q.len() < s.len() {
                for (i, &c) in mapping.iter().enumerate() {
                    if s.name(i) != q.name(c) {
                        println!("# {} ~ {}", s.name(i), q.name(c));
                    }
                }
            }
        }
        Format::Json => {
            let classes: Vec<_> = mapping
                .iter()
                .enumerate()
                .map(|(i, &c)| serde_json::json!({ "unknown": s.name(i), "class": q.name(c) }))
                .collect();
            print_json(&serde_json::json!({
                "was_normal": is_normal(&s),
                "well_founded": is_well_founded(&q),
                "unknowns": s.len(),
                "classes": q.len(),
                "point": q.name(mapping[point]),
                "system": q.to_string(),
                "mapping": classes,
            }))?
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ApproxRow {
    step: usize,
    values: Vec<String>,
    pretty: String,
}

fn rows<T: Term>(seq: impl Iterator<Item = ApproxTuple<T>>, steps: usize) -> Vec<ApproxRow> {
    seq.take(steps + 1)
        .map(|t| ApproxRow {
            step: t.step,
            values: t.values.iter().map(Term::canonical).collect(),
            pretty: t.to_pretty(),
        })
        .collect()
}

pub fn approx(
    cfg: &Config,
    file: Option<&str>,
    input: InputFormat,
    steps: usize,
    kind: ApproxKind,
) -> Result<(), Failure> {
    let (s, _) = read_system(file, input)?;
    let sets = matches!(kind, ApproxKind::Set | ApproxKind::Both)
        .then(|| rows(set_approximations(&s), steps));
    let msets = matches!(kind, ApproxKind::Multiset | ApproxKind::Both)
        .then(|| rows(multiset_approximations(&s), steps));
    match cfg.format {
        Format::Text => {
            let mut first = true;
            for (label, table) in [("set", &sets), ("multiset", &msets)] {
                let Some(table) = table else { continue };
                if !first {
                    println!();
                }
                first = false;
                println!("{label}");
                for row in table {
                    println!("{}: {}", row.step, row.pretty);
                }
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "unknowns": s.names(),
            "set": sets,
            "multiset": msets,
        }))?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanRow {
    index: u64,
    midpoint: String,
    width: String,
    refined: bool,
    unresolved: bool,
}

pub fn scan(cfg: &Config, n: u64, csv: bool) -> Result<(), Failure> {
    let report = lab::scan(n, &cfg.eps, cfg.max_precision, cfg.jobs)?;
    let rows: Vec<ScanRow> = report
        .entries
        .iter()
        .map(|e| ScanRow {
            index: e.index,
            midpoint: e
                .code
                .midpoint()
                .to_decimal(cfg.digits, hfcode::code::Round::Down),
            width: sci(&e.code.width()),
            refined: e.refined,
            unresolved: e.unresolved,
        })
        .collect();
    let min_gap = report.min_gap.as_ref().map(sci);
    if csv {
        println!("index,midpoint,width,refined,unresolved");
        for r in &rows {
            println!(
                "{},{},{},{},{}",
                r.index, r.midpoint, r.width, r.refined, r.unresolved
            );
        }
        return Ok(());
    }
    match cfg.format {
        Format::Text => {
            println!("scanned {n} sets at {} bits", report.precision);
            println!(
                "overlapping pairs before refinement: {}",
                report.overlapping_pairs
            );
            println!("unresolved pairs: {}", report.unresolved.len());
            for p in &report.unresolved {
                println!(
                    "  ({}, {}) at {} bits, width {}",
                    p.i,
                    p.j,
                    p.precision,
                    sci(&p.width)
                );
            }
            if let (Some(g), Some((i, j))) = (&min_gap, report.min_gap_pair) {
                println!("minimal certified gap: {g} between h_{i} and h_{j}");
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "n": n,
            "eps": cfg.eps_text,
            "precision": report.precision,
            "max_precision": report.max_precision,
            "overlapping_pairs": report.overlapping_pairs,
            "unresolved": report.unresolved,
            "min_gap": min_gap,
            "min_gap_exact": report.min_gap,
            "min_gap_pair": report.min_gap_pair,
            "entries": rows,
        }))?,
    }
    Ok(())
}

pub fn duecasi(cfg: &Config, n: u64) -> Result<(), Failure> {
    let report = lab::check_adjacent(n, &cfg.eps, cfg.max_precision, cfg.jobs)?;
    let inconclusive: Vec<_> = report.inconclusive().collect();
    match cfg.format {
        Format::Text => {
            println!("{} pairs checked for i < {n}", report.certificates.len());
            for c in &inconclusive {
                println!(
                    "inconclusive: ({}, {}) at {} bits, width {}",
                    c.i,
                    c.j,
                    c.precision,
                    sci(&c.width)
                );
            }
            if report.all_certified {
                println!("all certified");
            }
        }
        Format::Json => print_json(&report)?,
    }
    if report.all_certified {
        Ok(())
    } else {
        Err(Failure::Budget(format!(
            "{} pairs inconclusive",
            inconclusive.len()
        )))
    }
}

pub fn deltagap(cfg: &Config, j: u32) -> Result<(), Failure> {
    let g = lab::delta_gap(j, &cfg.eps, cfg.max_precision)?;
    match cfg.format {
        Format::Text => {
            println!("delta_{j} ∈ {}", interval(&g.delta, cfg.digits));
            println!("R(h_2^{j}) ∈ {}", interval(&g.upper_index_code, cfg.digits));
            println!(
                "R(h_2^{j}-1) ∈ {}",
                interval(&g.lower_index_code, cfg.digits)
            );
            println!(
                "delta_{j} ≠ -1: {}",
                if g.not_minus_one {
                    "certified"
                } else {
                    "not certified"
                }
            );
        }
        Format::Json => print_json(&serde_json::json!({
            "j": j,
            "delta": EnclosureJson::new(None, &g.delta, cfg.digits),
            "upper_index_code": EnclosureJson::new(None, &g.upper_index_code, cfg.digits),
            "lower_index_code": EnclosureJson::new(None, &g.lower_index_code, cfg.digits),
            "not_minus_one": g.not_minus_one,
            "precision": g.precision,
        }))?,
    }
    Ok(())
}

pub fn witness(cfg: &Config, n: u32) -> Result<(), Failure> {
    let w = lab::unbounded_witness(n)?;
    match cfg.format {
        Format::Text => {
            println!("{}", w.set);
            println!(
                "cardinality {}, code ∈ {}",
                w.set.len(),
                interval(&w.code, cfg.digits)
            );
            println!(
                "code > {n}: {}",
                if w.certified {
                    "certified"
                } else {
                    "not certified"
                }
            );
        }
        Format::Json => print_json(&serde_json::json!({
            "n": n,
            "k": w.k,
            "set": w.set.to_string(),
            "cardinality": w.set.len(),
            "code": EnclosureJson::new(None, &w.code, cfg.digits),
            "certified": w.certified,
        }))?,
    }
    Ok(())
}

pub fn gen(cfg: &Config, unknowns: usize, max_arity: usize, normal: bool) -> Result<(), Failure> {
    if unknowns == 0 {
        return Err(Failure::Usage("--unknowns must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let s = if normal {
        random_normal_system(&mut rng, unknowns, max_arity)
    } else {
        random_system(&mut rng, unknowns, max_arity)
    };
    match cfg.format {
        Format::Text => print!("{s}"),
        Format::Json => print_json(&serde_json::json!({
            "seed": cfg.seed,
            "names": s.names(),
            "equations": s.equations(),
        }))?,
    }
    Ok(())
}
