use serde::Serialize;

use super::multiset::HfMultiset;
use crate::hf::HfSet;
use crate::system::{well_founded_unknowns, SetSystem};

/// Which approximating sequence to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Set,
    Multiset,
}

/// The `step`-th tuple of an approximating sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxTuple<T> {
    pub step: usize,
    pub values: Vec<T>,
}

/// Terms that can be rendered in the `⟨…⟩` tuple layout.
pub trait Term: Clone + Eq {
    fn pretty(&self) -> String;
    fn canonical(&self) -> String;
}

impl Term for HfSet {
    fn pretty(&self) -> String {
        self.to_pretty()
    }
    fn canonical(&self) -> String {
        self.to_string()
    }
}

impl Term for HfMultiset {
    fn pretty(&self) -> String {
        self.to_pretty()
    }
    fn canonical(&self) -> String {
        self.to_string()
    }
}

impl<T: Term> ApproxTuple<T> {
    /// `⟨a, b, …⟩` with `∅` for the empty (multi)set.
    pub fn to_pretty(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(Term::pretty).collect();
        format!("⟨{}⟩", parts.join(", "))
    }
}

/// Iterator over the tuples of an approximating sequence, starting at step 0.
///
/// Only the current tuple is retained.
pub struct Approximations<'a, T> {
    system: &'a SetSystem,
    current: ApproxTuple<T>,
    combine: fn(Vec<T>) -> T,
}

impl<'a, T: Clone> Approximations<'a, T> {
    fn new(system: &'a SetSystem, bottom: T, combine: fn(Vec<T>) -> T) -> Self {
        Approximations {
            system,
            current: ApproxTuple {
                step: 0,
                values: vec![bottom; system.len()],
            },
            combine,
        }
    }
}

impl<T: Clone> Iterator for Approximations<'_, T> {
    type Item = ApproxTuple<T>;

    fn next(&mut self) -> Option<ApproxTuple<T>> {
        let prev = &self.current.values;
        let next = self
            .system
            .equations()
            .iter()
            .map(|row| (self.combine)(row.iter().map(|&u| prev[u].clone()).collect()))
            .collect();
        let step = self.current.step + 1;
        Some(std::mem::replace(
            &mut self.current,
            ApproxTuple { step, values: next },
        ))
    }
}

/// The set-approximating sequence: all `∅`, then `h_i^{j} = {h_{i,u}^{j-1}}`.
pub fn set_approximations(s: &SetSystem) -> Approximations<'_, HfSet> {
    Approximations::new(s, HfSet::empty(), HfSet::from_elements)
}

/// The multiset-approximating sequence: as for sets, keeping multiplicities.
pub fn multiset_approximations(s: &SetSystem) -> Approximations<'_, HfMultiset> {
    Approximations::new(s, HfMultiset::empty(), HfMultiset::from_elements)
}

pub fn set_approx(s: &SetSystem, j: usize) -> ApproxTuple<HfSet> {
    set_approximations(s).nth(j).expect("sequence is infinite")
}

pub fn multiset_approx(s: &SetSystem, j: usize) -> ApproxTuple<HfMultiset> {
    multiset_approximations(s)
        .nth(j)
        .expect("sequence is infinite")
}

/// First step at which each pair of unknowns differs, searched up to step `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctionTable {
    n: usize,
    steps: Vec<Option<usize>>,
}

impl DistinctionTable {
    /// `None` when the pair agrees at every step up to the bound.
    pub fn get(&self, i: usize, k: usize) -> Option<usize> {
        self.steps[i * self.n + k]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// True iff every pair of distinct unknowns is distinguished within the bound.
    pub fn all_distinguished(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|k| i == k || self.get(i, k).is_some()))
    }
}

pub fn distinguished_step(s: &SetSystem, kind: Kind) -> DistinctionTable {
    match kind {
        Kind::Set => distinction_table(s.len(), set_approximations(s)),
        Kind::Multiset => distinction_table(s.len(), multiset_approximations(s)),
    }
}

fn distinction_table<T: Eq>(
    n: usize,
    seq: impl Iterator<Item = ApproxTuple<T>>,
) -> DistinctionTable {
    let mut steps = vec![None; n * n];
    for tuple in seq.take(n + 1) {
        for i in 0..n {
            for k in (i + 1)..n {
                if steps[i * n + k].is_none() && tuple.values[i] != tuple.values[k] {
                    steps[i * n + k] = Some(tuple.step);
                    steps[k * n + i] = Some(tuple.step);
                }
            }
        }
    }
    DistinctionTable { n, steps }
}

/// When an unknown's set approximation stops changing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stabilization {
    /// First `j` with `h_i^j = h_i^{j+1}`.
    At(usize),
    Never,
}

/// Per unknown, the stabilization step of its set approximation.
///
/// Unknowns that reach a membership cycle never stabilize; this is decided
/// from the graph, and only the others are iterated.
pub fn set_stabilization(s: &SetSystem) -> Vec<Stabilization> {
    let wf = well_founded_unknowns(s);
    let mut out: Vec<Stabilization> = vec![Stabilization::Never; s.len()];
    let mut open: Vec<usize> = (0..s.len()).filter(|&i| wf[i]).collect();
    let mut seq = set_approximations(s);
    let mut prev = seq.next().expect("sequence is infinite");
    while !open.is_empty() {
        let next = seq.next().expect("sequence is infinite");
        open.retain(|&i| {
            let same = prev.values[i] == next.values[i];
            if same {
                out[i] = Stabilization::At(prev.step);
            }
            !same
        });
        prev = next;
    }
    out
}
