use std::borrow::Cow;
use std::collections::{HashMap, VecDeque};

use super::graph::PointedGraph;
use super::set_system::SetSystem;
use crate::hf::HfSet;

/// Anything with a membership relation over dense node indices.
pub trait Membership {
    fn successor_lists(&self) -> Cow<'_, [Vec<usize>]>;
}

impl Membership for SetSystem {
    fn successor_lists(&self) -> Cow<'_, [Vec<usize>]> {
        Cow::Borrowed(self.equations())
    }
}

impl Membership for PointedGraph {
    fn successor_lists(&self) -> Cow<'_, [Vec<usize>]> {
        Cow::Owned(self.successors())
    }
}

/// Assignment of nodes to blocks. Block ids are dense and numbered in order
/// of each block's smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: usize,
    rounds: usize,
}

impl Partition {
    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    /// Number of refinement rounds taken, including the final stable one.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.block_of.len()
    }

    pub fn members(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.block_of
            .iter()
            .enumerate()
            .filter(move |(_, &x)| x == b)
            .map(|(v, _)| v)
    }
}

/// The coarsest auto-bisimulation of the membership graph.
///
/// Blocks are split by the *set* of successor blocks until nothing changes.
pub fn coarsest_bisimulation<G: Membership + ?Sized>(g: &G) -> Partition {
    let succ = g.successor_lists();
    let n = succ.len();
    let mut block_of = vec![0; n];
    let mut blocks = usize::from(n > 0);
    let mut rounds = 0;
    while blocks > 0 {
        rounds += 1;
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::with_capacity(blocks * 2);
        let next: Vec<usize> = (0..n)
            .map(|v| {
                let mut sig: Vec<usize> = succ[v].iter().map(|&w| block_of[w]).collect();
                sig.sort_unstable();
                sig.dedup();
                let fresh = ids.len();
                *ids.entry((block_of[v], sig)).or_insert(fresh)
            })
            .collect();
        let count = ids.len();
        block_of = next;
        if count == blocks {
            break;
        }
        blocks = count;
    }
    Partition {
        block_of,
        blocks,
        rounds,
    }
}

/// True iff the unknowns denote pairwise distinct hypersets.
pub fn is_normal(s: &SetSystem) -> bool {
    coarsest_bisimulation(s).is_discrete()
}

/// Quotient by the coarsest bisimulation. Returns the normal system and the
/// map from old unknown indices to new ones.
pub fn normalize(s: &SetSystem) -> (SetSystem, Vec<usize>) {
    let p = coarsest_bisimulation(s);
    let mut rep = vec![usize::MAX; p.block_count()];
    for v in (0..s.len()).rev() {
        rep[p.block_of(v)] = v;
    }
    let rhs = rep
        .iter()
        .map(|&r| s.rhs(r).iter().map(|&u| p.block_of(u)).collect())
        .collect();
    let names = rep.iter().map(|&r| s.name(r).to_string()).collect();
    let quotient = SetSystem::with_names(rhs, names).expect("quotient indices lie in range");
    (quotient, p.block_of)
}

/// Unknowns from which no membership cycle is reachable, listed so that every
/// unknown comes after all of its members.
pub(crate) fn grounded_order(s: &SetSystem) -> Vec<usize> {
    let n = s.len();
    let mut pending: Vec<usize> = (0..n).map(|i| s.arity(i)).collect();
    let mut preds = vec![Vec::new(); n];
    for i in 0..n {
        for &u in s.rhs(i) {
            preds[u].push(i);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &p in &preds[v] {
            pending[p] -= 1;
            if pending[p] == 0 {
                queue.push_back(p);
            }
        }
    }
    order
}

/// Per unknown: whether its reachable membership subgraph is acyclic.
pub fn well_founded_unknowns(s: &SetSystem) -> Vec<bool> {
    let mut wf = vec![false; s.len()];
    for i in grounded_order(s) {
        wf[i] = true;
    }
    wf
}

/// True iff the membership digraph has no cycle.
pub fn is_well_founded(s: &SetSystem) -> bool {
    grounded_order(s).len() == s.len()
}

/// The set denoted by each well-founded unknown; `None` for the others.
pub fn well_founded_solution(s: &SetSystem) -> Vec<Option<HfSet>> {
    let mut out: Vec<Option<HfSet>> = vec![None; s.len()];
    for i in grounded_order(s) {
        let elems: Vec<HfSet> = s
            .rhs(i)
            .iter()
            .map(|&u| out[u].clone().expect("members are evaluated first"))
            .collect();
        out[i] = Some(HfSet::from_elements(elems));
    }
    out
}

/// The system of the transitive closure of `{h}`, with `h` as unknown 0 and
/// the other elements in breadth-first order of canonical children.
pub fn hfset_to_system(h: &HfSet) -> (SetSystem, usize) {
    let mut index: HashMap<HfSet, usize> = HashMap::new();
    let mut nodes = vec![h.clone()];
    index.insert(h.clone(), 0);
    let mut rhs = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let current = nodes[next].clone();
        let row = current
            .children()
            .iter()
            .map(|c| {
                *index.entry(c.clone()).or_insert_with(|| {
                    nodes.push(c.clone());
                    nodes.len() - 1
                })
            })
            .collect();
        rhs.push(row);
        next += 1;
    }
    let names = nodes.iter().map(|x| x.to_string()).collect();
    (
        SetSystem::with_names(rhs, names).expect("closure indices lie in range"),
        0,
    )
}
