use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

use crate::hf::HfSet;
use crate::intern::Interner;

/// A hereditarily finite multiset, hash-consed like [`HfSet`].
///
/// Children are `(element, multiplicity)` pairs with multiplicity ≥ 1, sorted
/// ascending by the `Ord` impl: shorter canonical serialization first, then
/// lexicographically by children.
#[derive(Clone)]
pub struct HfMultiset(Arc<MNode>);

pub(crate) struct MNode {
    children: Box<[(HfMultiset, u64)]>,
    serial_len: u64,
    rank: u64,
}

/// Children as (interned address, multiplicity) pairs.
type Key = Box<[(usize, u64)]>;

static MULTISETS: LazyLock<Interner<Key, MNode>> = LazyLock::new(Interner::new);

impl HfMultiset {
    pub fn empty() -> HfMultiset {
        HfMultiset::from_canonical(Vec::new())
    }

    /// Builds the multiset holding each yielded element once per occurrence.
    pub fn from_elements<I: IntoIterator<Item = HfMultiset>>(elements: I) -> HfMultiset {
        let mut elems: Vec<HfMultiset> = elements.into_iter().collect();
        elems.sort_unstable();
        let mut children: Vec<(HfMultiset, u64)> = Vec::with_capacity(elems.len());
        for e in elems {
            match children.last_mut() {
                Some((last, count)) if *last == e => *count += 1,
                _ => children.push((e, 1)),
            }
        }
        HfMultiset::from_canonical(children)
    }

    fn from_canonical(children: Vec<(HfMultiset, u64)>) -> HfMultiset {
        let key: Box<[(usize, u64)]> = children.iter().map(|(c, k)| (c.addr(), *k)).collect();
        let node = MULTISETS.intern(key, || {
            let total: u64 = children.iter().map(|(_, k)| *k).sum();
            let serial_len = children
                .iter()
                .fold(2 + total.saturating_sub(1), |acc, (c, k)| {
                    acc.saturating_add(c.0.serial_len.saturating_mul(*k))
                });
            MNode {
                rank: children
                    .iter()
                    .map(|(c, _)| c.0.rank + 1)
                    .max()
                    .unwrap_or(0),
                serial_len,
                children: children.into_boxed_slice(),
            }
        });
        HfMultiset(node)
    }

    /// The embedding of sets into multisets (every multiplicity 1).
    pub fn from_set(h: &HfSet) -> HfMultiset {
        fn go(h: &HfSet, memo: &mut HashMap<HfSet, HfMultiset>) -> HfMultiset {
            if let Some(m) = memo.get(h) {
                return m.clone();
            }
            let elems: Vec<HfMultiset> = h.children().iter().map(|c| go(c, memo)).collect();
            let m = HfMultiset::from_elements(elems);
            memo.insert(h.clone(), m.clone());
            m
        }
        go(h, &mut HashMap::new())
    }

    /// The set this multiset embeds, if every multiplicity is 1 all the way down.
    pub fn to_set(&self) -> Option<HfSet> {
        fn go(m: &HfMultiset, memo: &mut HashMap<HfMultiset, Option<HfSet>>) -> Option<HfSet> {
            if let Some(r) = memo.get(m) {
                return r.clone();
            }
            let mut elems = Vec::with_capacity(m.0.children.len());
            let mut ok = true;
            for (c, k) in m.0.children.iter() {
                match (k, go(c, memo)) {
                    (1, Some(h)) => elems.push(h),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            let r = ok.then(|| HfSet::from_elements(elems));
            memo.insert(m.clone(), r.clone());
            r
        }
        go(self, &mut HashMap::new())
    }

    /// Distinct elements with their multiplicities.
    pub fn children(&self) -> &[(HfMultiset, u64)] {
        &self.0.children
    }

    pub fn multiplicity(&self, x: &HfMultiset) -> u64 {
        self.0
            .children
            .iter()
            .find(|(c, _)| c == x)
            .map_or(0, |(_, k)| *k)
    }

    /// Total number of elements counted with multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.0.children.iter().map(|(_, k)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.0.rank
    }

    /// Length of the canonical `[…]` serialization, saturating at `u64::MAX`.
    pub fn serial_len(&self) -> u64 {
        self.0.serial_len
    }

    fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Renders with `∅` for the empty multiset, listing repeated elements.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, true);
        out
    }

    fn write(&self, out: &mut String, pretty: bool) {
        if pretty && self.is_empty() {
            out.push('∅');
            return;
        }
        out.push('[');
        let mut first = true;
        for (c, k) in self.children() {
            for _ in 0..*k {
                if !first {
                    out.push_str(if pretty { ", " } else { "," });
                }
                first = false;
                c.write(out, pretty);
            }
        }
        out.push(']');
    }
}

impl PartialEq for HfMultiset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HfMultiset {}

impl Hash for HfMultiset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.addr().hash(state);
    }
}

impl Ord for HfMultiset {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self, other);
        'outer: loop {
            if a == b {
                return Ordering::Equal;
            }
            match a.0.serial_len.cmp(&b.0.serial_len) {
                Ordering::Equal => {}
                o => return o,
            }
            for ((x, kx), (y, ky)) in a.children().iter().zip(b.children()) {
                if x != y {
                    a = x;
                    b = y;
                    continue 'outer;
                }
                match kx.cmp(ky) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            return a.children().len().cmp(&b.children().len());
        }
    }
}

impl PartialOrd for HfMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical bracket notation, e.g. `[[],[],[[]]]`.
impl fmt::Display for HfMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write(&mut out, false);
        f.write_str(&out)
    }
}

impl fmt::Debug for HfMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HfMultiset({self})")
    }
}
