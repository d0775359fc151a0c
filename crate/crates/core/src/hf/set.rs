use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, LazyLock};

use crate::error::{Error, Result};
use crate::intern::Interner;

/// A well-founded hereditarily finite set.
///
/// Values are hash-consed: two `HfSet`s are equal exactly when they share the
/// same node, so equality and hashing are O(1). Children are stored in
/// ascending Ackermann order, which is also the `Ord` implementation.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

pub(crate) struct Node {
    children: Box<[HfSet]>,
    rank: u64,
}

static SETS: LazyLock<Interner<Box<[usize]>, Node>> = LazyLock::new(Interner::new);

impl HfSet {
    /// The empty set.
    pub fn empty() -> HfSet {
        HfSet::from_canonical(Vec::new())
    }

    /// Builds the set of the given elements; order and repetitions are irrelevant.
    pub fn from_elements<I: IntoIterator<Item = HfSet>>(elements: I) -> HfSet {
        let mut children: Vec<HfSet> = elements.into_iter().collect();
        children.sort_unstable();
        children.dedup();
        HfSet::from_canonical(children)
    }

    /// `children` must already be strictly ascending.
    pub(crate) fn from_canonical(children: Vec<HfSet>) -> HfSet {
        debug_assert!(children.windows(2).all(|w| w[0] < w[1]));
        let key: Box<[usize]> = children.iter().map(HfSet::addr).collect();
        let node = SETS.intern(key, || Node {
            rank: children.iter().map(|c| c.0.rank + 1).max().unwrap_or(0),
            children: children.into_boxed_slice(),
        });
        HfSet(node)
    }

    /// `{x}`.
    pub fn singleton(self) -> HfSet {
        HfSet::from_canonical(vec![self])
    }

    /// `{∅}^n`, the n-fold singleton of the empty set.
    pub fn iterated_singleton(n: usize) -> HfSet {
        (0..n).fold(HfSet::empty(), |acc, _| acc.singleton())
    }

    /// Elements in ascending Ackermann order.
    pub fn children(&self) -> &[HfSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.children.binary_search(x).is_ok()
    }

    /// Von Neumann rank.
    pub fn rank(&self) -> u64 {
        self.0.rank
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Renders the set with `∅` for the empty set and `", "` separators.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        self.write_pretty(&mut out);
        out
    }

    fn write_pretty(&self, out: &mut String) {
        if self.is_empty() {
            out.push('∅');
            return;
        }
        out.push('{');
        for (k, c) in self.children().iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            c.write_pretty(out);
        }
        out.push('}');
    }
}

/// Compares two sets in the Ackermann ordering.
///
/// Walks both canonical child lists from the maximum downward; the first
/// mismatch decides, since the larger of the two mismatching elements is the
/// maximum of the symmetric difference. Codes are never materialized.
pub fn ack_compare(a: &HfSet, b: &HfSet) -> Ordering {
    let (mut a, mut b) = (a, b);
    'outer: loop {
        if a == b {
            return Ordering::Equal;
        }
        let (ca, cb) = (a.children(), b.children());
        let (mut i, mut j) = (ca.len(), cb.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    let (x, y) = (&ca[i - 1], &cb[j - 1]);
                    if x == y {
                        i -= 1;
                        j -= 1;
                    } else {
                        a = x;
                        b = y;
                        continue 'outer;
                    }
                }
            }
        }
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.addr().hash(state);
    }
}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        ack_compare(self, other)
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for HfSet {
    fn default() -> Self {
        HfSet::empty()
    }
}

/// Canonical braces notation, e.g. `{{},{{}}}`.
impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.children().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HfSet({self})")
    }
}

impl FromStr for HfSet {
    type Err = Error;

    /// Parses braces notation. Whitespace is ignored, `∅` abbreviates `{}`,
    /// and elements may appear in any order or repeated.
    fn from_str(s: &str) -> Result<HfSet> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let set = parse_braces(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::parse(
                1,
                format!("trailing input at column {}", pos + 1),
            ));
        }
        Ok(set)
    }
}

fn parse_braces(chars: &[char], pos: &mut usize) -> Result<HfSet> {
    // Explicit stack so deep towers do not overflow the call stack.
    let mut stack: Vec<Vec<HfSet>> = Vec::new();
    loop {
        let Some(&c) = chars.get(*pos) else {
            return Err(Error::parse(1, "unexpected end of input"));
        };
        *pos += 1;
        let finished = match c {
            '∅' => Some(HfSet::empty()),
            '{' => {
                stack.push(Vec::new());
                None
            }
            '}' => match stack.pop() {
                Some(elems) => Some(HfSet::from_elements(elems)),
                None => return Err(Error::parse(1, format!("unbalanced '}}' at column {pos}"))),
            },
            _ => return Err(Error::parse(1, format!("unexpected '{c}' at column {pos}"))),
        };
        if let Some(set) = finished {
            match stack.last_mut() {
                None => return Ok(set),
                Some(top) => {
                    top.push(set);
                    match chars.get(*pos) {
                        Some(',') => *pos += 1,
                        Some('}') => {}
                        Some(other) => {
                            return Err(Error::parse(
                                1,
                                format!(
                                    "expected ',' or '}}' but found '{other}' at column {}",
                                    *pos + 1
                                ),
                            ))
                        }
                        None => return Err(Error::parse(1, "unexpected end of input")),
                    }
                }
            }
        }
    }
}
