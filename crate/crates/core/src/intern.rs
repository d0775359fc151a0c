//! Global hash-consing tables.
//!
//! Nodes are keyed by the addresses of their (already interned) children, so
//! pointer identity coincides with structural identity. Entries hold weak
//! references; dead entries are swept when the table doubles in size.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, Weak};

pub(crate) struct Interner<K, N> {
    inner: Mutex<Table<K, N>>,
}

struct Table<K, N> {
    map: HashMap<K, Weak<N>>,
    next_sweep: usize,
}

const MIN_SWEEP: usize = 4096;

impl<K: Eq + Hash, N> Interner<K, N> {
    pub(crate) fn new() -> Self {
        Interner {
            inner: Mutex::new(Table {
                map: HashMap::new(),
                next_sweep: MIN_SWEEP,
            }),
        }
    }

    /// Returns the live node stored under `key`, or builds one with `make`.
    pub(crate) fn intern(&self, key: K, make: impl FnOnce() -> N) -> Arc<N> {
        let mut table = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(node) = table.map.get(&key).and_then(Weak::upgrade) {
            return node;
        }
        let node = Arc::new(make());
        table.map.insert(key, Arc::downgrade(&node));
        if table.map.len() >= table.next_sweep {
            table.map.retain(|_, w| w.strong_count() > 0);
            table.next_sweep = (2 * table.map.len()).max(MIN_SWEEP);
        }
        node
    }
}
