//! Shared search plumbing: node budgets, three-valued answers and the
//! bounded memo cache used by the recursive decision procedures.

use std::cell::Cell;
use std::hash::Hash;

use lru::LruCache;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default number of search nodes any single search may expand.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Default byte budget of a memo cache.
pub const DEFAULT_CACHE_BYTES: usize = 64 << 20;

/// Counts expanded search nodes and fails once a limit is reached.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: Cell::new(0) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    /// Starts a fresh count with the same limit.
    pub fn reset(&self) {
        self.used.set(0);
    }

    pub fn tick(&self) -> Result<()> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            Err(Error::SearchBudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// A decision that may be left open when a budget runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn is_no(self) -> bool {
        self == Answer::No
    }

    pub fn to_option(self) -> Option<bool> {
        match self {
            Answer::Yes => Some(true),
            Answer::No => Some(false),
            Answer::Unknown => None,
        }
    }
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        Answer::from_bool(b)
    }
}

/// Serializes as `true`, `false` or `"unknown"`.
impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Answer::Yes => s.serialize_bool(true),
            Answer::No => s.serialize_bool(false),
            Answer::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// LRU memo table bounded by an approximate byte count.
///
/// Entries are write-once: inserting an existing key keeps the old value.
pub struct MemoCache<K: Hash + Eq, V> {
    inner: LruCache<K, (V, usize)>,
    bytes: usize,
    max_bytes: usize,
}

impl<K: Hash + Eq, V: Clone> MemoCache<K, V> {
    pub fn new(max_bytes: usize) -> Self {
        MemoCache { inner: LruCache::unbounded(), bytes: 0, max_bytes: max_bytes.max(1) }
    }

    pub fn get(&mut self, key: &K) -> Option<V> {
        self.inner.get(key).map(|(v, _)| v.clone())
    }

    /// `size` is the caller's estimate of the entry footprint in bytes.
    pub fn insert(&mut self, key: K, value: V, size: usize) {
        if self.inner.contains(&key) {
            return;
        }
        let size = size + std::mem::size_of::<(K, V)>();
        self.inner.put(key, (value, size));
        self.bytes += size;
        while self.bytes > self.max_bytes {
            match self.inner.pop_lru() {
                Some((_, (_, s))) => self.bytes -= s,
                None => break,
            }
        }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn bytes(&self) -> usize {
        self.bytes
    }
}

impl<K: Hash + Eq, V: Clone> Default for MemoCache<K, V> {
    fn default() -> Self {
        MemoCache::new(DEFAULT_CACHE_BYTES)
    }
}
