//! Ordered bin indexes backing the best-fit and first-fit queries.

use std::cmp::Reverse;
use std::collections::BTreeSet;

/// Bins keyed by (level, id). `best_fit` returns the fullest bin whose level
/// does not exceed a bound; level ties break toward the lowest id.
#[derive(Debug, Clone, Default)]
pub struct LevelIndex {
    set: BTreeSet<(u64, Reverse<usize>)>,
}

impl LevelIndex {
    pub fn insert(&mut self, level: u64, id: usize) {
        self.set.insert((level, Reverse(id)));
    }

    pub fn remove(&mut self, level: u64, id: usize) {
        let removed = self.set.remove(&(level, Reverse(id)));
        debug_assert!(removed, "bin {id} at level {level} was not indexed");
    }

    /// Fullest indexed bin with `level <= max_level`, ties to lowest id.
    pub fn best_fit(&self, max_level: u64) -> Option<(u64, usize)> {
        self.set
            .range(..=(max_level, Reverse(0usize)))
            .next_back()
            .map(|&(level, Reverse(id))| (level, id))
    }

    /// Like `best_fit`, restricted to `level >= min_level`.
    pub fn best_fit_at_least(&self, min_level: u64, max_level: u64) -> Option<(u64, usize)> {
        if min_level > max_level {
            return None;
        }
        self.set
            .range((min_level, Reverse(usize::MAX))..=(max_level, Reverse(0usize)))
            .next_back()
            .map(|&(level, Reverse(id))| (level, id))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.set.iter().map(|&(level, Reverse(id))| (level, id))
    }
}

/// First-fit index: a max-gap segment tree over bins in opening order.
/// `first_fit` finds the lowest-id bin whose remaining gap admits the item.
#[derive(Debug, Default)]
pub struct GapTree {
    size: usize,
    tree: Vec<u64>,
    len: usize,
}

impl GapTree {
    /// Appends a bin with the given remaining gap; returns its id.
    pub fn push(&mut self, gap: u64) -> usize {
        if self.len == self.size {
            self.grow();
        }
        let id = self.len;
        self.len += 1;
        self.set(id, gap);
        id
    }

    pub fn update(&mut self, id: usize, gap: u64) {
        debug_assert!(id < self.len);
        self.set(id, gap);
    }

    /// Lowest id with gap >= need.
    pub fn first_fit(&self, need: u64) -> Option<usize> {
        if self.size == 0 || self.tree[1] < need {
            return None;
        }
        let mut node = 1;
        while node < self.size {
            node = if self.tree[2 * node] >= need { 2 * node } else { 2 * node + 1 };
        }
        let id = node - self.size;
        debug_assert!(id < self.len);
        Some(id)
    }

    fn set(&mut self, id: usize, gap: u64) {
        let mut node = self.size + id;
        self.tree[node] = gap;
        node /= 2;
        while node >= 1 {
            self.tree[node] = self.tree[2 * node].max(self.tree[2 * node + 1]);
            node /= 2;
        }
    }

    fn grow(&mut self) {
        let new_size = (self.size * 2).max(64);
        let mut gaps = vec![0u64; new_size];
        for i in 0..self.len {
            gaps[i] = self.tree[self.size + i];
        }
        self.size = new_size;
        self.tree = vec![0; 2 * new_size];
        self.tree[new_size..].copy_from_slice(&gaps);
        for node in (1..new_size).rev() {
            self.tree[node] = self.tree[2 * node].max(self.tree[2 * node + 1]);
        }
    }
}
