//! The matching baselines: Matching Best Fit and Online Match.

use crate::bin::{BinState, BinStore, Packing};
use crate::index::LevelIndex;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

/// Matching Best Fit: Best Fit, except a bin closes as soon as it receives
/// a small item (size at most half). Open bins therefore hold exactly one
/// large item each; a small item with no fitting open bin gets a bin of its
/// own, closed immediately.
#[derive(Debug)]
pub struct MbfPacker {
    store: BinStore,
    singles: LevelIndex,
}

impl MbfPacker {
    pub fn new(denom: u64) -> Self {
        Self { store: BinStore::new(denom), singles: LevelIndex::default() }
    }

    /// Input indices of the large items currently alone in an open bin
    /// (the algorithm's single-set).
    pub fn unmatched_large_indices(&self) -> Vec<usize> {
        self.singles
            .iter()
            .map(|(_, id)| self.store.bin(id).contents[0].index)
            .collect()
    }
}

impl Packer for MbfPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        if x.is_large(d) {
            let id = self.store.open(x, None);
            self.singles.insert(x.0, id);
            return Ok(());
        }
        match self.singles.best_fit(d - x.0) {
            Some((level, id)) => {
                self.singles.remove(level, id);
                self.store.place(id, x);
                self.store.set_state(id, BinState::Closed);
            }
            None => {
                let id = self.store.open(x, None);
                self.store.set_state(id, BinState::Closed);
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}

/// Online Match with parameter K: two items are companions when their sizes
/// sum into `[1 - 1/K, 1]`. A large item opens a bin; a small item joins and
/// closes the best-fit companion bin, or falls back to a next-fit list of
/// small-item bins.
#[derive(Debug)]
pub struct OmPacker {
    store: BinStore,
    k: u32,
    larges: LevelIndex,
    small_open: Option<usize>,
}

impl OmPacker {
    pub fn new(denom: u64, k: u32) -> Self {
        assert!(k >= 2, "OM requires K >= 2");
        Self { store: BinStore::new(denom), k, larges: LevelIndex::default(), small_open: None }
    }
}

impl Packer for OmPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        if x.is_large(d) {
            let id = self.store.open(x, None);
            self.larges.insert(x.0, id);
            return Ok(());
        }
        // The fullest fitting single-large bin maximizes the pair sum, so if
        // it misses the companion floor no open bin makes the pair.
        if let Some((level, id)) = self.larges.best_fit(d - x.0) {
            let sum = u128::from(level) + u128::from(x.0);
            if sum * u128::from(self.k) >= u128::from(self.k - 1) * u128::from(d) {
                self.larges.remove(level, id);
                self.store.place(id, x);
                self.store.set_state(id, BinState::Closed);
                return Ok(());
            }
        }
        match self.small_open {
            Some(id) if self.store.fits(id, x) => self.store.place(id, x),
            other => {
                if let Some(id) = other {
                    self.store.set_state(id, BinState::Closed);
                }
                self.small_open = Some(self.store.open(x, None));
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packer::run;
    use crate::seq::Sequence;

    fn contents(p: &Packing) -> Vec<Vec<u64>> {
        p.bins.iter().map(|b| b.contents.iter().map(|i| i.size.0).collect()).collect()
    }

    #[test]
    fn mbf_closes_on_first_small() {
        let s = Sequence::new(1000, vec![600, 700, 300]).unwrap();
        let p = run(&mut MbfPacker::new(1000), &s).unwrap();
        assert_eq!(contents(&p), vec![vec![600], vec![700, 300]]);
        assert_eq!(p.bins[1].state, BinState::Closed);
    }

    #[test]
    fn mbf_small_without_companion_gets_singleton() {
        let s = Sequence::new(1000, vec![300, 300]).unwrap();
        let p = run(&mut MbfPacker::new(1000), &s).unwrap();
        assert_eq!(p.cost(), 2);
        assert!(p.bins.iter().all(|b| b.state == BinState::Closed));
    }

    #[test]
    fn mbf_oversized_pair_does_not_match() {
        // 0.45 does not fit with 0.6; both small items end up alone.
        let s = Sequence::new(1000, vec![600, 450, 450]).unwrap();
        let p = run(&mut MbfPacker::new(1000), &s).unwrap();
        assert_eq!(p.cost(), 3);
        // With a 0.55 opener the first 0.45 pairs and the second is alone.
        let s = Sequence::new(1000, vec![550, 450, 450]).unwrap();
        let p = run(&mut MbfPacker::new(1000), &s).unwrap();
        assert_eq!(contents(&p), vec![vec![550, 450], vec![450]]);
    }

    #[test]
    fn om_companion_window() {
        // K = 20: companions need a sum in [0.95, 1].
        let s = Sequence::new(1000, vec![600, 380]).unwrap();
        let p = run(&mut OmPacker::new(1000, 20), &s).unwrap();
        assert_eq!(p.cost(), 1);

        let s = Sequence::new(1000, vec![600, 300]).unwrap();
        let p = run(&mut OmPacker::new(1000, 20), &s).unwrap();
        assert_eq!(p.cost(), 2);

        let s = Sequence::new(1000, vec![300]).unwrap();
        let p = run(&mut OmPacker::new(1000, 20), &s).unwrap();
        assert_eq!(p.cost(), 1);
    }
}
