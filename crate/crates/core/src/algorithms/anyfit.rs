//! The any-fit baselines: Next Fit, First Fit, Best Fit.

use crate::bin::{BinState, BinStore, Packing};
use crate::index::{GapTree, LevelIndex};
use crate::packer::{PackError, Packer};
use crate::seq::Size;

/// Next Fit: one open bin; when an item does not fit, close it and open
/// a new one.
#[derive(Debug)]
pub struct NfPacker {
    store: BinStore,
    open: Option<usize>,
}

impl NfPacker {
    pub fn new(denom: u64) -> Self {
        Self { store: BinStore::new(denom), open: None }
    }
}

impl Packer for NfPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        match self.open {
            Some(id) if self.store.fits(id, x) => self.store.place(id, x),
            other => {
                if let Some(id) = other {
                    self.store.set_state(id, BinState::Closed);
                }
                self.open = Some(self.store.open(x, None));
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}

/// First Fit: place in the lowest-id bin with enough space, else open a new
/// bin. No bin is ever closed.
#[derive(Debug)]
pub struct FfPacker {
    store: BinStore,
    gaps: GapTree,
}

impl FfPacker {
    pub fn new(denom: u64) -> Self {
        Self { store: BinStore::new(denom), gaps: GapTree::default() }
    }
}

impl Packer for FfPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        match self.gaps.first_fit(x.0) {
            Some(id) => {
                self.store.place(id, x);
                self.gaps.update(id, self.store.gap(id));
            }
            None => {
                let id = self.store.open(x, None);
                let pushed = self.gaps.push(self.store.gap(id));
                debug_assert_eq!(pushed, id);
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}

/// Best Fit: place in the fullest bin with enough space (level ties to the
/// lowest id), else open a new bin.
#[derive(Debug)]
pub struct BfPacker {
    store: BinStore,
    index: LevelIndex,
}

impl BfPacker {
    pub fn new(denom: u64) -> Self {
        Self { store: BinStore::new(denom), index: LevelIndex::default() }
    }
}

impl Packer for BfPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        match self.index.best_fit(d - x.0) {
            Some((level, id)) => {
                self.index.remove(level, id);
                self.store.place(id, x);
                self.index.insert(self.store.level(id), id);
            }
            None => {
                let id = self.store.open(x, None);
                self.index.insert(x.0, id);
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

    fn levels(p: &Packing) -> Vec<Vec<u64>> {
        p.bins.iter().map(|b| b.contents.iter().map(|i| i.size.0).collect()).collect()
    }

    #[test]
    fn nf_trace() {
        let s = Sequence::new(1000, vec![600, 300, 300]).unwrap();
        let p = run(&mut NfPacker::new(1000), &s).unwrap();
        assert_eq!(levels(&p), vec![vec![600, 300], vec![300]]);
    }

    #[test]
    fn ff_trace() {
        let s = Sequence::new(1000, vec![500, 600, 500]).unwrap();
        let p = run(&mut FfPacker::new(1000), &s).unwrap();
        assert_eq!(levels(&p), vec![vec![500, 500], vec![600]]);
    }

    #[test]
    fn bf_trace() {
        let s = Sequence::new(1000, vec![600, 700, 300]).unwrap();
        let p = run(&mut BfPacker::new(1000), &s).unwrap();
        assert_eq!(levels(&p), vec![vec![600], vec![700, 300]]);
    }

    #[test]
    fn bf_breaks_level_ties_to_lowest_id() {
        let s = Sequence::new(1000, vec![600, 600, 300]).unwrap();
        let p = run(&mut BfPacker::new(1000), &s).unwrap();
        assert_eq!(levels(&p), vec![vec![600, 300], vec![600]]);
    }
}
