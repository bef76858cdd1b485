//! Relaxed Online Match: the per-class subroutine of Harmonic Match.

use crate::bin::{BinState, BinStore, BinTag, Packing};
use crate::classify::hm_class;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

use crate::index::LevelIndex;

/// Per-class ROM state: open bins holding a single large item, plus one open
/// next-fit bin of small items.
///
/// A large item opens a new bin. A small item best-fits among the single
/// large companions that it fits with; the chosen bin leaves the open set.
/// Otherwise the small item goes to the class's next-fit bin, rolling it
/// over when full. Bins that leave the open set are reported to the caller,
/// which decides whether they become mature (HM) or closed (HMM).
#[derive(Debug, Default)]
pub struct RomClass {
    singles: LevelIndex,
    nf_open: Option<usize>,
}

impl RomClass {
    /// Opens a new single-large bin for `x` and returns its id.
    pub fn place_large(&mut self, store: &mut BinStore, x: Size) -> usize {
        let id = store.open(x, None);
        self.singles.insert(x.0, id);
        id
    }

    /// Places a small item; returns the bin that left the open set this
    /// step, if any (a matched bin, or a rolled-over next-fit bin).
    pub fn place_small(&mut self, store: &mut BinStore, x: Size, class: u32) -> Option<usize> {
        let d = store.denom();
        if let Some((level, id)) = self.singles.best_fit(d - x.0) {
            self.singles.remove(level, id);
            store.place(id, x);
            store.retag(id, BinTag::Matched(class));
            return Some(id);
        }
        match self.nf_open {
            Some(id) if store.fits(id, x) => {
                store.place(id, x);
                None
            }
            rolled => {
                self.nf_open = Some(store.open(x, Some(BinTag::Nf(class))));
                rolled
            }
        }
    }

    /// Input indices of large items currently alone in their bins.
    pub fn unmatched_large_indices<'a>(
        &'a self,
        store: &'a BinStore,
    ) -> impl Iterator<Item = usize> + 'a {
        self.singles.iter().map(|(_, id)| store.bin(id).contents[0].index)
    }
}

/// Standalone ROM packer restricted to one HM class; items outside the
/// class's two intervals are domain errors.
#[derive(Debug)]
pub struct RomPacker {
    store: BinStore,
    k: u32,
    class: u32,
    rom: RomClass,
}

impl RomPacker {
    pub fn new(denom: u64, k: u32, class: u32) -> Self {
        assert!(k >= 1 && class >= 1 && class <= k);
        Self { store: BinStore::new(denom), k, class, rom: RomClass::default() }
    }

    pub fn unmatched_large_indices(&self) -> Vec<usize> {
        self.rom.unmatched_large_indices(&self.store).collect()
    }
}

impl Packer for RomPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        let cls = hm_class(x, d, self.k);
        if cls.index != self.class {
            return Err(PackError::OutOfDomain {
                algo: format!("rom:{}:{}", self.class, self.k),
                index: self.store.placed(),
                num: x.0,
                denom: d,
                domain: "one HM class",
            });
        }
        if x.is_large(d) {
            self.rom.place_large(&mut self.store, x);
        } else if let Some(done) = self.rom.place_small(&mut self.store, x, self.class) {
            self.store.set_state(done, BinState::Mature);
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

    fn d20(v: f64) -> u64 {
        ((1u64 << 20) as f64 * v).round() as u64
    }

    #[test]
    fn rom_matches_small_with_large() {
        let d = 1u64 << 20;
        let s = Sequence::new(d, vec![d20(0.6), d20(0.35)]).unwrap();
        let p = run(&mut RomPacker::new(d, 19, 1), &s).unwrap();
        assert_eq!(p.cost(), 1);
        assert_eq!(p.bins[0].state, BinState::Mature);
    }

    #[test]
    fn rom_never_matches_retroactively() {
        let d = 1u64 << 20;
        let s = Sequence::new(d, vec![d20(0.35), d20(0.6)]).unwrap();
        let p = run(&mut RomPacker::new(d, 19, 1), &s).unwrap();
        assert_eq!(p.cost(), 2);
    }

    #[test]
    fn rom_nf_bin_rolls_over() {
        let d = 1u64 << 20;
        let s = Sequence::new(d, vec![d20(0.4), d20(0.4), d20(0.4)]).unwrap();
        let p = run(&mut RomPacker::new(d, 19, 1), &s).unwrap();
        assert_eq!(p.cost(), 2);
        assert_eq!(p.bins[0].contents.len(), 2);
        assert_eq!(p.bins[0].state, BinState::Mature);
    }

    #[test]
    fn rom_rejects_out_of_class_items() {
        let d = 1u64 << 20;
        let s = Sequence::new(d, vec![d20(0.9)]).unwrap();
        let err = run(&mut RomPacker::new(d, 19, 1), &s).unwrap_err();
        assert!(matches!(err, PackError::OutOfDomain { index: 0, .. }));
    }
}
