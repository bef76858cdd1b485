//! Harmonic Match and its monotone variant.

use crate::bin::{BinState, BinStore, Packing};
use crate::classify::hm_class;
use crate::index::LevelIndex;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

use super::rom::RomClass;

/// Harmonic Match with parameter K. A large item opens a normal bin in its
/// class. A small item first best-fits into the shared mature pool; failing
/// that it runs its class's ROM subroutine, whose finished bins join the
/// pool. The HMM variant keeps no pool: bins close as soon as they mature.
#[derive(Debug)]
pub struct HmPacker {
    store: BinStore,
    k: u32,
    keep_mature: bool,
    pool: LevelIndex,
    classes: Vec<RomClass>,
}

impl HmPacker {
    /// Harmonic Match: mature bins stay available for small items.
    pub fn hm(denom: u64, k: u32) -> Self {
        Self::with_mode(denom, k, true)
    }

    /// The monotone variant: bins close as soon as they mature.
    pub fn hmm(denom: u64, k: u32) -> Self {
        Self::with_mode(denom, k, false)
    }

    fn with_mode(denom: u64, k: u32, keep_mature: bool) -> Self {
        assert!(k >= 1, "HM requires K >= 1");
        let classes = (0..k).map(|_| RomClass::default()).collect();
        Self { store: BinStore::new(denom), k, keep_mature, pool: LevelIndex::default(), classes }
    }

    fn matured(&mut self, id: usize) {
        if self.keep_mature {
            self.store.set_state(id, BinState::Mature);
            let level = self.store.level(id);
            // Every mature bin is fuller than 2/3, so nothing of class 1
            // (or larger) can ever rejoin it.
            debug_assert!(3 * u128::from(level) > 2 * u128::from(self.store.denom()));
            self.pool.insert(level, id);
        } else {
            self.store.set_state(id, BinState::Closed);
        }
    }
}

impl Packer for HmPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        let cls = hm_class(x, d, self.k);
        if x.is_large(d) {
            self.classes[(cls.index - 1) as usize].place_large(&mut self.store, x);
            return Ok(());
        }
        if self.keep_mature {
            if let Some((level, id)) = self.pool.best_fit(d - x.0) {
                self.pool.remove(level, id);
                self.store.place(id, x);
                self.pool.insert(self.store.level(id), id);
                return Ok(());
            }
        }
        if let Some(done) =
            self.classes[(cls.index - 1) as usize].place_small(&mut self.store, x, cls.index)
        {
            self.matured(done);
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}
