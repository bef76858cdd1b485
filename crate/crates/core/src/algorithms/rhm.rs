//! Refined Harmonic Match: HM with K = 19 whose class-1 items run RRM.

use crate::bin::{BinState, BinStore, Packing};
use crate::classify::{rhm_group, RhmGroup};
use crate::index::LevelIndex;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

use super::rom::RomClass;
use super::rrm::{RrmCounters, RrmState};

/// Refined Harmonic Match. Classes are those of HM with K = 19; items of
/// classes 2..=19 follow the HM strategy over a shared mature pool, while
/// class-1 items (`(1/3, 2/3]`) are handed to the RRM subroutine. Bins
/// matured by RRM join the same pool.
///
/// Class-1 items never consult the pool: every mature bin is fuller than
/// 2/3, so nothing larger than 1/3 can fit one (asserted on insertion).
#[derive(Debug)]
pub struct RhmPacker {
    store: BinStore,
    pool: LevelIndex,
    rrm: RrmState,
    classes: Vec<RomClass>,
}

pub(crate) const RHM_K: u32 = 19;

impl RhmPacker {
    pub fn new(denom: u64) -> Self {
        let classes = (0..RHM_K - 1).map(|_| RomClass::default()).collect();
        Self {
            store: BinStore::new(denom),
            pool: LevelIndex::default(),
            rrm: RrmState::default(),
            classes,
        }
    }

    pub fn rrm_counters(&self) -> &RrmCounters {
        &self.rrm.counters
    }

    fn matured(&mut self, id: usize) {
        self.store.set_state(id, BinState::Mature);
        let level = self.store.level(id);
        debug_assert!(3 * u128::from(level) > 2 * u128::from(self.store.denom()));
        self.pool.insert(level, id);
    }
}

impl Packer for RhmPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        match rhm_group(x, d) {
            RhmGroup::A | RhmGroup::B | RhmGroup::C | RhmGroup::D => {
                if let Some(done) = self.rrm.step(&mut self.store, x) {
                    self.matured(done);
                }
            }
            RhmGroup::Other(cls) => {
                let slot = (cls - 2) as usize;
                if x.is_large(d) {
                    self.classes[slot].place_large(&mut self.store, x);
                    return Ok(());
                }
                if let Some((level, id)) = self.pool.best_fit(d - x.0) {
                    self.pool.remove(level, id);
                    self.store.place(id, x);
                    self.pool.insert(self.store.level(id), id);
                    return Ok(());
                }
                if let Some(done) = self.classes[slot].place_small(&mut self.store, x, cls) {
                    self.matured(done);
                }
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

    fn d20(v: f64) -> u64 {
        ((1u64 << 20) as f64 * v).round() as u64
    }

    fn seq(vals: &[f64]) -> Sequence {
        Sequence::new(1 << 20, vals.iter().map(|&v| d20(v)).collect()).unwrap()
    }

    #[test]
    fn matured_bc_bin_accepts_tiny_items() {
        // b joins the c-bin (0.95), matures it, and the class-19 small
        // lands there via the pool.
        let p = run(&mut RhmPacker::new(1 << 20), &seq(&[0.55, 0.4, 0.04])).unwrap();
        assert_eq!(p.cost(), 1);
        assert_eq!(p.bins[0].contents.len(), 3);
    }

    #[test]
    fn class1_small_never_uses_the_pool() {
        let p = run(&mut RhmPacker::new(1 << 20), &seq(&[0.35, 0.3])).unwrap();
        assert_eq!(p.cost(), 2);
    }

    #[test]
    fn empty_sequence_costs_nothing() {
        let p = run(&mut RhmPacker::new(1 << 20), &seq(&[])).unwrap();
        assert_eq!(p.cost(), 0);
    }
}
