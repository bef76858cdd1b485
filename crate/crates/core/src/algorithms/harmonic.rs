//! The Harmonic algorithm: Next Fit within each size class.

use crate::bin::{BinState, BinStore, BinTag, Packing};
use crate::classify::ha_class;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

/// Harmonic with parameter K: classes `(1/2, 1], (1/3, 1/2], ...,
/// (1/K, 1/(K-1)], (0, 1/K]`, one next-fit bin open per class.
#[derive(Debug)]
pub struct HaPacker {
    store: BinStore,
    k: u32,
    open: Vec<Option<usize>>,
}

impl HaPacker {
    pub fn new(denom: u64, k: u32) -> Self {
        assert!(k >= 1, "HA requires K >= 1");
        Self { store: BinStore::new(denom), k, open: vec![None; k as usize] }
    }
}

impl Packer for HaPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let class = ha_class(x, self.store.denom(), self.k);
        let slot = &mut self.open[(class - 1) as usize];
        match *slot {
            Some(id) if self.store.fits(id, x) => self.store.place(id, x),
            other => {
                if let Some(id) = other {
                    self.store.set_state(id, BinState::Closed);
                }
                *slot = Some(self.store.open(x, Some(BinTag::Nf(class))));
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Packing {
        self.store.take_packing()
    }
}
