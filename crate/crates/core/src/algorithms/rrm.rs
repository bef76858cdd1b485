//! Refined Relaxed Online Match: the class-1 subroutine of RHM.
//!
//! Handles items in `(1/3, 2/3]`, split into groups a, b, c, d. Bins opened
//! by a items are designated red (to receive a second a item) or blue (to
//! receive a c item), keeping the red count close to, and never above,
//! three times the blue count plus three. Any bin holding two class-1 items
//! is mature and is handed back to the caller.

use crate::bin::{BinState, BinStore, BinTag, Packing};
use crate::classify::{rhm_group, RhmGroup};
use crate::index::LevelIndex;
use crate::packer::{PackError, Packer};
use crate::seq::Size;

/// Bin and item tallies maintained alongside the registries.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct RrmCounters {
    /// Open bins with a single a item designated for a c item (blue).
    pub n_a1: u64,
    /// Open bins with a single a item designated for another a item (red).
    pub n_a2: u64,
    /// Bins with two a items (red).
    pub n_aa: u64,
    /// Bins with an a and a b item; no rule creates one, kept as an
    /// asserted-zero counter.
    pub n_ab: u64,
    /// Bins with an a and a c item (blue).
    pub n_ac: u64,
    /// Open bins with a single b item.
    pub n_b: u64,
    /// Bins with a b and a c item (blue).
    pub n_bc: u64,
    /// Open bins with a single c item.
    pub n_c: u64,
    /// Bins with two b items.
    pub n_bb: u64,
    /// a items placed in red or blue bins (excludes those that joined
    /// a d-bin).
    pub items_a_redblue: u64,
    /// a items that joined a d-bin.
    pub items_a_in_d: u64,
    /// b items packed with a c item (`n_b1`; equals the bc-bin count).
    pub items_b1: u64,
    /// All a items seen.
    pub items_a: u64,
}

impl RrmCounters {
    pub fn n_red(&self) -> u64 {
        self.n_aa + self.n_a2
    }

    pub fn n_blue(&self) -> u64 {
        self.n_ac + self.n_bc + self.n_a1
    }
}

/// Streaming state for the class-1 subroutine.
#[derive(Debug, Default)]
pub struct RrmState {
    d_singles: LevelIndex,
    c_singles: LevelIndex,
    a1_bins: LevelIndex,
    a2_bin: Option<usize>,
    b_bin: Option<usize>,
    pub counters: RrmCounters,
}

impl RrmState {
    /// Places one item from `(1/3, 2/3]`; returns the bin that matured this
    /// step, if any. The caller must have checked the domain.
    pub fn step(&mut self, store: &mut BinStore, x: Size) -> Option<usize> {
        let d = store.denom();
        let c = &mut self.counters;
        match rhm_group(x, d) {
            RhmGroup::D => {
                let id = store.open(x, Some(BinTag::D));
                self.d_singles.insert(x.0, id);
                None
            }
            RhmGroup::C => {
                if c.n_a1 > 0 {
                    // Best fit over the a1-bins; a + c always fits.
                    let (level, id) = self.a1_bins.best_fit(d - x.0).expect("a + c <= 1");
                    self.a1_bins.remove(level, id);
                    store.place(id, x);
                    store.retag(id, BinTag::Ac);
                    c.n_a1 -= 1;
                    c.n_ac += 1;
                    Some(id)
                } else {
                    let id = store.open(x, Some(BinTag::C));
                    self.c_singles.insert(x.0, id);
                    c.n_c += 1;
                    None
                }
            }
            RhmGroup::B => {
                if let Some((level, id)) = self.c_singles.best_fit(d - x.0) {
                    self.c_singles.remove(level, id);
                    store.place(id, x);
                    store.retag(id, BinTag::Bc);
                    c.n_bc += 1;
                    c.n_c -= 1;
                    c.items_b1 += 1;
                    Some(id)
                } else if let Some(id) = self.b_bin.take() {
                    // Two b items always fit together.
                    store.place(id, x);
                    store.retag(id, BinTag::Bb);
                    c.n_b = 0;
                    c.n_bb += 1;
                    Some(id)
                } else {
                    let id = store.open(x, Some(BinTag::B));
                    self.b_bin = Some(id);
                    c.n_b = 1;
                    None
                }
            }
            RhmGroup::A => {
                c.items_a += 1;
                if let Some((level, id)) = self.d_singles.best_fit(d - x.0) {
                    self.d_singles.remove(level, id);
                    store.place(id, x);
                    c.items_a_in_d += 1;
                    return Some(id);
                }
                c.items_a_redblue += 1;
                if c.n_c > 0 {
                    // The bin with the largest c item; a + c always fits.
                    let (level, id) = self.c_singles.best_fit(d - x.0).expect("a + c <= 1");
                    self.c_singles.remove(level, id);
                    store.place(id, x);
                    store.retag(id, BinTag::Ac);
                    c.n_ac += 1;
                    c.n_c -= 1;
                    Some(id)
                } else if let Some(id) = self.a2_bin.take() {
                    store.place(id, x);
                    store.retag(id, BinTag::Aa);
                    c.n_a2 = 0;
                    c.n_aa += 1;
                    Some(id)
                } else if c.n_aa < 3 * (c.n_ac + c.n_a1 + c.n_bc) {
                    let id = store.open(x, Some(BinTag::A2));
                    self.a2_bin = Some(id);
                    c.n_a2 = 1;
                    None
                } else {
                    let id = store.open(x, Some(BinTag::A1));
                    self.a1_bins.insert(x.0, id);
                    c.n_a1 += 1;
                    None
                }
            }
            RhmGroup::Other(_) => unreachable!("caller must enforce the (1/3, 2/3] domain"),
        }
    }

    /// Input indices of large items (c or d) currently alone in their bins:
    /// the algorithm's single-set.
    pub fn unmatched_large_indices<'a>(
        &'a self,
        store: &'a BinStore,
    ) -> impl Iterator<Item = usize> + 'a {
        self.c_singles
            .iter()
            .chain(self.d_singles.iter())
            .map(|(_, id)| store.bin(id).contents[0].index)
    }
}

/// Standalone RRM packer over `(1/3, 2/3]`.
#[derive(Debug)]
pub struct RrmPacker {
    store: BinStore,
    state: RrmState,
}

impl RrmPacker {
    pub fn new(denom: u64) -> Self {
        Self { store: BinStore::new(denom), state: RrmState::default() }
    }

    pub fn counters(&self) -> &RrmCounters {
        &self.state.counters
    }

    pub fn unmatched_large_indices(&self) -> Vec<usize> {
        self.state.unmatched_large_indices(&self.store).collect()
    }
}

impl Packer for RrmPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        if !(x.gt_frac(1, 3, d) && x.le_frac(2, 3, d)) {
            return Err(PackError::OutOfDomain {
                algo: "rrm".into(),
                index: self.store.placed(),
                num: x.0,
                denom: d,
                domain: "(1/3, 2/3]",
            });
        }
        if let Some(done) = self.state.step(&mut self.store, x) {
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

    fn seq(vals: &[f64]) -> Sequence {
        Sequence::new(1 << 20, vals.iter().map(|&v| d20(v)).collect()).unwrap()
    }

    #[test]
    fn a_joins_d_bin() {
        let mut p = RrmPacker::new(1 << 20);
        let packing = run(&mut p, &seq(&[0.62, 0.35])).unwrap();
        assert_eq!(packing.cost(), 1);
        assert_eq!(packing.bins[0].tag, Some(BinTag::D));
        assert_eq!(packing.bins[0].state, BinState::Mature);
    }

    #[test]
    fn first_a_opened_bin_is_blue() {
        let mut p = RrmPacker::new(1 << 20);
        for v in [0.35, 0.55] {
            p.step(Size(d20(v))).unwrap();
        }
        let c = *p.counters();
        assert_eq!((c.n_ac, c.n_a1, c.n_a2), (1, 0, 0));
        let packing = p.finish();
        assert_eq!(packing.cost(), 1);
        assert_eq!(packing.bins[0].tag, Some(BinTag::Ac));
    }

    #[test]
    fn second_orphan_a_is_red_and_c_takes_the_blue_bin() {
        let mut p = RrmPacker::new(1 << 20);
        for v in [0.34, 0.35, 0.55] {
            p.step(Size(d20(v))).unwrap();
        }
        let packing = p.finish();
        assert_eq!(packing.cost(), 2);
        // First a-bin is blue (a1) and receives the c; second is red (a2).
        assert_eq!(packing.bins[0].tag, Some(BinTag::Ac));
        assert_eq!(packing.bins[0].contents[0].size, Size(d20(0.34)));
        assert_eq!(packing.bins[1].tag, Some(BinTag::A2));
    }

    #[test]
    fn b_prefers_c_bins_then_the_b_bin() {
        let mut p = RrmPacker::new(1 << 20);
        // c at 0.55, then b at 0.4 joins it (0.95 <= 1); next two bs pair up.
        for v in [0.55, 0.4, 0.45, 0.45] {
            p.step(Size(d20(v))).unwrap();
        }
        let c = *p.counters();
        assert_eq!((c.n_bc, c.n_bb, c.n_b, c.n_c), (1, 1, 0, 0));
        assert_eq!(c.items_b1, 1);
    }

    #[test]
    fn rejects_out_of_domain() {
        let mut p = RrmPacker::new(1 << 20);
        let err = run(&mut p, &seq(&[0.9])).unwrap_err();
        assert!(matches!(err, PackError::OutOfDomain { index: 0, .. }));
    }
}
