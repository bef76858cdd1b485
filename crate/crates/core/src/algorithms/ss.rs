//! The Sum of Squares algorithm for discrete distributions.

use crate::bin::{BinState, BinStore, Packing};
use crate::packer::{PackError, Packer};
use crate::seq::Size;

/// Largest denominator for which the level histogram is kept.
pub const SS_MAX_DENOM: u64 = 10_000;

/// Sum of Squares: place each item so that `ss(P) = sum over levels h of
/// N(h)^2` is minimized, where `N(h)` counts open bins at level `h`. Full
/// bins leave the histogram. Ties prefer an exact fill, then the highest
/// level, then a new bin.
#[derive(Debug)]
pub struct SsPacker {
    store: BinStore,
    hist: Vec<u64>,
    at_level: Vec<Vec<usize>>,
}

impl SsPacker {
    pub fn new(denom: u64) -> Result<Self, PackError> {
        if denom > SS_MAX_DENOM {
            return Err(PackError::SsCapacity { denom, limit: SS_MAX_DENOM });
        }
        let slots = (denom + 1) as usize;
        Ok(Self {
            store: BinStore::new(denom),
            hist: vec![0; slots],
            at_level: vec![Vec::new(); slots],
        })
    }
}

/// Placement choice while scanning candidates: (delta-ss, kind, level) with
/// kind 0 = exact fill, 1 = existing bin, 2 = new bin; higher levels win ties.
type Choice = (i64, u8, std::cmp::Reverse<u64>);

impl Packer for SsPacker {
    fn step(&mut self, x: Size) -> Result<(), PackError> {
        let d = self.store.denom();
        let x = x.0;
        let new_dss: i64 = if x == d { 0 } else { 2 * self.hist[x as usize] as i64 + 1 };
        let mut best: (Choice, Option<u64>) = ((new_dss, 2, std::cmp::Reverse(0)), None);
        for h in 1..=(d - x) {
            let count = self.hist[h as usize];
            if count == 0 {
                continue;
            }
            let target = h + x;
            let (dss, kind) = if target == d {
                (1 - 2 * count as i64, 0u8)
            } else {
                (2 * (self.hist[target as usize] as i64 - count as i64) + 2, 1u8)
            };
            let key = (dss, kind, std::cmp::Reverse(h));
            if key < best.0 {
                best = (key, Some(h));
            }
        }
        match best.1 {
            Some(h) => {
                let id = self.at_level[h as usize].pop().expect("histogram out of sync");
                self.hist[h as usize] -= 1;
                self.store.place(id, Size(x));
                let target = h + x;
                if target == d {
                    self.store.set_state(id, BinState::Closed);
                } else {
                    self.hist[target as usize] += 1;
                    self.at_level[target as usize].push(id);
                }
            }
            None => {
                let id = self.store.open(Size(x), None);
                if x == d {
                    self.store.set_state(id, BinState::Closed);
                } else {
                    self.hist[x as usize] += 1;
                    self.at_level[x as usize].push(id);
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

    fn ss(items: &[u64]) -> Packing {
        let s = Sequence::new(10, items.to_vec()).unwrap();
        run(&mut SsPacker::new(10).unwrap(), &s).unwrap()
    }

    #[test]
    fn joins_when_it_lowers_ss() {
        // Second 3 joins the level-3 bin: ss 1 beats ss 4.
        let p = ss(&[3, 3]);
        assert_eq!(p.cost(), 1);
        assert_eq!(p.bins[0].level, 6);
    }

    #[test]
    fn exact_fill_leaves_the_histogram() {
        // 3 fills the 7-bin: ss 0 beats ss 2.
        let p = ss(&[7, 3]);
        assert_eq!(p.cost(), 1);
        assert_eq!(p.bins[0].state, BinState::Closed);
    }

    #[test]
    fn lone_item_opens_a_bin() {
        let p = ss(&[5]);
        assert_eq!(p.cost(), 1);
    }

    #[test]
    fn denominator_guard() {
        assert!(matches!(
            SsPacker::new(SS_MAX_DENOM + 1),
            Err(PackError::SsCapacity { .. })
        ));
    }
}
