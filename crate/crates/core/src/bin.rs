//! Bins, packings, and the bin store shared by every packer.

use crate::seq::{Sequence, Size};

/// Lifecycle of a bin inside a streaming packer.
///
/// Open bins may still receive items from their owning registry. Mature bins
/// are almost full and only accept small items via best fit. Closed bins are
/// never referenced again. Cost counts bins in every state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinState {
    Open,
    Mature,
    Closed,
}

/// Role markers used by the matching algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinTag {
    /// Single a item, designated to receive a c item (blue).
    A1,
    /// Single a item, designated to receive another a item (red).
    A2,
    /// Two a items (red).
    Aa,
    /// An a item with a c item (blue).
    Ac,
    /// A b item with a c item (blue).
    Bc,
    /// Two b items.
    Bb,
    /// Single b item.
    B,
    /// Single c item.
    C,
    /// Bin opened by a d item (may later gain an a item).
    D,
    /// Next-fit bin of small items of the given class.
    Nf(u32),
    /// Large item matched with a small item of the given class.
    Matched(u32),
}

impl BinTag {
    /// Legal tag transitions along the bin lifecycle.
    fn can_become(self, next: BinTag) -> bool {
        use BinTag::*;
        matches!(
            (self, next),
            (A1, Ac) | (A2, Aa) | (C, Ac) | (C, Bc) | (B, Bb)
        ) || self == next
    }

    pub fn as_str(&self) -> String {
        match self {
            BinTag::A1 => "a1".into(),
            BinTag::A2 => "a2".into(),
            BinTag::Aa => "aa".into(),
            BinTag::Ac => "ac".into(),
            BinTag::Bc => "bc".into(),
            BinTag::Bb => "bb".into(),
            BinTag::B => "b".into(),
            BinTag::C => "c".into(),
            BinTag::D => "d".into(),
            BinTag::Nf(k) => format!("nf{k}"),
            BinTag::Matched(k) => format!("matched{k}"),
        }
    }
}

/// An item placed in a bin, remembering its position in the input sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlacedItem {
    pub index: usize,
    pub size: Size,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub id: usize,
    pub contents: Vec<PlacedItem>,
    pub level: u64,
    pub state: BinState,
    pub tag: Option<BinTag>,
}

impl Bin {
    pub fn fits(&self, x: Size, d: u64) -> bool {
        fits(self, x, d)
    }
}

/// True iff `x` fits in `bin` under capacity `d`.
pub fn fits(bin: &Bin, x: Size, d: u64) -> bool {
    bin.level + x.0 <= d
}

/// A finished packing; cost is the number of bins ever opened.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub denom: u64,
    pub bins: Vec<Bin>,
}

impl Packing {
    pub fn cost(&self) -> u64 {
        self.bins.len() as u64
    }

    /// Total size of packed items, in units.
    pub fn total(&self) -> u128 {
        self.bins.iter().map(|b| u128::from(b.level)).sum()
    }

    /// Checks that this packing holds exactly the items of `s`: every input
    /// index appears once, with the matching size.
    pub fn packs_exactly(&self, s: &Sequence) -> bool {
        if self.denom != s.denom {
            return false;
        }
        let n = s.len();
        let mut seen = vec![false; n];
        let mut count = 0usize;
        for bin in &self.bins {
            for item in &bin.contents {
                if item.index >= n || seen[item.index] || s.items[item.index] != item.size.0 {
                    return false;
                }
                seen[item.index] = true;
                count += 1;
            }
        }
        count == n
    }
}

/// Append-only bin storage. Packers keep registries of bin ids into the
/// store; item indices are assigned in placement order, which equals input
/// order when driven one item per step.
#[derive(Debug, Default)]
pub struct BinStore {
    denom: u64,
    bins: Vec<Bin>,
    placed: usize,
}

impl BinStore {
    pub fn new(denom: u64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        Self { denom, bins: Vec::new(), placed: 0 }
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn bin(&self, id: usize) -> &Bin {
        &self.bins[id]
    }

    pub fn level(&self, id: usize) -> u64 {
        self.bins[id].level
    }

    pub fn gap(&self, id: usize) -> u64 {
        self.denom - self.bins[id].level
    }

    pub fn fits(&self, id: usize, x: Size) -> bool {
        fits(&self.bins[id], x, self.denom)
    }

    /// Opens a new bin holding `x` and returns its id.
    pub fn open(&mut self, x: Size, tag: Option<BinTag>) -> usize {
        let id = self.bins.len();
        let index = self.placed;
        self.placed += 1;
        assert!(x.0 <= self.denom, "item larger than bin capacity");
        self.bins.push(Bin {
            id,
            contents: vec![PlacedItem { index, size: x }],
            level: x.0,
            state: BinState::Open,
            tag,
        });
        id
    }

    /// Places `x` in an existing bin; the bin must have room.
    pub fn place(&mut self, id: usize, x: Size) {
        let index = self.placed;
        self.placed += 1;
        let bin = &mut self.bins[id];
        assert!(bin.level + x.0 <= self.denom, "placement overfills bin {id}");
        bin.contents.push(PlacedItem { index, size: x });
        bin.level += x.0;
    }

    pub fn set_state(&mut self, id: usize, state: BinState) {
        self.bins[id].state = state;
    }

    /// Retags a bin, asserting the transition is a legal lifecycle step.
    pub fn retag(&mut self, id: usize, tag: BinTag) {
        let bin = &mut self.bins[id];
        if let Some(old) = bin.tag {
            debug_assert!(old.can_become(tag), "illegal tag transition {old:?} -> {tag:?}");
        }
        bin.tag = Some(tag);
    }

    /// Number of items placed so far (the next item index).
    pub fn placed(&self) -> usize {
        self.placed
    }

    /// Takes the accumulated bins out as a packing.
    pub fn take_packing(&mut self) -> Packing {
        Packing { denom: self.denom, bins: std::mem::take(&mut self.bins) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_examples() {
        let mut store = BinStore::new(1000);
        let id = store.open(Size(700), None);
        assert!(fits(store.bin(id), Size(300), 1000));
        assert!(!fits(store.bin(id), Size(301), 1000));
        let mut empty = BinStore::new(1000);
        let e = empty.open(Size(1000), None);
        assert_eq!(empty.level(e), 1000);
    }

    #[test]
    fn packs_exactly_detects_mismatch() {
        let s = Sequence::new(1000, vec![600, 400]).unwrap();
        let mut store = BinStore::new(1000);
        let id = store.open(Size(600), None);
        store.place(id, Size(400));
        let p = store.take_packing();
        assert!(p.packs_exactly(&s));
        let other = Sequence::new(1000, vec![600, 500]).unwrap();
        assert!(!p.packs_exactly(&other));
    }

    #[test]
    #[should_panic(expected = "overfills")]
    fn overfull_placement_panics() {
        let mut store = BinStore::new(1000);
        let id = store.open(Size(700), None);
        store.place(id, Size(301));
    }
}
