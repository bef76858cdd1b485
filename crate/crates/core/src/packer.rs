//! The streaming packer contract and shared cost accounting.
//!
//! Every placement decision inside the packers routes through integer
//! comparisons on levels and cross-multiplied thresholds; no floating point
//! is consulted.

use thiserror::Error;

use crate::bin::Packing;
use crate::seq::{Sequence, Size};
use crate::{rat, Rat};

/// Errors raised while packing.
#[derive(Debug, Error)]
pub enum PackError {
    #[error("item {index} (size {num}/{denom}) is outside the {algo} domain {domain}")]
    OutOfDomain {
        algo: String,
        index: usize,
        num: u64,
        denom: u64,
        domain: &'static str,
    },
    #[error("bin capacity {denom} exceeds the sum-of-squares limit {limit}")]
    SsCapacity { denom: u64, limit: u64 },
}

/// A one-pass online packer. `step` consumes items in order; `finish` yields
/// the packing accumulated so far and leaves the packer spent.
pub trait Packer {
    fn step(&mut self, x: Size) -> Result<(), PackError>;
    fn finish(&mut self) -> Packing;
}

/// Feeds the sequence to a fresh packer and returns the finished packing.
pub fn run<P: Packer + ?Sized>(packer: &mut P, s: &Sequence) -> Result<Packing, PackError> {
    for x in s.sizes() {
        packer.step(x)?;
    }
    Ok(packer.finish())
}

/// Mismatch between a packing and the sequence it claims to pack.
#[derive(Debug, Error)]
#[error("packing does not hold exactly the items of the sequence")]
pub struct PackingMismatch;

/// Wasted space: cost minus total item size, as an exact rational.
pub fn waste(p: &Packing, s: &Sequence) -> Result<Rat, PackingMismatch> {
    if !p.packs_exactly(s) {
        return Err(PackingMismatch);
    }
    let cost_units = i128::from(p.cost()) * i128::from(s.denom);
    Ok(rat(cost_units - s.total() as i128, i128::from(s.denom)))
}

/// A cheap exact lower bound on the optimal cost: the size bound
/// `ceil(total / D)` joined with the count of items larger than half.
pub fn lower_bound(s: &Sequence) -> u64 {
    let d = u128::from(s.denom);
    let size_bound = s.total().div_ceil(d) as u64;
    let large = s.sizes().filter(|x| x.is_large(s.denom)).count() as u64;
    size_bound.max(large)
}
