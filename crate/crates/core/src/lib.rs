//! Online bin packing algorithms and their average-case evaluation.
//!
//! The crate provides:
//!
//! - exact integer item sizes over a per-sequence denominator, so that every
//!   placement decision is an integer comparison ([`seq`], [`bin`]);
//! - the streaming packers: Next Fit, First Fit, Best Fit, Matching Best Fit,
//!   Online Match, Harmonic, Relaxed Online Match, Harmonic Match and its
//!   monotone variant, Refined Relaxed Online Match, Refined Harmonic Match,
//!   and Sum of Squares ([`algorithms`]);
//! - exact interval classification for the harmonic-style classes
//!   ([`classify`]);
//! - analytical checks: per-item weighting functions with an exact maximum
//!   bin-weight search, the harmonic series limit, and a brute-force optimum
//!   oracle ([`analysis`]);
//! - seeded random sequence generators for fourteen benchmark distributions
//!   ([`generators`]);
//! - an experiment harness that runs many trials of many algorithms on shared
//!   sequences and aggregates costs, waste, and ranks ([`harness`]).

pub mod algorithms;
pub mod analysis;
pub mod bin;
pub mod classify;
pub mod generators;
pub mod harness;
pub mod index;
pub mod packer;
pub mod seq;

/// Exact rational used for waste and weight accounting.
pub type Rat = num::rational::Ratio<i128>;

/// Shorthand constructor for [`Rat`].
pub fn rat(num: i128, den: i128) -> Rat {
    Rat::new(num, den)
}

pub use algorithms::{make_packer, AlgorithmId};
pub use bin::{fits, Bin, BinState, BinStore, BinTag, Packing, PlacedItem};
pub use classify::{ha_class, hm_class, rhm_group, HmClass, RhmGroup, Side};
pub use packer::{lower_bound, run, waste, PackError, Packer};
pub use seq::{Sequence, Size};
