//! Analytical checks: weighting functions, the harmonic series limit, and
//! a brute-force optimum oracle.

mod opt;
mod series;
mod weights;

pub use opt::{opt_bruteforce, opt_bruteforce_capped, OPT_MAX_ITEMS};
pub use series::{t_infinity, T_EXACT_TERMS};
pub use weights::{max_bin_weight, weight, WeightCase, WeightWitness, WitnessItem};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("sequence has {n} items; the exact optimum search is capped at {cap}")]
    TooManyItems { n: usize, cap: usize },
    #[error("resolution {resolution} is too coarse to separate the class boundaries (need at least 381)")]
    ResolutionTooCoarse { resolution: u64 },
}
