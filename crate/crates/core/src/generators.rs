//! Seeded random sequence generators for the benchmark set-instances.
//!
//! Sizes are integers in `[lo, hi]` drawn i.i.d. from the spec's
//! distribution (SORTD draws uniformly, then sorts decreasing). Continuous
//! draws are rounded to the nearest integer and rejected outside the range,
//! so no probability mass piles up at the boundaries.
//!
//! Reproducibility: the per-trial seed is derived from `(master,
//! trial_index)` with SplitMix64 (see [`Seed::value`]) and feeds a ChaCha8
//! stream cipher RNG, so streams are identical across runs, platforms, and
//! thread schedules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson, Weibull};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq::Sequence;

/// Distribution family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistKind {
    Uniform,
    Normal { mu: f64, sigma: f64 },
    Poisson { lambda: f64 },
    Zipf { theta: f64 },
    /// Uniform draws emitted in decreasing size order.
    Sortd,
    Weibull { shape: f64, scale: f64 },
    /// Bounded Probability Sampled: `support` random sizes get random
    /// weights; draws follow the resulting table.
    Bps { support: u64 },
}

/// Parameters of one set-instance: bin capacity `e` in units, the size
/// range `[lo, hi]`, and the distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub name: String,
    pub e: u64,
    pub lo: u64,
    pub hi: u64,
    #[serde(flatten)]
    pub kind: DistKind,
}

impl DistributionSpec {
    pub fn uniform(name: &str, e: u64, lo: u64, hi: u64) -> Self {
        Self { name: name.into(), e, lo, hi, kind: DistKind::Uniform }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.lo == 0 || self.lo > self.hi || self.hi > self.e {
            return Err(GenError::BadRange {
                name: self.name.clone(),
                lo: self.lo,
                hi: self.hi,
                e: self.e,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("{name}: range [{lo}, {hi}] invalid for capacity {e}")]
    BadRange { name: String, lo: u64, hi: u64, e: u64 },
    #[error("unknown set-instance {0:?}")]
    UnknownInstance(String),
    #[error("{name}: rejection rate above 99.9% after {attempts} draws")]
    Degenerate { name: String, attempts: u64 },
    #[error("{name}: bad distribution parameter: {msg}")]
    BadParam { name: String, msg: String },
}

/// Per-trial seed: a SplitMix64-style mix of the master seed and the trial
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed {
    pub master: u64,
    pub trial_index: u64,
}

/// One SplitMix64 step (Steele, Lea & Flood's reference constants).
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// The derived 64-bit seed, bit-exactly:
    /// `a = splitmix64(master); splitmix64(a XOR (trial_index * GOLDEN))`
    /// with GOLDEN = 0x9E3779B97F4A7C15. Language ports reproduce streams
    /// by feeding this value to ChaCha8 keyed in the `seed_from_u64` layout.
    pub fn value(&self) -> u64 {
        let mut s = self.master;
        let a = splitmix64(&mut s);
        let mut t = a ^ self.trial_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        splitmix64(&mut t)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.value())
    }
}

/// Draws `n` sizes from `spec`, deterministically in `seed`.
pub fn generate(spec: &DistributionSpec, n: usize, seed: Seed) -> Result<Sequence, GenError> {
    spec.validate()?;
    let mut rng = seed.rng();
    let items = match &spec.kind {
        DistKind::Uniform => draw_uniform(spec, n, &mut rng),
        DistKind::Sortd => {
            let mut items = draw_uniform(spec, n, &mut rng);
            items.sort_unstable_by(|a, b| b.cmp(a));
            items
        }
        DistKind::Normal { mu, sigma } => {
            let dist = Normal::new(*mu, *sigma)
                .map_err(|e| GenError::BadParam { name: spec.name.clone(), msg: e.to_string() })?;
            draw_rejecting(spec, n, &mut rng, |rng| dist.sample(rng))?
        }
        DistKind::Poisson { lambda } => {
            let dist = Poisson::new(*lambda)
                .map_err(|e| GenError::BadParam { name: spec.name.clone(), msg: e.to_string() })?;
            draw_rejecting(spec, n, &mut rng, |rng| dist.sample(rng))?
        }
        DistKind::Weibull { shape, scale } => {
            let dist = Weibull::new(*scale, *shape)
                .map_err(|e| GenError::BadParam { name: spec.name.clone(), msg: e.to_string() })?;
            draw_rejecting(spec, n, &mut rng, |rng| dist.sample(rng))?
        }
        DistKind::Zipf { theta } => {
            let table = zipf_table(spec.lo, spec.hi, *theta);
            draw_from_table(&table, spec.lo, n, &mut rng)
        }
        DistKind::Bps { support } => {
            let table = bps_table_from(spec, *support, &mut rng);
            let mut items = Vec::with_capacity(n);
            let total: f64 = table.iter().map(|&(_, w)| w).sum();
            for _ in 0..n {
                let target = rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut chosen = table[table.len() - 1].0;
                for &(value, w) in &table {
                    acc += w;
                    if target < acc {
                        chosen = value;
                        break;
                    }
                }
                items.push(chosen);
            }
            items
        }
    };
    Ok(Sequence { denom: spec.e, items })
}

fn draw_uniform(spec: &DistributionSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..n).map(|_| rng.random_range(spec.lo..=spec.hi)).collect()
}

/// Round-to-nearest integer draws, redrawing anything outside `[lo, hi]`.
fn draw_rejecting(
    spec: &DistributionSpec,
    n: usize,
    rng: &mut ChaCha8Rng,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Result<Vec<u64>, GenError> {
    let mut items = Vec::with_capacity(n);
    let mut attempts: u64 = 0;
    while items.len() < n {
        attempts += 1;
        let v = sample(rng).round();
        if v >= spec.lo as f64 && v <= spec.hi as f64 {
            items.push(v as u64);
        } else if attempts >= 10_000 && (items.len() as u64) * 1000 < attempts {
            return Err(GenError::Degenerate { name: spec.name.clone(), attempts });
        }
    }
    Ok(items)
}

/// Power-law weights over the sizes themselves: P(i) proportional to
/// i^(-theta), small sizes most probable.
fn zipf_table(lo: u64, hi: u64, theta: f64) -> Vec<f64> {
    (lo..=hi).map(|i| (i as f64).powf(-theta)).collect()
}

fn draw_from_table(weights: &[f64], lo: u64, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut cum = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for &w in weights {
        acc += w;
        cum.push(acc);
    }
    let total = acc;
    (0..n)
        .map(|_| {
            let target = rng.random::<f64>() * total;
            let idx = cum.partition_point(|&c| c <= target);
            lo + idx.min(weights.len() - 1) as u64
        })
        .collect()
}

/// Builds the BPS table from the stream: `min(support, hi - lo + 1)`
/// distinct sizes chosen uniformly without replacement, sorted ascending,
/// then one weight drawn uniformly from (0, 1] per size, in that order.
fn bps_table_from(spec: &DistributionSpec, support: u64, rng: &mut ChaCha8Rng) -> Vec<(u64, f64)> {
    let range_len = spec.hi - spec.lo + 1;
    let take = support.min(range_len) as usize;
    let mut values: Vec<u64> = (spec.lo..=spec.hi).collect();
    for i in 0..take {
        let j = rng.random_range(i..values.len());
        values.swap(i, j);
    }
    let mut chosen: Vec<u64> = values[..take].to_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|v| (v, 1.0 - rng.random::<f64>())).collect()
}

/// The BPS support/weight table exactly as [`generate`] draws it for this
/// seed (the table draws precede the item draws in the stream).
pub fn bps_table(spec: &DistributionSpec, seed: Seed) -> Result<Vec<(u64, f64)>, GenError> {
    spec.validate()?;
    match spec.kind {
        DistKind::Bps { support } => Ok(bps_table_from(spec, support, &mut seed.rng())),
        _ => Err(GenError::BadParam { name: spec.name.clone(), msg: "not a BPS spec".into() }),
    }
}

/// The fourteen named set-instances.
pub fn builtin_set_instances() -> Vec<DistributionSpec> {
    let e = 1000u64;
    let ef = e as f64;
    let spec = |name: &str, e: u64, lo: u64, hi: u64, kind: DistKind| DistributionSpec {
        name: name.into(),
        e,
        lo,
        hi,
        kind,
    };
    vec![
        spec("DU0", 100, 1, 100, DistKind::Uniform),
        spec("DU1", 500, 1, 500, DistKind::Uniform),
        spec("DU2", e, 1, e, DistKind::Uniform),
        spec("DU3", e, 1, e / 2, DistKind::Uniform),
        spec("DU4", e, 1, e / 10, DistKind::Uniform),
        spec("NORMAL", e, 1, e, DistKind::Normal { mu: ef / 2.0, sigma: ef / 6.0 }),
        spec("POISSON", e, 1, e, DistKind::Poisson { lambda: ef / 3.0 }),
        spec("ZIPF1", e, 1, e, DistKind::Zipf { theta: 0.5 }),
        spec("ZIPF2", e, 1, e, DistKind::Zipf { theta: 1.0 / 3.0 }),
        spec("SORTD", e, 1, e, DistKind::Sortd),
        spec("WD1", e, 1, e, DistKind::Weibull { shape: 0.454, scale: ef / 2.0 }),
        spec("WD2", e, 1, e, DistKind::Weibull { shape: 1.044, scale: ef / 2.0 }),
        spec("BPSD1", e, e / 4, e / 2, DistKind::Bps { support: 100 }),
        spec("BPSD2", e, 1, e / 4, DistKind::Bps { support: 100 }),
    ]
}

/// Looks up a named set-instance (case-insensitive).
pub fn lookup_instance(name: &str) -> Result<DistributionSpec, GenError> {
    builtin_set_instances()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| GenError::UnknownInstance(name.to_string()))
}
