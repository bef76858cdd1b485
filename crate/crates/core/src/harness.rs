//! Experiment runner: trials x algorithms x set-instances, with paired
//! sequences, aggregation, ranking, and CSV/JSON output.
//!
//! Within one trial every algorithm packs the byte-identical sequence
//! (paired design), so cross-algorithm comparisons share the noise. Trials
//! are independent work units; results are sorted into (instance,
//! algorithm, trial) order before writing, so parallel runs are
//! byte-reproducible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{make_packer, AlgorithmId, SS_MAX_DENOM};
use crate::generators::{generate, lookup_instance, DistributionSpec, GenError, Seed};
use crate::packer::{lower_bound, run, PackError};

fn default_ss_max_d() -> u64 {
    SS_MAX_DENOM
}

/// A set-instance reference in a config: a builtin name or an inline spec.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceRef {
    Name(String),
    Custom(DistributionSpec),
}

/// Experiment configuration (the `run` subcommand's JSON document).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub set_instances: Vec<InstanceRef>,
    pub algorithms: Vec<String>,
    pub n: usize,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default = "default_ss_max_d")]
    pub ss_enabled_max_d: u64,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("config: {0}")]
    Gen(#[from] GenError),
    #[error("{set_instance}/{algorithm}: {source}")]
    Pack {
        set_instance: String,
        algorithm: String,
        #[source]
        source: PackError,
    },
}

/// One (set-instance, algorithm, trial) outcome. Sizes are kept in exact
/// units; the rational views round only on output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub set_instance: String,
    pub algorithm: String,
    pub trial: u64,
    pub n: usize,
    pub cost: u64,
    pub total_units: u128,
    pub denom: u64,
    pub lower_bound: u64,
}

impl TrialResult {
    pub fn total_size(&self) -> f64 {
        self.total_units as f64 / self.denom as f64
    }

    pub fn waste(&self) -> f64 {
        self.cost as f64 - self.total_size()
    }

    pub fn ratio(&self) -> f64 {
        if self.lower_bound == 0 {
            if self.cost == 0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.cost as f64 / self.lower_bound as f64
        }
    }
}

/// Per-(instance, algorithm) aggregate over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub set_instance: String,
    pub algorithm: String,
    pub trials: u64,
    pub mean_cost: f64,
    pub std_cost: f64,
    pub mean_ratio: f64,
    pub mean_waste: f64,
    /// 1 = cheapest mean cost within the set-instance; ties share the
    /// lower rank.
    pub rank: u64,
}

struct Resolved {
    instances: Vec<DistributionSpec>,
    algorithms: Vec<AlgorithmId>,
}

fn resolve(cfg: &ExperimentConfig) -> Result<Resolved, HarnessError> {
    if cfg.trials < 1 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    if cfg.set_instances.is_empty() || cfg.algorithms.is_empty() {
        return Err(HarnessError::Config("need at least one set-instance and one algorithm".into()));
    }
    let mut instances = Vec::new();
    for r in &cfg.set_instances {
        let spec = match r {
            InstanceRef::Name(name) => lookup_instance(name)?,
            InstanceRef::Custom(spec) => spec.clone(),
        };
        spec.validate()?;
        instances.push(spec);
    }
    let mut algorithms = Vec::new();
    for s in &cfg.algorithms {
        let id: AlgorithmId = s
            .parse()
            .map_err(|e| HarnessError::Config(format!("{e}")))?;
        algorithms.push(id);
    }
    let ss_limit = cfg.ss_enabled_max_d.min(SS_MAX_DENOM);
    if algorithms.contains(&AlgorithmId::Ss) {
        for spec in &instances {
            if spec.e > ss_limit {
                return Err(HarnessError::Config(format!(
                    "ss cannot run on {} (E = {} exceeds {})",
                    spec.name, spec.e, ss_limit
                )));
            }
        }
    }
    Ok(Resolved { instances, algorithms })
}

fn run_trial(
    spec: &DistributionSpec,
    algorithms: &[AlgorithmId],
    n: usize,
    master_seed: u64,
    trial: u64,
) -> Result<Vec<TrialResult>, HarnessError> {
    let seq = generate(spec, n, Seed { master: master_seed, trial_index: trial })?;
    let lb = lower_bound(&seq);
    let total_units = seq.total();
    algorithms
        .iter()
        .map(|id| {
            let mut packer = make_packer(id, seq.denom).map_err(|e| HarnessError::Pack {
                set_instance: spec.name.clone(),
                algorithm: id.to_string(),
                source: e,
            })?;
            let packing = run(&mut *packer, &seq).map_err(|e| HarnessError::Pack {
                set_instance: spec.name.clone(),
                algorithm: id.to_string(),
                source: e,
            })?;
            Ok(TrialResult {
                set_instance: spec.name.clone(),
                algorithm: id.to_string(),
                trial,
                n,
                cost: packing.cost(),
                total_units,
                denom: seq.denom,
                lower_bound: lb,
            })
        })
        .collect()
}

/// Runs the experiment: for each (set-instance, trial) one sequence is
/// generated from the derived seed and every algorithm packs it.
/// Deterministic in `master_seed`; `jobs > 1` fans trials out over a rayon
/// pool without changing the output.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    jobs: usize,
) -> Result<Vec<TrialResult>, HarnessError> {
    let resolved = resolve(cfg)?;
    let tasks: Vec<(usize, u64)> = (0..resolved.instances.len())
        .flat_map(|i| (0..cfg.trials).map(move |t| (i, t)))
        .collect();
    let results: Result<Vec<Vec<TrialResult>>, HarnessError> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|&(i, t)| {
                    run_trial(&resolved.instances[i], &resolved.algorithms, cfg.n, cfg.master_seed, t)
                })
                .collect()
        })
    } else {
        tasks
            .iter()
            .map(|&(i, t)| {
                run_trial(&resolved.instances[i], &resolved.algorithms, cfg.n, cfg.master_seed, t)
            })
            .collect()
    };
    Ok(results?.into_iter().flatten().collect())
}

/// Groups by (set-instance, algorithm), averages over trials, and ranks by
/// mean cost within each set-instance. Input order does not matter: trials
/// are summed in trial order and rows come out sorted.
pub fn aggregate(results: &[TrialResult]) -> Vec<AggregateRow> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(&str, &str), Vec<&TrialResult>> = BTreeMap::new();
    for r in results {
        groups.entry((&r.set_instance, &r.algorithm)).or_default().push(r);
    }
    let mut rows: Vec<AggregateRow> = groups
        .into_iter()
        .map(|((instance, algorithm), mut trials)| {
            trials.sort_by_key(|r| r.trial);
            let k = trials.len() as f64;
            let mean_cost = trials.iter().map(|r| r.cost as f64).sum::<f64>() / k;
            let var = if trials.len() > 1 {
                trials.iter().map(|r| (r.cost as f64 - mean_cost).powi(2)).sum::<f64>()
                    / (k - 1.0)
            } else {
                0.0
            };
            AggregateRow {
                set_instance: instance.to_string(),
                algorithm: algorithm.to_string(),
                trials: trials.len() as u64,
                mean_cost,
                std_cost: var.sqrt(),
                mean_ratio: trials.iter().map(|r| r.ratio()).sum::<f64>() / k,
                mean_waste: trials.iter().map(|r| r.waste()).sum::<f64>() / k,
                rank: 0,
            }
        })
        .collect();
    let snapshot: Vec<(String, f64)> =
        rows.iter().map(|r| (r.set_instance.clone(), r.mean_cost)).collect();
    for row in &mut rows {
        let cheaper = snapshot
            .iter()
            .filter(|(inst, cost)| inst == &row.set_instance && *cost < row.mean_cost)
            .count() as u64;
        row.rank = 1 + cheaper;
    }
    rows
}

/// Mean waste of one algorithm at each sequence length, with consecutive
/// growth factors `mean_waste(n_{i+1}) / mean_waste(n_i)`.
#[derive(Debug, Clone)]
pub struct WasteScaling {
    pub rows: Vec<(usize, f64)>,
    pub growth: Vec<f64>,
}

pub fn waste_scaling(
    algorithm: &AlgorithmId,
    spec: &DistributionSpec,
    n_list: &[usize],
    trials: u64,
    master_seed: u64,
    jobs: usize,
) -> Result<WasteScaling, HarnessError> {
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::Config("n_list must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = ExperimentConfig {
            set_instances: vec![InstanceRef::Custom(spec.clone())],
            algorithms: vec![algorithm.to_string()],
            n,
            trials,
            master_seed,
            output: None,
            ss_enabled_max_d: SS_MAX_DENOM,
        };
        let results = run_experiment(&cfg, jobs)?;
        let mean = results.iter().map(|r| r.waste()).sum::<f64>() / results.len() as f64;
        rows.push((n, mean));
    }
    let growth = rows.windows(2).map(|w| w[1].1 / w[0].1).collect();
    Ok(WasteScaling { rows, growth })
}

/// CSV with the mandatory header; rationals carry six fractional digits.
/// The timestamp comment line is emitted only when given.
pub fn to_csv(results: &[TrialResult], timestamp: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(ts) = timestamp {
        out.push_str(&format!("# generated {ts}\n"));
    }
    out.push_str("set_instance,algorithm,trial,n,cost,total_size,waste,lower_bound,ratio\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{},{:.6}\n",
            r.set_instance,
            r.algorithm,
            r.trial,
            r.n,
            r.cost,
            r.total_size(),
            r.waste(),
            r.lower_bound,
            r.ratio()
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    set_instance: &'a str,
    algorithm: &'a str,
    trial: u64,
    n: usize,
    cost: u64,
    total_size: f64,
    waste: f64,
    lower_bound: u64,
    ratio: f64,
}

/// The same rows as [`to_csv`], as a JSON array of objects.
pub fn to_json(results: &[TrialResult]) -> String {
    let round6 = |x: f64| (x * 1e6).round() / 1e6;
    let rows: Vec<JsonRow> = results
        .iter()
        .map(|r| JsonRow {
            set_instance: &r.set_instance,
            algorithm: &r.algorithm,
            trial: r.trial,
            n: r.n,
            cost: r.cost,
            total_size: round6(r.total_size()),
            waste: round6(r.waste()),
            lower_bound: r.lower_bound,
            ratio: round6(r.ratio()),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}
