//! `binpack`: pack sequences, generate benchmark inputs, run experiments,
//! and verify the analytical bounds.
//!
//! Exit codes: 0 success, 2 bad usage/config/input, 3 runtime failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use binpack::analysis::{
    max_bin_weight, opt_bruteforce_capped, t_infinity, WeightCase, T_EXACT_TERMS,
};
use binpack::generators::{generate, lookup_instance, DistKind, DistributionSpec, Seed};
use binpack::harness::{run_experiment, to_csv, to_json, ExperimentConfig, HarnessError};
use binpack::{lower_bound, make_packer, run, waste, AlgorithmId, PackError, Sequence};

#[derive(Parser)]
#[command(name = "binpack", version, about = "Online bin packing algorithms and experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pack a sequence file with one algorithm and report its cost.
    Pack(PackArgs),
    /// Generate a sequence file from a named or custom distribution.
    Gen(GenArgs),
    /// Run a trials x algorithms x set-instances experiment from a JSON config.
    Run(RunArgs),
    /// Search the maximum total item weight that fits in one bin.
    VerifyWeights(VerifyWeightsArgs),
    /// Partial sums of the harmonic family's limiting series.
    Tinfinity(TinfArgs),
    /// Exact optimal cost of a small sequence file.
    Opt(OptArgs),
}

#[derive(Args)]
struct PackArgs {
    /// Algorithm id: nf, ff, bf, mbf, om[:K], ha[:K], rom, hm[:K], hmm[:K],
    /// rrm, rhm, ss
    #[arg(long)]
    algo: String,
    /// Sequence file (`D <denom>` header, one numerator per line)
    #[arg(long)]
    input: PathBuf,
    /// Also print every bin's contents and tag
    #[arg(long)]
    dump_bins: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Named set-instance (DU0..BPSD2) or `custom`
    #[arg(long)]
    dist: String,
    /// Number of items
    #[arg(long)]
    n: usize,
    /// Master seed (trial index 0)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file
    #[arg(long)]
    out: PathBuf,
    /// Capacity in units (custom only)
    #[arg(long)]
    e: Option<u64>,
    /// Smallest size (custom only)
    #[arg(long)]
    lo: Option<u64>,
    /// Largest size (custom only)
    #[arg(long)]
    hi: Option<u64>,
    /// Distribution kind for `custom`: uniform, normal, poisson, zipf,
    /// sortd, weibull, bps
    #[arg(long)]
    kind: Option<String>,
    /// Kind-specific parameter, repeatable: mu=, sigma=, lambda=, theta=,
    /// shape=, scale=, s=
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config: set_instances, algorithms, n, trials, master_seed,
    /// output, ss_enabled_max_d
    #[arg(long)]
    config: PathBuf,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads for trials
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Suppress the CSV timestamp header line
    #[arg(long)]
    no_timestamp: bool,
    /// Write here instead of the config's `output` (or stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyWeightsArgs {
    /// Weighting case: 1 or 2
    #[arg(long)]
    case: u8,
    /// Search grid: candidate sizes sit one part in `resolution` above the
    /// interval boundaries
    #[arg(long, default_value_t = 192_000)]
    resolution: u64,
}

#[derive(Args)]
struct TinfArgs {
    /// Number of series terms
    #[arg(long, default_value_t = 5)]
    terms: u32,
}

#[derive(Args)]
struct OptArgs {
    /// Sequence file
    #[arg(long)]
    input: PathBuf,
    /// Cap on the exact search
    #[arg(long, default_value_t = 16)]
    max_n: usize,
}

/// Error carrying its process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    fn runtime(msg: impl Into<String>) -> Self {
        Self { code: 3, msg: msg.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Pack(args) => cmd_pack(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Run(args) => cmd_run(args),
        Cmd::VerifyWeights(args) => cmd_verify_weights(args),
        Cmd::Tinfinity(args) => cmd_tinfinity(args),
        Cmd::Opt(args) => cmd_opt(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_sequence(path: &PathBuf) -> Result<Sequence, Failure> {
    Sequence::read_file(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_algo(s: &str) -> Result<AlgorithmId, Failure> {
    AlgorithmId::from_str(s).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_pack(args: PackArgs) -> Result<(), Failure> {
    let seq = read_sequence(&args.input)?;
    let id = parse_algo(&args.algo)?;
    let mut packer = make_packer(&id, seq.denom).map_err(|e| Failure::usage(e.to_string()))?;
    let packing = run(&mut *packer, &seq).map_err(|e| match &e {
        PackError::OutOfDomain { index, .. } => {
            // Line index + 2: one-based lines plus the header line.
            Failure::usage(format!("{}, line {}: {e}", args.input.display(), index + 2))
        }
        _ => Failure::usage(e.to_string()),
    })?;
    let w = waste(&packing, &seq).expect("packing covers its own input");
    let lb = lower_bound(&seq);
    let ratio = if lb == 0 { 1.0 } else { packing.cost() as f64 / lb as f64 };
    println!(
        "algo={} cost={} total_size={:.6} waste={:.6} lower_bound={} ratio={:.6}",
        id,
        packing.cost(),
        seq.total() as f64 / seq.denom as f64,
        w.to_f64(),
        lb,
        ratio
    );
    if args.dump_bins {
        for bin in &packing.bins {
            let tag = bin.tag.map(|t| t.as_str()).unwrap_or_else(|| "-".into());
            let items: Vec<String> =
                bin.contents.iter().map(|p| p.size.0.to_string()).collect();
            println!(
                "bin {} [{}] level={}/{} state={:?}: {}",
                bin.id,
                tag,
                bin.level,
                seq.denom,
                bin.state,
                items.join(" ")
            );
        }
    }
    Ok(())
}

trait RatExt {
    fn to_f64(&self) -> f64;
}

impl RatExt for binpack::Rat {
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let spec = if args.dist.eq_ignore_ascii_case("custom") {
        custom_spec(&args)?
    } else {
        lookup_instance(&args.dist).map_err(|e| Failure::usage(e.to_string()))?
    };
    let seq = generate(&spec, args.n, Seed { master: args.seed, trial_index: 0 })
        .map_err(|e| Failure::runtime(e.to_string()))?;
    seq.write_file(&args.out).map_err(|e| Failure::runtime(e.to_string()))?;
    Ok(())
}

fn custom_spec(args: &GenArgs) -> Result<DistributionSpec, Failure> {
    let e = args.e.ok_or_else(|| Failure::usage("custom distribution requires --e"))?;
    let lo = args.lo.unwrap_or(1);
    let hi = args.hi.unwrap_or(e);
    let mut params = std::collections::BTreeMap::new();
    for p in &args.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("bad --param {p:?}, expected KEY=VALUE")))?;
        let v: f64 =
            v.parse().map_err(|_| Failure::usage(format!("bad --param value in {p:?}")))?;
        params.insert(k.to_string(), v);
    }
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    let ef = e as f64;
    let kind = match args
        .kind
        .as_deref()
        .ok_or_else(|| Failure::usage("custom distribution requires --kind"))?
    {
        "uniform" => DistKind::Uniform,
        "sortd" => DistKind::Sortd,
        "normal" => DistKind::Normal { mu: get("mu", ef / 2.0), sigma: get("sigma", ef / 6.0) },
        "poisson" => DistKind::Poisson { lambda: get("lambda", ef / 3.0) },
        "zipf" => DistKind::Zipf { theta: get("theta", 0.5) },
        "weibull" => {
            DistKind::Weibull { shape: get("shape", 1.0), scale: get("scale", ef / 2.0) }
        }
        "bps" => DistKind::Bps { support: get("s", 100.0) as u64 },
        other => return Err(Failure::usage(format!("unknown --kind {other:?}"))),
    };
    Ok(DistributionSpec { name: "custom".into(), e, lo, hi, kind })
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.config.display())))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.config.display())))?;
    let results = run_experiment(&cfg, args.jobs.max(1)).map_err(|e| match e {
        HarnessError::Config(_) | HarnessError::Gen(_) => Failure::usage(e.to_string()),
        HarnessError::Pack { .. } => Failure::runtime(e.to_string()),
    })?;
    let body = match args.format.as_str() {
        "csv" => {
            let stamp = (!args.no_timestamp)
                .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
            to_csv(&results, stamp.as_deref())
        }
        "json" => to_json(&results),
        other => return Err(Failure::usage(format!("unknown --format {other:?}"))),
    };
    let target = args.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => {
            fs::write(&path, body).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn cmd_verify_weights(args: VerifyWeightsArgs) -> Result<(), Failure> {
    let case = match args.case {
        1 => WeightCase::Case1,
        2 => WeightCase::Case2,
        other => return Err(Failure::usage(format!("--case must be 1 or 2, got {other}"))),
    };
    let (value, witness) =
        max_bin_weight(case, args.resolution).map_err(|e| Failure::usage(e.to_string()))?;
    println!(
        "max_bin_weight case {} resolution {} = {}/{} = {:.9}",
        args.case,
        args.resolution,
        value.numer(),
        value.denom(),
        value.to_f64()
    );
    for item in &witness.items {
        println!(
            "  item {:<16} size {}/{} (endpoint {}/{}) weight {}/{}",
            item.label,
            item.size.numer(),
            item.size.denom(),
            item.limit_size.numer(),
            item.limit_size.denom(),
            item.weight.numer(),
            item.weight.denom()
        );
    }
    println!(
        "  residual {}/{} filled at density 20/19",
        witness.residual.numer(),
        witness.residual.denom()
    );
    let limit = witness.limit_weight();
    println!(
        "  witness at endpoint limit = {}/{} = {:.9}",
        limit.numer(),
        limit.denom(),
        limit.to_f64()
    );
    Ok(())
}

fn cmd_tinfinity(args: TinfArgs) -> Result<(), Failure> {
    if args.terms < 1 {
        return Err(Failure::usage("--terms must be at least 1"));
    }
    let v = t_infinity(args.terms);
    println!("t_infinity({}) = {:.9}", args.terms, v);
    if args.terms > T_EXACT_TERMS {
        println!(
            "note: terms beyond {T_EXACT_TERMS} contribute less than 1e-12 and are not evaluated"
        );
    }
    Ok(())
}

fn cmd_opt(args: OptArgs) -> Result<(), Failure> {
    let seq = read_sequence(&args.input)?;
    let opt = opt_bruteforce_capped(&seq, args.max_n).map_err(|e| Failure::usage(e.to_string()))?;
    println!("opt = {opt}");
    Ok(())
}
