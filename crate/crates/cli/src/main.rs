//! `adiabat`: mixing, adiabatic and stable adiabatic times of `P_t = (1 - t) P0 + t P1`,
//! plus a bound-verification report.
//!
//! Exit codes: 0 success, 1 invalid input or numerical failure, 2 a bound
//! check failed, 3 a cap was exceeded, 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use markov_adiabatic::adiabatic::{
    adiabatic_time, corridor, stable_adiabatic_time, AdiabaticMode, Corridor, DEFAULT_ADIABATIC_HORIZON_CAP,
    DEFAULT_CORRIDOR_CAP, DEFAULT_FAST_WINDOW, DEFAULT_STABLE_CAP, DEFAULT_THEOREM3_HORIZON_CAP,
};
use markov_adiabatic::chainfile::ChainSpecFile;
use markov_adiabatic::generate::{generate, GeneratorParams};
use markov_adiabatic::markov::{stationary, stationary_residual, structure, ChainPair, StochasticMatrix};
use markov_adiabatic::mixing::{
    mixing_time_with_cap, sup_mixing_time, SupMixingOptions, DEFAULT_GRID_POINTS, DEFAULT_ITERATION_CAP,
    DEFAULT_REFINE_DEPTH,
};
use markov_adiabatic::verify::{verify_all, VerifyCaps, VerifyOptions};
use markov_adiabatic::Error;
use serde::Serialize;
use serde_json::json;

const EXIT_INVALID: u8 = 1;
const EXIT_BOUND_FAILED: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "adiabat", version, about = "Adiabatic times of interpolated Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check both kernels of a chain file and report their structure.
    Validate(ChainArgs),
    /// Stationary distributions of P0 and P1.
    Stationary(ChainArgs),
    /// Mixing time of one endpoint kernel.
    Mixing {
        #[command(flatten)]
        common: EpsArgs,
        #[arg(long, value_enum, default_value_t = Which::P0)]
        which: Which,
        /// Iteration cap.
        #[arg(long, default_value_t = DEFAULT_ITERATION_CAP)]
        cap: u64,
    },
    /// Grid estimate of the largest mixing time along the interpolation.
    SupMixing {
        #[command(flatten)]
        common: EpsArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Adiabatic time of the full schedule.
    Adiabatic {
        #[command(flatten)]
        common: EpsArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Passing run length that ends a fast-mode scan.
        #[arg(long, default_value_t = DEFAULT_FAST_WINDOW)]
        window: u64,
        /// Exact mode: largest certified horizon scanned. Fast mode: largest T scanned.
        #[arg(long, default_value_t = DEFAULT_ADIABATIC_HORIZON_CAP)]
        cap: u64,
    },
    /// Stable adiabatic time (corridor started at the initial stationary law).
    Stable {
        #[command(flatten)]
        common: EpsArgs,
        #[arg(long, default_value_t = DEFAULT_STABLE_CAP)]
        cap: u64,
    },
    /// Full corridor for a given number of steps.
    Corridor {
        #[command(flatten)]
        chain: ChainArgs,
        /// Number of steps T.
        #[arg(long = "steps", short = 'T')]
        steps: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_CORRIDOR_CAP)]
        cap: u64,
    },
    /// Run every bound check and emit a report.
    Verify {
        #[command(flatten)]
        common: EpsArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Corridor cap for the away-from-start corridor check.
        #[arg(long, default_value_t = DEFAULT_CORRIDOR_CAP)]
        cap: u64,
        /// Largest explicit horizon for the full corridor check.
        #[arg(long, default_value_t = DEFAULT_THEOREM3_HORIZON_CAP)]
        horizon_cap: u64,
        /// Largest certified horizon for the exact adiabatic time.
        #[arg(long, default_value_t = DEFAULT_ADIABATIC_HORIZON_CAP)]
        adiabatic_cap: u64,
    },
    /// Write a chain file from two generator specs such as `two_state:0.2,0.4`.
    Generate {
        #[arg(long)]
        p0: String,
        /// Defaults to P0 (a constant family).
        #[arg(long)]
        p1: Option<String>,
        #[arg(long, default_value = "generated")]
        name: String,
        /// Seed for `random_dense:<n>` specs given without one; P1 gets seed + 1.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Chain file with `name`, `n`, `P0` and `P1`.
    #[arg(long)]
    chain: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EpsArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Accuracy; repeat for several values.
    #[arg(long = "epsilon", required = true)]
    epsilon: Vec<f64>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Uniform grid points for the sup mixing time.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Bisect jumps down to 10^-refine.
    #[arg(long, default_value_t = DEFAULT_REFINE_DEPTH)]
    refine: u32,
}

impl GridArgs {
    fn options(&self) -> SupMixingOptions {
        SupMixingOptions { grid_points: self.grid, refine_depth: self.refine, ..SupMixingOptions::default() }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    #[value(name = "P0")]
    P0,
    #[value(name = "P1")]
    P1,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Exact,
    Fast,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_cap() => EXIT_CAP,
            Error::NonPositiveEps(_) | Error::EpsTooLarge { .. } | Error::OutOfRange { .. } | Error::BadParams(_) => {
                EXIT_USAGE
            }
            _ => EXIT_INVALID,
        };
        let message = match &e {
            Error::CapExceeded { trace, .. } if !trace.is_empty() => {
                let (t, gap) = trace[trace.len() - 1];
                format!("{e} (last T = {t}, max gap {gap})")
            }
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

type CliResult<T = ExitCode> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Validate(args) => {
            let (file, pair) = load(&args.chain)?;
            let report = json!({
                "name": file.name,
                "n": pair.n(),
                "valid": true,
                "P0": structure(pair.p0()),
                "P1": structure(pair.p1()),
            });
            emit_json(&args.out, &report)
        }
        Command::Stationary(args) => {
            let (file, pair) = load(&args.chain)?;
            let (pi0, pi1) = (stationary(pair.p0())?, stationary(pair.p1())?);
            let report = json!({
                "name": file.name,
                "pi0": pi0,
                "pi1": pi1,
                "residual0": stationary_residual(pair.p0(), &pi0),
                "residual1": stationary_residual(pair.p1(), &pi1),
            });
            emit_json(&args.out, &report)
        }
        Command::Mixing { common, which, cap } => {
            let (_, pair) = load(&common.chain.chain)?;
            let p: &StochasticMatrix = match which {
                Which::P0 => pair.p0(),
                Which::P1 => pair.p1(),
            };
            let results = each_eps(&common.epsilon, |eps| mixing_time_with_cap(p, eps, cap))?;
            emit_json(&common.chain.out, &one_or_many(results))
        }
        Command::SupMixing { common, grid } => {
            let (_, pair) = load(&common.chain.chain)?;
            let options = grid.options();
            let results = each_eps(&common.epsilon, |eps| sup_mixing_time(&pair, eps, options))?;
            emit_json(&common.chain.out, &one_or_many(results))
        }
        Command::Adiabatic { common, mode, window, cap } => {
            let (_, pair) = load(&common.chain.chain)?;
            let mode = match mode {
                Mode::Exact => AdiabaticMode::Exact,
                Mode::Fast => AdiabaticMode::Fast,
            };
            let results = each_eps(&common.epsilon, |eps| adiabatic_time(&pair, eps, mode, window, cap))?;
            emit_json(&common.chain.out, &one_or_many(results))
        }
        Command::Stable { common, cap } => {
            let (_, pair) = load(&common.chain.chain)?;
            let results = each_eps(&common.epsilon, |eps| stable_adiabatic_time(&pair, eps, cap))?;
            emit_json(&common.chain.out, &one_or_many(results))
        }
        Command::Corridor { chain, steps, format, cap } => {
            let (_, pair) = load(&chain.chain)?;
            if steps > cap {
                return Err(Error::CapExceeded { cap, trace: Vec::new() }.into());
            }
            let c = corridor(&pair, steps)?;
            match format {
                Format::Json => emit_json(&chain.out, &c),
                Format::Csv => emit(&chain.out, &corridor_csv(&c)),
            }
        }
        Command::Verify { common, grid, format, cap, horizon_cap, adiabatic_cap } => {
            let (file, pair) = load(&common.chain.chain)?;
            let options = VerifyOptions {
                caps: VerifyCaps { corridor_cap: cap, horizon_cap, adiabatic_cap },
                sup: grid.options(),
            };
            let report = verify_all(&file.name, &pair, &common.epsilon, options)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            emit(&common.chain.out, &text)?;
            Ok(if report.has_failures() {
                ExitCode::from(EXIT_BOUND_FAILED)
            } else if !report.caps_hit.is_empty() {
                ExitCode::from(EXIT_CAP)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Generate { p0, p1, name, seed, out } => {
            let a = generator(&p0, seed)?;
            let b = match &p1 {
                Some(spec) => generator(spec, seed.wrapping_add(1))?,
                None => a.clone(),
            };
            let pair = ChainPair::new(a, b)?;
            let text = ChainSpecFile::from_pair(name, &pair).to_json() + "\n";
            emit(&out, &text)
        }
    }
}

fn load(path: &Path) -> CliResult<(ChainSpecFile, ChainPair)> {
    let file = ChainSpecFile::load(path).map_err(|e| Failure { code: EXIT_INVALID, message: e.to_string() })?;
    let pair = file.to_pair().map_err(|e| Failure { code: EXIT_INVALID, message: e.to_string() })?;
    Ok((file, pair))
}

/// Parses a generator spec, filling in `seed` for `random_dense:<n>`.
fn generator(spec: &str, seed: u64) -> CliResult<StochasticMatrix> {
    let full = match spec.strip_prefix("random_dense:") {
        Some(args) if !args.contains(',') => format!("{spec},{seed}"),
        _ => spec.to_string(),
    };
    let params: GeneratorParams = full.parse()?;
    Ok(generate(params)?)
}

fn each_eps<T>(eps: &[f64], mut f: impl FnMut(f64) -> markov_adiabatic::Result<T>) -> CliResult<Vec<T>> {
    eps.iter().map(|&e| f(e).map_err(Failure::from)).collect()
}

fn one_or_many<T: Serialize>(mut results: Vec<T>) -> serde_json::Value {
    if results.len() == 1 {
        json!(results.remove(0))
    } else {
        json!(results)
    }
}

fn corridor_csv(c: &Corridor) -> String {
    let n = c.steps.first().map_or(0, |s| s.mu.n());
    let mut header = vec!["k".to_string(), "gap".to_string()];
    header.extend((0..n).map(|i| format!("mu_{i}")));
    header.extend((0..n).map(|i| format!("pi_{i}")));
    let mut out = header.join(",") + "\n";
    for s in &c.steps {
        let mut row = vec![s.k.to_string(), s.gap.to_string()];
        row.extend(s.mu.mass().iter().map(f64::to_string));
        row.extend(s.target_pi.mass().iter().map(f64::to_string));
        out += &(row.join(",") + "\n");
    }
    out
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).expect("results always serialize") + "\n";
    emit(out, &text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure { code: EXIT_INVALID, message: format!("{}: {e}", path.display()) })?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
