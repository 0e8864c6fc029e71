//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid arguments, 2 when a `verify-*`
//! check fails. Data goes to files named by flags; progress goes to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geomsum::{
    expected_partial_collect, lemma1_bound, lemma1_tail_estimate, simulate_partial_collect,
    variance_partial_collect, GeomSumSpec, SampleMode,
};
use crate::harness::{
    self, default_d, run_ensemble, run_process, write_csv, write_ensemble_csv, ProcessConfig,
    WindowParams,
};
use crate::order_index::TieBreak;
use crate::process::{AchlioptasRule, ProcessKind, ProcessOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "percolate",
    version,
    about = "Simulate half-restricted, Erdos-Renyi and Achlioptas random graph processes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one process and write its time series.
    Run(RunArgs),
    /// Run one process over several seeds.
    Ensemble(EnsembleArgs),
    /// Measure L1 at T_C and after the explosive window, per seed.
    Window(WindowArgs),
    /// Monte Carlo check of the partial coupon-collector tail bound.
    #[command(name = "verify-lemma1")]
    VerifyLemma1(Lemma1Args),
    /// Monte Carlo check of the partial coupon-collector expectation.
    #[command(name = "verify-eq1")]
    VerifyEq1(Eq1Args),
    /// Write the six largest-component curves (ER, min-product, min-sum and
    /// half-restricted with beta 0.25, 0.5, 0.9).
    #[command(name = "emit-figure-data")]
    EmitFigureData(FigureArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProcessName {
    Er,
    MinProduct,
    MinSum,
    HalfRestricted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Lex,
    ComponentGrouped,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Lex => TieBreak::Lexicographic,
            TieBreakArg::ComponentGrouped => TieBreak::ComponentGrouped,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Geometric,
    Coupon,
}

/// A numeric flag that may depend on `n` (or on `C`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamExpr {
    Value(f64),
    LnN,
    LnNSquared,
    LnLnLnN,
    LnC,
}

impl FromStr for ParamExpr {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "ln(n)" => Ok(Self::LnN),
            "ln(n)^2" => Ok(Self::LnNSquared),
            "lnlnln(n)" => Ok(Self::LnLnLnN),
            "ln(C)" => Ok(Self::LnC),
            other => other.parse::<f64>().map(Self::Value).map_err(|_| {
                format!("`{s}` is neither a number nor one of ln(n), ln(n)^2, lnlnln(n), ln(C)")
            }),
        }
    }
}

impl ParamExpr {
    fn eval(self, n: usize, c: Option<u32>) -> std::result::Result<f64, String> {
        let ln = |x: f64| x.ln();
        Ok(match self {
            Self::Value(v) => v,
            Self::LnN => ln(n as f64),
            Self::LnNSquared => ln(n as f64).powi(2),
            Self::LnLnLnN => ln(ln(ln(n as f64))),
            Self::LnC => ln(c.ok_or("ln(C) is only meaningful for --D")? as f64),
        })
    }
}

#[derive(Debug, Args, Clone)]
struct ProcessArgs {
    /// Process to simulate.
    #[arg(long, value_enum)]
    process: ProcessName,
    /// Restricted fraction for the half-restricted process, in (0, 1].
    #[arg(long)]
    beta: Option<f64>,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Number of steps (default: n).
    #[arg(long)]
    steps: Option<u64>,
    /// Record a point every this many steps (default: max(1, n / 1000)).
    #[arg(long = "record-every")]
    record_every: Option<u64>,
    /// Comma-separated alpha thresholds k whose T_k is reported.
    #[arg(long = "track-k", value_delimiter = ',')]
    track_k: Vec<u32>,
    /// Window bound K on L1 at T_C (number or ln(n)^2).
    #[arg(long = "K")]
    k_bound: Option<ParamExpr>,
    /// Window threshold C (integer or lnlnln(n), raised to at least 2).
    #[arg(long = "C")]
    c: Option<ParamExpr>,
    /// Window divisor D (integer or ln(C), raised to at least 1).
    #[arg(long = "D")]
    d: Option<ParamExpr>,
    /// Window epsilon in (0, 1).
    #[arg(long)]
    eps: Option<f64>,
    /// Draw Achlioptas candidates from non-edges only.
    #[arg(long = "strict-achlioptas")]
    strict_achlioptas: bool,
    /// Break Achlioptas rule ties with a coin flip instead of taking the first.
    #[arg(long = "random-ties")]
    random_ties: bool,
    /// Order of vertices in equally sized components.
    #[arg(long = "tie-break", value_enum, default_value = "lex")]
    tie_break: TieBreakArg,
    /// Stop once L1 / n reaches this fraction.
    #[arg(long = "stop-at")]
    stop_at: Option<f64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Seed of the run's random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Seeds: a comma list (1,2,5) or a half-open range (0..10).
    #[arg(long)]
    seeds: SeedList,
    /// Directory receiving one CSV per seed plus the ensemble summary.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct WindowArgs {
    /// Restricted fraction, in (0, 1).
    #[arg(long)]
    beta: f64,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Window bound K on L1 at T_C.
    #[arg(long = "K", default_value = "ln(n)^2")]
    k_bound: ParamExpr,
    /// Threshold C, raised to at least 2.
    #[arg(long = "C", default_value = "lnlnln(n)")]
    c: ParamExpr,
    /// Window divisor D, raised to at least 1.
    #[arg(long = "D", default_value = "ln(C)")]
    d: ParamExpr,
    /// Window epsilon in (0, 1).
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Step budget per run (default: 6n).
    #[arg(long)]
    steps: Option<u64>,
    /// Seeds: a comma list or a half-open range.
    #[arg(long, default_value = "0..10")]
    seeds: SeedList,
    /// Order of vertices in equally sized components.
    #[arg(long = "tie-break", value_enum, default_value = "lex")]
    tie_break: TieBreakArg,
    /// Optional ensemble summary CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Lemma1Args {
    /// Number of coupons N.
    #[arg(long = "N", default_value_t = 10_000)]
    coupons: u64,
    /// Size k of the fixed coupon subset, 2 <= k < N.
    #[arg(long, default_value_t = 1000)]
    k: u64,
    /// Draw budget s (default: floor(N ln(k) / 4)).
    #[arg(long)]
    s: Option<u64>,
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional one-row CSV report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Eq1Args {
    /// Number of coupons N.
    #[arg(long = "N")]
    coupons: u64,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling mode.
    #[arg(long, value_enum, default_value = "geometric")]
    mode: ModeArg,
    /// Optional one-row CSV report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Seeds: a comma list or a half-open range.
    #[arg(long, default_value = "1")]
    seeds: SeedList,
    /// Steps per run (default: n).
    #[arg(long)]
    steps: Option<u64>,
    /// Record a point every this many steps (default: max(1, n / 2000)).
    #[arg(long = "record-every")]
    record_every: Option<u64>,
    /// Output directory.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

impl FromStr for SeedList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = |e: std::num::ParseIntError| format!("bad seed list `{s}`: {e}");
        let seeds: Vec<u64> = if let Some((lo, hi)) = s.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(bad)?;
            let hi: u64 = hi.trim().parse().map_err(bad)?;
            (lo..hi).collect()
        } else {
            s.split(',')
                .map(|x| x.trim().parse().map_err(bad))
                .collect::<std::result::Result<_, _>>()?
        };
        if seeds.is_empty() {
            return Err(format!("seed list `{s}` is empty"));
        }
        Ok(Self(seeds))
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn window_params(
    n: usize,
    k_bound: ParamExpr,
    c: ParamExpr,
    d: ParamExpr,
    eps: f64,
) -> Result<WindowParams> {
    let k_bound = k_bound.eval(n, None).map_err(invalid)?;
    let c_raw = c.eval(n, None).map_err(invalid)?;
    let c = match c {
        ParamExpr::Value(v) if v.fract() != 0.0 || v < 2.0 => {
            return Err(invalid(format!("--C {v} must be an integer of at least 2")));
        }
        ParamExpr::Value(v) => v as u32,
        _ if c_raw.is_finite() => (c_raw.ceil() as u32).max(2),
        _ => 2,
    };
    let d = match d {
        ParamExpr::Value(v) if v.fract() != 0.0 || v < 1.0 => {
            return Err(invalid(format!("--D {v} must be a positive integer")));
        }
        ParamExpr::Value(v) => v as u32,
        ParamExpr::LnC => default_d(c),
        other => (other.eval(n, Some(c)).map_err(invalid)?.ceil() as u32).max(1),
    };
    let w = WindowParams { k_bound, c, d, eps };
    w.validate()?;
    Ok(w)
}

impl ProcessArgs {
    fn kind(&self) -> Result<ProcessKind> {
        let kind = match self.process {
            ProcessName::Er => ProcessKind::ErdosRenyi,
            ProcessName::MinProduct => ProcessKind::Achlioptas(AchlioptasRule::MinProduct),
            ProcessName::MinSum => ProcessKind::Achlioptas(AchlioptasRule::MinSum),
            ProcessName::HalfRestricted => ProcessKind::HalfRestricted {
                beta: self
                    .beta
                    .ok_or_else(|| invalid("--beta is required for --process half-restricted"))?,
            },
        };
        if self.beta.is_some() && !matches!(kind, ProcessKind::HalfRestricted { .. }) {
            return Err(invalid("--beta only applies to --process half-restricted"));
        }
        Ok(kind)
    }

    fn config(&self, seed: u64, invocation: &str) -> Result<ProcessConfig> {
        let kind = self.kind()?;
        let mut c = ProcessConfig::new(kind, self.n, self.steps.unwrap_or(self.n as u64), seed);
        if let Some(r) = self.record_every {
            c.record_every = r;
        }
        c.tracked_k = self.track_k.clone();
        c.tracked_k.sort_unstable();
        c.tracked_k.dedup();
        let any_window =
            self.k_bound.is_some() || self.c.is_some() || self.d.is_some() || self.eps.is_some();
        if any_window {
            c.window = Some(window_params(
                self.n,
                self.k_bound.unwrap_or(ParamExpr::LnNSquared),
                self.c.unwrap_or(ParamExpr::LnLnLnN),
                self.d.unwrap_or(ParamExpr::LnC),
                self.eps.unwrap_or(0.1),
            )?);
        }
        c.options = ProcessOptions {
            tie_break: self.tie_break.into(),
            strict_achlioptas: self.strict_achlioptas,
            random_rule_ties: self.random_ties,
        };
        c.stop_l1_frac = self.stop_at;
        c.comments.push(format!("invocation: {invocation}"));
        c.validate()?;
        Ok(c)
    }
}

fn csv_name(kind: &ProcessKind, n: usize, seed: u64) -> String {
    format!("{}_{}_{}.csv", kind.label(), n, seed)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let invocation = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match dispatch(cli.command, &invocation) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if !matches!(e, Error::Io { .. }) {
                eprintln!("\nFor usage, run with --help.");
            }
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, invocation: &str) -> Result<i32> {
    match command {
        Command::Run(args) => cmd_run(args, invocation),
        Command::Ensemble(args) => cmd_ensemble(args, invocation),
        Command::Window(args) => cmd_window(args, invocation),
        Command::VerifyLemma1(args) => cmd_lemma1(args),
        Command::VerifyEq1(args) => cmd_eq1(args),
        Command::EmitFigureData(args) => cmd_figure(args, invocation),
    }
}

fn cmd_run(args: RunArgs, invocation: &str) -> Result<i32> {
    let config = args.process.config(args.seed, invocation)?;
    let start = Instant::now();
    let (series, summary) = run_process(&config)?;
    write_csv(&series, &args.out)?;
    eprintln!(
        "{}: n={} seed={} steps={} final L1={} alpha={} ({:.2?})",
        summary.label,
        summary.n,
        summary.seed,
        summary.steps_run,
        summary.final_l1,
        summary.final_alpha,
        start.elapsed()
    );
    for (k, t) in &summary.t_k {
        eprintln!(
            "  T_{k} = {}",
            t.map_or("not reached".into(), |t| t.to_string())
        );
    }
    if let Some(w) = &summary.window {
        report_window(w);
    }
    if let Some(steps) = summary.sqrt_to_half_window() {
        let bound = 2.0 * (summary.n as f64).powf(2.0 / 3.0);
        eprintln!("  sqrt(n) -> n/2 window: {steps} steps (2 n^(2/3) = {bound:.0})");
    }
    eprintln!("  wrote {}", args.out.display());
    Ok(EXIT_OK)
}

fn report_window(w: &harness::WindowReport) {
    match (w.t_c, w.l1_at_t_c) {
        (Some(t), Some(l1)) => {
            eprintln!(
                "  T_C = {t} (C = {}), L1(T_C) = {l1} vs K = {:.2}; L1(T_C + {}) = {} vs target {:.0}",
                w.params.c,
                w.params.k_bound,
                w.window_steps,
                w.l1_after_window.map_or("not reached".into(), |l| l.to_string()),
                w.giant_target
            );
        }
        _ => eprintln!("  T_C not reached (C = {})", w.params.c),
    }
}

fn cmd_ensemble(args: EnsembleArgs, invocation: &str) -> Result<i32> {
    let config = args.process.config(0, invocation)?;
    create_dir(&args.out_dir)?;
    let start = Instant::now();
    let ensemble = run_ensemble(&config, &args.seeds.0)?;
    for run in &ensemble.runs {
        match &run.outcome {
            Ok((series, summary)) => {
                let path = args
                    .out_dir
                    .join(csv_name(&config.kind, config.n, run.seed));
                write_csv(series, &path)?;
                eprintln!(
                    "seed {}: final L1 = {} -> {}",
                    run.seed,
                    summary.final_l1,
                    path.display()
                );
            }
            Err(e) => eprintln!("seed {}: failed: {e}", run.seed),
        }
    }
    let summary_path =
        args.out_dir
            .join(format!("ensemble_{}_{}.csv", config.kind.label(), config.n));
    write_ensemble_csv(&ensemble, &summary_path)?;
    if let Some(s) = ensemble.final_l1() {
        eprintln!(
            "final L1 min/median/max = {}/{}/{} ({:.2?})",
            s.min,
            s.median,
            s.max,
            start.elapsed()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_window(args: WindowArgs, invocation: &str) -> Result<i32> {
    let kind = ProcessKind::HalfRestricted { beta: args.beta };
    if !(args.beta > 0.0 && args.beta < 1.0) {
        return Err(invalid(format!(
            "--beta {} must lie in (0, 1) for window runs",
            args.beta
        )));
    }
    let window = window_params(args.n, args.k_bound, args.c, args.d, args.eps)?;
    let mut config = ProcessConfig::new(kind, args.n, args.steps.unwrap_or(6 * args.n as u64), 0);
    config.window = Some(window);
    config.stop_after_window = true;
    config.options.tie_break = args.tie_break.into();
    config.comments.push(format!("invocation: {invocation}"));
    config.validate()?;

    eprintln!(
        "window: n={} beta={} K={:.3} C={} D={} eps={}",
        args.n, args.beta, window.k_bound, window.c, window.d, window.eps
    );
    let ensemble = run_ensemble(&config, &args.seeds.0)?;
    let mut passed = 0;
    for run in &ensemble.runs {
        match &run.outcome {
            Ok((_, s)) => {
                let w = s.window.as_ref().expect("window configured");
                eprintln!("seed {}:", run.seed);
                report_window(w);
                if s.chunk_violations > 0 {
                    eprintln!("  {} chunk merges before T_C", s.chunk_violations);
                }
                passed += w.passes() as usize;
            }
            Err(e) => eprintln!("seed {}: failed: {e}", run.seed),
        }
    }
    eprintln!(
        "{passed}/{} seeds satisfy both window conditions",
        ensemble.runs.len()
    );
    if let Some(out) = &args.out {
        write_ensemble_csv(&ensemble, out)?;
    }
    Ok(EXIT_OK)
}

fn cmd_lemma1(args: Lemma1Args) -> Result<i32> {
    if args.k < 2 || args.k >= args.coupons {
        return Err(invalid(format!(
            "--k {} must satisfy 2 <= k < N = {}",
            args.k, args.coupons
        )));
    }
    let s = args
        .s
        .unwrap_or_else(|| (args.coupons as f64 * (args.k as f64).ln() / 4.0).floor() as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let est = lemma1_tail_estimate(args.coupons, args.k, s, args.trials, &mut rng)?;
    let bound = lemma1_bound(args.k);
    let consistent = est.p_hat <= bound + est.ci_halfwidth;
    eprintln!(
        "Pr[X(N-k, N-2) <= s] for N={} k={} s={}: p_hat = {} +/- {:.3e} over {} trials; bound exp(-k^0.99) = {:.3e}; {}",
        args.coupons,
        args.k,
        s,
        est.p_hat,
        est.ci_halfwidth,
        est.trials,
        bound,
        if consistent { "consistent" } else { "CONTRADICTS the bound" }
    );
    if let Some(out) = &args.out {
        write_text(
            out,
            &format!(
                "N,k,s,trials,p_hat,ci_halfwidth,bound,consistent\n{},{},{},{},{},{},{:e},{}\n",
                args.coupons, args.k, s, est.trials, est.p_hat, est.ci_halfwidth, bound, consistent
            ),
        )?;
    }
    Ok(if consistent {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_eq1(args: Eq1Args) -> Result<i32> {
    let spec = GeomSumSpec::new(args.coupons, args.a, args.b)?;
    if args.trials < 2 {
        return Err(invalid("--trials must be at least 2"));
    }
    let mode = match args.mode {
        ModeArg::Geometric => SampleMode::GeometricSum,
        ModeArg::Coupon => SampleMode::CouponDraws,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let total: f64 = (0..args.trials)
        .map(|_| simulate_partial_collect(&spec, &mut rng, mode) as f64)
        .sum();
    let mean = total / args.trials as f64;
    let expected = expected_partial_collect(&spec);
    let se = (variance_partial_collect(&spec) / args.trials as f64).sqrt();
    let z = if se > 0.0 {
        (mean - expected) / se
    } else {
        0.0
    };
    let ok = z.abs() <= 3.0;
    eprintln!(
        "X({}, {}) with N={}: mean {mean:.4} vs N(H_(N-a) - H_(N-b-1)) = {expected:.4}, z = {z:.2} ({})",
        args.a,
        args.b,
        args.coupons,
        if ok { "within 3 standard errors" } else { "OUTSIDE 3 standard errors" }
    );
    if let Some(out) = &args.out {
        write_text(
            out,
            &format!(
                "N,a,b,trials,mean,expected,std_error,z,within_3se\n{},{},{},{},{},{},{},{},{}\n",
                args.coupons, args.a, args.b, args.trials, mean, expected, se, z, ok
            ),
        )?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// The six processes drawn in the largest-component overlay.
pub fn figure_kinds() -> [ProcessKind; 6] {
    [
        ProcessKind::ErdosRenyi,
        ProcessKind::Achlioptas(AchlioptasRule::MinProduct),
        ProcessKind::Achlioptas(AchlioptasRule::MinSum),
        ProcessKind::HalfRestricted { beta: 0.25 },
        ProcessKind::HalfRestricted { beta: 0.5 },
        ProcessKind::HalfRestricted { beta: 0.9 },
    ]
}

fn cmd_figure(args: FigureArgs, invocation: &str) -> Result<i32> {
    let steps = args.steps.unwrap_or(args.n as u64);
    let record_every = args.record_every.unwrap_or((args.n as u64 / 2000).max(1));
    let configs: Vec<ProcessConfig> = figure_kinds()
        .into_iter()
        .map(|kind| {
            let mut c = ProcessConfig::new(kind, args.n, steps, 0);
            c.record_every = record_every;
            c.comments.push(format!("invocation: {invocation}"));
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;
    create_dir(&args.out_dir)?;
    for config in &configs {
        let start = Instant::now();
        let ensemble = run_ensemble(config, &args.seeds.0)?;
        for run in ensemble.runs {
            let (series, summary) = run.outcome.map_err(invalid)?;
            let path = args
                .out_dir
                .join(csv_name(&config.kind, config.n, run.seed));
            write_csv(&series, &path)?;
            eprintln!(
                "{} seed {}: L1/n at T={} is {:.4} ({:.2?}) -> {}",
                summary.label,
                run.seed,
                summary.steps_run,
                summary.final_l1 as f64 / config.n as f64,
                start.elapsed(),
                path.display()
            );
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_expressions() {
        assert_eq!(
            "ln(n)^2".parse::<ParamExpr>().unwrap(),
            ParamExpr::LnNSquared
        );
        assert_eq!(
            " lnlnln( n ) ".parse::<ParamExpr>().unwrap(),
            ParamExpr::LnLnLnN
        );
        assert_eq!("3.5".parse::<ParamExpr>().unwrap(), ParamExpr::Value(3.5));
        assert!("ln(m)".parse::<ParamExpr>().is_err());
        let n = 1_000_000;
        let w = window_params(
            n,
            ParamExpr::LnNSquared,
            ParamExpr::LnLnLnN,
            ParamExpr::LnC,
            0.1,
        )
        .unwrap();
        assert_eq!((w.c, w.d), (2, 1));
        let w = window_params(
            n,
            ParamExpr::Value(500.0),
            ParamExpr::Value(10.0),
            ParamExpr::LnC,
            0.2,
        )
        .unwrap();
        assert_eq!((w.k_bound, w.c, w.d), (500.0, 10, 3));
        assert!(window_params(
            n,
            ParamExpr::LnNSquared,
            ParamExpr::Value(1.0),
            ParamExpr::LnC,
            0.1
        )
        .is_err());
        assert!(window_params(
            n,
            ParamExpr::LnNSquared,
            ParamExpr::Value(4.0),
            ParamExpr::Value(0.0),
            0.1
        )
        .is_err());
        assert!(window_params(
            n,
            ParamExpr::LnC,
            ParamExpr::Value(4.0),
            ParamExpr::LnC,
            0.1
        )
        .is_err());
    }

    #[test]
    fn seed_lists() {
        assert_eq!("1,2, 5".parse::<SeedList>().unwrap().0, vec![1, 2, 5]);
        assert_eq!("3..6".parse::<SeedList>().unwrap().0, vec![3, 4, 5]);
        assert!("4..4".parse::<SeedList>().is_err());
        assert!("x".parse::<SeedList>().is_err());
    }
}
