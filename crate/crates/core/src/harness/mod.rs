//! Full runs: time series recording, threshold detection, explosive-window
//! measurement and seed ensembles.

pub mod csv;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::process::{Process, ProcessKind, ProcessOptions};

pub use self::csv::{
    format_sig9, read_csv, write_csv, write_ensemble_csv, TimeSeries, TimeSeriesPoint,
};

/// Parameters of the explosive-window measurement: the component bound
/// `k_bound` at `T_C`, the threshold `c`, the window divisor `d` and `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowParams {
    pub k_bound: f64,
    pub c: u32,
    pub d: u32,
    pub eps: f64,
}

impl WindowParams {
    /// `K = ln(n)^2`, `C = max(2, ceil(ln ln ln n))`, `D = max(1, ceil(ln C))`,
    /// `eps = 0.1`.
    pub fn defaults_for(n: usize) -> Self {
        let c = default_c(n);
        Self {
            k_bound: (n as f64).ln().powi(2),
            c,
            d: default_d(c),
            eps: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < 2 {
            return Err(Error::InvalidConfig(format!(
                "C = {} must be at least 2",
                self.c
            )));
        }
        if self.d < 1 {
            return Err(Error::InvalidConfig("D must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "eps = {} must lie in (0, 1)",
                self.eps
            )));
        }
        if self.k_bound.is_nan() || self.k_bound <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "K = {} must be positive",
                self.k_bound
            )));
        }
        Ok(())
    }
}

pub fn default_c(n: usize) -> u32 {
    let raw = (n as f64).ln().ln().ln();
    if raw.is_finite() {
        (raw.ceil() as u32).max(2)
    } else {
        2
    }
}

pub fn default_d(c: u32) -> u32 {
    ((c as f64).ln().ceil() as u32).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessConfig {
    pub kind: ProcessKind,
    pub n: usize,
    pub max_steps: u64,
    pub seed: u64,
    pub record_every: u64,
    pub tracked_k: Vec<u32>,
    pub window: Option<WindowParams>,
    pub options: ProcessOptions,
    /// Stop once L1 / n reaches this fraction.
    pub stop_l1_frac: Option<f64>,
    /// Stop once the window end `T_C + ceil(n / D)` has been recorded.
    pub stop_after_window: bool,
    /// Free-form lines written as `#` comments into the CSV.
    pub comments: Vec<String>,
}

impl ProcessConfig {
    pub fn new(kind: ProcessKind, n: usize, max_steps: u64, seed: u64) -> Self {
        Self {
            kind,
            n,
            max_steps,
            seed,
            record_every: (n as u64 / 1000).max(1),
            tracked_k: Vec::new(),
            window: None,
            options: ProcessOptions::default(),
            stop_l1_frac: None,
            stop_after_window: false,
            comments: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.n < self.kind.min_vertices() {
            return Err(Error::InvalidConfig(format!(
                "{} needs n >= {}, got {}",
                self.kind,
                self.kind.min_vertices(),
                self.n
            )));
        }
        if let ProcessKind::HalfRestricted { beta } = self.kind {
            crate::order_index::restricted_size(self.n, beta)?;
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        if self.tracked_k.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "tracked k values must be strictly ascending".into(),
            ));
        }
        if self.tracked_k.first() == Some(&1) || self.tracked_k.first() == Some(&0) {
            return Err(Error::EmptyThresholdSet);
        }
        if let Some(w) = &self.window {
            w.validate()?;
        }
        if let Some(f) = self.stop_l1_frac {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "stop fraction {f} must lie in (0, 1]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowReport {
    pub params: WindowParams,
    /// Last step with alpha below C.
    pub t_c: Option<u64>,
    pub l1_at_t_c: Option<u32>,
    /// `ceil(n / D)`.
    pub window_steps: u64,
    pub l1_after_window: Option<u32>,
    /// `(1 - eps)(1 - beta) n`.
    pub giant_target: f64,
}

impl WindowReport {
    /// `L1(T_C) <= K`; `None` when `T_C` was not reached.
    pub fn small_at_t_c(&self) -> Option<bool> {
        self.l1_at_t_c.map(|l| l as f64 <= self.params.k_bound)
    }

    /// `L1(T_C + ceil(n/D)) >= (1 - eps)(1 - beta) n`.
    pub fn giant_after_window(&self) -> Option<bool> {
        self.l1_after_window.map(|l| l as f64 >= self.giant_target)
    }

    pub fn passes(&self) -> bool {
        self.small_at_t_c() == Some(true) && self.giant_after_window() == Some(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub n: usize,
    pub seed: u64,
    pub steps_run: u64,
    /// `(k, T_k)` for every tracked k; `None` means not reached.
    pub t_k: Vec<(u32, Option<u64>)>,
    pub final_l1: u32,
    pub final_alpha: u32,
    pub window: Option<WindowReport>,
    /// First steps with `L1 >= sqrt(n)` and `L1 >= n / 2`.
    pub first_l1_sqrt: Option<u64>,
    pub first_l1_half: Option<u64>,
    /// Merges before `T_C` joining two components of size at least C.
    pub chunk_violations: u64,
    /// Half-restricted merges where both sides exceed the current alpha.
    pub alpha_violations: u64,
}

impl RunSummary {
    pub fn sqrt_to_half_window(&self) -> Option<u64> {
        Some(self.first_l1_half? - self.first_l1_sqrt?)
    }

    pub fn t_c(&self) -> Option<u64> {
        self.window.as_ref().and_then(|w| w.t_c)
    }
}

fn crossed_sqrt(l1: u32, n: usize) -> bool {
    (l1 as f64) >= (n as f64).sqrt()
}

fn crossed_half(l1: u32, n: usize) -> bool {
    2 * l1 as u64 >= n as u64
}

/// Runs one process. Points are recorded at step 0, every `record_every`
/// steps, at every step where alpha changes (half-restricted only) and at the
/// final step.
pub fn run_process(config: &ProcessConfig) -> Result<(TimeSeries, RunSummary)> {
    config.validate()?;
    let n = config.n;
    let mut proc = Process::new(config.kind, n, config.seed, config.options)?;
    let restricted = matches!(config.kind, ProcessKind::HalfRestricted { .. });

    let mut series = TimeSeries::new(n);
    series.comments = config.comments.clone();
    series.comments.push(format!(
        "process={} n={} seed={} max_steps={} record_every={}",
        config.kind, n, config.seed, config.max_steps, config.record_every
    ));

    let point = |proc: &Process, step: u64| TimeSeriesPoint {
        step,
        l1: proc.partition().largest_size(),
        alpha: proc.alpha(),
        n_components: proc.partition().component_count() as u64,
        n_edges: proc.partition().edge_count(),
    };
    series.points.push(point(&proc, 0));

    let mut t_k: Vec<(u32, Option<u64>)> = config.tracked_k.iter().map(|&k| (k, None)).collect();
    let window_steps = config
        .window
        .map(|w| (n as u64).div_ceil(w.d as u64))
        .unwrap_or(0);
    let mut window = config.window.map(|params| WindowReport {
        params,
        t_c: None,
        l1_at_t_c: None,
        window_steps,
        l1_after_window: None,
        giant_target: match config.kind {
            ProcessKind::HalfRestricted { beta } => (1.0 - params.eps) * (1.0 - beta) * n as f64,
            _ => (1.0 - params.eps) * n as f64,
        },
    });
    let mut first_l1_sqrt = crossed_sqrt(1, n).then_some(0);
    let mut first_l1_half = crossed_half(1, n).then_some(0);
    let mut chunk_violations = 0;
    let mut alpha_violations = 0;

    let mut alpha = proc.alpha();
    let mut step = 0;
    while step < config.max_steps {
        let rec = proc.step()?;
        step = rec.step;
        let l1 = proc.partition().largest_size();
        let new_alpha = proc.alpha();

        if let Some(m) = rec.merge {
            let smaller = m.size_a.min(m.size_b);
            if restricted && smaller > alpha {
                alpha_violations += 1;
            }
            if let Some(w) = &window {
                if w.t_c.is_none() && alpha < w.params.c && smaller >= w.params.c {
                    chunk_violations += 1;
                }
            }
        }

        // The alpha drawn at step T + 1 is the alpha after step T, so the
        // first step after which it reaches k is T_k.
        for (k, found) in t_k.iter_mut() {
            if found.is_none() && new_alpha >= *k {
                *found = Some(step);
            }
        }
        if let Some(w) = window.as_mut() {
            if w.t_c.is_none() && new_alpha >= w.params.c {
                w.t_c = Some(step);
                w.l1_at_t_c = Some(l1);
            }
            if let Some(tc) = w.t_c {
                if w.l1_after_window.is_none() && step == tc + w.window_steps {
                    w.l1_after_window = Some(l1);
                }
            }
        }
        if first_l1_sqrt.is_none() && crossed_sqrt(l1, n) {
            first_l1_sqrt = Some(step);
        }
        if first_l1_half.is_none() && crossed_half(l1, n) {
            first_l1_half = Some(step);
        }

        let alpha_changed = new_alpha != alpha;
        debug_assert!(new_alpha >= alpha);
        alpha = new_alpha;

        let stop = config
            .stop_l1_frac
            .is_some_and(|f| l1 as f64 >= f * n as f64)
            || (config.stop_after_window
                && window.as_ref().is_some_and(|w| w.l1_after_window.is_some()));
        if step % config.record_every == 0
            || (restricted && alpha_changed)
            || stop
            || step == config.max_steps
        {
            series.points.push(point(&proc, step));
        }
        if stop {
            break;
        }
    }

    let summary = RunSummary {
        label: config.kind.label(),
        n,
        seed: config.seed,
        steps_run: step,
        t_k,
        final_l1: proc.partition().largest_size(),
        final_alpha: alpha,
        window,
        first_l1_sqrt,
        first_l1_half,
        chunk_violations,
        alpha_violations,
    };
    Ok((series, summary))
}

/// `T_k = max { T : alpha_T < k }` from alpha change points `(T, alpha_T)`,
/// listed in step order and starting at step 1. `Ok(None)` when alpha stays
/// below `k` throughout.
pub fn detect_t_k(alpha_trace: &[(u64, u32)], k: u32) -> Result<Option<u64>> {
    if k <= 1 {
        return Err(Error::EmptyThresholdSet);
    }
    Ok(alpha_trace
        .iter()
        .find(|&&(_, a)| a >= k)
        .map(|&(t, _)| t - 1))
}

/// Alpha change points `(T, alpha_T)` from a recorded series. A point at step
/// `S` holds the state after `S` steps, which is what step `S + 1` draws from.
pub fn alpha_trace(series: &TimeSeries) -> Vec<(u64, u32)> {
    let mut trace: Vec<(u64, u32)> = Vec::new();
    for p in &series.points {
        if trace.last().is_none_or(|&(_, a)| a != p.alpha) {
            trace.push((p.step + 1, p.alpha));
        }
    }
    trace
}

/// Steps between the first recorded `L1 >= sqrt(n)` and the first recorded
/// `L1 >= n / 2`.
pub fn sqrt_to_half_window(series: &TimeSeries, n: usize) -> Option<u64> {
    let first =
        |pred: &dyn Fn(u32) -> bool| series.points.iter().find(|p| pred(p.l1)).map(|p| p.step);
    let sqrt = first(&|l| crossed_sqrt(l, n))?;
    let half = first(&|l| crossed_half(l, n))?;
    Some(half - sqrt)
}

/// Runs a half-restricted process up to the end of the window after `T_C`.
pub fn explosive_window(config: &ProcessConfig) -> Result<WindowReport> {
    if !matches!(config.kind, ProcessKind::HalfRestricted { .. }) {
        return Err(Error::InvalidConfig(
            "window runs need the half-restricted process".into(),
        ));
    }
    if config.window.is_none() {
        return Err(Error::InvalidConfig(
            "window runs need K, C, D and eps".into(),
        ));
    }
    let mut config = config.clone();
    config.stop_after_window = true;
    let (_, summary) = run_process(&config)?;
    Ok(summary.window.expect("window configured"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let mid = v.len() / 2;
        let median = if v.len() % 2 == 1 {
            v[mid]
        } else {
            (v[mid - 1] + v[mid]) / 2.0
        };
        Some(Self {
            min: v[0],
            median,
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleRun {
    pub seed: u64,
    pub outcome: std::result::Result<(TimeSeries, RunSummary), String>,
}

#[derive(Clone, Debug)]
pub struct EnsembleSummary {
    pub runs: Vec<EnsembleRun>,
}

impl EnsembleSummary {
    pub fn summaries(&self) -> impl Iterator<Item = &RunSummary> {
        self.runs
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(|(_, s)| s))
    }

    pub fn final_l1(&self) -> Option<Spread> {
        Spread::of(self.summaries().map(|s| s.final_l1 as f64))
    }

    pub fn t_c(&self) -> Option<Spread> {
        Spread::of(self.summaries().filter_map(|s| s.t_c()).map(|t| t as f64))
    }

    pub fn l1_at_t_c(&self) -> Option<Spread> {
        Spread::of(
            self.summaries()
                .filter_map(|s| s.window.as_ref()?.l1_at_t_c)
                .map(f64::from),
        )
    }

    pub fn l1_after_window(&self) -> Option<Spread> {
        Spread::of(
            self.summaries()
                .filter_map(|s| s.window.as_ref()?.l1_after_window)
                .map(f64::from),
        )
    }
}

/// Runs `config` once per seed. Results are in seed-list order whatever the
/// scheduling; a failing seed does not abort the others.
pub fn run_ensemble(config: &ProcessConfig, seeds: &[u64]) -> Result<EnsembleSummary> {
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("seed list is empty".into()));
    }
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = config.clone();
            cfg.seed = seed;
            EnsembleRun {
                seed,
                outcome: run_process(&cfg).map_err(|e| e.to_string()),
            }
        })
        .collect();
    Ok(EnsembleSummary { runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::AchlioptasRule;

    fn hr(beta: f64, n: usize, steps: u64, seed: u64) -> ProcessConfig {
        ProcessConfig::new(ProcessKind::HalfRestricted { beta }, n, steps, seed)
    }

    #[test]
    fn t_k_examples() {
        assert_eq!(detect_t_k(&[(1, 1)], 2).unwrap(), None);
        assert_eq!(detect_t_k(&[(1, 1), (17, 3)], 2).unwrap(), Some(16));
        assert_eq!(detect_t_k(&[(1, 1), (17, 3)], 3).unwrap(), Some(16));
        assert_eq!(detect_t_k(&[(1, 1), (17, 3)], 4).unwrap(), None);
        assert!(matches!(
            detect_t_k(&[(1, 1)], 1),
            Err(Error::EmptyThresholdSet)
        ));
    }

    #[test]
    fn window_metric_examples() {
        let mut s = TimeSeries::new(10_000);
        s.points.push(TimeSeriesPoint {
            step: 0,
            l1: 1,
            alpha: 1,
            n_components: 10_000,
            n_edges: 0,
        });
        assert_eq!(sqrt_to_half_window(&s, 10_000), None);
        for (step, l1) in [(100, 100), (250, 5000)] {
            s.points.push(TimeSeriesPoint {
                step,
                l1,
                alpha: 1,
                n_components: 1,
                n_edges: 0,
            });
        }
        assert_eq!(sqrt_to_half_window(&s, 10_000), Some(150));
    }

    #[test]
    fn default_parameters() {
        let w = WindowParams::defaults_for(1_000_000);
        assert!((w.k_bound - 190.87).abs() < 0.01);
        // ln ln ln 10^6 = 0.965, raised to the smallest admissible C.
        assert_eq!(w.c, 2);
        assert_eq!(w.d, 1);
        assert_eq!(default_c(100_000_000), 2);
        assert_eq!(default_c(usize::MAX), 2);
        assert_eq!(default_d(10), 3);
    }

    #[test]
    fn config_validation() {
        let mut c = hr(0.5, 100, 10, 0);
        assert!(c.validate().is_ok());
        c.tracked_k = vec![3, 2];
        assert!(c.validate().is_err());
        c.tracked_k = vec![1, 2];
        assert!(matches!(c.validate(), Err(Error::EmptyThresholdSet)));
        c.tracked_k = vec![2, 5];
        c.record_every = 0;
        assert!(c.validate().is_err());
        c.record_every = 1;
        c.window = Some(WindowParams {
            k_bound: 10.0,
            c: 1,
            d: 1,
            eps: 0.1,
        });
        assert!(c.validate().is_err());
        assert!(hr(0.0, 100, 10, 0).validate().is_err());
        assert!(hr(0.5, 100, 0, 0).validate().is_err());
    }

    #[test]
    fn full_beta_alpha_equals_l1() {
        let mut c = hr(1.0, 1000, 2000, 3);
        c.record_every = 7;
        let (series, _) = run_process(&c).unwrap();
        assert!(series.points.iter().all(|p| p.alpha == p.l1));
    }

    #[test]
    fn online_t_k_matches_brute_force_scan() {
        let n = 3000;
        let mut c = hr(0.5, n, 2 * n as u64, 21);
        c.tracked_k = vec![2, 3, 5, 8, 20, 100];
        c.record_every = 1;
        let (series, summary) = run_process(&c).unwrap();

        // Brute force: alpha_T for every step T directly from the process.
        let mut proc = Process::new(c.kind, n, c.seed, c.options).unwrap();
        let mut alphas = Vec::new();
        for _ in 0..c.max_steps {
            alphas.push(proc.alpha());
            proc.step().unwrap();
        }
        // alpha after the last step is what a further step would draw from.
        alphas.push(proc.alpha());
        let trace = alpha_trace(&series);
        let mut prev = None;
        for &(k, found) in &summary.t_k {
            let brute = alphas
                .iter()
                .enumerate()
                .filter(|(_, &a)| a < k)
                .map(|(i, _)| i as u64 + 1)
                .max();
            // Reached iff some alpha_T within the run is at least k.
            let reached = alphas.iter().any(|&a| a >= k);
            assert_eq!(found, if reached { brute } else { None }, "k={k}");
            assert_eq!(detect_t_k(&trace, k).unwrap(), found, "k={k}");
            if let (Some(p), Some(f)) = (prev, found) {
                assert!(f >= p);
            }
            prev = found.or(prev);
        }
    }

    #[test]
    fn half_restricted_traces_are_monotone() {
        let (series, summary) = run_process(&hr(0.25, 5000, 10_000, 8)).unwrap();
        for w in series.points.windows(2) {
            assert!(w[1].l1 >= w[0].l1 && w[1].alpha >= w[0].alpha);
        }
        for p in &series.points {
            assert!(p.l1 as usize <= 5000);
        }
        assert_eq!(summary.alpha_violations, 0);
    }

    #[test]
    fn window_report_and_chunk_invariant() {
        let n = 20_000;
        let mut c = hr(0.5, n, 6 * n as u64, 1);
        c.window = Some(WindowParams {
            k_bound: 200.0,
            c: 4,
            d: 2,
            eps: 0.1,
        });
        let w = explosive_window(&c).unwrap();
        let t_c = w.t_c.expect("alpha reaches 4");
        assert!(w.l1_at_t_c.is_some());
        assert!(w.l1_after_window.is_some());
        assert_eq!(w.window_steps, 10_000);

        let (_, summary) = run_process(&c).unwrap();
        assert_eq!(summary.chunk_violations, 0);
        assert_eq!(summary.t_c(), Some(t_c));
    }

    #[test]
    fn unreachable_c_reports_not_reached() {
        let mut c = hr(0.5, 500, 200, 4);
        c.window = Some(WindowParams {
            k_bound: 50.0,
            c: 400,
            d: 1,
            eps: 0.1,
        });
        let w = explosive_window(&c).unwrap();
        assert_eq!(w.t_c, None);
        assert_eq!(w.small_at_t_c(), None);
        assert!(!w.passes());
    }

    #[test]
    fn window_requires_half_restricted() {
        let mut c = ProcessConfig::new(ProcessKind::ErdosRenyi, 100, 100, 0);
        c.window = Some(WindowParams::defaults_for(100));
        assert!(explosive_window(&c).is_err());
    }

    #[test]
    fn ensemble_orders_by_seed_list() {
        let c = ProcessConfig::new(
            ProcessKind::Achlioptas(AchlioptasRule::MinSum),
            2000,
            1500,
            0,
        );
        let single = run_ensemble(&c, &[5]).unwrap();
        let direct = {
            let mut cc = c.clone();
            cc.seed = 5;
            run_process(&cc).unwrap().1
        };
        assert_eq!(single.summaries().next().unwrap(), &direct);

        let fwd = run_ensemble(&c, &[1, 2, 3]).unwrap();
        let rev = run_ensemble(&c, &[3, 2, 1]).unwrap();
        let f: Vec<_> = fwd.summaries().cloned().collect();
        let r: Vec<_> = rev.summaries().cloned().collect();
        assert_eq!(f[0], r[2]);
        assert_eq!(f[1], r[1]);
        assert_eq!(f[2], r[0]);
        assert!(run_ensemble(&c, &[]).is_err());
    }

    #[test]
    fn ensemble_reports_failures_per_seed() {
        // n = 3 is too small for an Achlioptas process; every seed fails alone.
        let c = ProcessConfig::new(ProcessKind::Achlioptas(AchlioptasRule::MinSum), 3, 5, 0);
        let e = run_ensemble(&c, &[1, 2]).unwrap();
        assert_eq!(e.runs.len(), 2);
        assert!(e.runs.iter().all(|r| r.outcome.is_err()));
    }

    #[test]
    fn stop_fraction_ends_early() {
        let mut c = ProcessConfig::new(ProcessKind::ErdosRenyi, 10_000, 50_000, 2);
        c.stop_l1_frac = Some(0.5);
        let (series, summary) = run_process(&c).unwrap();
        assert!(summary.steps_run < 50_000);
        assert!(2 * summary.final_l1 >= 10_000);
        assert_eq!(series.points.last().unwrap().step, summary.steps_run);
    }

    #[test]
    fn spread_median() {
        let s = Spread::of([3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.median, s.max), (1.0, 2.5, 10.0));
        assert!(Spread::of(std::iter::empty()).is_none());
    }
}
