//! Run time series on disk.
//!
//! ```text
//! # n=<n>
//! # <free-form comment lines>
//! step,frac_steps,L1,L1_frac,alpha,n_components,n_edges
//! ```
//!
//! `frac_steps = step / n` and `L1_frac = L1 / n`, rendered like C's `%.9g`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::EnsembleSummary;

pub const HEADER: &str = "step,frac_steps,L1,L1_frac,alpha,n_components,n_edges";
pub const ENSEMBLE_HEADER: &str = "seed,T_C,L1_at_TC,L1_after_window,window_sqrt_half";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeSeriesPoint {
    pub step: u64,
    pub l1: u32,
    pub alpha: u32,
    pub n_components: u64,
    pub n_edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeSeries {
    pub n: usize,
    pub comments: Vec<String>,
    pub points: Vec<TimeSeriesPoint>,
}

impl TimeSeries {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            comments: Vec::new(),
            points: Vec::new(),
        }
    }
}

/// Formats `x` with 9 significant digits the way `printf("%.9g")` does.
pub fn format_sig9(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..P).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_series(series, &mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn write_series(series: &TimeSeries, out: &mut impl Write) -> std::io::Result<()> {
    let n = series.n as f64;
    writeln!(out, "# n={}", series.n)?;
    for c in &series.comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{HEADER}")?;
    for p in &series.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.step,
            format_sig9(p.step as f64 / n),
            p.l1,
            format_sig9(p.l1 as f64 / n),
            p.alpha,
            p.n_components,
            p.n_edges
        )?;
    }
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<TimeSeries> {
    let file = File::open(path).map_err(io_err(path))?;
    let bad = |line: usize, message: String| Error::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut n = None;
    let mut comments = Vec::new();
    let mut points = Vec::new();
    let mut saw_header = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(io_err(path))?;
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.strip_prefix(' ').unwrap_or(comment);
            match comment.strip_prefix("n=") {
                Some(v) if n.is_none() => {
                    n = Some(
                        v.trim()
                            .parse::<usize>()
                            .map_err(|e| bad(lineno, format!("bad n: {e}")))?,
                    );
                }
                _ => comments.push(comment.to_string()),
            }
            continue;
        }
        if !saw_header {
            if line != HEADER {
                return Err(bad(
                    lineno,
                    format!("expected header `{HEADER}`, found `{line}`"),
                ));
            }
            saw_header = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(
                lineno,
                format!("expected 7 fields, found {}", fields.len()),
            ));
        }
        fn int<T: std::str::FromStr>(s: &str, name: &str) -> std::result::Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            s.parse::<T>().map_err(|e| format!("{name} `{s}`: {e}"))
        }
        fn real(s: &str, name: &str) -> std::result::Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("{name} `{s}`: {e}"))
        }
        let parsed = (|| {
            real(fields[1], "frac_steps")?;
            real(fields[3], "L1_frac")?;
            Ok::<_, String>(TimeSeriesPoint {
                step: int(fields[0], "step")?,
                l1: int(fields[2], "L1")?,
                alpha: int(fields[4], "alpha")?,
                n_components: int(fields[5], "n_components")?,
                n_edges: int(fields[6], "n_edges")?,
            })
        })();
        points.push(parsed.map_err(|m| bad(lineno, m))?);
    }
    if !saw_header {
        return Err(bad(0, "missing header".into()));
    }
    let n = n.ok_or_else(|| bad(0, "missing `# n=` line".into()))?;
    Ok(TimeSeries {
        n,
        comments,
        points,
    })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// One row per seed, in seed-list order; failed or unreached values are `NA`.
pub fn write_ensemble_csv(summary: &EnsembleSummary, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(out, "{ENSEMBLE_HEADER}")?;
        for run in &summary.runs {
            let s = run.outcome.as_ref().ok().map(|(_, s)| s);
            let w = s.and_then(|s| s.window.as_ref());
            writeln!(
                out,
                "{},{},{},{},{}",
                run.seed,
                opt(w.and_then(|w| w.t_c)),
                opt(w.and_then(|w| w.l1_at_t_c)),
                opt(w.and_then(|w| w.l1_after_window)),
                opt(s.and_then(|s| s.sqrt_to_half_window())),
            )?;
        }
        out.flush()
    };
    body().map_err(io_err(path))
}
