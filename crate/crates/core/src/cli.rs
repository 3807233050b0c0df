//! Command-line front end. Exit status: 0 success, 1 computational error,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymfit::{collect_series, fit_growth, FitModel, FitResult, GrowthSeries};
use crate::invariant::{kashaev_invariant_with, EvalConfig, EvalMode, GrowthPoint, InvariantValue};
use crate::qdilog::{faddeev_s, li2, lobachevsky, QdParams};
use crate::saddle::{hyperbolic_volume, solve_stationary};
use crate::verify::run_suite;
use crate::{Error, KnotId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Printed after every usage error.
pub const GRAMMAR: &str = "\
Usage:
  knotvol invariant --knot {4_1|5_2|6_1} --n <int> [--n-max <int>] [--step <int>]
                    [--mode {direct|logscale|exact}] [--threads <int>] [--format {text|csv}] [--out <path>]
  knotvol volume --knot {4_1|5_2|6_1}
  knotvol fit --knot {4_1|5_2|6_1} --n-min <int> --n-max <int> [--step <int>]
              [--model {linear|linear_plus_log}] [--format {text|csv}] [--out <path>]
  knotvol fit --in <csv> [--model ...] [--format ...] [--out <path>]
  knotvol dilog --z <re,im>
  knotvol lobachevsky --theta <real>
  knotvol faddeev --gamma <real> --p <re,im>
  knotvol verify
";

#[derive(Debug, Parser)]
#[command(
    name = "knotvol",
    version,
    about = "Kashaev invariants and hyperbolic volumes of 4_1, 5_2, 6_1"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate <L> at one order, or a range of orders as CSV rows.
    Invariant(InvariantArgs),
    /// Stationary points and hyperbolic volume.
    Volume {
        #[arg(long)]
        knot: KnotId,
    },
    /// Fit log|<L>| = a N + b log N + c and report 2 pi a.
    Fit(FitArgs),
    /// Li2(z) on the principal branch.
    Dilog {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Lobachevsky's function.
    Lobachevsky {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Faddeev's quantum dilogarithm S_gamma(p).
    Faddeev {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        p: Complex64,
    },
    /// Run the identity suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long)]
    pub knot: KnotId,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Last order of a range starting at --n.
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub step: u64,
    #[arg(long, default_value = "logscale")]
    pub mode: EvalMode,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, required_unless_present = "input")]
    pub knot: Option<KnotId>,
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    pub n_min: Option<u64>,
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub step: u64,
    #[arg(long, default_value = "linear_plus_log")]
    pub model: FitModel,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// CSV written by `invariant --format csv`.
    #[arg(long = "in", id = "input")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A complex number written `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad real part {re:?}: {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// One CSV row of `invariant --format csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub knot: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub mode: String,
    /// Empty when the value overflows f64.
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub log_abs: f64,
    pub two_pi_log_abs_over_n: f64,
    pub term_count: u64,
    pub accum_error: f64,
}

pub const CSV_HEADER: &str =
    "knot,N,mode,re,im,log_abs,two_pi_log_abs_over_N,term_count,accum_error";

impl CsvRow {
    pub fn from_value(v: &InvariantValue) -> Self {
        let plain = v.plain();
        CsvRow {
            knot: v.knot.name().to_string(),
            n: v.order,
            mode: v.mode.name().to_string(),
            re: plain.map(|c| c.re),
            im: plain.map(|c| c.im),
            log_abs: v.log_abs(),
            two_pi_log_abs_over_n: v.volume_ratio(),
            term_count: v.term_count,
            accum_error: v.accum_error_estimate,
        }
    }
}

/// Writes rows with the fixed header. Floats use shortest round-trip form.
pub fn write_csv<W: Write>(rows: &[CsvRow], w: W) -> Result<(), Error> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER.split(','))
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        wtr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, Error> {
    let mut rdr =
        csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!(
            "unexpected CSV header {:?}",
            header.join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        rows.push(
            rec.deserialize(None)
                .map_err(|e| Error::Parse(e.to_string()))?,
        );
    }
    Ok(rows)
}

/// Growth series from CSV rows; all rows must share one knot.
pub fn series_from_rows(rows: &[CsvRow], knot: Option<KnotId>) -> Result<GrowthSeries, Error> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidSeries("CSV has no data rows".into()))?;
    let file_knot: KnotId = first.knot.parse()?;
    if let Some(k) = knot {
        if k != file_knot {
            return Err(Error::InvalidSeries(format!(
                "--knot {k} but the CSV holds {file_knot}"
            )));
        }
    }
    let mut pts = Vec::with_capacity(rows.len());
    for r in rows {
        if r.knot != first.knot {
            return Err(Error::InvalidSeries(format!(
                "mixed knots {} and {}",
                first.knot, r.knot
            )));
        }
        pts.push(GrowthPoint {
            n: r.n,
            log_abs: r.log_abs,
        });
    }
    GrowthSeries::new(file_knot, pts)
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(Error::Io(e.to_string()))
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}\n{GRAMMAR}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(config.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = write!(err, "error: {msg}\n\n{GRAMMAR}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_COMPUTE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Invariant(a) => invariant_cmd(a, out),
        Command::Volume { knot } => volume_cmd(knot, out),
        Command::Fit(a) => fit_cmd(a, out),
        Command::Dilog { z } => {
            let v = li2(z);
            writeln!(out, "Li2({}, {}) = {} {:+}i", z.re, z.im, v.re, v.im)?;
            Ok(EXIT_OK)
        }
        Command::Lobachevsky { theta } => {
            writeln!(out, "Lambda({theta}) = {}", lobachevsky(theta))?;
            Ok(EXIT_OK)
        }
        Command::Faddeev { gamma, p } => {
            let q = QdParams::new(gamma)?;
            let s = faddeev_s(&q, p)?;
            writeln!(
                out,
                "S_gamma({}, {}) = {} {:+}i   (gamma = {gamma})",
                p.re, p.im, s.re, s.im
            )?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let mut all = true;
            for c in run_suite() {
                all &= c.pass;
                let status = if c.pass { "PASS" } else { "FAIL" };
                match &c.error {
                    Some(e) => writeln!(out, "{status}  {:<36} error: {e}", c.name)?,
                    None => writeln!(
                        out,
                        "{status}  {:<36} {:.3e} (tol {:.0e})",
                        c.name, c.metric, c.tolerance
                    )?,
                }
            }
            Ok(if all { EXIT_OK } else { EXIT_COMPUTE })
        }
    }
}

fn with_output(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut file = io::BufWriter::new(
                File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            );
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn invariant_cmd(a: InvariantArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let n_max = a.n_max.unwrap_or(a.n);
    if n_max < a.n {
        return Err(Failure::Usage(format!(
            "--n-max {n_max} is below --n {}",
            a.n
        )));
    }
    let config = EvalConfig::new(a.mode).with_threads(a.threads as usize);
    let values = (a.n..=n_max)
        .step_by(a.step as usize)
        .map(|n| kashaev_invariant_with(a.knot, n, &config))
        .collect::<Result<Vec<_>, _>>()?;
    with_output(&a.out, out, |w| {
        match a.format {
            Format::Csv => {
                let rows: Vec<CsvRow> = values.iter().map(CsvRow::from_value).collect();
                write_csv(&rows, w)?;
            }
            Format::Text => {
                for v in &values {
                    write_invariant_text(v, w)?;
                }
            }
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

/// Shortest round-trip digits, switching to exponent form for large or tiny
/// magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn write_invariant_text(v: &InvariantValue, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "knot {}  N {}  mode {}", v.knot, v.order, v.mode)?;
    match v.plain() {
        Some(c) => {
            let sign = if c.im.is_sign_negative() { '-' } else { '+' };
            writeln!(
                w,
                "  value              {} {sign} {}i",
                num(c.re),
                num(c.im.abs())
            )?;
            writeln!(w, "  |<L>|              {}", num(c.norm()))?;
        }
        None => writeln!(
            w,
            "  value              exp({}) * exp({}i)",
            v.value.log_mag(),
            v.value.arg()
        )?,
    }
    writeln!(w, "  log|<L>|           {}", v.log_abs())?;
    writeln!(w, "  2 pi log|<L>| / N  {}", v.volume_ratio())?;
    writeln!(w, "  terms              {}", v.term_count)?;
    writeln!(w, "  accum error        {:e}", v.accum_error_estimate)
}

fn volume_cmd(knot: KnotId, out: &mut dyn Write) -> Result<i32, Failure> {
    let names = ["z", "u", "v"];
    writeln!(out, "knot {knot}: stationary points")?;
    for s in solve_stationary(knot)? {
        let coords: Vec<String> = s
            .point
            .iter()
            .zip(names)
            .map(|(c, n)| format!("{n} = {} {:+}i", c.re, c.im))
            .collect();
        let mark = if s.selected { "*" } else { " " };
        writeln!(
            out,
            " {mark} {}   residual {:.1e}",
            coords.join(", "),
            s.residual
        )?;
    }
    let v = hyperbolic_volume(knot)?;
    writeln!(
        out,
        "potential at * = {} {:+}i",
        v.potential_value.re, v.potential_value.im
    )?;
    writeln!(out, "V({knot}) = {:.8}", v.volume)?;
    Ok(EXIT_OK)
}

fn fit_cmd(a: FitArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let series = match &a.input {
        Some(path) => series_from_rows(&read_csv(path)?, a.knot)?,
        None => {
            let (knot, lo, hi) = (a.knot.unwrap(), a.n_min.unwrap(), a.n_max.unwrap());
            if lo < 2 || lo >= hi {
                return Err(Failure::Usage(format!(
                    "need 2 <= --n-min < --n-max, got {lo} and {hi}"
                )));
            }
            collect_series(knot, lo, hi, a.step)?
        }
    };
    let fit = fit_growth(&series, a.model)?;
    let saddle = hyperbolic_volume(series.knot())?.volume;
    with_output(&a.out, out, |w| {
        write_fit(&fit, saddle, a.format, w)?;
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn write_fit(fit: &FitResult, saddle: f64, format: Format, w: &mut dyn Write) -> io::Result<()> {
    let rel_gap = (fit.volume_estimate - saddle).abs() / saddle;
    match format {
        Format::Csv => {
            writeln!(
                w,
                "knot,model,n_min,n_max,a,b,c,rms_residual,volume_estimate,saddle_volume,rel_gap"
            )?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                fit.knot,
                fit.model,
                fit.window.0,
                fit.window.1,
                fit.a,
                fit.b,
                fit.c,
                fit.rms_residual,
                fit.volume_estimate,
                saddle,
                rel_gap
            )
        }
        Format::Text => {
            writeln!(
                w,
                "knot {}  model {}  N in [{}, {}]",
                fit.knot, fit.model, fit.window.0, fit.window.1
            )?;
            writeln!(w, "  log|<L>| = a N + b log N + c")?;
            writeln!(w, "  a = {}  b = {}  c = {}", fit.a, fit.b, fit.c)?;
            writeln!(w, "  rms residual     {:e}", fit.rms_residual)?;
            writeln!(w, "  volume estimate  {}", fit.volume_estimate)?;
            writeln!(w, "  saddle volume    {saddle}")?;
            writeln!(w, "  relative gap     {rel_gap:e}")
        }
    }
}
