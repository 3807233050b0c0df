//! Floating-point evaluation of the state sums
//!
//! ```text
//! ⟨4_1⟩ = Σ_k |(ω)_k|²
//! ⟨5_2⟩ = Σ_{k≤l} (ω)_l² / (ω)_k* · ω^{−k(l+1)}
//! ⟨6_1⟩ = Σ_{k+l≤m} |(ω)_m|² / ((ω)_k (ω)_l*) · ω^{(m−k−l)(m−k+1)}
//! ```
//!
//! with all indices in 0..N. Terms are enumerated lexicographically with `k`
//! outermost. The outer range is cut into fixed chunks of `chunk_size`
//! indices; each chunk is summed sequentially and the chunk partials are
//! merged over a fixed binary tree, so the result is bit-identical for any
//! number of worker threads.

mod accum;
mod logcomplex;
mod pochhammer;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

pub use accum::{tree_reduce, NeumaierSum, ScaledSum};
pub use logcomplex::{wrap_angle, LogComplex, F64_LOG_MAX};
pub use pochhammer::PochhammerTable;

use crate::cyclo;
use crate::{Error, KnotId, Result};

/// Direct mode refuses tables with |ln|(ω)_k|| above this.
pub const DIRECT_LOG_MAG_LIMIT: f64 = 600.0;

/// Outer summation indices per chunk unless configured otherwise.
pub const DEFAULT_CHUNK_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalMode {
    /// Plain complex products and sums.
    Direct,
    /// Log-polar terms with rescaled accumulation; never overflows.
    Logscale,
    /// Exact arithmetic in Q(ω), evaluated numerically at the end.
    Exact,
}

impl EvalMode {
    pub fn name(self) -> &'static str {
        match self {
            EvalMode::Direct => "direct",
            EvalMode::Logscale => "logscale",
            EvalMode::Exact => "exact",
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "direct" => Ok(EvalMode::Direct),
            "logscale" => Ok(EvalMode::Logscale),
            "exact" => Ok(EvalMode::Exact),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub mode: EvalMode,
    /// Worker threads; 0 and 1 both mean run on the calling thread.
    pub threads: usize,
    pub chunk_size: usize,
}

impl EvalConfig {
    pub fn new(mode: EvalMode) -> Self {
        EvalConfig {
            mode,
            threads: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size;
        self
    }
}

/// ⟨L⟩ at one order N, with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantValue {
    pub knot: KnotId,
    pub order: u64,
    pub value: LogComplex,
    /// The f64 sum itself in direct and exact modes, before log-polar
    /// conversion.
    pub plain_value: Option<Complex64>,
    pub mode: EvalMode,
    /// Number of lattice points actually summed.
    pub term_count: u64,
    /// Estimated relative accumulation error (zero in exact mode).
    pub accum_error_estimate: f64,
}

impl InvariantValue {
    /// The value as a plain complex number, if it fits in an `f64`.
    pub fn plain(&self) -> Option<Complex64> {
        self.plain_value.or_else(|| {
            self.value
                .is_representable()
                .then(|| self.value.to_complex())
        })
    }

    /// ln|⟨L⟩|.
    pub fn log_abs(&self) -> f64 {
        self.value.log_mag()
    }

    /// 2π·ln|⟨L⟩| / N, which tends to the hyperbolic volume.
    pub fn volume_ratio(&self) -> f64 {
        2.0 * PI * self.log_abs() / self.order as f64
    }
}

/// Evaluates ⟨knot⟩ at order `n` on the calling thread.
pub fn kashaev_invariant(knot: KnotId, n: u64, mode: EvalMode) -> Result<InvariantValue> {
    kashaev_invariant_with(knot, n, &EvalConfig::new(mode))
}

pub fn kashaev_invariant_with(knot: KnotId, n: u64, config: &EvalConfig) -> Result<InvariantValue> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if config.chunk_size == 0 {
        return Err(Error::InvalidArgument("chunk size must be positive".into()));
    }
    if config.mode == EvalMode::Exact {
        let x = cyclo::exact_invariant(knot, n)?.evaluate_numeric();
        return Ok(InvariantValue {
            knot,
            order: n,
            value: LogComplex::from_complex(x),
            plain_value: Some(x),
            mode: EvalMode::Exact,
            term_count: cyclo::term_count_formula(knot, n),
            accum_error_estimate: 0.0,
        });
    }

    let table = PochhammerTable::new(n)?;
    let direct = config.mode == EvalMode::Direct;
    if direct && table.max_abs_log_mag() > DIRECT_LOG_MAG_LIMIT {
        return Err(Error::DirectOverflow {
            order: n,
            detail: format!(
                "max |ln|(ω)_k|| = {:.1} exceeds {DIRECT_LOG_MAG_LIMIT}",
                table.max_abs_log_mag()
            ),
        });
    }

    let total = state_sum(knot, &table, config)?;
    if direct && !total.scaled_value().is_finite() {
        return Err(Error::DirectOverflow {
            order: n,
            detail: "the direct sum is not finite; use logscale mode".into(),
        });
    }
    Ok(InvariantValue {
        knot,
        order: n,
        value: total.value(),
        plain_value: direct.then(|| total.scaled_value()),
        mode: config.mode,
        term_count: total.terms(),
        accum_error_estimate: total.relative_error_estimate(),
    })
}

fn state_sum(knot: KnotId, table: &PochhammerTable, config: &EvalConfig) -> Result<ScaledSum> {
    let n = table.len();
    let chunk = config.chunk_size;
    let n_chunks = n.div_ceil(chunk);
    let direct = config.mode == EvalMode::Direct;
    let run_chunk = |c: usize| {
        let mut acc = if direct {
            ScaledSum::direct()
        } else {
            ScaledSum::logscale()
        };
        for k in c * chunk..((c + 1) * chunk).min(n) {
            if direct {
                outer_direct(knot, table, k, &mut acc);
            } else {
                outer_logscale(knot, table, k, &mut acc);
            }
        }
        acc
    };

    let partials: Vec<ScaledSum> = if config.threads <= 1 {
        (0..n_chunks).map(run_chunk).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| (0..n_chunks).into_par_iter().map(run_chunk).collect())
    };
    Ok(tree_reduce(partials).expect("N >= 1 gives at least one chunk"))
}

/// ω-exponent −k(l+1) mod N.
#[inline]
fn exponent_five_two(k: usize, l: usize, n: usize) -> usize {
    let e = ((k as u64 * (l as u64 + 1)) % n as u64) as usize;
    (n - e) % n
}

/// ω-exponent (m−k−l)(m−k+1) mod N.
#[inline]
fn exponent_six_one(k: usize, l: usize, m: usize, n: usize) -> usize {
    (((m - k - l) as u64 * (m - k + 1) as u64) % n as u64) as usize
}

fn outer_logscale(knot: KnotId, t: &PochhammerTable, k: usize, acc: &mut ScaledSum) {
    let n = t.len();
    match knot {
        KnotId::FourOne => acc.push_log(2.0 * t.log_mag(k), Complex64::new(1.0, 0.0)),
        KnotId::FiveTwo => {
            // 1/(ω)_k* has the phase of (ω)_k
            let lk = t.log_mag(k);
            let uk = t.unit(k);
            for l in k..n {
                let ul = t.unit(l);
                let unit = ul * ul * uk * t.omega_pow(exponent_five_two(k, l, n));
                acc.push_log(2.0 * t.log_mag(l) - lk, unit);
            }
        }
        KnotId::SixOne => {
            let lk = t.log_mag(k);
            let uk = t.unit(k).conj();
            for l in 0..(n - k) {
                let base = lk + t.log_mag(l);
                let ukl = uk * t.unit(l);
                for m in (k + l)..n {
                    let unit = ukl * t.omega_pow(exponent_six_one(k, l, m, n));
                    acc.push_log(2.0 * t.log_mag(m) - base, unit);
                }
            }
        }
    }
}

fn outer_direct(knot: KnotId, t: &PochhammerTable, k: usize, acc: &mut ScaledSum) {
    let n = t.len();
    match knot {
        KnotId::FourOne => acc.push_plain(Complex64::new(t.plain(k).norm_sqr(), 0.0)),
        KnotId::FiveTwo => {
            let inv = t.plain(k).conj().inv();
            for l in k..n {
                let pl = t.plain(l);
                acc.push_plain(pl * pl * inv * t.omega_pow(exponent_five_two(k, l, n)));
            }
        }
        KnotId::SixOne => {
            let pk = t.plain(k);
            for l in 0..(n - k) {
                let inv = (pk * t.plain(l).conj()).inv();
                for m in (k + l)..n {
                    let abs2 = t.plain(m).norm_sqr();
                    acc.push_plain(inv * abs2 * t.omega_pow(exponent_six_one(k, l, m, n)));
                }
            }
        }
    }
}

/// One entry of the N = 2 comparison against Δ(−1).
#[derive(Debug, Clone, PartialEq)]
pub struct AlexanderRow {
    pub knot: KnotId,
    pub expected: u64,
    pub exact_abs: BigRational,
    pub direct_abs: f64,
    pub logscale_abs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlexanderReport {
    pub rows: Vec<AlexanderRow>,
    pub pass: bool,
}

/// Float modes must hit the integer Δ(−1) to within this at N = 2.
pub const ALEXANDER_FLOAT_TOL: f64 = 1e-12;

/// Checks |⟨L⟩| = Δ_L(−1) at N = 2 for all three knots: exactly in Q(ω) and
/// to [`ALEXANDER_FLOAT_TOL`] in the float modes.
pub fn alexander_check() -> Result<AlexanderReport> {
    let mut rows = Vec::new();
    for knot in KnotId::ALL {
        let expected = knot.alexander_at_minus_one();
        let exact = cyclo::exact_invariant(knot, 2)?;
        let exact_abs = exact
            .as_rational()
            .map(|r| r.abs())
            .expect("Q(ω) = Q at N = 2");
        let direct_abs = kashaev_invariant(knot, 2, EvalMode::Direct)?
            .plain()
            .expect("direct values are plain")
            .norm();
        let logscale_abs = kashaev_invariant(knot, 2, EvalMode::Logscale)?
            .value
            .log_mag()
            .exp();
        let e = expected as f64;
        let pass = exact_abs == BigRational::from_integer(expected.into())
            && (direct_abs - e).abs() <= ALEXANDER_FLOAT_TOL
            && (logscale_abs - e).abs() <= ALEXANDER_FLOAT_TOL;
        rows.push(AlexanderRow {
            knot,
            expected,
            exact_abs,
            direct_abs,
            logscale_abs,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(AlexanderReport { rows, pass })
}

/// `(N, ln|⟨L⟩|)` for growth-rate fitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthPoint {
    pub n: u64,
    pub log_abs: f64,
}

pub fn growth_point(knot: KnotId, n: u64) -> Result<GrowthPoint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "growth points need N >= 2, got {n}"
        )));
    }
    let v = kashaev_invariant(knot, n, EvalMode::Logscale)?;
    Ok(GrowthPoint {
        n,
        log_abs: v.log_abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn small_orders() {
        let v = kashaev_invariant(KnotId::FourOne, 1, EvalMode::Direct).unwrap();
        assert_eq!(v.plain().unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(v.term_count, 1);

        for (knot, x) in [
            (KnotId::FourOne, 5.0),
            (KnotId::FiveTwo, 7.0),
            (KnotId::SixOne, 9.0),
        ] {
            for mode in [EvalMode::Direct, EvalMode::Logscale, EvalMode::Exact] {
                let v = kashaev_invariant(knot, 2, mode).unwrap();
                assert!((v.value.log_mag().exp() - x).abs() < 1e-12, "{knot} {mode}");
            }
        }
        let v = kashaev_invariant(KnotId::FourOne, 3, EvalMode::Logscale).unwrap();
        assert!(rel(v.plain().unwrap(), Complex64::new(13.0, 0.0)) < 1e-10);
    }

    #[test]
    fn term_counts_are_lattice_point_counts() {
        for n in [1u64, 2, 3, 7, 16] {
            for knot in KnotId::ALL {
                let v = kashaev_invariant(knot, n, EvalMode::Logscale).unwrap();
                assert_eq!(
                    v.term_count,
                    cyclo::term_count_formula(knot, n),
                    "{knot} N={n}"
                );
            }
        }
        let v = kashaev_invariant(KnotId::SixOne, 5, EvalMode::Direct).unwrap();
        assert_eq!(v.term_count, 35);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            kashaev_invariant(KnotId::FourOne, 0, EvalMode::Direct).unwrap_err(),
            Error::InvalidOrder(0)
        );
        let cfg = EvalConfig::new(EvalMode::Logscale).with_chunk_size(0);
        assert!(kashaev_invariant_with(KnotId::FourOne, 5, &cfg).is_err());
    }

    #[test]
    fn direct_mode_refuses_large_tables() {
        // max ln|(ω)_k| ~ 0.16 N
        let err = kashaev_invariant(KnotId::FourOne, 5000, EvalMode::Direct).unwrap_err();
        assert!(matches!(err, Error::DirectOverflow { order: 5000, .. }));
        let v = kashaev_invariant(KnotId::FourOne, 5000, EvalMode::Logscale).unwrap();
        assert!(v.log_abs().is_finite() && v.log_abs() > 700.0);
        assert!(v.plain().is_none());
    }

    #[test]
    fn figure_eight_is_real_and_positive() {
        for n in 1..=500 {
            let v = kashaev_invariant(KnotId::FourOne, n, EvalMode::Logscale).unwrap();
            let z = v.plain().unwrap();
            assert!(z.re > 0.0 && z.im.abs() <= 1e-9 * z.re, "N={n}: {z}");
        }
    }

    #[test]
    fn modes_agree() {
        for n in 1..=100 {
            for knot in KnotId::ALL {
                let d = kashaev_invariant(knot, n, EvalMode::Direct).unwrap();
                let l = kashaev_invariant(knot, n, EvalMode::Logscale).unwrap();
                let r = rel(l.plain().unwrap(), d.plain().unwrap());
                assert!(r <= 1e-9, "{knot} N={n}: {r:e}");
            }
        }
    }

    #[test]
    fn figure_eight_grows_monotonically() {
        let mut prev = f64::NEG_INFINITY;
        for n in 2..=500 {
            let g = growth_point(KnotId::FourOne, n).unwrap();
            assert!(g.log_abs > prev, "N={n}");
            prev = g.log_abs;
        }
    }

    #[test]
    fn growth_points() {
        let g = growth_point(KnotId::FourOne, 2).unwrap();
        assert!((g.log_abs - 5f64.ln()).abs() < 1e-12);
        let g = growth_point(KnotId::FourOne, 3).unwrap();
        assert!((g.log_abs - 13f64.ln()).abs() < 1e-12);
        assert!(growth_point(KnotId::FourOne, 1).is_err());

        // raw ratio, before any extrapolation
        let g = growth_point(KnotId::FourOne, 200).unwrap();
        let ratio = 2.0 * PI * g.log_abs / 200.0;
        assert!(
            (ratio - 2.029_883_212_819_307).abs() / 2.029_883_212_819_307 < 0.15,
            "{ratio}"
        );
    }

    #[test]
    fn alexander_values() {
        let report = alexander_check().unwrap();
        assert!(report.pass, "{report:?}");
        let got: Vec<u64> = report.rows.iter().map(|r| r.expected).collect();
        assert_eq!(got, vec![5, 7, 9]);
        for r in &report.rows {
            assert!((r.direct_abs - r.logscale_abs).abs() <= 1e-12);
            assert!((r.direct_abs - r.direct_abs.round()).abs() <= 1e-12);
        }
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        for knot in KnotId::ALL {
            let base =
                kashaev_invariant_with(knot, 37, &EvalConfig::new(EvalMode::Logscale)).unwrap();
            for threads in [2, 3, 8] {
                let cfg = EvalConfig::new(EvalMode::Logscale).with_threads(threads);
                let v = kashaev_invariant_with(knot, 37, &cfg).unwrap();
                assert_eq!(v.value.log_mag().to_bits(), base.value.log_mag().to_bits());
                assert_eq!(v.value.arg().to_bits(), base.value.arg().to_bits());
            }
        }
    }

    #[test]
    fn exponents_are_reduced() {
        assert_eq!(exponent_five_two(0, 5, 7), 0);
        assert_eq!(exponent_five_two(3, 4, 7), 6); // -15 mod 7
        assert_eq!(exponent_six_one(0, 0, 6, 7), 0); // 6*7
        assert_eq!(exponent_six_one(1, 1, 5, 7), 1); // 3*5
    }
}
