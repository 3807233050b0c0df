//! Growth-rate fits of log|⟨L⟩_N| against N.
//!
//! The model is log|⟨L⟩_N| ≈ a·N + b·log N + c, so that 2πa estimates the
//! hyperbolic volume.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::invariant::{growth_point, GrowthPoint};
use crate::saddle::hyperbolic_volume;
use crate::{Error, KnotId, Result};

/// Singular values of the scaled design below this (relative) mean rank loss.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    knot: KnotId,
    points: Vec<GrowthPoint>,
}

impl GrowthSeries {
    /// Sorts by N. Repeated N or non-finite values are rejected.
    pub fn new(knot: KnotId, mut points: Vec<GrowthPoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.log_abs.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite log_abs at N = {}",
                p.n
            )));
        }
        points.sort_by_key(|p| p.n);
        if let Some(w) = points.windows(2).find(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidSeries(format!(
                "N = {} appears twice",
                w[0].n
            )));
        }
        Ok(GrowthSeries { knot, points })
    }

    pub fn knot(&self) -> KnotId {
        self.knot
    }

    pub fn points(&self) -> &[GrowthPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// log|⟨L⟩_N| for N = n_min, n_min + step, … ≤ n_max, evaluated in parallel.
pub fn collect_series(knot: KnotId, n_min: u64, n_max: u64, step: u64) -> Result<GrowthSeries> {
    if n_min < 2 || n_min >= n_max || step == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n_min < n_max and step > 0, got [{n_min}, {n_max}] step {step}"
        )));
    }
    let ns: Vec<u64> = (n_min..=n_max).step_by(step as usize).collect();
    let points = ns
        .into_par_iter()
        .map(|n| growth_point(knot, n))
        .collect::<Result<Vec<_>>>()?;
    GrowthSeries::new(knot, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitModel {
    Linear,
    LinearPlusLog,
}

impl FitModel {
    pub fn name(self) -> &'static str {
        match self {
            FitModel::Linear => "linear",
            FitModel::LinearPlusLog => "linear_plus_log",
        }
    }

    fn min_points(self) -> usize {
        match self {
            FitModel::Linear => 2,
            FitModel::LinearPlusLog => 4,
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(FitModel::Linear),
            "linear_plus_log" => Ok(FitModel::LinearPlusLog),
            _ => Err(Error::Parse(format!("unknown fit model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub knot: KnotId,
    pub model: FitModel,
    pub a: f64,
    /// Zero for the linear model.
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
    /// 2π·a.
    pub volume_estimate: f64,
    /// (N_min, N_max) of the data.
    pub window: (u64, u64),
}

/// Ordinary least squares via Householder QR on a column-scaled design.
pub fn fit_growth(series: &GrowthSeries, model: FitModel) -> Result<FitResult> {
    let pts = series.points();
    if pts.len() < model.min_points() {
        return Err(Error::InvalidSeries(format!(
            "{model} needs at least {} points, got {}",
            model.min_points(),
            pts.len()
        )));
    }
    let cols = match model {
        FitModel::Linear => 2,
        FitModel::LinearPlusLog => 3,
    };
    let rows = pts.len();
    let mut x = DMatrix::<f64>::zeros(rows, cols);
    for (i, p) in pts.iter().enumerate() {
        let n = p.n as f64;
        x[(i, 0)] = n;
        x[(i, cols - 1)] = 1.0;
        if cols == 3 {
            x[(i, 1)] = n.ln();
        }
    }
    let y = DVector::from_iterator(rows, pts.iter().map(|p| p.log_abs));

    let scales: Vec<f64> = (0..cols).map(|j| x.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        x.column_mut(j).unscale_mut(*s);
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let diag_max = (0..cols).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    if (0..cols).any(|j| r[(j, j)].abs() <= RANK_TOL * diag_max) {
        return Err(Error::RankDeficient(format!(
            "{model} design over N in [{}, {}] is rank deficient",
            pts[0].n,
            pts[rows - 1].n
        )));
    }
    let qty = qr.q().transpose() * &y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient("triangular solve failed".into()))?;
    let coef: Vec<f64> = beta.iter().zip(&scales).map(|(b, s)| b / s).collect();

    let resid = &y - &x * &beta;
    let rms_residual = (resid.norm_squared() / rows as f64).sqrt();
    let (a, b, c) = match model {
        FitModel::Linear => (coef[0], 0.0, coef[1]),
        FitModel::LinearPlusLog => (coef[0], coef[1], coef[2]),
    };
    Ok(FitResult {
        knot: series.knot(),
        model,
        a,
        b,
        c,
        rms_residual,
        volume_estimate: 2.0 * std::f64::consts::PI * a,
        window: (pts[0].n, pts[rows - 1].n),
    })
}

/// An arithmetic progression of orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitWindow {
    pub n_min: u64,
    pub n_max: u64,
    pub step: u64,
}

impl FitWindow {
    pub fn new(n_min: u64, n_max: u64, step: u64) -> Self {
        FitWindow { n_min, n_max, step }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainClaimReport {
    pub knot: KnotId,
    pub fit: FitResult,
    pub saddle_volume: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    /// Fit over [2·N_min, N_max].
    pub shifted_fit: FitResult,
    pub shifted_rel_gap: f64,
    /// shifted_rel_gap < rel_gap.
    pub gap_shrinks: bool,
}

/// Compares the linear_plus_log growth fit with the saddle-point volume.
pub fn main_claim_report(knot: KnotId, window: FitWindow) -> Result<MainClaimReport> {
    main_claim_report_with(knot, window, FitModel::LinearPlusLog)
}

pub fn main_claim_report_with(
    knot: KnotId,
    window: FitWindow,
    model: FitModel,
) -> Result<MainClaimReport> {
    let saddle_volume = hyperbolic_volume(knot)?.volume;
    let series = collect_series(knot, window.n_min, window.n_max, window.step)?;
    let fit = fit_growth(&series, model)?;

    let shifted_min = 2 * window.n_min;
    let shifted: Vec<GrowthPoint> = series
        .points()
        .iter()
        .filter(|p| p.n >= shifted_min)
        .cloned()
        .collect();
    let shifted_fit = fit_growth(&GrowthSeries::new(knot, shifted)?, model)?;

    let abs_gap = (fit.volume_estimate - saddle_volume).abs();
    let rel_gap = abs_gap / saddle_volume;
    let shifted_rel_gap = (shifted_fit.volume_estimate - saddle_volume).abs() / saddle_volume;
    Ok(MainClaimReport {
        knot,
        fit,
        saddle_volume,
        abs_gap,
        rel_gap,
        shifted_fit,
        shifted_rel_gap,
        gap_shrinks: shifted_rel_gap < rel_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn synthetic(f: impl Fn(f64) -> f64, ns: impl Iterator<Item = u64>) -> GrowthSeries {
        let pts = ns
            .map(|n| GrowthPoint {
                n,
                log_abs: f(n as f64),
            })
            .collect();
        GrowthSeries::new(KnotId::FourOne, pts).unwrap()
    }

    #[test]
    fn recovers_exact_linear_data() {
        let s = synthetic(|n| 0.3230 * n, (10..=100).step_by(10));
        for model in [FitModel::Linear, FitModel::LinearPlusLog] {
            let f = fit_growth(&s, model).unwrap();
            assert!((f.a - 0.3230).abs() < 1e-12);
            assert!(f.b.abs() < 1e-12 && f.c.abs() < 1e-12, "{f:?}");
            assert_eq!(f.volume_estimate, 2.0 * std::f64::consts::PI * f.a);
        }
    }

    #[test]
    fn recovers_exact_log_model() {
        let s = synthetic(|n| 0.5 * n + 1.5 * n.ln() - 2.0, (5..=300).step_by(7));
        let f = fit_growth(&s, FitModel::LinearPlusLog).unwrap();
        assert!((f.a - 0.5).abs() < 1e-10);
        assert!((f.b - 1.5).abs() < 1e-10);
        assert!((f.c + 2.0).abs() < 1e-10);
        assert!(f.rms_residual < 1e-10);
        assert_eq!(f.window, (5, 299));
    }

    #[test]
    fn too_few_points_or_rank_deficiency() {
        let s = synthetic(|n| n, [3, 4, 5].into_iter());
        assert!(matches!(
            fit_growth(&s, FitModel::LinearPlusLog),
            Err(Error::InvalidSeries(_))
        ));
        assert!(fit_growth(&s, FitModel::Linear).is_ok());
        let single = synthetic(|n| n, [3].into_iter());
        assert!(fit_growth(&single, FitModel::Linear).is_err());
    }

    #[test]
    fn series_validation() {
        let p = |n, v| GrowthPoint { n, log_abs: v };
        assert!(GrowthSeries::new(KnotId::FourOne, vec![p(3, 1.0), p(3, 2.0)]).is_err());
        assert!(GrowthSeries::new(KnotId::FourOne, vec![p(3, f64::NAN)]).is_err());
        let s = GrowthSeries::new(KnotId::FourOne, vec![p(5, 1.0), p(3, 2.0)]).unwrap();
        assert_eq!(s.points()[0].n, 3);
    }

    #[test]
    fn collect_small_series() {
        let s = collect_series(KnotId::FourOne, 2, 4, 1).unwrap();
        let v: Vec<f64> = s.points().iter().map(|p| p.log_abs).collect();
        assert!((v[0] - 5f64.ln()).abs() < 1e-12);
        assert!((v[1] - 13f64.ln()).abs() < 1e-12);
        // N = 4: 1 + |1−i|² + |(1−i)(2)|² + |(1−i)(2)(1+i)|² = 1 + 2 + 8 + 16
        assert!((v[2] - 27f64.ln()).abs() < 1e-12);

        let s = collect_series(KnotId::SixOne, 10, 30, 10).unwrap();
        assert_eq!(s.len(), 3);
        assert!(collect_series(KnotId::FourOne, 5, 5, 1).is_err());
        assert!(collect_series(KnotId::FourOne, 1, 5, 1).is_err());
        assert!(collect_series(KnotId::FourOne, 2, 5, 0).is_err());
    }

    #[test]
    fn log_model_fits_real_data_no_worse() {
        let s = collect_series(KnotId::FiveTwo, 10, 60, 5).unwrap();
        let lin = fit_growth(&s, FitModel::Linear).unwrap();
        let log = fit_growth(&s, FitModel::LinearPlusLog).unwrap();
        assert!(log.rms_residual <= lin.rms_residual);
    }

    #[test]
    fn figure_eight_window_shrink() {
        let saddle = hyperbolic_volume(KnotId::FourOne).unwrap().volume;
        let gap = |lo| {
            let s = collect_series(KnotId::FourOne, lo, 300, 10).unwrap();
            (fit_growth(&s, FitModel::LinearPlusLog)
                .unwrap()
                .volume_estimate
                - saddle)
                .abs()
        };
        assert!(gap(100) <= gap(50));
    }

    proptest! {
        #[test]
        fn fit_is_invariant_under_reordering(seed in any::<u64>(), noise in 0.0f64..0.5) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let pts: Vec<GrowthPoint> = (4..40u64)
                .map(|n| GrowthPoint { n, log_abs: 0.3 * n as f64 + noise * rng.gen_range(-1.0..1.0) })
                .collect();
            let mut shuffled = pts.clone();
            shuffled.shuffle(&mut rng);
            for model in [FitModel::Linear, FitModel::LinearPlusLog] {
                let a = fit_growth(&GrowthSeries::new(KnotId::FiveTwo, pts.clone()).unwrap(), model).unwrap();
                let b = fit_growth(&GrowthSeries::new(KnotId::FiveTwo, shuffled.clone()).unwrap(), model).unwrap();
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn log_model_never_worse(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let pts: Vec<GrowthPoint> = (4..30u64)
                .map(|n| GrowthPoint { n, log_abs: rng.gen_range(-5.0..5.0) })
                .collect();
            let s = GrowthSeries::new(KnotId::SixOne, pts).unwrap();
            let lin = fit_growth(&s, FitModel::Linear).unwrap();
            let log = fit_growth(&s, FitModel::LinearPlusLog).unwrap();
            prop_assert!(log.rms_residual <= lin.rms_residual * (1.0 + 1e-12));
        }
    }
}
