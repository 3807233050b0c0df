//! Identity checks shared by the `verify` command and the acceptance suite.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cyclo::exact_invariant;
use crate::invariant::{alexander_check, kashaev_invariant, EvalMode};
use crate::qdilog::{
    f_bar_gamma, f_gamma, faddeev_s, im_li2_polar, li2, lobachevsky, PolarPoint, QdParams,
};
use crate::saddle::{hyperbolic_volume, potential_gradient};
use crate::{KnotId, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// Worst observed deviation.
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Error text when the check could not run.
    pub error: Option<String>,
}

impl CheckResult {
    fn from_metric(name: impl Into<String>, metric: Result<f64>, tolerance: f64) -> Self {
        let name = name.into();
        match metric {
            Ok(m) => CheckResult {
                name,
                metric: m,
                tolerance,
                pass: m <= tolerance,
                error: None,
            },
            Err(e) => CheckResult {
                name,
                metric: f64::NAN,
                tolerance,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }
}

/// The 20 real sample points in (−π + γ, π − γ) used for the functional
/// equation.
pub fn funeq_samples(gamma: f64) -> Vec<f64> {
    (0..20)
        .map(|i| -PI + gamma + 2.0 * (PI - gamma) * (i as f64 + 0.5) / 20.0)
        .collect()
}

/// max |(1 + e^{ip}) S(p + γ) − S(p − γ)| / |S(p − γ)| over [`funeq_samples`].
pub fn funeq_residual(gamma: f64) -> Result<f64> {
    let q = QdParams::new(gamma)?;
    let mut worst = 0.0f64;
    for p in funeq_samples(gamma) {
        let lhs =
            (1.0 + Complex64::new(0.0, p).exp()) * faddeev_s(&q, Complex64::new(p + gamma, 0.0))?;
        let rhs = faddeev_s(&q, Complex64::new(p - gamma, 0.0))?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(worst)
}

/// max over k of |f_γ(p_k) − (ω)_k| and |f̄_γ(p_k) − (ω)_k*| with γ = π/N and
/// p_k = −π + γ + 2kγ. (ω)_k is the plain running product.
pub fn anal_deviation(n: u64) -> Result<f64> {
    let q = QdParams::for_order(n)?;
    let gamma = q.gamma();
    let mut poch = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for k in 0..n {
        if k > 0 {
            poch *= 1.0 - Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        }
        let p = Complex64::new(-PI + gamma + 2.0 * k as f64 * gamma, 0.0);
        worst = worst
            .max((f_gamma(&q, p)? - poch).norm())
            .max((f_bar_gamma(&q, p)? - poch.conj()).norm());
    }
    Ok(worst)
}

/// Worst relative deviation of `mode` from the exact cyclotomic value over
/// all knots and 1 ≤ N ≤ `n_max`.
pub fn oracle_deviation(mode: EvalMode, n_max: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for knot in KnotId::ALL {
        for n in 1..=n_max {
            let exact = exact_invariant(knot, n)?.evaluate_numeric();
            let v = kashaev_invariant(knot, n, mode)?
                .plain()
                .expect("small orders are representable");
            worst = worst.max((v - exact).norm() / exact.norm());
        }
    }
    Ok(worst)
}

/// Worst relative gap between direct and logscale sums, all knots, N ≤ `n_max`.
pub fn direct_logscale_deviation(n_max: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for knot in KnotId::ALL {
        for n in 1..=n_max {
            let d = kashaev_invariant(knot, n, EvalMode::Direct)?
                .plain()
                .expect("direct is plain");
            let l = kashaev_invariant(knot, n, EvalMode::Logscale)?
                .plain()
                .expect("small orders are representable");
            worst = worst.max((d - l).norm() / l.norm());
        }
    }
    Ok(worst)
}

/// Grid r ∈ {0.1, …, 1.0} × θ ∈ {0.1, …, 3.0}: worst |polar formula − Im Li₂|.
pub fn polar_grid_deviation() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..=10 {
        for j in 1..=30 {
            let (r, t) = (i as f64 / 10.0, j as f64 / 10.0);
            let a = im_li2_polar(PolarPoint::new(r, t)?)?;
            let b = li2(Complex64::from_polar(r, t)).im;
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Pairwise spread of the saddle volume of 4_1, 4Λ(π/6) and 2 Im Li₂(e^{iπ/3}).
pub fn figure_eight_routes() -> Result<[f64; 3]> {
    Ok([
        hyperbolic_volume(KnotId::FourOne)?.volume,
        4.0 * lobachevsky(PI / 6.0),
        2.0 * li2(Complex64::from_polar(1.0, PI / 3.0)).im,
    ])
}

pub fn figure_eight_route_spread() -> Result<f64> {
    let v = figure_eight_routes()?;
    Ok((v[0] - v[1])
        .abs()
        .max((v[0] - v[2]).abs())
        .max((v[1] - v[2]).abs()))
}

/// Norm of the finite-difference gradient of the potential at the selected
/// stationary point.
pub fn saddle_gradient_norm(knot: KnotId) -> Result<f64> {
    let v = hyperbolic_volume(knot)?;
    let g = potential_gradient(knot, &v.solution.point)?;
    Ok(g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
}

/// The full identity suite.
pub fn run_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let alex = alexander_check();
    out.push(match alex {
        Ok(rep) => {
            let worst = rep
                .rows
                .iter()
                .map(|r| {
                    (r.direct_abs - r.expected as f64)
                        .abs()
                        .max((r.logscale_abs - r.expected as f64).abs())
                })
                .fold(0.0, f64::max);
            CheckResult {
                name: "alexander N=2 (exact and float)".into(),
                metric: worst,
                tolerance: crate::invariant::ALEXANDER_FLOAT_TOL,
                pass: rep.pass,
                error: None,
            }
        }
        Err(e) => CheckResult::from_metric("alexander N=2 (exact and float)", Err(e), 0.0),
    });
    for (label, gamma) in [("pi/5", PI / 5.0), ("pi/10", PI / 10.0)] {
        out.push(CheckResult::from_metric(
            format!("faddeev funeq gamma={label}"),
            funeq_residual(gamma),
            1e-6,
        ));
    }
    out.push(CheckResult::from_metric(
        "faddeev continuation N=10",
        anal_deviation(10),
        1e-6,
    ));
    out.push(CheckResult::from_metric(
        "logscale vs exact N<=20",
        oracle_deviation(EvalMode::Logscale, 20),
        1e-9,
    ));
    out.push(CheckResult::from_metric(
        "direct vs exact N<=20",
        oracle_deviation(EvalMode::Direct, 20),
        1e-9,
    ));
    out.push(CheckResult::from_metric(
        "direct vs logscale N<=100",
        direct_logscale_deviation(100),
        1e-9,
    ));
    out.push(CheckResult::from_metric(
        "Im Li2 polar grid",
        polar_grid_deviation(),
        1e-10,
    ));
    out.push(CheckResult::from_metric(
        "4_1 volume routes",
        figure_eight_route_spread(),
        1e-10,
    ));
    for knot in KnotId::ALL {
        out.push(CheckResult::from_metric(
            format!("{knot} saddle gradient"),
            saddle_gradient_norm(knot),
            1e-6,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_inside_the_strip() {
        let s = funeq_samples(PI / 5.0);
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|p| p.abs() < PI - PI / 5.0));
    }

    #[test]
    fn suite_passes() {
        for c in run_suite() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn failed_checks_carry_the_error() {
        let c = CheckResult::from_metric("x", Err(crate::Error::InvalidOrder(0)), 1.0);
        assert!(!c.pass && c.error.is_some());
    }
}
