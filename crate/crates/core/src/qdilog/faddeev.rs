//! Faddeev's quantum dilogarithm
//!
//! ```text
//! S_γ(p) = exp( ¼ ∫ e^{px} / (sinh(πx) sinh(γx)) dx/x ),   |Re p| < π + γ,
//! ```
//!
//! with the pole at x = 0 lying below the contour. The contour used here is
//! the horizontal line Im x = ρ, which is equivalent to the real line with a
//! detour over the origin as long as 0 < ρ < min(1, π/γ): no other pole sits
//! between them. On that line the integrand is analytic in a strip of width
//! `min(ρ, min(1, π/γ) − ρ)` on either side, so the trapezoid rule converges
//! geometrically in 1/h.
//!
//! Outside the strip S_γ is continued with the functional equation
//! (1 + e^{ip}) S_γ(p + γ) = S_γ(p − γ).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Knobs of the trapezoid rule on the line Im x = `contour_offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Trapezoid step h.
    pub step: f64,
    /// Largest |Re x| the rule may reach before giving up.
    pub max_truncation: f64,
    /// ρ: height of the contour above the origin.
    pub contour_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdParams {
    gamma: f64,
    quadrature: Quadrature,
}

/// Relative size of the neglected integrand tail.
const TAIL_TOL: f64 = 1e-17;
/// Allowed relative gap between the step-h and step-2h sums.
const HALVING_TOL: f64 = 1e-10;
/// A functional-equation factor smaller than this is treated as a zero.
const LATTICE_TOL: f64 = 1e-12;

impl QdParams {
    /// Default quadrature: ρ = ½·min(1, π/γ), h = ρ/10, truncation cap 10⁵.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        let offset = 0.5 * (PI / gamma).min(1.0);
        Self::with_quadrature(
            gamma,
            Quadrature {
                step: offset / 10.0,
                max_truncation: 1e5,
                contour_offset: offset,
            },
        )
    }

    /// γ = π/N.
    pub fn for_order(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Self::new(PI / n as f64)
    }

    pub fn with_quadrature(gamma: f64, quadrature: Quadrature) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        let Quadrature {
            step,
            max_truncation,
            contour_offset,
        } = quadrature;
        if !(step > 0.0 && step.is_finite()) || max_truncation.is_nan() || max_truncation <= 0.0 {
            return Err(Error::InvalidArgument(
                "quadrature step and truncation must be positive".into(),
            ));
        }
        let limit = (PI / gamma).min(1.0);
        if !(contour_offset > 0.0 && contour_offset < limit) {
            return Err(Error::InvalidArgument(format!(
                "contour offset must lie in (0, {limit}), got {contour_offset}"
            )));
        }
        Ok(QdParams { gamma, quadrature })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    /// |Re p| up to which the integral is evaluated directly; beyond it the
    /// functional equation takes over. Keeps the decay rate of the
    /// integrand at least min(2γ, (π+γ)/2).
    fn direct_bound(&self) -> f64 {
        (PI - self.gamma).max(0.5 * (PI + self.gamma))
    }
}

/// e^w − 1 without cancellation for small |w|.
fn expm1(w: Complex64) -> Complex64 {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
}

/// e^{px} / (sinh(πx) sinh(γx) x), written with decaying exponentials only.
fn integrand(x: Complex64, p: Complex64, gamma: f64) -> Complex64 {
    let c = PI + gamma;
    if x.re >= 0.0 {
        4.0 * ((p - c) * x).exp() / (expm1(-2.0 * PI * x) * expm1(-2.0 * gamma * x) * x)
    } else {
        4.0 * ((p + c) * x).exp() / (expm1(2.0 * PI * x) * expm1(2.0 * gamma * x) * x)
    }
}

/// The contour integral and its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralReport {
    pub value: Complex64,
    /// Same rule with every other node dropped (step 2h).
    pub coarse: Complex64,
    /// Nodes used.
    pub nodes: usize,
    /// Furthest |Re x| reached.
    pub reach: f64,
}

/// ∫ e^{px} / (sinh(πx) sinh(γx)) dx/x over Im x = ρ, for |Re p| < π + γ.
pub fn contour_integral(params: &QdParams, p: Complex64) -> Result<IntegralReport> {
    let gamma = params.gamma;
    let q = params.quadrature;
    let decay_right = PI + gamma - p.re;
    let decay_left = PI + gamma + p.re;
    if decay_right <= 0.0 || decay_left <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "|Re p| = {} is outside the strip |Re p| < pi + gamma",
            p.re.abs()
        )));
    }
    let h = q.step;
    let node = |j: i64| integrand(Complex64::new(j as f64 * h, q.contour_offset), p, gamma);

    let mut fine = node(0);
    let mut coarse = fine;
    let mut nodes = 1usize;
    let mut reach = 0.0f64;
    for (dir, decay) in [(1i64, decay_right), (-1i64, decay_left)] {
        let mut j = 1i64;
        loop {
            let t = j as f64 * h;
            if t > q.max_truncation {
                return Err(Error::NonConvergence(format!(
                    "integrand tail still above tolerance at |Re x| = {} (decay rate {decay:.3e})",
                    q.max_truncation
                )));
            }
            let f = node(dir * j);
            fine += f;
            if j % 2 == 0 {
                coarse += f;
            }
            nodes += 1;
            // Σ_{j' > j} h|f(t_j')| ≈ |f(t_j)| / decay
            let scale = (fine * h).norm().max(1.0);
            if t > 2.0 && f.norm() / decay < TAIL_TOL * scale {
                reach = reach.max(t);
                break;
            }
            j += 1;
        }
    }
    let value = fine * h;
    let coarse = coarse * (2.0 * h);
    if (value - coarse).norm() > HALVING_TOL * value.norm().max(1.0) {
        return Err(Error::NonConvergence(format!(
            "step halving changed the integral by {:.3e}",
            (value - coarse).norm()
        )));
    }
    Ok(IntegralReport {
        value,
        coarse,
        nodes,
        reach,
    })
}

/// log S_γ(p). Inside the strip this is exactly ¼ of the contour integral;
/// after continuation it is defined modulo 2πi.
pub fn log_faddeev_s(params: &QdParams, p: Complex64) -> Result<Complex64> {
    if !(p.re.is_finite() && p.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("p = {p} is not finite")));
    }
    let gamma = params.gamma;
    let bound = params.direct_bound();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let pole = || Error::Pole { re: p.re, im: p.im };

    if p.re.abs() <= bound {
        return Ok(0.25 * contour_integral(params, p)?.value);
    }
    let steps = ((p.re.abs() - bound) / (2.0 * gamma)).ceil() as i64;
    let mut correction = Complex64::new(0.0, 0.0);
    let inner = if p.re > 0.0 {
        // S(q) = S(q − 2γ) / (1 + e^{i(q−γ)})
        for j in 1..=steps {
            let factor = one + (i * (p - (2 * j - 1) as f64 * gamma)).exp();
            if factor.norm() < LATTICE_TOL {
                return Err(pole());
            }
            correction -= factor.ln();
        }
        p - 2.0 * steps as f64 * gamma
    } else {
        // S(q) = (1 + e^{i(q+γ)}) S(q + 2γ)
        for j in 1..=steps {
            let factor = one + (i * (p + (2 * j - 1) as f64 * gamma)).exp();
            if factor.norm() < LATTICE_TOL {
                return Err(pole());
            }
            correction += factor.ln();
        }
        p + 2.0 * steps as f64 * gamma
    };
    Ok(0.25 * contour_integral(params, inner)?.value + correction)
}

/// S_γ(p).
pub fn faddeev_s(params: &QdParams, p: Complex64) -> Result<Complex64> {
    Ok(log_faddeev_s(params, p)?.exp())
}

/// f_γ(p) = S_γ(γ − π) / S_γ(p); equals (ω)_k at p = −π + γ + 2kγ when γ = π/N.
pub fn f_gamma(params: &QdParams, p: Complex64) -> Result<Complex64> {
    let g = params.gamma;
    let num = log_faddeev_s(params, Complex64::new(g - PI, 0.0))?;
    Ok((num - log_faddeev_s(params, p)?).exp())
}

/// f̄_γ(p) = S_γ(−p) / S_γ(π − γ); equals (ω)_k* at the same points.
pub fn f_bar_gamma(params: &QdParams, p: Complex64) -> Result<Complex64> {
    let g = params.gamma;
    let den = log_faddeev_s(params, Complex64::new(PI - g, 0.0))?;
    Ok((log_faddeev_s(params, -p)? - den).exp())
}
