use std::f64::consts::PI;

use super::dilog::BERNOULLI_OVER_FACTORIAL;
use crate::{Error, Result};

/// Clausen's function Cl₂(x) = Σ sin(nx)/n².
///
/// Uses the resummed Fourier series
/// Cl₂(x) = x − x ln|x| + Σ_{k≥1} |B_{2k}| x^{2k+1} / (2k (2k+1)!)
/// on the reduced argument x ∈ (−π, π], where the terms shrink like (x/2π)^{2k}.
pub fn clausen2(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    let x = if r > PI { r - 2.0 * PI } else { r };
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut sum = 0.0;
    for (i, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate().rev() {
        let k = (i + 1) as f64;
        sum = sum * x2 + c.abs() / (2.0 * k);
    }
    x - x * x.abs().ln() + sum * x2 * x
}

/// Lobachevsky's function Λ(θ) = −∫₀^θ log|2 sin φ| dφ = ½ Cl₂(2θ).
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen2(2.0 * theta)
}

/// A point r·e^{iθ} with 0 < r ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    r: f64,
    theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "polar point needs 0 < r <= 1 and finite theta, got r = {r}, theta = {theta}"
            )));
        }
        Ok(PolarPoint { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// φ(r, θ) = arctan(r sin θ / (1 − r cos θ)), in (−π/2, π/2).
pub fn phi_angle(p: PolarPoint) -> Result<f64> {
    let theta = p.theta.rem_euclid(2.0 * PI);
    let s = theta.sin();
    // 1 − r cos θ = (1 − r) + 2r sin²(θ/2) avoids cancellation near θ = 0
    let half = (0.5 * theta).sin();
    let den = (1.0 - p.r) + 2.0 * p.r * half * half;
    if den == 0.0 || (p.r == 1.0 && theta == 0.0) {
        return Err(Error::Singular(format!(
            "phi(r, theta) undefined at r = 1, theta = {} (z = 1)",
            p.theta
        )));
    }
    Ok((p.r * s / den).atan())
}

/// Im Li₂(r e^{iθ}) = φ log r + Λ(φ) + Λ(θ) − Λ(φ + θ).
pub fn im_li2_polar(p: PolarPoint) -> Result<f64> {
    let phi = phi_angle(p)?;
    Ok(phi * p.r.ln() + lobachevsky(phi) + lobachevsky(p.theta) - lobachevsky(phi + p.theta))
}
