//! Stationary points of the dilogarithm potentials and the hyperbolic
//! volumes they carry.
//!
//! Potentials, on principal branches:
//!
//! ```text
//! 4_1: Li₂(z) − Li₂(1/z)
//! 5_2: 2Li₂(z) + Li₂(1/u) + log z·log u − π²/2
//! 6_1: Li₂(z) − Li₂(1/z) − Li₂(u) + Li₂(1/v) + log(uv/z)·log(z/u) + 2πi·log(u/z)
//! ```
//!
//! Each stationary system is reduced by hand to a univariate polynomial in z,
//! whose roots are back-substituted and then polished by Newton's method on
//! the full system. The volume is −Im of the potential at the selected point.

mod roots;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use roots::polynomial_roots;

use crate::qdilog::li2;
use crate::{Error, KnotId, Result};

/// Newton stops once the step is below this (relative to the point).
pub const NEWTON_STEP_TOL: f64 = 1e-14;
pub const NEWTON_MAX_ITER: usize = 100;
/// Largest accepted residual of the stationary equations.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Imaginary parts within this of zero count as neither sign.
pub const SIGN_MARGIN: f64 = 1e-9;
/// Arguments this close to a branch cut raise the proximity flag.
pub const CUT_PROXIMITY: f64 = 1e-12;

/// A stationary point of a knot's potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleSolution {
    pub knot: KnotId,
    /// (z), (z, u) or (z, u, v).
    pub point: Vec<Complex64>,
    /// max |F_i| over the defining equations.
    pub residual: f64,
    /// Set on the geometric solution.
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    pub knot: KnotId,
    pub volume: f64,
    pub solution: SaddleSolution,
    pub potential_value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub value: Complex64,
    /// Some Li₂ or log argument lies within [`CUT_PROXIMITY`] of its cut.
    pub near_branch_cut: bool,
}

fn check_point(knot: KnotId, point: &[Complex64]) -> Result<()> {
    if point.len() != knot.dimension() {
        return Err(Error::InvalidArgument(format!(
            "{knot} potential takes {} coordinates, got {}",
            knot.dimension(),
            point.len()
        )));
    }
    if point.iter().any(|c| c.norm() == 0.0 || !c.is_finite()) {
        return Err(Error::Singular(format!(
            "zero or non-finite coordinate in {point:?}"
        )));
    }
    Ok(())
}

/// Distance from w to the Li₂ cut [1, ∞).
fn li2_cut_distance(w: Complex64) -> f64 {
    if w.re >= 1.0 {
        w.im.abs()
    } else {
        (w - 1.0).norm()
    }
}

/// Distance from w to the log cut (−∞, 0].
fn log_cut_distance(w: Complex64) -> f64 {
    if w.re <= 0.0 {
        w.im.abs()
    } else {
        w.norm()
    }
}

/// The exponent of the knot's asymptotic integrand, evaluated at `point`.
pub fn potential(knot: KnotId, point: &[Complex64]) -> Result<PotentialValue> {
    check_point(knot, point)?;
    let i = Complex64::i();
    let (value, li2_args, log_args) = match knot {
        KnotId::FourOne => {
            let z = point[0];
            (li2(z) - li2(z.inv()), vec![z, z.inv()], vec![])
        }
        KnotId::FiveTwo => {
            let (z, u) = (point[0], point[1]);
            let v = 2.0 * li2(z) + li2(u.inv()) + z.ln() * u.ln() - PI * PI / 2.0;
            (v, vec![z, u.inv()], vec![z, u])
        }
        KnotId::SixOne => {
            let (z, u, v) = (point[0], point[1], point[2]);
            let a = u * v / z;
            let b = z / u;
            let val = li2(z) - li2(z.inv()) - li2(u)
                + li2(v.inv())
                + a.ln() * b.ln()
                + 2.0 * PI * i * (u / z).ln();
            (val, vec![z, z.inv(), u, v.inv()], vec![a, b, u / z])
        }
    };
    let near_branch_cut = li2_args
        .iter()
        .any(|&w| li2_cut_distance(w) < CUT_PROXIMITY)
        || log_args
            .iter()
            .any(|&w| log_cut_distance(w) < CUT_PROXIMITY);
    Ok(PotentialValue {
        value,
        near_branch_cut,
    })
}

/// Central-difference gradient of [`potential`] (holomorphic, so a real
/// step suffices).
pub fn potential_gradient(knot: KnotId, point: &[Complex64]) -> Result<Vec<Complex64>> {
    check_point(knot, point)?;
    let mut grad = Vec::with_capacity(point.len());
    for j in 0..point.len() {
        let h = 1e-6 * point[j].norm().max(1.0);
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let d = (potential(knot, &plus)?.value - potential(knot, &minus)?.value) / (2.0 * h);
        grad.push(d);
    }
    Ok(grad)
}

/// The defining equations of the stationary points, as polynomials.
pub fn stationary_equations(knot: KnotId, point: &[Complex64]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match knot {
        // exponentiated ∂/∂z: (1 − z)(1 − 1/z) = 1, cleared of z
        KnotId::FourOne => {
            let z = point[0];
            vec![z * z - z + 1.0]
        }
        KnotId::FiveTwo => {
            let (z, u) = (point[0], point[1]);
            vec![u + z - u * z, u - (one - z) * (one - z)]
        }
        KnotId::SixOne => {
            let (z, u, v) = (point[0], point[1], point[2]);
            vec![
                z * (one - z) * (one - z) + u * u * v,
                z * z * (one - u) - u * u * v,
                z * (one - v) + u * v,
            ]
        }
    }
}

fn stationary_jacobian(knot: KnotId, point: &[Complex64]) -> DMatrix<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match knot {
        KnotId::FourOne => {
            let z = point[0];
            DMatrix::from_row_slice(1, 1, &[2.0 * z - 1.0])
        }
        KnotId::FiveTwo => {
            let (z, u) = (point[0], point[1]);
            DMatrix::from_row_slice(2, 2, &[one - u, one - z, 2.0 * (one - z), one])
        }
        KnotId::SixOne => {
            let (z, u, v) = (point[0], point[1], point[2]);
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    (one - z) * (one - 3.0 * z),
                    2.0 * u * v,
                    u * u,
                    2.0 * z * (one - u),
                    -z * z - 2.0 * u * v,
                    -u * u,
                    one - v,
                    v,
                    u - z,
                ],
            )
        }
    }
}

fn residual(knot: KnotId, point: &[Complex64]) -> f64 {
    stationary_equations(knot, point)
        .iter()
        .map(|f| f.norm())
        .fold(0.0, f64::max)
}

/// Newton's method on the full stationary system. Returns `None` when the
/// Jacobian is singular or the iteration leaves the finite plane.
pub fn newton_polish(knot: KnotId, start: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut x = start.to_vec();
    for _ in 0..NEWTON_MAX_ITER {
        let f = DVector::from_vec(stationary_equations(knot, &x));
        let step = stationary_jacobian(knot, &x).lu().solve(&(-f))?;
        let scale = x.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi += si;
        }
        if x.iter().any(|c| !c.is_finite()) {
            return None;
        }
        if step.norm() <= NEWTON_STEP_TOL * scale {
            break;
        }
    }
    Some(x)
}

/// Univariate eliminant in z, ascending coefficients.
fn eliminant(knot: KnotId) -> &'static [f64] {
    match knot {
        KnotId::FourOne => &[1.0, -1.0, 1.0],
        // u = (1−z)² into u + z = uz
        KnotId::FiveTwo => &[-1.0, 2.0, -3.0, 1.0],
        // u = (z² − z + 1)/z and v = z/(z − u) give z(1−z)³ = (z² − z + 1)²
        KnotId::SixOne => &[1.0, -3.0, 6.0, -5.0, 2.0],
    }
}

/// Remaining coordinates from a root of the eliminant.
fn back_substitute(knot: KnotId, z: Complex64) -> Option<Vec<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let point = match knot {
        KnotId::FourOne => vec![z],
        KnotId::FiveTwo => vec![z, (one - z) * (one - z)],
        KnotId::SixOne => {
            if z.norm() == 0.0 {
                return None;
            }
            let u = (z * z - z + 1.0) / z;
            if (z - u).norm() == 0.0 {
                return None;
            }
            vec![z, u, z / (z - u)]
        }
    };
    point
        .iter()
        .all(|c| c.norm() > 0.0 && c.is_finite())
        .then_some(point)
}

/// All stationary points with nonzero coordinates, ordered by (Im z, Re z).
/// The geometric one is flagged `selected`.
pub fn solve_stationary(knot: KnotId) -> Result<Vec<SaddleSolution>> {
    let coeffs: Vec<Complex64> = eliminant(knot)
        .iter()
        .map(|&c| Complex64::new(c, 0.0))
        .collect();
    let mut out = Vec::new();
    for z in polynomial_roots(&coeffs)? {
        let Some(start) = back_substitute(knot, z) else {
            continue;
        };
        let point = newton_polish(knot, &start)
            .ok_or_else(|| Error::Degenerate(format!("singular Jacobian at {start:?}")))?;
        let r = residual(knot, &point);
        if r > RESIDUAL_TOL {
            return Err(Error::Degenerate(format!(
                "{knot} stationary point {point:?} has residual {r:e}"
            )));
        }
        out.push(SaddleSolution {
            knot,
            point,
            residual: r,
            selected: false,
        });
    }
    out.sort_by(|a, b| {
        (a.point[0].im, a.point[0].re)
            .partial_cmp(&(b.point[0].im, b.point[0].re))
            .expect("finite coordinates")
    });
    let chosen = select_geometric(&out, knot)?;
    for s in out.iter_mut() {
        s.selected = s.point == chosen.point;
    }
    Ok(out)
}

fn meets_condition(knot: KnotId, s: &SaddleSolution) -> Result<bool> {
    let p = &s.point;
    Ok(match knot {
        KnotId::FourOne => -potential(knot, p)?.value.im > SIGN_MARGIN,
        KnotId::FiveTwo => p[0].im < -SIGN_MARGIN && p[1].im > SIGN_MARGIN,
        KnotId::SixOne => p[0].im < -SIGN_MARGIN && (p[1] * p[2]).im > SIGN_MARGIN,
    })
}

/// The unique solution with Im z₀ < 0 < Im u₀ (5_2), Im z₀ < 0 < Im(u₀v₀)
/// (6_1), or positive volume (4_1). Anything but exactly one match is an
/// error.
pub fn select_geometric(solutions: &[SaddleSolution], knot: KnotId) -> Result<SaddleSolution> {
    let mut hits = Vec::new();
    for s in solutions.iter().filter(|s| s.knot == knot) {
        if meets_condition(knot, s)? {
            hits.push(s);
        }
    }
    match hits.as_slice() {
        [one] => Ok(SaddleSolution {
            selected: true,
            ..(*one).clone()
        }),
        _ => Err(Error::Selection {
            knot,
            count: hits.len(),
        }),
    }
}

/// V(L) = −Im(potential) at the geometric stationary point.
pub fn hyperbolic_volume(knot: KnotId) -> Result<VolumeResult> {
    let solutions = solve_stationary(knot)?;
    let solution = solutions
        .into_iter()
        .find(|s| s.selected)
        .ok_or(Error::Selection { knot, count: 0 })?;
    let potential_value = potential(knot, &solution.point)?.value;
    let volume = -potential_value.im;
    if volume <= 0.0 {
        return Err(Error::Selection { knot, count: 0 });
    }
    Ok(VolumeResult {
        knot,
        volume,
        solution,
        potential_value,
    })
}
