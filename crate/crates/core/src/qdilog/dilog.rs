use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) const PI2_6: f64 = PI * PI / 6.0;

/// B_{2k} / (2k+1)!, k = 1..30.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
    2.3940344248961652e-32,
    -5.76834735536739e-34,
    1.393179479647008e-35,
    -3.3721219654850894e-37,
    8.178208777562102e-39,
    -1.987010831152386e-40,
    4.8357785180405507e-42,
    -1.1786937248718384e-43,
    2.877096408117257e-45,
    -7.032059098156028e-47,
    1.7208603145033145e-48,
    -4.2160723905604456e-50,
];

/// Euler's dilogarithm Li₂(z) = −∫₀^z log(1−u)/u du on the principal sheet,
/// cut along [1, ∞).
///
/// On the cut itself the sign of the zero imaginary part picks the side:
/// `+0.0` gives the limit from above (Im Li₂(x) = +π ln x), `-0.0` the limit
/// from below.
///
/// |z| > 1 is mapped inside the unit disc with the inversion formula,
/// Re z > ½ with the reflection formula, and the remaining region is summed
/// as a series in u = −log(1−z), which converges for |u| < 2π and therefore
/// also around e^{±iπ/3}, where the usual power-series transformations all
/// land on |z| = 1.
pub fn li2(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re == 1.0 && z.im == 0.0 {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        // Li₂(z) + Li₂(1/z) = −π²/6 − ½ log²(−z)
        let l = (-z).ln();
        return -PI2_6 - 0.5 * l * l - li2_disc(z.inv());
    }
    li2_disc(z)
}

fn li2_disc(z: Complex64) -> Complex64 {
    if z.re > 0.5 {
        // Li₂(z) + Li₂(1−z) = π²/6 − log z · log(1−z)
        let w = Complex64::new(1.0, 0.0) - z;
        return PI2_6 - z.ln() * ln_1p(-z) - bernoulli_series(w);
    }
    bernoulli_series(z)
}

/// Li₂(z) = Σ_{n≥0} B_n u^{n+1}/(n+1)!, u = −log(1−z).
fn bernoulli_series(z: Complex64) -> Complex64 {
    let u = -ln_1p(-z);
    let u2 = u * u;
    let mut sum = Complex64::new(0.0, 0.0);
    // Horner in u², highest coefficient first
    for c in BERNOULLI_OVER_FACTORIAL.iter().rev() {
        sum = sum * u2 + c;
    }
    u - 0.25 * u2 + sum * u2 * u
}

/// log(1 + w) without cancellation for small |w|.
pub(crate) fn ln_1p(w: Complex64) -> Complex64 {
    let x = w.re;
    let y = w.im;
    if w.norm_sqr() > 0.25 {
        return (1.0 + w).ln();
    }
    // |1+w|² − 1 = 2x + x² + y²
    let re = 0.5 * (2.0 * x + x * x + y * y).ln_1p();
    let im = y.atan2(1.0 + x);
    Complex64::new(re, im)
}
