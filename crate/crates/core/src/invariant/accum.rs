use std::ops::AddAssign;

use num_complex::Complex64;

use super::logcomplex::LogComplex;

/// Kahan–Babuška–Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn sum(&self) -> f64 {
        self.s + self.c
    }

    fn scaled(self, f: f64) -> Self {
        NeumaierSum {
            s: self.s * f,
            c: self.c * f,
        }
    }

    fn merge(self, other: Self) -> Self {
        let mut out = NeumaierSum {
            s: self.s,
            c: self.c + other.c,
        };
        out += other.s;
        out
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }
}

/// A compensated complex partial sum carried relative to a common scale
/// `exp(scale)`. Terms are pushed as `(ln|t|, t/|t|)`; the scale tracks the
/// running maximum so partial sums stay O(1) however large the terms get.
///
/// With `fixed` set (direct mode) the scale stays at zero and terms are
/// added as plain complex numbers.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSum {
    scale: f64,
    re: NeumaierSum,
    im: NeumaierSum,
    abs: f64,
    terms: u64,
    rescales: u64,
    fixed: bool,
}

impl ScaledSum {
    pub fn logscale() -> Self {
        ScaledSum {
            scale: f64::NEG_INFINITY,
            re: NeumaierSum::default(),
            im: NeumaierSum::default(),
            abs: 0.0,
            terms: 0,
            rescales: 0,
            fixed: false,
        }
    }

    pub fn direct() -> Self {
        ScaledSum {
            scale: 0.0,
            fixed: true,
            ..Self::logscale()
        }
    }

    fn rescale_to(&mut self, scale: f64) {
        if self.scale == f64::NEG_INFINITY {
            self.scale = scale;
            return;
        }
        let f = (self.scale - scale).exp();
        self.re = self.re.scaled(f);
        self.im = self.im.scaled(f);
        self.abs *= f;
        self.scale = scale;
        self.rescales += 1;
    }

    /// Adds `exp(log_mag) * unit`, `unit` being of modulus one.
    #[inline]
    pub fn push_log(&mut self, log_mag: f64, unit: Complex64) {
        debug_assert!(!self.fixed);
        if log_mag > self.scale {
            self.rescale_to(log_mag);
        }
        let m = (log_mag - self.scale).exp();
        self.re += m * unit.re;
        self.im += m * unit.im;
        self.abs += m;
        self.terms += 1;
    }

    #[inline]
    pub fn push_plain(&mut self, t: Complex64) {
        debug_assert!(self.fixed);
        self.re += t.re;
        self.im += t.im;
        self.abs += t.norm();
        self.terms += 1;
    }

    pub fn merge(mut self, mut other: Self) -> Self {
        if !self.fixed {
            let target = self.scale.max(other.scale);
            if target > f64::NEG_INFINITY {
                if self.scale < target {
                    self.rescale_to(target);
                }
                if other.scale < target {
                    other.rescale_to(target);
                }
            }
        }
        ScaledSum {
            scale: self.scale,
            re: self.re.merge(other.re),
            im: self.im.merge(other.im),
            abs: self.abs + other.abs,
            terms: self.terms + other.terms,
            rescales: self.rescales + other.rescales,
            fixed: self.fixed,
        }
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// The scaled sum itself, before the `exp(scale)` factor.
    pub fn scaled_value(&self) -> Complex64 {
        Complex64::new(self.re.sum(), self.im.sum())
    }

    pub fn value(&self) -> LogComplex {
        let s = self.scaled_value();
        let v = LogComplex::from_complex(s);
        if v.is_zero() || self.scale == 0.0 {
            return v;
        }
        LogComplex::from_log_polar(v.log_mag() + self.scale, v.arg())
    }

    /// Estimated relative error of [`Self::value`]: the compensated-sum
    /// bound 2ε·Σ|t|/|S| plus one rounding per rescale of the running sum.
    pub fn relative_error_estimate(&self) -> f64 {
        let s = self.scaled_value().norm();
        if s == 0.0 {
            return f64::INFINITY;
        }
        f64::EPSILON * ((2 + self.rescales) as f64 * self.abs / s + 1.0)
    }
}

/// Pairwise reduction over a fixed tree: adjacent pairs are merged level by
/// level, so the result depends only on the order of `parts`.
pub fn tree_reduce(mut parts: Vec<ScaledSum>) -> Option<ScaledSum> {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| if p.len() == 2 { p[0].merge(p[1]) } else { p[0] })
            .collect();
    }
    parts.pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_bits() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s += x;
        }
        assert_eq!(s.sum(), 2.0);
    }

    #[test]
    fn logscale_handles_huge_terms() {
        let mut a = ScaledSum::logscale();
        a.push_log(1000.0, Complex64::new(1.0, 0.0));
        a.push_log(1000.0 + 2f64.ln(), Complex64::new(1.0, 0.0));
        let v = a.value();
        assert!((v.log_mag() - (1000.0 + 3f64.ln())).abs() < 1e-12);
        assert_eq!(a.terms(), 2);
    }

    #[test]
    fn merge_matches_sequential() {
        let terms: Vec<(f64, f64)> = (0..50).map(|i| (i as f64 * 0.7 - 10.0, i as f64)).collect();
        let mut seq = ScaledSum::logscale();
        for &(l, a) in &terms {
            seq.push_log(l, Complex64::from_polar(1.0, a));
        }
        let parts: Vec<ScaledSum> = terms
            .chunks(7)
            .map(|c| {
                let mut s = ScaledSum::logscale();
                for &(l, a) in c {
                    s.push_log(l, Complex64::from_polar(1.0, a));
                }
                s
            })
            .collect();
        let tree = tree_reduce(parts).unwrap();
        let (x, y) = (seq.value(), tree.value());
        assert!((x.log_mag() - y.log_mag()).abs() < 1e-13);
        assert!((x.arg() - y.arg()).abs() < 1e-13);
        assert_eq!(tree.terms(), 50);
    }

    #[test]
    fn empty_partials_merge() {
        let a = ScaledSum::logscale();
        let mut b = ScaledSum::logscale();
        b.push_log(3.0, Complex64::new(0.0, 1.0));
        let m = a.merge(b);
        assert!((m.value().to_complex() - Complex64::new(0.0, 3f64.exp())).norm() < 1e-12);
        assert!(tree_reduce(Vec::new()).is_none());
    }
}
