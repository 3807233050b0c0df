use std::f64::consts::PI;

use num_complex::Complex64;

use super::accum::NeumaierSum;
use super::logcomplex::LogComplex;
use crate::{Error, Result};

/// The cyclic Pochhammer symbols (ω)_k = ∏_{j=1..k} (1 − ω^j) for
/// k = 0..N−1, together with the powers ω^j.
///
/// Each factor is taken in polar form, 1 − ω^j = 2 sin(πj/N) · e^{i(πj/N − π/2)},
/// so log-magnitudes are running (compensated) sums of ln(2 sin(πj/N)) and the
/// phase of (ω)_k is the exact rational multiple π(k(k+1) − kN)/(2N).
#[derive(Debug, Clone)]
pub struct PochhammerTable {
    order: u64,
    log: Vec<LogComplex>,
    plain: Vec<Complex64>,
    unit: Vec<Complex64>,
    powers: Vec<Complex64>,
}

impl PochhammerTable {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let n = order as usize;
        let nf = order as f64;
        let mut log = Vec::with_capacity(n);
        let mut unit = Vec::with_capacity(n);
        let mut log_mag = NeumaierSum::default();
        for k in 0..n {
            if k > 0 {
                // sin(πj/N) = sin(π(N−j)/N); use the smaller angle
                let j = k.min(n - k);
                log_mag += (2.0 * (PI * j as f64 / nf).sin()).ln();
            }
            let phase = phase_of_symbol(k as u64, order);
            log.push(LogComplex::from_log_polar(log_mag.sum(), phase));
            unit.push(Complex64::from_polar(1.0, phase));
        }
        let plain = log.iter().map(LogComplex::to_complex).collect();
        let powers = (0..n).map(|j| omega_power(j as u64, order)).collect();
        Ok(PochhammerTable {
            order,
            log,
            plain,
            unit,
            powers,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// (ω)_k in log-polar form.
    pub fn log(&self, k: usize) -> LogComplex {
        self.log[k]
    }

    /// (ω)_k as a plain complex number (infinite once it overflows).
    pub fn plain(&self, k: usize) -> Complex64 {
        self.plain[k]
    }

    /// ln|(ω)_k|.
    pub fn log_mag(&self, k: usize) -> f64 {
        self.log[k].log_mag()
    }

    /// (ω)_k / |(ω)_k|.
    pub fn unit(&self, k: usize) -> Complex64 {
        self.unit[k]
    }

    /// ω^j for 0 ≤ j < N.
    pub fn omega_pow(&self, j: usize) -> Complex64 {
        self.powers[j]
    }

    /// Largest |ln|(ω)_k|| over the table.
    pub fn max_abs_log_mag(&self) -> f64 {
        self.log
            .iter()
            .map(|l| l.log_mag().abs())
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.is_empty()
    }
}

/// arg (ω)_k = Σ_{j=1..k} (πj/N − π/2), reduced with integer arithmetic.
fn phase_of_symbol(k: u64, n: u64) -> f64 {
    let (k, n) = (k as i128, n as i128);
    let num = (k * (k + 1) - k * n).rem_euclid(4 * n);
    PI * num as f64 / (2 * n) as f64
}

/// ω^j = exp(2πij/N), evaluated from the reduced angle.
fn omega_power(j: u64, n: u64) -> Complex64 {
    let (s, c) = (2.0 * PI * (j % n) as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_product(n: u64, k: usize) -> Complex64 {
        (1..=k)
            .map(|j| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                Complex64::new(1.0, 0.0) - w
            })
            .product()
    }

    #[test]
    fn tiny_tables() {
        let t1 = PochhammerTable::new(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.plain(0), Complex64::new(1.0, 0.0));

        let t2 = PochhammerTable::new(2).unwrap();
        assert_eq!(t2.plain(0), Complex64::new(1.0, 0.0));
        assert!((t2.plain(1) - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        let t3 = PochhammerTable::new(3).unwrap();
        assert!((t3.plain(1).norm_sqr() - 3.0).abs() < 1e-14);
        assert!((t3.plain(2).norm_sqr() - 9.0).abs() < 1e-13);

        assert_eq!(PochhammerTable::new(0).unwrap_err(), Error::InvalidOrder(0));
    }

    #[test]
    fn matches_direct_products() {
        for n in 1..=100u64 {
            let t = PochhammerTable::new(n).unwrap();
            for k in 0..n as usize {
                let d = direct_product(n, k);
                let rel = (t.plain(k) - d).norm() / d.norm();
                assert!(rel < 1e-12, "N={n} k={k} rel={rel:e}");
            }
        }
    }

    #[test]
    fn powers_of_omega() {
        let t = PochhammerTable::new(8).unwrap();
        assert!((t.omega_pow(2) - Complex64::i()).norm() < 1e-15);
        assert!((t.omega_pow(4) + 1.0).norm() < 1e-15);
        assert!((t.unit(5).norm() - 1.0).abs() < 1e-15);
    }
}
