use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;

/// Log-magnitudes above this no longer fit in an `f64` after exponentiation.
pub const F64_LOG_MAX: f64 = 709.78;

/// A complex number kept as `(ln|z|, arg z)` so that products of many
/// factors neither overflow nor underflow.
#[derive(Clone, Copy, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    arg: f64,
    is_zero: bool,
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        arg: 0.0,
        is_zero: true,
    };

    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        arg: 0.0,
        is_zero: false,
    };

    pub fn from_log_polar(log_mag: f64, arg: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_mag,
            arg: wrap_angle(arg),
            is_zero: false,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        // norm() = hypot, no intermediate overflow
        LogComplex {
            log_mag: z.norm().ln(),
            arg: z.arg(),
            is_zero: false,
        }
    }

    pub fn log_mag(&self) -> f64 {
        if self.is_zero {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    pub fn arg(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.arg
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    /// Whether [`Self::to_complex`] is finite.
    pub fn is_representable(&self) -> bool {
        self.is_zero || self.log_mag < F64_LOG_MAX
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.arg)
    }

    pub fn conj(&self) -> Self {
        if self.is_zero {
            return *self;
        }
        Self::from_log_polar(self.log_mag, -self.arg)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero, "reciprocal of zero");
        Self::from_log_polar(-self.log_mag, -self.arg)
    }

    /// `self + other` via the complex log-sum-exp.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero {
            return *other;
        }
        if other.is_zero {
            return *self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = Complex64::from_polar((small.log_mag - big.log_mag).exp(), small.arg - big.arg);
        let s = Complex64::new(1.0, 0.0) + ratio;
        if s.norm() == 0.0 {
            return Self::ZERO;
        }
        Self::from_log_polar(big.log_mag + s.norm().ln(), big.arg + s.arg())
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero || rhs.is_zero {
            return Self::ZERO;
        }
        Self::from_log_polar(self.log_mag + rhs.log_mag, self.arg + rhs.arg)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.recip()
    }
}

impl fmt::Debug for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero {
            f.write_str("LogComplex(0)")
        } else {
            write!(f, "LogComplex(exp({}) ∠ {})", self.log_mag, self.arg)
        }
    }
}
