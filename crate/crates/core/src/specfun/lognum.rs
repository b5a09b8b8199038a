//! Log-magnitude scalars.
//!
//! Factorial-heavy closed forms multiply quantities such as `Γ(α+½)`,
//! `√(n!/m!)` and a polynomial value whose individual magnitudes leave the
//! `f64` range long before their product does. Both types below keep the
//! natural log of the magnitude and carry the sign (or phase) separately.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

/// Real number stored as `sign · exp(log_abs)`.
///
/// `sign == 0` exactly when `log_abs == -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogSigned {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogSigned = LogSigned { log_abs: 0.0, sign: 1 };

    /// Builds a value from its parts, collapsing either zero marker onto the other.
    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogSigned { log_abs, sign: sign.signum() }
        }
    }

    /// Positive number `exp(log_abs)`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(log_abs, 1)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogSigned { log_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn to_real(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogSigned { log_abs: self.log_abs, sign: 1 }
        }
    }

    pub fn recip(self) -> Self {
        debug_assert!(self.sign != 0, "reciprocal of zero");
        LogSigned { log_abs: -self.log_abs, sign: self.sign }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        LogSigned { log_abs: self.log_abs * f64::from(k), sign }
    }

    /// Square root of a non-negative value.
    pub fn sqrt(self) -> Self {
        debug_assert!(self.sign >= 0, "sqrt of negative LogSigned");
        Self::new(0.5 * self.log_abs, self.sign)
    }

    /// Scales by `exp(delta)`.
    pub fn scale_log(self, delta: f64) -> Self {
        Self::new(self.log_abs + delta, self.sign)
    }
}

impl Default for LogSigned {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;
    fn mul(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogSigned { log_abs: self.log_abs + rhs.log_abs, sign: self.sign * rhs.sign }
    }
}

impl Div for LogSigned {
    type Output = LogSigned;
    fn div(self, rhs: LogSigned) -> LogSigned {
        self * rhs.recip()
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;
    fn neg(self) -> LogSigned {
        LogSigned { log_abs: self.log_abs, sign: -self.sign }
    }
}

impl Add for LogSigned {
    type Output = LogSigned;
    fn add(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs { (self, rhs) } else { (rhs, self) };
        let ratio = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            LogSigned { log_abs: big.log_abs + ratio.ln_1p(), sign: big.sign }
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogSigned { log_abs: big.log_abs + (-ratio).ln_1p(), sign: big.sign }
        }
    }
}

impl Sub for LogSigned {
    type Output = LogSigned;
    fn sub(self, rhs: LogSigned) -> LogSigned {
        self + (-rhs)
    }
}

impl fmt::Display for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_abs),
        }
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Complex number stored as `exp(log_abs + i·phase)`, phase in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_abs: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_abs: 0.0, phase: 0.0 };

    pub fn new(log_abs: f64, phase: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogComplex { log_abs, phase: wrap_phase(phase) }
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            Self::ZERO
        } else {
            Self::new(z.norm().ln(), z.arg())
        }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_abs.exp(), self.phase)
        }
    }

    pub fn is_zero(self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn abs(self) -> f64 {
        self.log_abs.exp()
    }

    pub fn conj(self) -> Self {
        if self.is_zero() {
            self
        } else {
            Self::new(self.log_abs, -self.phase)
        }
    }

    pub fn norm_sqr(self) -> f64 {
        (2.0 * self.log_abs).exp()
    }
}

impl From<LogSigned> for LogComplex {
    fn from(v: LogSigned) -> Self {
        match v.sign {
            0 => LogComplex::ZERO,
            s if s > 0 => LogComplex::new(v.log_abs, 0.0),
            _ => LogComplex::new(v.log_abs, PI),
        }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogComplex::new(self.log_abs + rhs.log_abs, self.phase + rhs.phase)
    }
}

impl Mul<LogSigned> for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogSigned) -> LogComplex {
        self * LogComplex::from(rhs)
    }
}
