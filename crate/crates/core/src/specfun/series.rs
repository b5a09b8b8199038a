//! Double-double arithmetic and exact-exponent summation of terminating
//! alternating series.
//!
//! The finite sums behind the hypergeometric and explicit-sum routes lose up
//! to ten decimal digits to cancellation for indices around 60. Terms are
//! generated from their ratio in double-double precision and carry a separate
//! binary exponent, so neither the cancellation nor the term magnitudes
//! (which may exceed the `f64` range) cost accuracy.

use super::lognum::LogSigned;
use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from_f64(q1)).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from_f64(q2)).neg());
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    /// Exact multiplication by `2^e` (barring underflow of the low word).
    pub fn ldexp(self, e: i64) -> Dd {
        Dd { hi: ldexp(self.hi, e), lo: ldexp(self.lo, e) }
    }

    /// `sinh x` to double-double accuracy for `x ≥ 0`.
    pub fn sinh(x: f64) -> Dd {
        let dx = Dd::from_f64(x);
        if x < 1.0 {
            let x2 = dx.mul(dx);
            let mut term = dx;
            let mut sum = dx;
            for k in 1..40u32 {
                term = term.mul(x2).div(Dd::from_f64(((2 * k) * (2 * k + 1)) as f64));
                sum = sum.add(term);
                if term.hi.abs() < 1e-34 * sum.hi.abs() {
                    break;
                }
            }
            return sum;
        }
        let e = Dd::exp(x);
        e.add(Dd::ONE.div(e).neg()).ldexp(-1)
    }

    /// `e^x` to double-double accuracy for moderate `x`.
    pub fn exp(x: f64) -> Dd {
        let halvings = (x.abs().max(1e-300).log2().ceil() as i64 + 1).max(0);
        let t = Dd::from_f64(x).ldexp(-halvings);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for k in 1..30 {
            term = term.mul(t).div(Dd::from_f64(k as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..halvings {
            sum = sum.mul(sum);
        }
        sum
    }

    /// Natural log of the magnitude, keeping the low word's contribution.
    pub fn ln_abs(self) -> f64 {
        let a = self.hi.abs();
        a.ln() + (self.lo / self.hi).ln_1p()
    }
}

/// Splits `x` into a mantissa in `[0.5, 1)` (by magnitude) and a power of two.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (mant, biased - 1022)
}

/// `x · 2^e` without intermediate overflow of the scale factor.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Result of summing a series whose terms were generated by ratios.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SeriesSum {
    pub value: LogSigned,
    /// `Σ|t_k| / |Σ t_k|`; `inf` when the sum cancels to exactly zero.
    pub cancellation: f64,
}

/// Sums `Σ_{k=0}^{len-1} t_k` with `t_0 = 1` and `t_{k+1} = t_k · ratio(k)`.
///
/// Stops early once a ratio is exactly zero (the series has terminated).
pub(crate) fn sum_by_ratios(len: usize, mut ratio: impl FnMut(usize) -> Dd) -> SeriesSum {
    let mut terms: Vec<(Dd, i64)> = Vec::with_capacity(len);
    let mut mant = Dd::ONE;
    let mut exp = 0i64;
    if len > 0 {
        terms.push((mant, exp));
    }
    for k in 0..len.saturating_sub(1) {
        mant = mant.mul(ratio(k));
        if mant.hi == 0.0 {
            break;
        }
        let (_, e) = frexp(mant.hi);
        mant = mant.ldexp(-e);
        exp += e;
        terms.push((mant, exp));
    }
    if terms.is_empty() {
        return SeriesSum { value: LogSigned::ZERO, cancellation: 1.0 };
    }
    let top = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut sum = Dd::ZERO;
    let mut abs_sum = Dd::ZERO;
    for &(m, e) in &terms {
        let shift = e - top;
        if shift < -1070 {
            continue;
        }
        let scaled = m.ldexp(shift);
        sum = sum.add(scaled);
        abs_sum = abs_sum.add(scaled.abs());
    }
    if sum.hi == 0.0 {
        return SeriesSum { value: LogSigned::ZERO, cancellation: f64::INFINITY };
    }
    let log_abs = sum.ln_abs() + top as f64 * LN_2;
    let sign = if sum.hi > 0.0 { 1 } else { -1 };
    SeriesSum { value: LogSigned::new(log_abs, sign), cancellation: abs_sum.hi / sum.hi.abs() }
}
