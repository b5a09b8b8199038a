//! Bessel functions of the first kind of integer order.

use super::gamma::log_factorial;
use super::series::Dd;
use crate::error::{Error, Result};
use num_complex::Complex64;

const SERIES_MAX_X: f64 = 1.0;
const RESCALE: f64 = 1e250;

/// `J_k(x)` for `x >= 0` (negative `x` uses `J_k(-x) = (-1)^k J_k(x)`).
pub fn bessel_j(k: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(k, -x);
        return if k % 2 == 1 { -v } else { v };
    }
    if x <= SERIES_MAX_X {
        return small_series(k, x);
    }
    miller(k, x)
}

/// Ascending series, used only where it has no cancellation to speak of.
fn small_series(k: u64, x: f64) -> f64 {
    let half = 0.5 * x;
    let log_lead = k as f64 * half.ln() - log_factorial(k);
    if log_lead < -745.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200u64 {
        term *= q / (m as f64 * (m + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * log_lead.exp()
}

/// Downward recurrence from order `k + ceil(1.5 x) + 40`, normalized by
/// `J_0 + 2 Σ J_{2m} = 1`.
fn miller(k: u64, x: f64) -> f64 {
    let start = k + (1.5 * x).ceil() as u64 + 40;
    let start = start + (start % 2);
    let mut next = 0.0f64; // J_{n+1}
    let mut cur = 1e-300f64; // J_n
    let mut norm = 0.0f64;
    let mut target = 0.0f64;
    for n in (1..=start).rev() {
        if n == k {
            target = cur;
        }
        if n % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * n as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            target /= RESCALE;
        }
    }
    // cur now holds J_0
    if k == 0 {
        target = cur;
    }
    norm += cur;
    target / norm
}

/// Ascending series limit for the complex-argument Bessel function.
pub const COMPLEX_BESSEL_MAX_ABS: f64 = 20.0;

#[derive(Clone, Copy)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    fn mul(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.mul(o.re).add(self.im.mul(o.im).neg()), im: self.re.mul(o.im).add(self.im.mul(o.re)) }
    }

    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re.mul(s), im: self.im.mul(s) }
    }
}

/// `J_k(w)` for complex `w` with `|w| <= 20`, by the ascending series summed
/// in double-double arithmetic.
pub fn complex_bessel_j(k: u64, w: Complex64) -> Result<Complex64> {
    let r = w.norm();
    if !(r <= COMPLEX_BESSEL_MAX_ABS) {
        return Err(Error::domain(
            "complex_bessel_j",
            format!("|w| = {r} exceeds the series limit {COMPLEX_BESSEL_MAX_ABS}"),
        ));
    }
    if r == 0.0 {
        return Ok(Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    // q = -w²/4 in double-double
    let wr = Dd::from_f64(w.re);
    let wi = Dd::from_f64(w.im);
    let quarter = Dd::from_f64(-0.25);
    let q =
        Cdd { re: wr.mul(wr).add(wi.mul(wi).neg()).mul(quarter), im: wr.mul(wi).mul(Dd::from_f64(2.0)).mul(quarter) };
    let mut term = Cdd { re: Dd::ONE, im: Dd::ZERO };
    let mut sum = term;
    for m in 1..400u64 {
        let denom = Dd::from_f64(m as f64).mul(Dd::from_f64((m + k) as f64));
        term = term.mul(q).scale(Dd::ONE.div(denom));
        sum = sum.add(term);
        let tmag = term.re.hi.abs() + term.im.hi.abs();
        let smag = sum.re.hi.abs() + sum.im.hi.abs();
        if m as f64 > 0.5 * r && tmag < 1e-34 * smag.max(1e-300) {
            break;
        }
    }
    // (w/2)^k / k!
    let lead_log = k as f64 * (0.5 * r).ln() - log_factorial(k);
    let lead = Complex64::from_polar(lead_log.exp(), k as f64 * w.arg());
    let s = Complex64::new(sum.re.hi + sum.re.lo, sum.im.hi + sum.im.lo);
    Ok(lead * s)
}
