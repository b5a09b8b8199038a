//! Classical orthogonal polynomials by three-term recurrence.
//!
//! The recurrences run on `f64` mantissas and move powers of two into a
//! separate log scale whenever the running values drift far from unity, so
//! results are returned as [`LogSigned`] even when they overflow `f64`.

use super::gamma::log_factorial_ratio;
use super::lognum::LogSigned;
use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI};

const RESCALE_HI: f64 = 1e150;
const RESCALE_LO: f64 = 1e-150;
const RESCALE_EXP: i32 = 498; // 2^498 ≈ 1e150

/// Two-term window of a recurrence with a shared log scale.
struct Scaled {
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl Scaled {
    fn new(prev: f64, cur: f64, log_scale: f64) -> Self {
        Scaled { prev, cur, log_scale }
    }

    fn push(&mut self, next: f64) {
        self.prev = self.cur;
        self.cur = next;
        let big = self.cur.abs().max(self.prev.abs());
        if big > RESCALE_HI {
            let f = 2f64.powi(-RESCALE_EXP);
            self.prev *= f;
            self.cur *= f;
            self.log_scale += f64::from(RESCALE_EXP) * LN_2;
        } else if big != 0.0 && big < RESCALE_LO {
            let f = 2f64.powi(RESCALE_EXP);
            self.prev *= f;
            self.cur *= f;
            self.log_scale -= f64::from(RESCALE_EXP) * LN_2;
        }
    }

    fn value(&self) -> LogSigned {
        LogSigned::from_real(self.cur).scale_log(self.log_scale)
    }
}

/// Gegenbauer (ultraspherical) polynomial `C_n^ν(x)` for `ν > -½`.
pub fn gegenbauer(n: u64, nu: f64, x: f64) -> Result<LogSigned> {
    if !(nu > -0.5) {
        return Err(Error::domain("gegenbauer", format!("order nu = {nu} must exceed -1/2")));
    }
    if !x.is_finite() {
        return Err(Error::domain("gegenbauer", format!("x = {x} is not finite")));
    }
    if n == 0 {
        return Ok(LogSigned::ONE);
    }
    let mut w = Scaled::new(1.0, 2.0 * nu * x, 0.0);
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + nu - 1.0) * w.cur - (kf + 2.0 * nu - 2.0) * w.prev) / kf;
        w.push(next);
    }
    Ok(w.value())
}

/// Legendre polynomial `P_n(x)` on `[-1, 1]` by Bonnet's recurrence.
pub fn legendre_p(n: u64, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain("legendre_p", format!("|x| = {} exceeds 1", x.abs())));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Ferrers associated Legendre function `P_l^k(x)` on `0 < x < 1` with the
/// Condon-Shortley phase, `P_1^1(x) = -(1-x²)^{1/2}`.
///
/// Negative orders use `P_l^{-k} = (-1)^k (l-k)!/(l+k)! P_l^k`.
pub fn assoc_legendre_p(l: u64, k: i64, x: f64) -> Result<LogSigned> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain("assoc_legendre_p", format!("x = {x} outside (0, 1)")));
    }
    let ln_sin = 0.5 * ((1.0 - x) * (1.0 + x)).ln();
    assoc_legendre_p_trig(l, k, x, ln_sin)
}

/// `P_l^k(cos θ)` given `cos θ` and `ln sin θ` separately, so that angles
/// too small to resolve through `1 - cos²θ` keep full relative accuracy.
pub fn assoc_legendre_p_trig(l: u64, k: i64, cos: f64, ln_sin: f64) -> Result<LogSigned> {
    let order = k.unsigned_abs();
    if order > l {
        return Err(Error::domain("assoc_legendre_p", format!("order |k| = {order} exceeds degree l = {l}")));
    }
    let pos = ferrers_nonneg(l, order, cos, ln_sin);
    if k >= 0 {
        return Ok(pos);
    }
    let sign = if order % 2 == 1 { -1 } else { 1 };
    let ratio = -log_factorial_ratio(l + order, l - order);
    Ok(LogSigned::new(pos.log_abs + ratio, pos.sign * sign))
}

fn ferrers_nonneg(l: u64, k: u64, x: f64, ln_sin: f64) -> LogSigned {
    // P_k^k = (-1)^k (2k-1)!! sin^k θ
    let log_double_fact: f64 = (1..=k).map(|i| ((2 * i - 1) as f64).ln()).sum();
    let log_diag = if k == 0 { 0.0 } else { log_double_fact + k as f64 * ln_sin };
    if l == k {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        return LogSigned::new(log_diag, sign);
    }
    // Work with P_l^k / |P_k^k| and restore the diagonal magnitude at the end.
    let diag_sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    let kf = k as f64;
    let mut w = Scaled::new(diag_sign, x * (2.0 * kf + 1.0) * diag_sign, log_diag);
    for deg in (k + 2)..=l {
        let lf = deg as f64;
        let next = ((2.0 * lf - 1.0) * x * w.cur - (lf + kf - 1.0) * w.prev) / (lf - kf);
        w.push(next);
    }
    w.value()
}

/// Normalized Hermite function
/// `ψ_n(x) = (π^{1/2} 2^n n!)^{-1/2} H_n(x) e^{-x²/2}`.
pub fn hermite_psi(n: u64, x: f64) -> LogSigned {
    // ψ_0 = π^{-1/4} e^{-x²/2}; the Gaussian lives in the log scale.
    let log_gauss = -0.5 * x * x;
    let psi0 = PI.powf(-0.25);
    if n == 0 {
        return LogSigned::from_real(psi0).scale_log(log_gauss);
    }
    let mut w = Scaled::new(psi0, std::f64::consts::SQRT_2 * x * psi0, log_gauss);
    for k in 2..=n {
        let kf = k as f64;
        let next = x * (2.0 / kf).sqrt() * w.cur - ((kf - 1.0) / kf).sqrt() * w.prev;
        w.push(next);
    }
    w.value()
}
