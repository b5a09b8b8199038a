use super::lognum::LogSigned;
use crate::error::{Error, Result};
use std::f64::consts::PI;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
/// Below this argument the Stirling series is reached by upward shifting.
const STIRLING_MIN: f64 = 15.0;

// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr * inv
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} must be positive and finite")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= STIRLING_MIN {
        return Ok(stirling(x));
    }
    // Γ(x) = Γ(x + s) / (x (x+1) ... (x+s-1))
    let mut prod = 1.0;
    let mut t = x;
    while t < STIRLING_MIN {
        prod *= t;
        t += 1.0;
    }
    Ok(stirling(t) - prod.ln())
}

/// `ln n!`
pub fn log_factorial(n: u64) -> f64 {
    match n {
        0 | 1 => 0.0,
        _ => log_gamma(n as f64 + 1.0).expect("positive argument"),
    }
}

/// `ln(hi! / lo!)` for `hi >= lo`, summed directly when the gap is short.
pub fn log_factorial_ratio(hi: u64, lo: u64) -> f64 {
    debug_assert!(hi >= lo);
    if hi - lo <= 32 {
        ((lo + 1)..=hi).map(|k| (k as f64).ln()).sum()
    } else {
        log_factorial(hi) - log_factorial(lo)
    }
}

/// Pochhammer symbol `(a)_k = a (a+1) ... (a+k-1)`, sign included.
pub fn pochhammer(a: f64, k: u64) -> LogSigned {
    let mut acc = LogSigned::ONE;
    for i in 0..k {
        let f = a + i as f64;
        if f == 0.0 {
            return LogSigned::ZERO;
        }
        acc = acc * LogSigned::from_real(f);
    }
    acc
}

/// `ln Γ(k + ½)` for integer `k >= 0`, via `Γ(k+½) = √π (2k)! / (4^k k!)`.
pub fn log_gamma_half_integer(k: u64) -> f64 {
    0.5 * PI.ln() + log_factorial_ratio(2 * k, k) - 2.0 * k as f64 * std::f64::consts::LN_2
}
