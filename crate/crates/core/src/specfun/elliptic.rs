//! Complete elliptic integrals and toroidal Legendre functions `Q_{k-½}`.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const AGM_MAX_ITER: usize = 64;

/// Runs the AGM from `(1, √mc)` and returns `(agm, Σ_{n≥1} 2^{n-1} c_n²)`.
fn agm(mc: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = mc.sqrt();
    let mut weight = 1.0;
    let mut tail = 0.0;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        tail += weight * c * c;
        if c.abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        weight *= 2.0;
    }
    (a, tail)
}

/// `K(m)` from the complementary parameter `mc = 1 - m`.
pub fn elliptic_k_complement(mc: f64) -> Result<f64> {
    if !(mc > 0.0 && mc <= 1.0) {
        return Err(Error::domain("elliptic_k", format!("complementary parameter {mc} outside (0, 1]")));
    }
    Ok(FRAC_PI_2 / agm(mc).0)
}

/// `E(m)` from the complementary parameter `mc = 1 - m`.
pub fn elliptic_e_complement(mc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mc) {
        return Err(Error::domain("elliptic_e", format!("complementary parameter {mc} outside [0, 1]")));
    }
    if mc == 0.0 {
        return Ok(1.0);
    }
    let (a, tail) = agm(mc);
    // 1 - m/2 - Σ_{n≥1} 2^{n-1} c_n², with 1 - m/2 = (1 + mc)/2
    Ok(FRAC_PI_2 / a * (0.5 * (1.0 + mc) - tail))
}

/// Complete elliptic integral of the first kind, parameter `m = k²`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain("elliptic_k", format!("parameter m = {m} outside [0, 1)")));
    }
    elliptic_k_complement(1.0 - m)
}

/// Complete elliptic integral of the second kind, parameter `m = k²`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::domain("elliptic_e", format!("parameter m = {m} outside [0, 1]")));
    }
    elliptic_e_complement(1.0 - m)
}

/// Largest relative contamination tolerated on the upward path.
const UPWARD_TOL: f64 = 1e-11;
const MAX_BACKWARD_SPAN: u64 = 50_000_000;

/// Toroidal function `Q_{k-½}(z)` for `z > 1`.
///
/// Values below the smallest subnormal underflow to zero; use
/// [`legendre_q_half_ln`] for those.
pub fn legendre_q_half(k: u64, z: f64) -> Result<f64> {
    check_z(z)?;
    match upward(k, z)? {
        Some(v) => Ok(v),
        None => Ok(backward_ln(k, z)?.exp()),
    }
}

/// `ln Q_{k-½}(z)` for `z > 1`.
pub fn legendre_q_half_ln(k: u64, z: f64) -> Result<f64> {
    check_z(z)?;
    match upward(k, z)? {
        Some(v) if v > 1e-300 => Ok(v.ln()),
        _ => backward_ln(k, z),
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(Error::domain("legendre_q_half", format!("z = {z} must be finite and exceed 1")));
    }
    Ok(())
}

/// `(Q_{-½}, Q_{½}, relative error estimate of Q_{½})` from elliptic integrals.
fn seeds(z: f64) -> Result<(f64, f64, f64)> {
    let m = 2.0 / (z + 1.0);
    let mc = (z - 1.0) / (z + 1.0);
    let kk = elliptic_k_complement(mc)?;
    let ee = elliptic_e_complement(mc)?;
    let q0 = m.sqrt() * kk;
    let a = z * q0;
    let b = (2.0 * (z + 1.0)).sqrt() * ee;
    let q1 = a - b;
    let err = 4.0 * f64::EPSILON * (a.abs() + b.abs()) / q1.abs();
    Ok((q0, q1, err))
}

/// Upward degree recurrence; `None` when the companion solution would
/// contaminate the result beyond [`UPWARD_TOL`].
fn upward(k: u64, z: f64) -> Result<Option<f64>> {
    let (q0, q1, seed_err) = seeds(z)?;
    if k == 0 {
        return Ok(Some(q0));
    }
    if !(q1 > 0.0) || seed_err > UPWARD_TOL {
        return Ok(None);
    }
    let rho = z + ((z - 1.0) * (z + 1.0)).sqrt();
    let growth_ln = 2.0 * rho.ln();
    let base = seed_err.max(4.0 * f64::EPSILON);
    let (mut prev, mut cur) = (q0, q1);
    for j in 1..k {
        let jf = j as f64;
        let contamination = base * ((jf + 1.0) * growth_ln).exp() * (jf + 1.0);
        if contamination > UPWARD_TOL {
            return Ok(None);
        }
        let next = (2.0 * jf * z * cur - (jf - 0.5) * prev) / (jf + 0.5);
        prev = cur;
        cur = next;
    }
    if !(cur > 0.0) || cur < 1e-300 {
        return Ok(None);
    }
    Ok(Some(cur))
}

/// Backward ratio recurrence anchored at `Q_{-½}`, in log form.
fn backward_ln(k: u64, z: f64) -> Result<f64> {
    let (q0, _, _) = seeds(z)?;
    if k == 0 {
        return Ok(q0.ln());
    }
    let rho = z + ((z - 1.0) * (z + 1.0)).sqrt();
    let mut span = ((20.0 / rho.ln()).ceil() as u64).max(16);
    let mut last = ratio_log_sum(k, z, rho, span);
    loop {
        let next_span = span.saturating_mul(2);
        if next_span > MAX_BACKWARD_SPAN {
            return Err(Error::no_convergence(
                "legendre_q_half",
                format!("backward recurrence for k = {k}, z = {z} needs more than {MAX_BACKWARD_SPAN} steps"),
            ));
        }
        let refined = ratio_log_sum(k, z, rho, next_span);
        if (refined - last).abs() <= 1e-14 * refined.abs().max(1.0) {
            return Ok(q0.ln() + refined);
        }
        last = refined;
        span = next_span;
    }
}

/// `Σ_{j=1}^{k} ln h_j` with `h_j = Q_{j-½} / Q_{j-3/2}`, starting `span`
/// steps above `k` from the asymptotic ratio `1/ρ`.
fn ratio_log_sum(k: u64, z: f64, rho: f64, span: u64) -> f64 {
    let mut h = 1.0 / rho;
    let top = k + span;
    let mut acc = 0.0;
    for j in (1..=top).rev() {
        let jf = j as f64;
        h = (jf - 0.5) / (2.0 * jf * z - (jf + 0.5) * h);
        if j <= k {
            acc += h.ln();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn elliptic_trivial_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(1.1).is_err());
    }

    #[test]
    fn elliptic_reference_values() {
        // K(1/2) = Γ(1/4)² / (4√π)
        let gamma_quarter = 3.625_609_908_221_908_3;
        let k_half = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        assert!((elliptic_k(0.5).unwrap() - k_half).abs() < 1e-14 * k_half);
        assert!((elliptic_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((elliptic_e(0.5).unwrap() - 1.350_643_881_047_675_5).abs() < 1e-14);
        assert!((elliptic_k(0.99).unwrap() - 3.695_637_362_989_875).abs() < 1e-13);
        assert!((elliptic_e(0.99).unwrap() - 1.015_993_545_025_224).abs() < 1e-13);
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K - K K' = π/2
        for &m in &[0.1, 0.3, 0.5, 0.8, 0.95] {
            let (k, e) = (elliptic_k(m).unwrap(), elliptic_e(m).unwrap());
            let (kp, ep) = (elliptic_k(1.0 - m).unwrap(), elliptic_e(1.0 - m).unwrap());
            assert!((e * kp + ep * k - k * kp - FRAC_PI_2).abs() < 1e-14);
        }
    }

    #[test]
    fn toroidal_seed_at_three() {
        let q = legendre_q_half(0, 3.0).unwrap();
        let want = 0.5f64.sqrt() * elliptic_k(0.5).unwrap();
        assert!((q - want).abs() < 1e-15);
        assert!((q - 1.311_028_777_146_059_9).abs() < 1e-14);
    }

    #[test]
    fn toroidal_reference_values() {
        let cases = [
            (1u64, 3.0, 0.112_888_542_410_467_7),
            (2, 1.5, 0.113_381_690_084_535),
            (50, 1.001, 0.085_466_978_005_317_4),
        ];
        for (k, z, want) in cases {
            let got = legendre_q_half(k, z).unwrap();
            assert!((got - want).abs() <= 1e-10 * want, "k={k} z={z} got={got} want={want}");
        }
    }

    #[test]
    fn toroidal_large_argument() {
        assert!(legendre_q_half(1, 1e6).unwrap() < 1e-8);
        // Q_{k-½}(z) ~ √π Γ(k+½)/(k! (2z)^{k+½}) for z → ∞
        let z: f64 = 1e6;
        for k in [1u64, 5, 20, 50] {
            let lg = crate::specfun::gamma::log_gamma(k as f64 + 0.5).unwrap();
            let lf = crate::specfun::gamma::log_factorial(k);
            let lead = 0.5 * PI.ln() + lg - lf - (k as f64 + 0.5) * (2.0 * z).ln();
            let got = legendre_q_half_ln(k, z).unwrap();
            assert!((got - lead).abs() < 1e-5 * (k as f64 + 1.0), "k={k}");
        }
    }

    #[test]
    fn upward_and_backward_agree_where_both_apply() {
        for &z in &[1.01, 1.3, 2.0, 5.0] {
            for k in 0..8u64 {
                if let Some(up) = upward(k, z).unwrap() {
                    let back = backward_ln(k, z).unwrap().exp();
                    assert!((up - back).abs() < 1e-11 * back, "k={k} z={z}");
                }
            }
        }
    }

    #[test]
    fn toroidal_domain() {
        assert!(legendre_q_half(0, 1.0).is_err());
        assert!(legendre_q_half(3, 0.5).is_err());
        assert!(legendre_q_half(3, f64::INFINITY).is_err());
    }

    #[test]
    fn toroidal_monotone() {
        let zs = [1.0001, 1.01, 1.5, 3.0, 10.0, 1e3, 1e5];
        for &z in &zs {
            let mut prev = f64::INFINITY;
            for k in 0..=50u64 {
                let v = legendre_q_half_ln(k, z).unwrap();
                assert!(v < prev, "not decreasing in k at k={k} z={z}");
                prev = v;
            }
        }
        for k in [0u64, 1, 7, 30] {
            let mut prev = f64::INFINITY;
            for &z in &zs {
                let v = legendre_q_half_ln(k, z).unwrap();
                assert!(v < prev, "not decreasing in z at k={k} z={z}");
                prev = v;
            }
        }
    }
}
