use crate::error::{Error, Result};
use crate::specfun::complex_bessel_j;
use crate::specfun::gamma::log_factorial;
use crate::squeeze::{element_gegenbauer, FockPair, SqueezeParam};
use num_complex::Complex64;
use serde::Serialize;

/// Term budget of [`coherent_sum_lhs`].
pub const MAX_COHERENT_TERMS: u64 = 100_000;

/// Initial and final coherent amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherentPair {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl CoherentPair {
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        CoherentPair { alpha, beta }
    }
}

/// `ln(|x|^p)` with `0^0 = 1`.
fn ln_pow(ln_abs: f64, p: u64) -> f64 {
    if p == 0 {
        0.0
    } else {
        p as f64 * ln_abs
    }
}

/// `Σ_n (β*)^{n+2k}/√((n+2k)!) e^{−|β|²/2} αⁿ/√(n!) e^{−|α|²/2} ⟨n+2k|S|n⟩`,
/// term by term, until the Poisson tail bound falls below
/// `rel_tol · |partial sum|`.
pub fn coherent_sum_lhs(pair: CoherentPair, k: u64, param: SqueezeParam, rel_tol: f64) -> Result<Complex64> {
    if !(rel_tol > 0.0) {
        return Err(Error::domain("coherent_sum_lhs", format!("rel_tol = {rel_tol} must be positive")));
    }
    let (a, b) = (pair.alpha.norm(), pair.beta.norm());
    let (ln_a, ln_b) = (a.ln(), b.ln());
    let (arg_a, arg_b) = (pair.alpha.arg(), pair.beta.arg());
    let ln_env = -0.5 * (a * a + b * b);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..MAX_COHERENT_TERMS {
        let top = n + 2 * k;
        // |term| without the matrix element, which is at most 1 in modulus
        let ln_bound = ln_pow(ln_b, top) + ln_pow(ln_a, n) - 0.5 * (log_factorial(top) + log_factorial(n)) + ln_env;
        if ln_bound > f64::NEG_INFINITY {
            let el = element_gegenbauer(FockPair::new(top, n), param).log_form;
            if !el.is_zero() {
                let phase = -(top as f64) * arg_b + n as f64 * arg_a + el.phase;
                sum += Complex64::from_polar((ln_bound + el.log_abs).exp(), phase);
            }
        }
        // successive bounds shrink by ρ = ab / √((n+1)(n+2k+1)) from here on
        let rho = a * b / (((n + 1) as f64) * ((top + 1) as f64)).sqrt();
        if rho < 0.5 {
            let tail = ln_bound.exp() * rho / (1.0 - rho);
            if tail <= rel_tol * sum.norm() || tail < f64::MIN_POSITIVE {
                return Ok(sum);
            }
        }
    }
    Err(Error::no_convergence("coherent_sum_lhs", format!("{MAX_COHERENT_TERMS} terms did not reach the tolerance")))
}

/// `exp(−|β|²/2 − |α|²/2 + β*α cos θ) e^{−η/4} e^{ikφ} (β*/α)^k J_k(β*α tanh r)`.
pub fn coherent_closed_rhs(pair: CoherentPair, k: u64, param: SqueezeParam) -> Result<Complex64> {
    let d = param.derive();
    let (alpha, beta) = (pair.alpha, pair.beta);
    let w = beta.conj() * alpha;
    let env = (w * d.x - 0.5 * (alpha.norm_sqr() + beta.norm_sqr())).exp() * (-0.25 * d.eta).exp();
    if alpha == Complex64::new(0.0, 0.0) {
        if k > 0 {
            return Err(Error::domain("coherent_closed_rhs", "alpha = 0 with k > 0 (the (β*/α)^k factor)"));
        }
        return Ok(env);
    }
    let ratio = (beta.conj() / alpha).powu(k as u32);
    let j = complex_bessel_j(k, w * d.tanh_r)?;
    Ok(env * Complex64::from_polar(1.0, k as f64 * param.phi) * ratio * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;

    fn p(r: f64, phi: f64) -> SqueezeParam {
        SqueezeParam::new(r, phi).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_pair_single_term() {
        let zero = CoherentPair::new(c(0.0, 0.0), c(0.0, 0.0));
        let param = p(0.8, 0.4);
        let want = (-0.25 * param.derive().eta).exp();
        assert!((coherent_sum_lhs(zero, 0, param, 1e-12).unwrap() - want).norm() < 1e-15);
        assert!((coherent_closed_rhs(zero, 0, param).unwrap() - want).norm() < 1e-15);
        // β = 0 leaves nothing for k = 1
        assert_eq!(coherent_sum_lhs(zero, 1, param, 1e-12).unwrap(), c(0.0, 0.0));
        assert!(coherent_closed_rhs(zero, 1, param).is_err());
    }

    #[test]
    fn two_sided_identity() {
        let pair = CoherentPair::new(c(1.2, 0.0), Complex64::from_polar(1.2, 0.3));
        let param = p(0.8, 0.0);
        for k in 0..4 {
            let lhs = coherent_sum_lhs(pair, k, param, 1e-14).unwrap();
            let rhs = coherent_closed_rhs(pair, k, param).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "k={k}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn real_amplitudes_reduce_to_bessel() {
        let (a, r) = (1.7f64, 0.6f64);
        let param = p(r, 0.0);
        let d = param.derive();
        let pair = CoherentPair::new(c(a, 0.0), c(a, 0.0));
        for k in 0..4u64 {
            let want = (-a * a * (1.0 - d.x)).exp() * (-0.25 * d.eta).exp() * bessel_j(k, a * a * r.tanh());
            let got = coherent_closed_rhs(pair, k, param).unwrap();
            assert!((got - c(want, 0.0)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        let pair = CoherentPair::new(c(1.0, 0.0), c(1.0, 0.0));
        assert!(coherent_sum_lhs(pair, 0, p(0.5, 0.0), 0.0).is_err());
    }
}
