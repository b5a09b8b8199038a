use super::{ElementResult, FockPair, Route, SqueezeParam};
use crate::error::{Error, Result};
use crate::specfun::gamma::{log_factorial, log_factorial_ratio, log_gamma_half_integer};
use crate::specfun::hyper::terminating_sum_dd;
use crate::specfun::lognum::{LogComplex, LogSigned};
use crate::specfun::series::{sum_by_ratios, Dd};
use crate::specfun::{assoc_legendre_p_trig, gegenbauer, hermite_psi};
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Cancellation factor above which a route attaches a condition note.
const CANCELLATION_NOTE: f64 = 1e6;

/// Handles the cases every route shares: wrong parity and `r = 0`.
fn trivial(pair: FockPair, param: SqueezeParam, route: Route) -> Option<ElementResult> {
    if !pair.same_parity() {
        return Some(ElementResult::zero(route));
    }
    if param.r == 0.0 {
        return Some(if pair.m == pair.n { ElementResult::one(route) } else { ElementResult::zero(route) });
    }
    None
}

fn sign_phase(v: LogSigned) -> f64 {
    if v.sign < 0 {
        PI
    } else {
        0.0
    }
}

fn cancellation_note(cancellation: f64) -> Option<String> {
    (cancellation > CANCELLATION_NOTE)
        .then(|| format!("alternating sum cancelled {:.1} decimal digits", cancellation.log10()))
}

/// Gegenbauer form: for `m ≥ n`
/// `e^{−η/4} (2e^{iφ} tanh r)^α √(n!/m!) Γ(α+½)/√π · C_n^{α+½}(1/cosh r)`,
/// and the mirrored form with `(−2e^{−iφ} tanh r)^λ` for `m ≤ n`.
pub fn element_gegenbauer(pair: FockPair, param: SqueezeParam) -> ElementResult {
    if let Some(t) = trivial(pair, param, Route::Gegenbauer) {
        return t;
    }
    let d = param.derive();
    let (hi, lo) = (pair.n_greater(), pair.n_lesser());
    let a = (hi - lo) / 2;
    let poly = gegenbauer(lo, a as f64 + 0.5, d.x).expect("order a + 1/2 exceeds -1/2");
    if poly.is_zero() {
        return ElementResult::zero(Route::Gegenbauer);
    }
    let log_abs = -0.25 * d.eta + a as f64 * (LN_2 + d.ln_tanh_r) - 0.5 * log_factorial_ratio(hi, lo)
        + log_gamma_half_integer(a)
        - 0.5 * PI.ln()
        + poly.log_abs;
    let phase = if pair.m >= pair.n { a as f64 * param.phi } else { a as f64 * (PI - param.phi) };
    ElementResult::from_log(LogComplex::new(log_abs, phase + sign_phase(poly)), Route::Gegenbauer)
}

/// Hypergeometric form: for `m ≥ n`
/// `e^{−(n+½)η/2} (ζ/2)^α √(m!/n!) / Γ(α+1) · F(−n/2, (1−n)/2; α+1; −sinh² r)`,
/// and for `m < n` the conjugate mirror carrying `(−1)^λ`.
pub fn element_hypergeometric(pair: FockPair, param: SqueezeParam) -> ElementResult {
    if let Some(t) = trivial(pair, param, Route::Hypergeometric) {
        return t;
    }
    let d = param.derive();
    let (hi, lo) = (pair.n_greater(), pair.n_lesser());
    let a = (hi - lo) / 2;
    let lof = lo as f64;
    let f = terminating_sum_dd(-lof / 2.0, (1.0 - lof) / 2.0, a as f64 + 1.0, neg_sinh_sq(param.r), lo as usize / 2);
    if f.value.is_zero() {
        return ElementResult::zero(Route::Hypergeometric);
    }
    let log_abs = -0.5 * (lof + 0.5) * d.eta + a as f64 * (d.ln_tanh_r - LN_2) + 0.5 * log_factorial_ratio(hi, lo)
        - log_factorial(a)
        + f.value.log_abs;
    let phase = if pair.m >= pair.n { a as f64 * param.phi } else { a as f64 * (PI - param.phi) };
    let mut res = ElementResult::from_log(LogComplex::new(log_abs, phase + sign_phase(f.value)), Route::Hypergeometric);
    res.condition_note = cancellation_note(f.cancellation);
    res
}

/// `−sinh² r` in double-double.
fn neg_sinh_sq(r: f64) -> Dd {
    let s = Dd::sinh(r);
    s.mul(s).neg()
}

/// Explicit finite sum: for `m ≥ n`
/// `e^{−(n+½)η/2} (ζ/2)^α √(m! n!) Σ_k (−|ζ|²e^η/4)^k / ((α+k)! k! (n−2k)!)`.
pub fn element_finite_sum(pair: FockPair, param: SqueezeParam) -> ElementResult {
    if let Some(t) = trivial(pair, param, Route::FiniteSum) {
        return t;
    }
    let d = param.derive();
    let (hi, lo) = (pair.n_greater(), pair.n_lesser());
    let a = (hi - lo) / 2;
    // −|ζ|² e^η / 4
    let q = neg_sinh_sq(param.r).ldexp(-2);
    let sum = sum_by_ratios(lo as usize / 2 + 1, |k| {
        let top = (lo - 2 * k as u64) as f64;
        let num = Dd::from_f64(top).mul(Dd::from_f64(top - 1.0));
        let den = Dd::from_f64((a + k as u64 + 1) as f64).mul(Dd::from_f64(k as f64 + 1.0));
        q.mul(num).div(den)
    });
    if sum.value.is_zero() {
        return ElementResult::zero(Route::FiniteSum);
    }
    // the k = 0 term is 1/(α! n!)
    let log_abs = -0.5 * (lo as f64 + 0.5) * d.eta
        + a as f64 * (d.ln_tanh_r - LN_2)
        + 0.5 * (log_factorial(hi) + log_factorial(lo))
        - log_factorial(a)
        - log_factorial(lo)
        + sum.value.log_abs;
    let phase = if pair.m >= pair.n { a as f64 * param.phi } else { a as f64 * (PI - param.phi) };
    let mut res = ElementResult::from_log(LogComplex::new(log_abs, phase + sign_phase(sum.value)), Route::FiniteSum);
    res.condition_note = cancellation_note(sum.cancellation);
    res
}

/// Spherical-harmonic form `√cos θ · X_l^k(θ, φ)` with
/// `X_l^k = (−1)^k √((l−k)!/(l+k)!) P_l^k(cos θ) e^{ikφ}`,
/// `l = (m+n)/2`, `k = (m−n)/2`, `cos θ = 1/cosh r`.
pub fn element_legendre(pair: FockPair, param: SqueezeParam) -> ElementResult {
    if let Some(t) = trivial(pair, param, Route::Legendre) {
        return t;
    }
    let d = param.derive();
    let (l, k) = (pair.l(), pair.k());
    let order = k.unsigned_abs();
    let p = assoc_legendre_p_trig(l, k, d.x, d.ln_tanh_r).expect("|k| <= l");
    if p.is_zero() {
        return ElementResult::zero(Route::Legendre);
    }
    let half_ratio = 0.5 * log_factorial_ratio(l + order, l - order);
    let log_abs = -0.5 * d.ln_cosh_r + if k >= 0 { -half_ratio } else { half_ratio } + p.log_abs;
    let mut phase = k as f64 * param.phi + sign_phase(p);
    if order % 2 == 1 {
        phase += PI;
    }
    ElementResult::from_log(LogComplex::new(log_abs, phase), Route::Legendre)
}

/// Transition probability
/// `w_{m,n} = (n_<!/n_>!) · x · |P_{(m+n)/2}^{|m−n|/2}(x)|²`, `x = 1/cosh r`.
pub fn transition_probability(pair: FockPair, param: SqueezeParam) -> f64 {
    if !pair.same_parity() {
        return 0.0;
    }
    if param.r == 0.0 {
        return if pair.m == pair.n { 1.0 } else { 0.0 };
    }
    let d = param.derive();
    let order = pair.k().unsigned_abs();
    let p = assoc_legendre_p_trig(pair.l(), order as i64, d.x, d.ln_tanh_r).expect("|k| <= l");
    if p.is_zero() {
        return 0.0;
    }
    (-log_factorial_ratio(pair.n_greater(), pair.n_lesser()) - d.ln_cosh_r + 2.0 * p.log_abs).exp()
}

/// Large-`m` approximation
/// `e^{iφ(m−n)/2} / (cosh r √t_m) · ψ_n(t_m)`, `t_m = √(m / (2 cosh² r))`.
pub fn element_hermite_approx(pair: FockPair, param: SqueezeParam) -> Result<ElementResult> {
    if pair.m == 0 {
        return Err(Error::domain("element_hermite_approx", "m must be at least 1"));
    }
    if !pair.same_parity() {
        return Ok(ElementResult::zero(Route::HermiteApprox));
    }
    let d = param.derive();
    let ln_t = 0.5 * (pair.m as f64 / 2.0).ln() - d.ln_cosh_r;
    let psi = hermite_psi(pair.n, ln_t.exp());
    if psi.is_zero() {
        return Ok(ElementResult::zero(Route::HermiteApprox));
    }
    let log_abs = -d.ln_cosh_r - 0.5 * ln_t + psi.log_abs;
    let phase = 0.5 * (pair.m as f64 - pair.n as f64) * param.phi + sign_phase(psi);
    Ok(ElementResult::from_log(LogComplex::new(log_abs, phase), Route::HermiteApprox))
}

/// Matrix element by the requested closed-form or approximate route.
///
/// The oracle route lives in [`crate::oracle::element_oracle`].
pub fn element(pair: FockPair, param: SqueezeParam, route: Route) -> Result<ElementResult> {
    match route {
        Route::Gegenbauer => Ok(element_gegenbauer(pair, param)),
        Route::Hypergeometric => Ok(element_hypergeometric(pair, param)),
        Route::FiniteSum => Ok(element_finite_sum(pair, param)),
        Route::Legendre => Ok(element_legendre(pair, param)),
        Route::HermiteApprox => element_hermite_approx(pair, param),
        Route::Oracle => crate::oracle::element_oracle(pair, param, None).map(|o| o.result),
    }
}

/// Parameters that indicate whether the large-`m` approximation applies.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegimeIndicators {
    /// `n / cosh² r`
    pub n_over_cosh2: f64,
    /// `n (1 − tanh² r)`, equal to `n / cosh² r`
    pub n_one_minus_tanh2: f64,
    /// `n² tanh² r`
    pub n2_tanh2: f64,
}

pub fn regime_indicators(n: u64, param: SqueezeParam) -> RegimeIndicators {
    let d = param.derive();
    let nf = n as f64;
    RegimeIndicators {
        n_over_cosh2: nf * (-2.0 * d.ln_cosh_r).exp(),
        n_one_minus_tanh2: nf * (1.0 - d.tanh_r * d.tanh_r),
        n2_tanh2: nf * nf * d.tanh_r * d.tanh_r,
    }
}
