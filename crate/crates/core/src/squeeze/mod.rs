//! Fock-basis matrix elements `⟨m|S(ξ)|n⟩` of the squeeze operator
//! `S(ξ) = exp[½ξ(a⁺)² − ½ξ*a²]`, `ξ = r e^{iφ}`.

mod distribution;
mod routes;

pub use distribution::{distribution, distribution_with, mean_energy, Distribution, DEFAULT_CAP, DEFAULT_MASS_TARGET};
pub use routes::{
    element, element_finite_sum, element_gegenbauer, element_hermite_approx, element_hypergeometric, element_legendre,
    regime_indicators, transition_probability, RegimeIndicators,
};

use crate::error::{Error, Result};
use crate::specfun::lognum::{wrap_phase, LogComplex};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Squeeze parameter `ξ = r e^{iφ}` with `r >= 0` and `φ` in `(−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezeParam {
    pub r: f64,
    pub phi: f64,
}

impl SqueezeParam {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::domain("SqueezeParam", format!("r = {r} must be finite and non-negative")));
        }
        if !phi.is_finite() {
            return Err(Error::domain("SqueezeParam", format!("phi = {phi} is not finite")));
        }
        Ok(SqueezeParam { r, phi: wrap_phase(phi) })
    }

    /// Real squeezing, `φ = 0`.
    pub fn real(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    pub fn derive(&self) -> Derived {
        Derived::new(*self)
    }
}

/// Quantities derived from `ξ`. Logs are computed directly so that they
/// stay accurate when `r` is tiny or large.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Derived {
    /// `η = 2 ln cosh r`
    pub eta: f64,
    /// `ζ = e^{iφ} tanh r`
    pub zeta: Complex64,
    /// `x = cos θ = 1/cosh r`
    pub x: f64,
    /// `θ` with `sin θ = tanh r`
    pub theta: f64,
    /// `z = −sinh² r`
    pub z: f64,
    /// Squeeze factor `s = e^r`
    pub s: f64,
    pub cosh_r: f64,
    pub sinh_r: f64,
    pub tanh_r: f64,
    pub ln_cosh_r: f64,
    pub ln_tanh_r: f64,
}

impl Derived {
    fn new(p: SqueezeParam) -> Self {
        let r = p.r;
        let e2 = (-2.0 * r).exp();
        let ln_cosh_r = r + e2.ln_1p() - LN_2;
        let ln_tanh_r = if r == 0.0 { f64::NEG_INFINITY } else { (-(-2.0 * r).exp_m1()).ln() - e2.ln_1p() };
        let tanh_r = r.tanh();
        let x = (-ln_cosh_r).exp();
        Derived {
            eta: 2.0 * ln_cosh_r,
            zeta: Complex64::from_polar(tanh_r, p.phi),
            x,
            theta: tanh_r.atan2(x),
            z: -r.sinh().powi(2),
            s: r.exp(),
            cosh_r: r.cosh(),
            sinh_r: r.sinh(),
            tanh_r,
            ln_cosh_r,
            ln_tanh_r,
        }
    }
}

/// Final and initial photon numbers of `⟨m|S|n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FockPair {
    pub m: u64,
    pub n: u64,
}

impl FockPair {
    pub fn new(m: u64, n: u64) -> Self {
        FockPair { m, n }
    }

    /// `(m + n) mod 2`; the element vanishes when this is 1.
    pub fn parity_class(&self) -> u64 {
        (self.m + self.n) % 2
    }

    pub fn same_parity(&self) -> bool {
        self.parity_class() == 0
    }

    /// `l = (m + n)/2`
    pub fn l(&self) -> u64 {
        (self.m + self.n) / 2
    }

    /// `k = α = (m − n)/2`, negative when `m < n`.
    pub fn k(&self) -> i64 {
        (self.m as i64 - self.n as i64) / 2
    }

    pub fn n_lesser(&self) -> u64 {
        self.m.min(self.n)
    }

    pub fn n_greater(&self) -> u64 {
        self.m.max(self.n)
    }

    pub fn swapped(&self) -> Self {
        FockPair { m: self.n, n: self.m }
    }
}

/// How a matrix element was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Gegenbauer,
    Hypergeometric,
    FiniteSum,
    Legendre,
    Oracle,
    HermiteApprox,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Gegenbauer => "gegenbauer",
            Route::Hypergeometric => "hypergeometric",
            Route::FiniteSum => "finite_sum",
            Route::Legendre => "legendre",
            Route::Oracle => "oracle",
            Route::HermiteApprox => "hermite_approx",
        }
    }

    /// The four closed-form routes.
    pub const CLOSED_FORMS: [Route; 4] = [Route::Gegenbauer, Route::Hypergeometric, Route::FiniteSum, Route::Legendre];
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gegenbauer" => Route::Gegenbauer,
            "hypergeometric" => Route::Hypergeometric,
            "finite_sum" | "finite-sum" => Route::FiniteSum,
            "legendre" => Route::Legendre,
            "oracle" => Route::Oracle,
            "hermite_approx" | "hermite" => Route::HermiteApprox,
            _ => return Err(Error::domain("Route", format!("unknown route '{s}'"))),
        })
    }
}

/// A matrix element with the route that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct ElementResult {
    pub value: Complex64,
    pub route: Route,
    pub log_form: LogComplex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_note: Option<String>,
}

impl ElementResult {
    pub(crate) fn from_log(log_form: LogComplex, route: Route) -> Self {
        ElementResult { value: log_form.to_complex(), route, log_form, condition_note: None }
    }

    pub(crate) fn zero(route: Route) -> Self {
        Self::from_log(LogComplex::ZERO, route)
    }

    pub(crate) fn one(route: Route) -> Self {
        Self::from_log(LogComplex::ONE, route)
    }

    /// `|⟨m|S|n⟩|²`
    pub fn probability(&self) -> f64 {
        if self.log_form.is_zero() {
            0.0
        } else {
            (2.0 * self.log_form.log_abs).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_identity() {
        let d = SqueezeParam::real(0.0).unwrap().derive();
        assert_eq!(d.eta, 0.0);
        assert_eq!(d.zeta, Complex64::new(0.0, 0.0));
        assert_eq!(d.x, 1.0);
        assert_eq!(d.s, 1.0);
    }

    #[test]
    fn derive_fig_one_values() {
        let d = SqueezeParam::real(1.5).unwrap().derive();
        assert!((d.s - 4.48).abs() < 0.005);
        assert!((d.tanh_r * d.tanh_r - 0.82).abs() < 0.005);
        assert!((d.x.powi(2) + d.tanh_r.powi(2) - 1.0).abs() < 1e-15);
        assert!((d.eta - 2.0 * 1.5f64.cosh().ln()).abs() < 1e-15);
        assert!((d.z + 1.5f64.sinh().powi(2)).abs() < 1e-13);
        assert!((d.theta.cos() - d.x).abs() < 1e-15);
    }

    #[test]
    fn derive_tiny_and_large_r() {
        let d = SqueezeParam::real(1e-12).unwrap().derive();
        assert!((d.ln_tanh_r - (1e-12f64).ln()).abs() < 1e-12);
        let d = SqueezeParam::real(800.0).unwrap().derive();
        assert!((d.ln_cosh_r - (800.0 - LN_2)).abs() < 1e-12);
        assert!(d.eta.is_finite());
    }

    #[test]
    fn param_validation_and_wrapping() {
        assert!(SqueezeParam::new(-0.1, 0.0).is_err());
        assert!(SqueezeParam::new(f64::NAN, 0.0).is_err());
        let p = SqueezeParam::new(1.0, 3.0 * std::f64::consts::PI).unwrap();
        assert!((p.phi - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn fock_pair_indices() {
        let p = FockPair::new(3, 7);
        assert!(p.same_parity());
        assert_eq!(p.l(), 5);
        assert_eq!(p.k(), -2);
        assert_eq!((p.n_lesser(), p.n_greater()), (3, 7));
        assert_eq!(FockPair::new(1, 0).parity_class(), 1);
    }

    #[test]
    fn route_names_round_trip() {
        for r in [
            Route::Gegenbauer,
            Route::Hypergeometric,
            Route::FiniteSum,
            Route::Legendre,
            Route::Oracle,
            Route::HermiteApprox,
        ] {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
    }
}
