use crate::error::{Error, Result};
use crate::oracle::quadrature_exp_weighted;
use crate::specfun::{bessel_j, legendre_q_half_ln};
use crate::squeeze::{transition_probability, FockPair, SqueezeParam};
use serde::Serialize;
use std::f64::consts::PI;

/// Relative tolerance of [`gaussian_average_quadrature`].
pub const GAUSSIAN_QUAD_TOL: f64 = 1e-10;
/// Term budget of the Planck-Bose sums.
pub const MAX_THERMAL_TERMS: u64 = 10_000_000;

/// A thermal mode: mean photon number `n̄` and Boltzmann factor
/// `b = e^{−hν/kT} = n̄/(1 + n̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermalField {
    pub nbar: f64,
    pub b: f64,
}

impl ThermalField {
    pub fn from_nbar(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::domain("ThermalField", format!("nbar = {nbar} must be finite and non-negative")));
        }
        Ok(ThermalField { nbar, b: nbar / (1.0 + nbar) })
    }

    pub fn from_b(b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&b) {
            return Err(Error::domain("ThermalField", format!("b = {b} outside [0, 1)")));
        }
        Self::from_nbar(b / (1.0 - b))
    }

    /// From `hν/kT > 0`.
    pub fn from_hv_over_kt(x: f64) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::domain("ThermalField", format!("hν/kT = {x} must be positive")));
        }
        let nbar = 1.0 / x.exp_m1();
        Ok(ThermalField { nbar, b: (-x).exp() })
    }

    /// `hν/kT = −ln b`
    pub fn hv_over_kt(&self) -> f64 {
        -self.b.ln()
    }

    fn ln_b(&self) -> f64 {
        self.nbar.ln() - self.nbar.ln_1p()
    }
}

/// `p_n = (1 − b) bⁿ` for `n ≤ n_max`, and the remaining mass `b^{n_max+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct PlanckWeights {
    pub weights: Vec<f64>,
    pub tail: f64,
}

pub fn planck_weights(field: ThermalField, n_max: u64) -> PlanckWeights {
    let weights = (0..=n_max).map(|n| planck_weight(field, n)).collect();
    let tail = if field.b == 0.0 { 0.0 } else { ((n_max + 1) as f64 * field.ln_b()).exp() };
    PlanckWeights { weights, tail }
}

fn planck_weight(field: ThermalField, n: u64) -> f64 {
    if n == 0 {
        return 1.0 / (1.0 + field.nbar);
    }
    if field.b == 0.0 {
        return 0.0;
    }
    (n as f64 * field.ln_b() - field.nbar.ln_1p()).exp()
}

/// `(1/(πγI₀)) Q_{k−½}(1 + 1/(2γ²I₀²))`
pub fn gaussian_average(k: u64, gamma: f64, i0: f64) -> Result<f64> {
    let g = check_gamma(gamma, i0)?;
    let z = 1.0 + 0.5 / (g * g);
    Ok((legendre_q_half_ln(k, z)? - (PI * g).ln()).exp())
}

/// `(1/I₀) ∫₀^∞ e^{−I/I₀} J_k²(γI) dI` by quadrature.
pub fn gaussian_average_quadrature(k: u64, gamma: f64, i0: f64) -> Result<f64> {
    check_gamma(gamma, i0)?;
    quadrature_exp_weighted(|i| bessel_j(k, gamma * i).powi(2), i0, GAUSSIAN_QUAD_TOL)
}

fn check_gamma(gamma: f64, i0: f64) -> Result<f64> {
    if !(gamma > 0.0 && i0 > 0.0) || !(gamma * i0).is_finite() {
        return Err(Error::domain("gaussian_average", format!("gamma = {gamma}, I0 = {i0} must be positive")));
    }
    Ok(gamma * i0)
}

/// Closed form of the thermal average, with `b^{sign·order}`.
fn thermal_closed(order: u64, sign: f64, field: ThermalField, param: SqueezeParam, func: &'static str) -> Result<f64> {
    if param.r == 0.0 {
        return Err(Error::domain(func, "r = 0 (sin θ = tanh r appears in a denominator)"));
    }
    if field.nbar == 0.0 {
        return Err(Error::domain(func, "nbar = 0 (use the sum form)"));
    }
    let d = param.derive();
    let nn = field.nbar * (1.0 + field.nbar);
    let z = 1.0 + 0.5 / (nn * d.tanh_r * d.tanh_r);
    let ln = -d.ln_cosh_r - PI.ln() - 0.5 * nn.ln() - d.ln_tanh_r
        + sign * order as f64 * field.ln_b()
        + legendre_q_half_ln(order, z)?;
    Ok(ln.exp())
}

/// `Σ_n p_n |⟨n+2k|S|n⟩|²` in closed form.
pub fn thermal_emission(k: u64, field: ThermalField, param: SqueezeParam) -> Result<f64> {
    thermal_closed(k, -1.0, field, param, "thermal_emission")
}

/// `Σ_{n≥2l} p_n |⟨n−2l|S|n⟩|²` in closed form.
pub fn thermal_absorption(l: u64, field: ThermalField, param: SqueezeParam) -> Result<f64> {
    thermal_closed(l, 1.0, field, param, "thermal_absorption")
}

/// `Σ_{n≥start} p_n w(n)`, stopped once both the weight tail `b^{n+1}` and
/// the last term are below `rel_tol` times the partial sum.
fn thermal_sum(
    field: ThermalField,
    start: u64,
    rel_tol: f64,
    func: &'static str,
    w: impl Fn(u64) -> f64,
) -> Result<f64> {
    if !(rel_tol > 0.0) {
        return Err(Error::domain(func, format!("rel_tol = {rel_tol} must be positive")));
    }
    let mut sum = 0.0;
    for n in start..start + MAX_THERMAL_TERMS {
        let term = planck_weight(field, n) * w(n);
        sum += term;
        let tail = if field.b == 0.0 { 0.0 } else { ((n + 1) as f64 * field.ln_b()).exp() };
        let bar = rel_tol * sum;
        if tail <= bar && term <= bar || tail == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence(func, format!("{MAX_THERMAL_TERMS} terms did not reach the tolerance")))
}

/// Term-by-term counterpart of [`thermal_emission`]; handles `n̄ = 0`.
pub fn thermal_emission_sum(k: u64, field: ThermalField, param: SqueezeParam, rel_tol: f64) -> Result<f64> {
    thermal_sum(field, 0, rel_tol, "thermal_emission_sum", |n| {
        transition_probability(FockPair::new(n + 2 * k, n), param)
    })
}

/// Term-by-term counterpart of [`thermal_absorption`].
pub fn thermal_absorption_sum(l: u64, field: ThermalField, param: SqueezeParam, rel_tol: f64) -> Result<f64> {
    thermal_sum(field, 2 * l, rel_tol, "thermal_absorption_sum", |n| {
        transition_probability(FockPair::new(n - 2 * l, n), param)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RayleighJeans,
    Intermediate,
    Wien,
}

impl Regime {
    /// `rayleigh_jeans` below `hν/kT = 0.1`, `wien` above 3.
    pub fn classify(hv_over_kt: f64) -> Self {
        if hv_over_kt < 0.1 {
            Regime::RayleighJeans
        } else if hv_over_kt > 3.0 {
            Regime::Wien
        } else {
            Regime::Intermediate
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::RayleighJeans => "rayleigh_jeans",
            Regime::Intermediate => "intermediate",
            Regime::Wien => "wien",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub order: u64,
    pub quantum_emission: f64,
    pub quantum_absorption: f64,
    pub semiclassical: f64,
    pub regime: Regime,
    /// `quantum_emission / semiclassical`
    pub ratio: f64,
}

/// Thermal quantum averages against the Gaussian semiclassical average at
/// `γI₀ = √(n̄(1+n̄)) sin θ`, where both share the same toroidal argument.
pub fn semiclassical_comparison(k: u64, field: ThermalField, param: SqueezeParam) -> Result<ComparisonReport> {
    let quantum_emission = thermal_emission(k, field, param)?;
    let quantum_absorption = thermal_absorption(k, field, param)?;
    let g = (field.nbar * (1.0 + field.nbar)).sqrt() * param.derive().tanh_r;
    let semiclassical = gaussian_average(k, g, 1.0)?;
    Ok(ComparisonReport {
        order: k,
        quantum_emission,
        quantum_absorption,
        semiclassical,
        regime: Regime::classify(field.hv_over_kt()),
        ratio: quantum_emission / semiclassical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: f64) -> SqueezeParam {
        SqueezeParam::real(r).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn field_constructors() {
        let f = ThermalField::from_nbar(1.0).unwrap();
        assert_eq!(f.b, 0.5);
        assert_eq!(ThermalField::from_b(0.5).unwrap().nbar, 1.0);
        let f = ThermalField::from_hv_over_kt(2.0).unwrap();
        assert!(rel(f.b, f.nbar / (1.0 + f.nbar)) < 1e-15);
        assert!(ThermalField::from_nbar(-1.0).is_err());
        assert!(ThermalField::from_b(1.0).is_err());
    }

    #[test]
    fn planck_weight_examples() {
        let w = planck_weights(ThermalField::from_nbar(0.0).unwrap(), 5);
        assert_eq!(w.weights, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(w.tail, 0.0);
        let w = planck_weights(ThermalField::from_nbar(1.0).unwrap(), 10);
        for (n, &v) in w.weights.iter().enumerate() {
            assert!(rel(v, 0.5f64.powi(n as i32 + 1)) < 1e-15);
        }
        for &nbar in &[0.1, 1.0, 5.0, 40.0] {
            let w = planck_weights(ThermalField::from_nbar(nbar).unwrap(), 30);
            let total: f64 = w.weights.iter().sum::<f64>() + w.tail;
            assert!((total - 1.0).abs() < 1e-14, "nbar={nbar}: {total}");
        }
    }

    #[test]
    fn gaussian_closed_vs_quadrature() {
        for k in 0..=5 {
            for &g in &[0.1, 0.5, 1.0, 3.0] {
                let closed = gaussian_average(k, g, 1.0).unwrap();
                let quad = gaussian_average_quadrature(k, g, 1.0).unwrap();
                assert!(rel(quad, closed) < 1e-6, "k={k} gI0={g}: {quad} vs {closed}");
            }
        }
    }

    #[test]
    fn gaussian_average_limits() {
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let v = gaussian_average(k, 0.7, 1.3).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!((gaussian_average(0, 1e-4, 1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(gaussian_average(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn thermal_closed_vs_sums() {
        for &nbar in &[0.1, 1.0, 5.0] {
            let f = ThermalField::from_nbar(nbar).unwrap();
            for &r in &[0.5, 1.0, 1.5] {
                for k in 0..=5 {
                    let e = thermal_emission(k, f, p(r)).unwrap();
                    let es = thermal_emission_sum(k, f, p(r), 1e-12).unwrap();
                    assert!(rel(es, e) < 1e-8, "emission k={k} nbar={nbar} r={r}: {es} vs {e}");
                    let a = thermal_absorption(k, f, p(r)).unwrap();
                    let as_ = thermal_absorption_sum(k, f, p(r), 1e-12).unwrap();
                    assert!(rel(as_, a) < 1e-8, "absorption k={k} nbar={nbar} r={r}: {as_} vs {a}");
                    assert!(a <= e);
                    assert!(rel(e / a, f.b.powi(-2 * k as i32)) < 1e-10);
                }
                assert_eq!(thermal_emission(0, f, p(r)).unwrap(), thermal_absorption(0, f, p(r)).unwrap());
            }
        }
    }

    #[test]
    fn sum_form_without_photons() {
        let f = ThermalField::from_nbar(0.0).unwrap();
        for k in 0..4 {
            let v = thermal_emission_sum(k, f, p(0.9), 1e-12).unwrap();
            assert_eq!(v, transition_probability(FockPair::new(2 * k, 0), p(0.9)));
        }
        assert!(thermal_emission(0, f, p(0.9)).is_err());
        assert!(thermal_emission(0, ThermalField::from_nbar(1.0).unwrap(), p(0.0)).is_err());
    }

    #[test]
    fn thermal_total_probability() {
        let f = ThermalField::from_nbar(1.0).unwrap();
        let param = p(0.7);
        let mut total = thermal_emission(0, f, param).unwrap();
        for k in 1..400 {
            total += thermal_emission(k, f, param).unwrap() + thermal_absorption(k, f, param).unwrap();
        }
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn thermal_average_ignores_phase() {
        let f = ThermalField::from_nbar(2.0).unwrap();
        let a = thermal_emission_sum(2, f, SqueezeParam::new(0.8, 0.0).unwrap(), 1e-12).unwrap();
        let b = thermal_emission_sum(2, f, SqueezeParam::new(0.8, 2.1).unwrap(), 1e-12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn semiclassical_regimes() {
        let weak = p(0.1);
        let cos = 1.0 / 0.1f64.cosh();
        for k in 1..=3 {
            let rep = semiclassical_comparison(k, ThermalField::from_b(0.99).unwrap(), weak).unwrap();
            assert_eq!(rep.regime, Regime::RayleighJeans);
            assert!((rep.ratio - 1.0).abs() < 0.06, "k={k}: {}", rep.ratio);
            assert!(rel(rep.ratio, cos * 0.99f64.powi(-(k as i32))) < 1e-10);
        }
        let rep = semiclassical_comparison(2, ThermalField::from_b(0.02).unwrap(), weak).unwrap();
        assert_eq!(rep.regime, Regime::Wien);
        assert!(rep.ratio >= 100.0 && rel(rep.ratio, cos * 2500.0) < 1e-10, "{}", rep.ratio);
        let rep = semiclassical_comparison(0, ThermalField::from_b(0.5).unwrap(), p(1.0)).unwrap();
        assert_eq!(rep.regime, Regime::Intermediate);
        assert!(rel(rep.ratio, 1.0 / 1.0f64.cosh()) < 1e-12);
    }
}
