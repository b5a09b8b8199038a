//! Coherent, Gaussian-stochastic and thermal superpositions of squeeze
//! matrix elements, in closed form and term by term.

mod coherent;
mod thermal;

pub use coherent::{coherent_closed_rhs, coherent_sum_lhs, CoherentPair, MAX_COHERENT_TERMS};
pub use thermal::{
    gaussian_average, gaussian_average_quadrature, planck_weights, semiclassical_comparison, thermal_absorption,
    thermal_absorption_sum, thermal_emission, thermal_emission_sum, ComparisonReport, PlanckWeights, Regime,
    ThermalField, GAUSSIAN_QUAD_TOL, MAX_THERMAL_TERMS,
};
