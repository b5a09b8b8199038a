//! Special functions used by the matrix-element routes.

pub mod bessel;
pub mod elliptic;
pub mod gamma;
pub mod hyper;
pub mod lognum;
pub mod poly;
pub(crate) mod series;

pub use bessel::{bessel_j, complex_bessel_j};
pub use elliptic::{elliptic_e, elliptic_k, legendre_q_half, legendre_q_half_ln};
pub use gamma::{log_factorial, log_gamma};
pub use hyper::{hypergeometric_terminating, hypergeometric_terminating_sum, HyperSum};
pub use lognum::{LogComplex, LogSigned};
pub use poly::{assoc_legendre_p, assoc_legendre_p_trig, gegenbauer, hermite_psi, legendre_p};
