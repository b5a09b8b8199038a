//! Brute-force ground truth: the squeeze operator as the exponential of its
//! truncated Fock-space generator, checks of the operator orderings, and
//! quadrature for integral identities.

mod matrix;
mod normal_form;
mod quad;
mod spinor;

pub use matrix::{matrix_exponential, FockMatrix, MAX_EXP_NORM};
pub use normal_form::{anti_normal_block, normal_block, verify_normal_form, NormalFormCheck};
pub use quad::{quadrature_exp_weighted, quadrature_interval};
pub use spinor::{verify_spinor, SpinorCheck};

use crate::error::{Error, Result};
use crate::specfun::lognum::LogComplex;
use crate::squeeze::{ElementResult, FockPair, Route, SqueezeParam};
use num_complex::Complex64;
use serde::Serialize;

/// Starting truncation for indices up to 60.
pub const DEFAULT_DIM: usize = 256;
/// Largest truncation tried before giving up.
pub const MAX_DIM: usize = 8192;
/// Doubling difference below which an entry counts as converged.
pub const CERTIFY_TOL: f64 = 1e-10;

/// `G = (ξ/2)(a⁺)² − (ξ*/2)a²` on `|0⟩..|dim−1⟩`.
pub fn build_generator(dim: usize, param: SqueezeParam) -> FockMatrix {
    let xi = param.xi();
    let mut g = FockMatrix::zeros(dim);
    for n in 0..dim.saturating_sub(2) {
        let c = ((n + 1) as f64 * (n + 2) as f64).sqrt();
        g.set(n + 2, n, xi * (0.5 * c));
        g.set(n, n + 2, -xi.conj() * (0.5 * c));
    }
    g
}

/// The generator restricted to the Fock states of one parity,
/// `|p⟩, |p+2⟩, …` below `dim`.
pub fn build_generator_block(dim: usize, param: SqueezeParam, parity: usize) -> FockMatrix {
    let size = (dim + 1 - parity) / 2;
    let xi = param.xi();
    let mut g = FockMatrix::zeros(size);
    for j in 0..size.saturating_sub(1) {
        let n = 2 * j + parity;
        let c = ((n + 1) as f64 * (n + 2) as f64).sqrt();
        g.set(j + 1, j, xi * (0.5 * c));
        g.set(j, j + 1, -xi.conj() * (0.5 * c));
    }
    g
}

/// `e^G` on both parity blocks at one truncation.
#[derive(Clone, Debug)]
pub struct BlockExp {
    pub dim: usize,
    pub even: FockMatrix,
    pub odd: FockMatrix,
}

impl BlockExp {
    pub fn compute(dim: usize, param: SqueezeParam) -> Result<Self> {
        Ok(BlockExp {
            dim,
            even: build_generator_block(dim, param, 0).exp()?,
            odd: build_generator_block(dim, param, 1).exp()?,
        })
    }

    /// `⟨m|e^G|n⟩`; exact zero across parities.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        if (m + n) % 2 == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let block = if m % 2 == 0 { &self.even } else { &self.odd };
        block.get(m / 2, n / 2)
    }

    /// Full `dim × dim` matrix, with the parity blocks interleaved.
    pub fn to_full(&self) -> FockMatrix {
        FockMatrix::from_fn(self.dim, |i, j| self.get(i, j))
    }
}

/// `e^G` certified by dimension doubling on all entries with indices up to
/// `max_index`.
#[derive(Clone, Debug)]
pub struct CertifiedExp {
    pub param: SqueezeParam,
    pub max_index: usize,
    /// The smaller dimension of the agreeing pair.
    pub dim: usize,
    /// `max |v(dim) − v(2·dim)|` over the certified index range.
    pub error_estimate: f64,
    exp: BlockExp,
}

impl CertifiedExp {
    /// Doubles from `start_dim` (raised to exceed `2·max_index`) until two
    /// consecutive truncations agree to [`CERTIFY_TOL`].
    pub fn new(param: SqueezeParam, max_index: usize, start_dim: Option<usize>) -> Result<Self> {
        let mut dim = start_dim.unwrap_or(DEFAULT_DIM).max(2 * (max_index + 1)).max(4);
        if 2 * dim > MAX_DIM {
            return Err(Error::domain("element_oracle", format!("dimension {dim} cannot be doubled within {MAX_DIM}")));
        }
        let mut lo = BlockExp::compute(dim, param)?;
        loop {
            let hi = BlockExp::compute(2 * dim, param)?;
            let mut err = 0.0f64;
            for m in 0..=max_index {
                for n in (m % 2..=max_index).step_by(2) {
                    err = err.max((lo.get(m, n) - hi.get(m, n)).norm());
                }
            }
            if err < CERTIFY_TOL {
                return Ok(CertifiedExp { param, max_index, dim, error_estimate: err, exp: hi });
            }
            if 4 * dim > MAX_DIM {
                return Err(Error::no_convergence(
                    "element_oracle",
                    format!("doubling did not stabilize by dimension {MAX_DIM} (difference {err:.1e})"),
                ));
            }
            lo = hi;
            dim *= 2;
        }
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        assert!(m <= self.max_index && n <= self.max_index, "index outside the certified range");
        self.exp.get(m, n)
    }

    /// The larger truncation's exponential, restricted to its leading
    /// `size × size` block.
    pub fn leading_block(&self, size: usize) -> FockMatrix {
        FockMatrix::from_fn(size, |i, j| self.exp.get(i, j))
    }

    pub fn element(&self, pair: FockPair) -> ElementResult {
        let v = self.get(pair.m as usize, pair.n as usize);
        ElementResult {
            value: v,
            route: Route::Oracle,
            log_form: LogComplex::from_complex(v),
            condition_note: Some(format!(
                "truncated exponential certified at dim {} (doubling difference {:.1e})",
                self.dim, self.error_estimate
            )),
        }
    }
}

/// A matrix element from the truncated exponential.
#[derive(Clone, Debug, Serialize)]
pub struct OracleElement {
    pub result: ElementResult,
    pub error_estimate: f64,
    pub dim: usize,
}

/// `⟨m|e^G|n⟩`, certified by one successful doubling of the truncation.
pub fn element_oracle(pair: FockPair, param: SqueezeParam, dim: Option<usize>) -> Result<OracleElement> {
    if let Some(d) = dim {
        if d as u64 <= pair.m + pair.n {
            return Err(Error::domain("element_oracle", format!("dim {d} must exceed m + n = {}", pair.m + pair.n)));
        }
    }
    let top = pair.m.max(pair.n) as usize;
    let c = CertifiedExp::new(param, top, dim)?;
    Ok(OracleElement { result: c.element(pair), error_estimate: c.error_estimate, dim: c.dim })
}

/// `‖U⁺U − I‖` (spectral) on the leading `size` block.
pub fn unitarity_defect(u: &FockMatrix, size: usize) -> f64 {
    let b = u.leading_block(u.dim()).adjoint().matmul(u);
    let block = b.leading_block(size);
    block.sub(&FockMatrix::identity(size)).spectral_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squeeze::element_gegenbauer;

    fn p(r: f64, phi: f64) -> SqueezeParam {
        SqueezeParam::new(r, phi).unwrap()
    }

    #[test]
    fn generator_examples() {
        let g = build_generator(2, p(0.7, 0.3));
        assert_eq!(g, FockMatrix::zeros(2));
        let g = build_generator(3, p(0.9, 0.0));
        assert!((g.get(2, 0).re - 0.45 * 2f64.sqrt()).abs() < 1e-15);
        assert!((g.get(0, 2).re + 0.45 * 2f64.sqrt()).abs() < 1e-15);
        let g = build_generator(12, p(1.3, 2.2));
        assert_eq!(g.add(&g.adjoint()), FockMatrix::zeros(12));
    }

    #[test]
    fn blocks_match_full_generator() {
        let param = p(0.6, 1.0);
        let full = build_generator(10, param).exp().unwrap();
        let blocks = BlockExp::compute(10, param).unwrap();
        for m in 0..10 {
            for n in 0..10 {
                assert!((full.get(m, n) - blocks.get(m, n)).norm() < 1e-14, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn vacuum_element() {
        let o = element_oracle(FockPair::new(0, 0), p(1.5, 0.0), Some(256)).unwrap();
        assert!((o.result.value.re - 0.65203).abs() < 5e-5);
        assert!((o.result.value.re - 1.0 / 1.5f64.cosh().sqrt()).abs() < 1e-10);
        assert!(o.error_estimate < CERTIFY_TOL);
        assert_eq!(o.result.route, Route::Oracle);
    }

    #[test]
    fn odd_parity_and_dimension_precondition() {
        let o = element_oracle(FockPair::new(3, 0), p(0.5, 0.0), None).unwrap();
        assert_eq!(o.result.value, Complex64::new(0.0, 0.0));
        assert!(element_oracle(FockPair::new(3, 3), p(0.5, 0.0), Some(6)).is_err());
    }

    #[test]
    fn oracle_matches_closed_form() {
        let param = p(1.2, 0.0);
        let c = CertifiedExp::new(param, 12, Some(64)).unwrap();
        for (m, n) in [(6u64, 2u64), (0, 0), (12, 4), (3, 11)] {
            let want = element_gegenbauer(FockPair::new(m, n), param).value;
            let got = c.get(m as usize, n as usize);
            assert!((got - want).norm() < 1e-9, "m={m} n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn exponential_is_unitary() {
        let e = BlockExp::compute(128, p(1.0, 0.4)).unwrap().to_full();
        assert!(unitarity_defect(&e, 64) < 1e-10);
    }
}
