//! The two-dimensional representation of the squeeze group, where the
//! disentangled products can be compared with the exponential directly.

use super::FockMatrix;
use crate::squeeze::SqueezeParam;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SpinorCheck {
    /// `e^{−[[0, ξ], [ξ*, 0]]}` against its closed form.
    pub exponential: f64,
    /// Normal-ordered product against the closed form.
    pub normal: f64,
    /// Anti-normal-ordered product against the closed form.
    pub anti_normal: f64,
}

impl SpinorCheck {
    pub fn max_deviation(&self) -> f64 {
        self.exponential.max(self.normal).max(self.anti_normal)
    }
}

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> FockMatrix {
    let v = [a, b, c, d];
    FockMatrix::from_fn(2, |i, j| v[2 * i + j])
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Max-entry deviations between the spinor exponential, its closed form
/// and the two ordered products.
pub fn verify_spinor(param: SqueezeParam) -> SpinorCheck {
    let d = param.derive();
    let xi = param.xi();
    let e = Complex64::from_polar(1.0, param.phi);
    let zeta = e * d.tanh_r;
    let c = d.cosh_r;
    let zero = re(0.0);
    let one = re(1.0);

    let closed = m2(re(c), -e * d.sinh_r, -e.conj() * d.sinh_r, re(c));
    let exp = m2(zero, -xi, -xi.conj(), zero).exp().expect("2x2 with finite entries");

    let half = (0.5 * d.eta).exp();
    let normal = m2(one, -zeta, zero, one).matmul(&m2(re(1.0 / half), zero, zero, re(half))).matmul(&m2(
        one,
        zero,
        -zeta.conj(),
        one,
    ));
    let anti = m2(re(c), -zeta * c, -zeta.conj() * c, re(zeta.norm_sqr() * c + 1.0 / c));

    SpinorCheck {
        exponential: exp.sub(&closed).max_abs(),
        normal: normal.sub(&closed).max_abs(),
        anti_normal: anti.sub(&closed).max_abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_agree_with_exponential() {
        for &(r, phi) in &[(0.0, 0.0), (0.3, 0.7), (1.5, -2.0), (4.0, 3.0)] {
            let chk = verify_spinor(SqueezeParam::new(r, phi).unwrap());
            let scale = (r as f64).cosh();
            assert!(chk.max_deviation() < 1e-13 * scale * scale, "r={r}: {chk:?}");
        }
    }
}
