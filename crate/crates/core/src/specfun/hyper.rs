//! Terminating Gauss hypergeometric series.

use super::lognum::LogSigned;
use super::series::{sum_by_ratios, Dd};
use crate::error::{Error, Result};

/// Largest number of terms a terminating series may have.
pub const MAX_TERMS: usize = 1_000_000;

/// A terminating `₂F₁` together with the cancellation it suffered.
#[derive(Clone, Copy, Debug)]
pub struct HyperSum {
    pub value: LogSigned,
    /// `Σ|t_k| / |Σ t_k|`.
    pub cancellation: f64,
    pub terms: usize,
}

fn nonpositive_integer(a: f64) -> Option<usize> {
    (a <= 0.0 && a.fract() == 0.0 && -a < MAX_TERMS as f64).then(|| (-a) as usize)
}

/// `₂F₁(a, b; c; z)` when `a` or `b` is a non-positive integer.
pub fn hypergeometric_terminating(a: f64, b: f64, c: f64, z: f64) -> Result<LogSigned> {
    hypergeometric_terminating_sum(a, b, c, z).map(|s| s.value)
}

/// Like [`hypergeometric_terminating`], also reporting the cancellation.
pub fn hypergeometric_terminating_sum(a: f64, b: f64, c: f64, z: f64) -> Result<HyperSum> {
    let degree = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(p), Some(q)) => p.min(q),
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => {
            return Err(Error::NonTerminating { a, b, c, bound: MAX_TERMS });
        }
    };
    if !(c > 0.0) {
        return Err(Error::domain("hypergeometric_terminating", format!("c = {c} must be positive")));
    }
    if !z.is_finite() {
        return Err(Error::domain("hypergeometric_terminating", format!("z = {z} is not finite")));
    }
    Ok(terminating_sum_dd(a, b, c, Dd::from_f64(z), degree))
}

/// Series of degree `degree` with an argument carried in double-double.
pub(crate) fn terminating_sum_dd(a: f64, b: f64, c: f64, dz: Dd, degree: usize) -> HyperSum {
    let (da, db, dc) = (Dd::from_f64(a), Dd::from_f64(b), Dd::from_f64(c));
    let s = sum_by_ratios(degree + 1, |k| {
        let kk = Dd::from_f64(k as f64);
        let num = da.add(kk).mul(db.add(kk)).mul(dz);
        let den = dc.add(kk).mul(Dd::from_f64(k as f64 + 1.0));
        num.div(den)
    });
    HyperSum { value: s.value, cancellation: s.cancellation, terms: degree + 1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series() {
        assert_eq!(hypergeometric_terminating(0.0, 2.7, 1.3, 5.0).unwrap().to_real(), 1.0);
    }

    #[test]
    fn two_term_sums() {
        let v = hypergeometric_terminating(-1.0, 2.0, 3.0, 0.5).unwrap().to_real();
        assert!((v - 2.0 / 3.0).abs() < 1e-16);
        let s = 1f64.sinh().powi(2);
        let v = hypergeometric_terminating(-1.0, -0.5, 2.0, -s).unwrap().to_real();
        assert!((v - (1.0 - 0.25 * s)).abs() < 1e-15);
        assert!((v - 0.654_725_5).abs() < 1e-7);
    }

    #[test]
    fn paired_half_integer_parameters() {
        // F(-n/2, (1-n)/2; ...) terminates through whichever is an integer
        for n in 0..12u32 {
            let a = -(n as f64) / 2.0;
            let b = (1.0 - n as f64) / 2.0;
            let s = hypergeometric_terminating_sum(a, b, 1.5, -0.7).unwrap();
            assert_eq!(s.terms, n as usize / 2 + 1);
        }
    }

    #[test]
    fn binomial_special_case() {
        // F(-n, b; b; z) = (1 - z)^n
        for n in [1u32, 5, 17, 60] {
            let v = hypergeometric_terminating(-(n as f64), 2.5, 2.5, -0.3).unwrap();
            let want = (n as f64) * 1.3f64.ln();
            assert!((v.log_abs - want).abs() < 1e-13 * want.max(1.0));
        }
    }

    #[test]
    fn chebyshev_reports_cancellation() {
        // T_n(x) = F(-n, n; 1/2; (1-x)/2); T_40(0.3) = cos(40 acos 0.3)
        let x: f64 = 0.3;
        let s = hypergeometric_terminating_sum(-40.0, 40.0, 0.5, (1.0 - x) / 2.0).unwrap();
        let want = (40.0 * x.acos()).cos();
        assert!((s.value.to_real() - want).abs() < 1e-13);
        assert!(s.cancellation > 1e6);
    }

    #[test]
    fn rejects_non_terminating() {
        assert!(matches!(hypergeometric_terminating(0.5, 1.5, 2.0, 0.1), Err(Error::NonTerminating { .. })));
        assert!(hypergeometric_terminating(-2.0, 1.0, -1.0, 0.1).is_err());
    }
}
