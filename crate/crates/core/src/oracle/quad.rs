//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Largest number of subintervals before giving up.
pub const DEFAULT_MAX_PANELS: usize = 200_000;

/// Beyond this `e^{−u}` underflows.
const WEIGHT_END: f64 = 745.0;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Largest `|f|` seen on the nodes.
    peak: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut peak = fc.abs();
    for i in 0..7 {
        let (f1, f2) = (f(c - h * XGK[i]), f(c + h * XGK[i]));
        peak = peak.max(f1.abs()).max(f2.abs());
        k += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    Segment { a, b, value: k * h, error: ((k - g) * h).abs(), peak }
}

struct Adaptive {
    heap: BinaryHeap<Segment>,
    value: f64,
    error: f64,
    count: usize,
}

impl Adaptive {
    fn new() -> Self {
        Adaptive { heap: BinaryHeap::new(), value: 0.0, error: 0.0, count: 0 }
    }

    fn push(&mut self, s: Segment) {
        self.value += s.value;
        self.error += s.error;
        self.count += 1;
        self.heap.push(s);
    }

    /// Bisects the worst segment until `tol(value)` is met.
    fn refine(
        &mut self,
        f: &mut impl FnMut(f64) -> f64,
        tol: impl Fn(f64) -> f64,
        max_panels: usize,
        func: &'static str,
    ) -> Result<()> {
        while self.error > tol(self.value) {
            if self.count >= max_panels {
                return Err(Error::no_convergence(
                    func,
                    format!("{max_panels} panels used, error estimate {:.1e} on {:.6e}", self.error, self.value),
                ));
            }
            let worst = self.heap.pop().expect("a segment exists while error is positive");
            self.value -= worst.value;
            self.error -= worst.error;
            self.count -= 1;
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::no_convergence(func, format!("segment [{}, {}] cannot be split", worst.a, worst.b)));
            }
            let l = kronrod(f, worst.a, mid);
            let r = kronrod(f, mid, worst.b);
            self.push(l);
            self.push(r);
            // Rebuild the running sums now and then to shed rounding drift.
            if self.count % 4096 == 0 {
                self.value = self.heap.iter().map(|s| s.value).sum();
                self.error = self.heap.iter().map(|s| s.error).sum();
            }
        }
        self.value = self.heap.iter().map(|s| s.value).sum();
        Ok(())
    }
}

/// `∫_a^b f`, to absolute error `abs_tol`. Returns the value and the error
/// estimate.
pub fn quadrature_interval(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain("quadrature_interval", format!("bad interval [{a}, {b}]")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::domain("quadrature_interval", format!("tolerance {abs_tol} must be positive")));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut q = Adaptive::new();
    q.push(kronrod(&mut f, a, b));
    q.refine(&mut f, |_| abs_tol, DEFAULT_MAX_PANELS, "quadrature_interval")?;
    Ok((q.value, q.error))
}

/// `(1/I₀) ∫₀^∞ e^{−I/I₀} f(I) dI` to relative error `rel_tol`.
pub fn quadrature_exp_weighted(f: impl FnMut(f64) -> f64, scale: f64, rel_tol: f64) -> Result<f64> {
    quadrature_exp_weighted_with(f, scale, rel_tol, DEFAULT_MAX_PANELS)
}

/// [`quadrature_exp_weighted`] with an explicit panel budget.
///
/// In `u = I/I₀` the range is covered by `[0, 1], [1, 2], [2, 4], …` until
/// `(1 + b) max e^{−u}|f(I₀u)|` over the last panel drops below the tolerance, then
/// the worst panels are bisected.
pub fn quadrature_exp_weighted_with(
    mut f: impl FnMut(f64) -> f64,
    scale: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    const FUNC: &str = "quadrature_exp_weighted";
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(FUNC, format!("scale {scale} must be positive")));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::domain(FUNC, format!("tolerance {rel_tol} outside (0, 1)")));
    }
    let mut g = |u: f64| {
        let w = (-u).exp();
        if w == 0.0 {
            0.0
        } else {
            w * f(scale * u)
        }
    };
    let mut q = Adaptive::new();
    q.push(kronrod(&mut g, 0.0, 1.0));
    let mut b = 1.0f64;
    loop {
        let next = (2.0 * b).min(WEIGHT_END);
        let seg = kronrod(&mut g, b, next);
        let tail = (1.0 + next) * seg.peak;
        q.push(seg);
        b = next;
        if q.count >= max_panels {
            return Err(Error::no_convergence(
                FUNC,
                format!("{max_panels} panels used before the tail became negligible"),
            ));
        }
        if b >= WEIGHT_END || tail <= 0.1 * rel_tol * q.value.abs() || (tail == 0.0 && q.value == 0.0) {
            break;
        }
    }
    q.refine(&mut g, |v| rel_tol * v.abs(), max_panels, FUNC)?;
    Ok(q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;

    #[test]
    fn interval_polynomial_exact() {
        let (v, _) = quadrature_interval(|x| 3.0 * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
        assert_eq!(quadrature_interval(|x| x, 1.0, 1.0, 1e-10).unwrap().0, 0.0);
        assert!(quadrature_interval(|x| x, 2.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn interval_oscillatory() {
        let (v, _) = quadrature_interval(|x| (50.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!(v.abs() < 1e-11, "{v}");
    }

    #[test]
    fn exp_weight_moments() {
        assert!((quadrature_exp_weighted(|_| 1.0, 2.5, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let i0 = 3.7;
        assert!((quadrature_exp_weighted(|i| i, i0, 1e-12).unwrap() - i0).abs() < 1e-11 * i0);
        assert!((quadrature_exp_weighted(|i| i * i, 0.5, 1e-12).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(quadrature_exp_weighted(|_| 0.0, 1.0, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn laplace_transform_of_bessel_square() {
        // (1/I₀)∫e^{−I/I₀} J₀²(γI) dI = (1/(πγI₀)) Q_{−1/2}(1 + 1/(2γ²I₀²)); γI₀ = 1/2 gives z = 3
        let v = quadrature_exp_weighted(|i| bessel_j(0, 0.5 * i).powi(2), 1.0, 1e-10).unwrap();
        let want = 1.3110287771460599 / (std::f64::consts::PI * 0.5);
        assert!((v - want).abs() < 1e-9 * want, "{v} vs {want}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(quadrature_exp_weighted(|_| 1.0, 0.0, 1e-8).is_err());
        assert!(quadrature_exp_weighted(|_| 1.0, 1.0, 0.0).is_err());
        assert!(matches!(
            quadrature_exp_weighted_with(|i| (40.0 * i).sin().signum(), 1.0, 1e-14, 20),
            Err(Error::NonConvergence { .. })
        ));
    }
}
