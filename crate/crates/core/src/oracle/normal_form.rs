//! Fock-space matrices of the ordered products
//! `exp(ζK₊) exp(−ηK₀) exp(−ζ*K₋)` and `exp(−ζ*K₋) exp(ηK₀) exp(ζK₊)`,
//! with `K₊ = (a⁺)²/2`, `K₋ = a²/2`, `K₀ = (a⁺a + ½)/2`.
//!
//! Both products are sums over intermediate Fock states whose terms cancel
//! by many orders of magnitude, so the sums run in binary fixed point on
//! big integers. All terms are built from the same two `f64` inputs
//! `tanh r` and `cosh r`, which makes the sum exact for those inputs.

use super::{CertifiedExp, FockMatrix};
use crate::error::{Error, Result};
use crate::specfun::gamma::log_factorial;
use crate::squeeze::SqueezeParam;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::LN_2;

/// Fractional bits of the fixed-point accumulator.
const FRAC: u32 = 384;
const MAX_ANTI_TERMS: usize = 200_000;

/// `x` as an integer mantissa and a power of two.
fn dyadic(x: f64) -> (BigInt, i64) {
    let (m, e) = crate::specfun::series::frexp(x);
    let mant = (m * 2f64.powi(53)) as i64;
    (BigInt::from(mant), e - 53)
}

/// `x · 2^FRAC` as a big integer (truncating below `2^-FRAC`).
fn shift_to_fixed(mant: BigInt, exp: i64) -> BigInt {
    let total = FRAC as i64 + exp;
    if total >= 0 {
        mant << (total as usize)
    } else {
        mant >> ((-total) as usize)
    }
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let bits = v.bits() as i64;
    let drop = (bits - 60).max(0);
    let head = (v >> (drop as usize)).to_f64().expect("60-bit integer fits f64");
    crate::specfun::series::ldexp(head, drop - FRAC as i64)
}

/// Exact `sinh² r / 4 = (tanh r · cosh r)² / 4` in fixed point.
fn quarter_s2(t: f64, c: f64) -> BigInt {
    let (tm, te) = dyadic(t);
    let (cm, ce) = dyadic(c);
    let prod = &tm * &tm * &cm * &cm;
    shift_to_fixed(prod, 2 * te + 2 * ce - 2)
}

fn mul_ratio(t: &BigInt, q: &BigInt, num: u128, den: u128) -> BigInt {
    ((t * q) >> (FRAC as usize)) * BigInt::from(num) / BigInt::from(den)
}

struct Inputs {
    t: f64,
    c: f64,
    phi: f64,
    q: BigInt,
}

impl Inputs {
    fn new(param: SqueezeParam) -> Self {
        let d = param.derive();
        Inputs { t: d.tanh_r, c: d.cosh_r, phi: param.phi, q: quarter_s2(d.tanh_r, d.cosh_r) }
    }
}

/// `⟨i| exp(ζK₊) exp(−ηK₀) exp(−ζ*K₋) |j⟩`.
fn normal_entry(inp: &Inputs, i: usize, j: usize) -> Complex64 {
    if (i + j) % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let k0 = i.min(j);
    let (p0, q0) = ((i - k0) / 2, (j - k0) / 2);
    if inp.t == 0.0 {
        return if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    // Σ_k (ζ/2)^p (−ζ*/2)^q √(i! j!) / (k! p! q!) c^{−(k+½)}, k = i − 2p = j − 2q
    let one = BigInt::from(1) << (FRAC as usize);
    let mut term = one.clone();
    let mut sum = one;
    let (mut k, mut p, mut q) = (k0, p0, q0);
    while k >= 2 {
        term = -mul_ratio(&term, &inp.q, (k * (k - 1)) as u128, ((p + 1) * (q + 1)) as u128);
        sum += &term;
        k -= 2;
        p += 1;
        q += 1;
    }
    let log_top = (p0 + q0) as f64 * (inp.t.ln() - LN_2) + 0.5 * (log_factorial(i as u64) + log_factorial(j as u64))
        - log_factorial(k0 as u64)
        - log_factorial(p0 as u64)
        - log_factorial(q0 as u64)
        - (k0 as f64 + 0.5) * inp.c.ln();
    let sign = if q0 % 2 == 1 { -1.0 } else { 1.0 };
    let mag = sign * log_top.exp() * fixed_to_f64(&sum);
    Complex64::from_polar(1.0, 0.5 * (i as f64 - j as f64) * inp.phi) * mag
}

/// `⟨i| exp(−ζ*K₋) exp(ηK₀) exp(ζK₊) |j⟩`; `None` when the sum over
/// intermediate states diverges (`sinh r ≥ 1`).
fn anti_normal_entry(inp: &Inputs, i: usize, j: usize) -> Option<Complex64> {
    if (i + j) % 2 == 1 {
        return Some(Complex64::new(0.0, 0.0));
    }
    if inp.t == 0.0 {
        return Some(if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    }
    if (inp.t * inp.c) >= 1.0 {
        return None;
    }
    // Σ_k (−ζ*/2)^p (ζ/2)^q k! / (√(i! j!) p! q!) c^{k+½}, k = i + 2p = j + 2q
    let k0 = i.max(j);
    let (p0, q0) = ((k0 - i) / 2, (k0 - j) / 2);
    let one = BigInt::from(1) << (FRAC as usize);
    let floor = BigInt::from(1) << 16usize;
    let mut term = one.clone();
    let mut sum = one;
    let mut peak = term.abs();
    let (mut k, mut p, mut q) = (k0, p0, q0);
    for _ in 0..MAX_ANTI_TERMS {
        let num = ((k + 1) * (k + 2)) as u128;
        let den = ((p + 1) * (q + 1)) as u128;
        term = -mul_ratio(&term, &inp.q, num, den);
        sum += &term;
        k += 2;
        p += 1;
        q += 1;
        let mag = term.abs();
        if mag > peak {
            peak = mag;
        } else if mag < floor {
            let log_top = (p0 + q0) as f64 * (inp.t.ln() - LN_2) + log_factorial(k0 as u64)
                - 0.5 * (log_factorial(i as u64) + log_factorial(j as u64))
                - log_factorial(p0 as u64)
                - log_factorial(q0 as u64)
                + (k0 as f64 + 0.5) * inp.c.ln();
            let sign = if p0 % 2 == 1 { -1.0 } else { 1.0 };
            let mag = sign * log_top.exp() * fixed_to_f64(&sum);
            return Some(Complex64::from_polar(1.0, 0.5 * (i as f64 - j as f64) * inp.phi) * mag);
        }
    }
    None
}

/// Leading `size × size` block of the normal-ordered product.
pub fn normal_block(param: SqueezeParam, size: usize) -> FockMatrix {
    let inp = Inputs::new(param);
    FockMatrix::from_fn(size, |i, j| normal_entry(&inp, i, j))
}

/// Leading `size × size` block of the anti-normal-ordered product, or
/// `None` where its intermediate-state sum diverges.
pub fn anti_normal_block(param: SqueezeParam, size: usize) -> Option<FockMatrix> {
    let inp = Inputs::new(param);
    let mut out = FockMatrix::zeros(size);
    for i in 0..size {
        for j in 0..size {
            out.set(i, j, anti_normal_entry(&inp, i, j)?);
        }
    }
    Some(out)
}

/// Distances between `e^G` and the ordered products on the leading block.
#[derive(Clone, Debug, Serialize)]
pub struct NormalFormCheck {
    pub dim: usize,
    pub block: usize,
    pub normal_spectral: f64,
    pub normal_frobenius: f64,
    /// `None` when the anti-normal sum diverges (`sinh r ≥ 1`).
    pub anti_normal_spectral: Option<f64>,
    pub anti_normal_frobenius: Option<f64>,
}

impl NormalFormCheck {
    pub fn max_deviation(&self) -> f64 {
        self.normal_spectral.max(self.anti_normal_spectral.unwrap_or(0.0))
    }
}

/// Compares the ordered products with the doubling-certified `e^G` on the
/// leading `dim/2 × dim/2` block.
pub fn verify_normal_form(param: SqueezeParam, dim: usize) -> Result<NormalFormCheck> {
    if dim < 16 {
        return Err(Error::domain("verify_normal_form", format!("dim = {dim} must be at least 16")));
    }
    let block = dim / 2;
    let exact = CertifiedExp::new(param, block - 1, Some(dim))?.leading_block(block);
    let normal = normal_block(param, block).sub(&exact);
    let anti = anti_normal_block(param, block).map(|a| a.sub(&exact));
    Ok(NormalFormCheck {
        dim,
        block,
        normal_spectral: normal.spectral_norm(),
        normal_frobenius: normal.frobenius(),
        anti_normal_spectral: anti.as_ref().map(FockMatrix::spectral_norm),
        anti_normal_frobenius: anti.as_ref().map(FockMatrix::frobenius),
    })
}
