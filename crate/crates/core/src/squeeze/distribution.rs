use super::{transition_probability, FockPair, SqueezeParam};
use crate::error::{Error, Result};
use serde::Serialize;

pub const DEFAULT_MASS_TARGET: f64 = 1.0 - 1e-10;
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Number of trailing same-parity terms that must all be negligible.
const TAIL_RUN: usize = 10;
const TAIL_LEVEL: f64 = 1e-16;

/// Photon-number distribution `p_m(n) = |⟨m|S(ξ)|n⟩|²` of a squeezed Fock state.
#[derive(Clone, Debug, Serialize)]
pub struct Distribution {
    pub n: u64,
    pub param: SqueezeParam,
    /// `(m, p_m)` for every `m` with the parity of `n`, in increasing order.
    pub probs: Vec<(u64, f64)>,
    pub captured_mass: f64,
    /// `Σ (m + ½) p_m`
    pub mean_energy: f64,
}

impl Distribution {
    /// `p_m`, zero for indices of the wrong parity or beyond the cutoff.
    pub fn prob(&self, m: u64) -> f64 {
        if (m + self.n) % 2 == 1 {
            return 0.0;
        }
        self.probs.get((m / 2) as usize).filter(|e| e.0 == m).map_or(0.0, |e| e.1)
    }

    /// Largest index that was computed.
    pub fn cutoff(&self) -> u64 {
        self.probs.last().map_or(0, |e| e.0)
    }
}

/// Distribution with the default mass target and index cap.
pub fn distribution(n: u64, param: SqueezeParam) -> Result<Distribution> {
    distribution_with(n, param, DEFAULT_MASS_TARGET, DEFAULT_CAP)
}

/// Extends `m` until the captured mass reaches `mass_target` and the last
/// ten same-parity terms are each below `1e-16`.
pub fn distribution_with(n: u64, param: SqueezeParam, mass_target: f64, cap: u64) -> Result<Distribution> {
    if !(mass_target > 0.0 && mass_target < 1.0) {
        return Err(Error::domain("distribution", format!("mass target {mass_target} outside (0, 1)")));
    }
    let mut probs = Vec::new();
    let mut mass = 0.0;
    let mut energy = 0.0;
    let mut small_run = 0usize;
    let mut m = n % 2;
    loop {
        if m > cap {
            return Err(Error::CutoffExceeded { index: m, cap, mass });
        }
        let p = transition_probability(FockPair::new(m, n), param);
        probs.push((m, p));
        mass += p;
        energy += (m as f64 + 0.5) * p;
        small_run = if p < TAIL_LEVEL { small_run + 1 } else { 0 };
        if mass >= mass_target && small_run >= TAIL_RUN {
            break;
        }
        m += 2;
    }
    Ok(Distribution { n, param, probs, captured_mass: mass, mean_energy: energy })
}

/// `(n + ½) cosh 2r`
pub fn mean_energy(n: u64, r: f64) -> f64 {
    (n as f64 + 0.5) * (2.0 * r).cosh()
}
