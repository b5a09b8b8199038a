//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string.

use serde_json::json;
use squeezing::squeeze::{distribution as photon_distribution, mean_energy, FockPair, SqueezeParam};
use squeezing::superpose::{semiclassical_comparison, ThermalField};
use squeezing::validate::CLOSED_ROUTES;
use wasm_bindgen::prelude::*;

fn fail(e: squeezing::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `⟨m|S(r e^{iφ})|n⟩` by each closed-form route.
pub fn element_json(m: u32, n: u32, r: f64, phi: f64) -> Result<String, squeezing::Error> {
    let p = SqueezeParam::new(r, phi)?;
    let pair = FockPair::new(m.into(), n.into());
    let routes: Vec<_> = CLOSED_ROUTES
        .iter()
        .map(|&(name, f)| {
            let e = f(pair, p);
            json!({"route": name, "re": e.value.re, "im": e.value.im, "probability": e.probability()})
        })
        .collect();
    Ok(json!({"m": m, "n": n, "r": r, "phi": phi, "routes": routes}).to_string())
}

/// `p_m = |⟨m|S|n⟩|²` over `m`, with the mean energy.
pub fn distribution_json(n: u32, r: f64) -> Result<String, squeezing::Error> {
    let d = photon_distribution(n.into(), SqueezeParam::real(r)?)?;
    Ok(json!({
        "n": n,
        "r": r,
        "points": d.probs,
        "mean_energy": d.mean_energy,
        "mean_energy_closed_form": mean_energy(n.into(), r),
        "captured_mass": d.captured_mass,
    })
    .to_string())
}

/// Thermal averages of order `k` against the Gaussian semiclassical average.
pub fn thermal_json(k: u32, nbar: f64, r: f64) -> Result<String, squeezing::Error> {
    let f = ThermalField::from_nbar(nbar)?;
    let c = semiclassical_comparison(k.into(), f, SqueezeParam::real(r)?)?;
    Ok(json!({
        "k": k,
        "nbar": nbar,
        "b": f.b,
        "hv_over_kt": f.hv_over_kt(),
        "r": r,
        "report": c,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn element(m: u32, n: u32, r: f64, phi: f64) -> Result<String, JsError> {
    element_json(m, n, r, phi).map_err(fail)
}

#[wasm_bindgen]
pub fn distribution(n: u32, r: f64) -> Result<String, JsError> {
    distribution_json(n, r).map_err(fail)
}

#[wasm_bindgen]
pub fn thermal_compare(k: u32, nbar: f64, r: f64) -> Result<String, JsError> {
    thermal_json(k, nbar, r).map_err(fail)
}
