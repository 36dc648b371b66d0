//! wasm-bindgen entry points for `www/index.html`.
//!
//! Each export is a thin wrapper over a plain function so the numerics can be
//! tested natively.

use chiral_core::fnspace::{g_limit, gn_family, CircleFourier, LineObject, QuadratureSpec};
use chiral_core::states::nonnormality_series;
use chiral_core::sugawara::central_charge_estimate;
use wasm_bindgen::prelude::*;

/// Modes for the Sobolev distances in the table.
const TABLE_MODES: usize = 512;
/// Fock cutoff of the central-charge estimate.
const CHARGE_CUTOFF: u32 = 8;

/// `[θ_0, g_n(θ_0), g(θ_0), θ_1, ...]` on `samples` points of `(0, 2π)`.
pub fn profile(n: u32, samples: usize) -> Result<Vec<f64>, String> {
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    let gn = gn_family(n).map_err(|e| e.to_string())?;
    let g = g_limit();
    let tau = std::f64::consts::TAU;
    Ok((0..samples)
        .flat_map(|j| {
            let th = tau * (j as f64 + 0.5) / samples as f64;
            [th, gn.eval(th), g.eval(th)]
        })
        .collect())
}

/// `[n, q_n, d_n, ...]` for `n = 1, 2, 4, ... ≤ n_max`.
pub fn table(q: f64, n_max: u32) -> Result<Vec<f64>, String> {
    let ns: Vec<u32> = std::iter::successors(Some(1u32), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect();
    let rows = nonnormality_series(q, &ns, TABLE_MODES, &QuadratureSpec::default())
        .map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.n as f64, r.q_n, r.d_n])
        .collect())
}

/// Estimated central charge of the perturbed stress tensor at `κ`.
pub fn charge(kappa: f64) -> Result<f64, String> {
    let f = LineObject::vector_field(CircleFourier::sin(1).mul_one_minus_cos(), 2)
        .map_err(|e| e.to_string())?;
    let g = LineObject::vector_field(CircleFourier::cos(1).mul_one_minus_cos(), 2)
        .map_err(|e| e.to_string())?;
    central_charge_estimate(&f, &g, kappa, CHARGE_CUTOFF, &QuadratureSpec::default())
        .map(|c| c.value)
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn gn_profile(n: u32, samples: usize) -> Result<Vec<f64>, JsValue> {
    profile(n, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn nonnormality_table(q: f64, n_max: u32) -> Result<Vec<f64>, JsValue> {
    table(q, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn central_charge(kappa: f64) -> Result<f64, JsValue> {
    charge(kappa).map_err(|e| JsValue::from_str(&e))
}
