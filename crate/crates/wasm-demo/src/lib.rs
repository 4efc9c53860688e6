//! Browser bindings for the demo page in `www/`. Every export returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use slocc_core::chain::{GroupTag, LocalOperatorChain};
use slocc_core::convert::{pmax, Optimality};
use slocc_core::critical::{scale_to_critical, ScalingOptions};
use slocc_core::linalg::{c, diag};
use slocc_core::stabilizer::{lie_stabilizer_dim, DEFAULT_SVD_CUTOFF};
use slocc_core::PureState;

/// Largest qubit count the page offers; keeps every call well under a second.
pub const MAX_DEMO_QUBITS: usize = 10;

fn named_state(kind: &str, n: usize, seed: u64) -> Result<PureState, String> {
    if !(2..=MAX_DEMO_QUBITS).contains(&n) {
        return Err(format!("n must be between 2 and {MAX_DEMO_QUBITS}"));
    }
    let psi = match kind {
        "haar" => PureState::sample_haar(n, seed),
        "w" => PureState::w(n, true),
        "ghz" => PureState::ghz(n, true),
        "ln" => PureState::ln(n, true),
        // |0> x (Haar on n-1 qubits): a pure marginal puts it in the null cone
        "product" => {
            let rest = PureState::sample_haar(n - 1, seed).map_err(|e| e.to_string())?;
            let mut amps = rest.into_amplitudes();
            amps.extend(std::iter::repeat_n(c(0.0, 0.0), amps.len()));
            PureState::new(n, amps)
        }
        other => return Err(format!("unknown state {other:?}")),
    };
    psi.map_err(|e| e.to_string())
}

fn to_json(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Trajectory {
    status: slocc_core::ScalingStatus,
    iterations: usize,
    norm_trajectory: Vec<f64>,
    final_deviation: f64,
}

pub fn scaling_trajectory_json(kind: &str, n: usize, seed: u64, max_iter: usize) -> Result<String, String> {
    let psi = named_state(kind, n, seed)?;
    let opts = ScalingOptions { max_iter, ..ScalingOptions::default() };
    let r = scale_to_critical(&psi, &opts).map_err(|e| e.to_string())?;
    to_json(&Trajectory {
        status: r.status,
        iterations: r.iterations,
        norm_trajectory: r.norm_trajectory,
        final_deviation: r.final_deviation,
    })
}

#[derive(Serialize)]
struct Curve {
    n: usize,
    s: Vec<f64>,
    p_max: Vec<f64>,
}

/// `p_max` for `|L_n> -> diag(s, 1/s) x I ... |L_n>` over `points` log-spaced values of `s`.
pub fn pmax_curve_json(n: usize, s_min: f64, s_max: f64, points: usize) -> Result<String, String> {
    if !(s_min > 0.0 && s_max >= s_min) || !(2..=2000).contains(&points) {
        return Err("need 0 < s_min <= s_max and 2 <= points <= 2000".into());
    }
    let psi = named_state("ln", n, 0)?;
    let (lo, hi) = (s_min.ln(), s_max.ln());
    let mut curve = Curve { n, s: Vec::with_capacity(points), p_max: Vec::with_capacity(points) };
    for k in 0..points {
        let s = (lo + (hi - lo) * k as f64 / (points - 1) as f64).exp();
        let g = LocalOperatorChain::single(n, 0, diag(c(s, 0.0), c(1.0 / s, 0.0)), GroupTag::G)
            .map_err(|e| e.to_string())?;
        let plan = pmax(&psi, &g, Optimality::LowerBound).map_err(|e| e.to_string())?;
        curve.s.push(s);
        curve.p_max.push(plan.p_max);
    }
    to_json(&curve)
}

#[derive(Serialize)]
struct Spectrum {
    lie_dim: usize,
    cutoff: f64,
    singular_values: Vec<f64>,
}

pub fn tangent_spectrum_json(kind: &str, n: usize, seed: u64) -> Result<String, String> {
    let psi = named_state(kind, n, seed)?;
    let lie = lie_stabilizer_dim(&psi, DEFAULT_SVD_CUTOFF);
    to_json(&Spectrum { lie_dim: lie.lie_dim, cutoff: lie.cutoff, singular_values: lie.singular_values })
}

#[wasm_bindgen]
pub fn scaling_trajectory(kind: &str, n: usize, seed: u32, max_iter: usize) -> Result<String, JsError> {
    scaling_trajectory_json(kind, n, seed as u64, max_iter).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pmax_curve(n: usize, s_min: f64, s_max: f64, points: usize) -> Result<String, JsError> {
    pmax_curve_json(n, s_min, s_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tangent_spectrum(kind: &str, n: usize, seed: u32) -> Result<String, JsError> {
    tangent_spectrum_json(kind, n, seed as u64).map_err(|e| JsError::new(&e))
}
