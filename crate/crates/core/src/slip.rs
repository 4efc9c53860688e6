//! SL-invariant polynomials of degree 2 (even n) and 4 (odd n).
//!
//! Both are built from the bilinear form `B(x, y) = x^T (sigma_y^{x m}) y` (no complex
//! conjugation). `sigma_y^{x m}` is applied through the bit-flip map `z -> z ^ (2^m - 1)`
//! with phase `i` per `|0> -> |1>` and `-i` per `|1> -> |0>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{GroupTag, LocalOperatorChain};
use crate::error::{Error, Result};
use crate::linalg::{c, ZERO};
use crate::rng::derive_seed;
use crate::state::PureState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlipValue {
    pub value: Complex64,
    pub degree: u32,
    /// False when the polynomial vanishes identically for this qubit parity.
    pub defined: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slip {
    F2,
    F4,
}

impl Slip {
    pub fn degree(self) -> u32 {
        match self {
            Slip::F2 => 2,
            Slip::F4 => 4,
        }
    }

    /// The lowest-degree polynomial of this family that is non-trivial for `n` qubits.
    pub fn for_qubits(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Slip::F2
        } else {
            Slip::F4
        }
    }

    pub fn evaluate(self, psi: &PureState) -> Result<SlipValue> {
        match self {
            Slip::F2 => Ok(f2(psi)),
            Slip::F4 => f4(psi),
        }
    }
}

/// `i^(m - 2 popcount(s))`: phase carried by source index `s` under `sigma_y^{x m}`.
fn flip_phase(s: usize, m: usize) -> Complex64 {
    let exp = (m as i64 - 2 * s.count_ones() as i64).rem_euclid(4);
    match exp {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// `x^T sigma_y^{x m} y` for vectors of length `2^m`.
pub fn sigma_y_bilinear(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    debug_assert!(x.len().is_power_of_two());
    let m = x.len().trailing_zeros() as usize;
    let mask = x.len() - 1;
    x.iter()
        .enumerate()
        .map(|(z, xz)| {
            let flipped = z ^ mask;
            xz * flip_phase(flipped, m) * y[flipped]
        })
        .sum()
}

/// Degree-2 invariant `psi^T sigma_y^{x n} psi`; identically zero (and flagged undefined) for odd n.
pub fn f2(psi: &PureState) -> SlipValue {
    if !psi.n().is_multiple_of(2) {
        return SlipValue { value: ZERO, degree: 2, defined: false };
    }
    let amps = psi.amplitudes();
    SlipValue { value: sigma_y_bilinear(amps, amps), degree: 2, defined: true }
}

/// Matrix `B_ij = phi_i^T sigma_y^{x (n-1)} phi_j` where `psi = |0>|phi_0> + |1>|phi_1>`.
pub fn f4_matrix(psi: &PureState) -> Result<[[Complex64; 2]; 2]> {
    let n = psi.n();
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Domain(format!("f4 is defined for odd n >= 3, got n = {n}")));
    }
    let (phi0, phi1) = psi.amplitudes().split_at(psi.dim() / 2);
    Ok([
        [sigma_y_bilinear(phi0, phi0), sigma_y_bilinear(phi0, phi1)],
        [sigma_y_bilinear(phi1, phi0), sigma_y_bilinear(phi1, phi1)],
    ])
}

/// Degree-4 invariant for odd n: the determinant of [`f4_matrix`].
pub fn f4(psi: &PureState) -> Result<SlipValue> {
    let b = f4_matrix(psi)?;
    let value = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    Ok(SlipValue { value, degree: 4, defined: true })
}

/// Largest relative change `|f(g psi) - f(psi)| / max(1, |f(psi)|)` over `trials` random `g` in G.
pub fn check_invariance(poly: Slip, psi: &PureState, trials: usize, seed: u64) -> Result<f64> {
    let base = poly.evaluate(psi)?;
    let scale = base.value.norm().max(1.0);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let g = LocalOperatorChain::sample(psi.n(), GroupTag::G, derive_seed(seed, t as u64))?;
        let moved = poly.evaluate(&g.apply(psi)?)?;
        worst = worst.max((moved.value - base.value).norm() / scale);
    }
    Ok(worst)
}
