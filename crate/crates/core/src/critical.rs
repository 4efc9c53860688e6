//! Criticality (all one-qubit marginals maximally mixed) and normalization of a state to the
//! critical point of its SLOCC orbit by cyclic single-qubit scaling.
//!
//! Each scaling step replaces qubit `k` by `g_k psi` with
//! `g_k = (rho_k / sqrt(det rho_k))^{-1/2}`, a positive unit-determinant matrix. The squared norm
//! changes by the factor `2 sqrt(det rho_k) <= tr rho_k = 1`, so the norm never increases and the
//! iteration is a descent on the G-orbit of the input.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{GroupTag, LocalOperatorChain};
use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat2, ONE};
use crate::rng::derive_seed;
use crate::state::{apply_single_raw, reduced_moment, PureState};

/// Inputs further than this from unit norm are rejected by operations requiring normalization.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalityReport {
    /// `|rho_k - I/2|_F` for each qubit.
    pub per_qubit_deviation: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub is_critical: bool,
}

pub fn criticality_report(psi: &PureState, tol: f64) -> Result<CriticalityReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    psi.require_normalized(NORMALIZATION_TOL)?;
    let per_qubit_deviation = (0..psi.n())
        .map(|k| psi.reduced_density(k).map(|r| r.deviation_from_maximally_mixed()))
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = per_qubit_deviation.iter().copied().fold(0.0, f64::max);
    Ok(CriticalityReport { per_qubit_deviation, max_deviation, tolerance: tol, is_critical: max_deviation <= tol })
}

pub fn is_critical(psi: &PureState, tol: f64) -> Result<bool> {
    criticality_report(psi, tol).map(|r| r.is_critical)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingStatus {
    Converged,
    /// The orbit closure contains no critical state: the norm collapsed or a marginal lost rank.
    NullCone,
    MaxIter,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    /// Convergence threshold on `max_k |rho_k - I/2|_F`.
    pub tol: f64,
    /// Maximum number of full sweeps over the qubits.
    pub max_iter: usize,
    /// Norm (relative to the input) below which the orbit is declared to approach zero.
    pub null_cone_ratio: f64,
    /// Smallest admissible eigenvalue of a normalized marginal.
    pub min_eigenvalue: f64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000, null_cone_ratio: 1e-6, min_eigenvalue: 1e-14 }
    }
}

impl ScalingOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    /// Unit-norm output; critical when `status` is `Converged`.
    pub representative: PureState,
    /// `A` with unit-determinant factors and `scalar` such that `A psi = representative`.
    pub accumulated_chain: LocalOperatorChain,
    /// Number of completed sweeps.
    pub iterations: usize,
    pub status: ScalingStatus,
    /// `|A_s psi|` after each sweep `s`, starting with the input norm.
    pub norm_trajectory: Vec<f64>,
    pub final_deviation: f64,
}

struct SweepState {
    amps: Vec<Complex64>,
    factors: Vec<Mat2>,
}

/// Runs cyclic scaling sweeps until the marginals are within `opts.tol` of `I/2`.
pub fn scale_to_critical(psi: &PureState, opts: &ScalingOptions) -> Result<ScalingResult> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    psi.require_normalized(NORMALIZATION_TOL)?;
    let n = psi.n();
    let initial_norm = psi.norm();
    let mut work = SweepState { amps: psi.amplitudes().to_vec(), factors: vec![linalg::identity(); n] };
    let mut trajectory = vec![initial_norm];
    let mut iterations = 0;

    let mut deviation = max_marginal_deviation(&work.amps, n);
    let status = loop {
        if deviation <= opts.tol {
            break ScalingStatus::Converged;
        }
        if iterations >= opts.max_iter {
            break ScalingStatus::MaxIter;
        }
        let singular = sweep(&mut work, n, opts.min_eigenvalue);
        iterations += 1;
        let norm = norm_of(&work.amps);
        trajectory.push(norm);
        if singular || norm < opts.null_cone_ratio * initial_norm {
            break ScalingStatus::NullCone;
        }
        deviation = max_marginal_deviation(&work.amps, n);
    };

    let chain = LocalOperatorChain::new_unchecked(work.factors, ONE, GroupTag::G);
    let mapped = chain.apply(psi)?;
    let norm = norm_of(&work.amps);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Internal("scaling collapsed the state to zero".into()));
    }
    let representative = PureState::new(n, work.amps.iter().map(|z| z / norm).collect())?;
    // least-squares scalar so that scalar * A psi matches the iterated representative
    let mapped_sqr = mapped.norm_sqr();
    let scalar = if mapped_sqr > 0.0 { mapped.inner(&representative)? / mapped_sqr } else { ONE };
    let final_deviation = max_marginal_deviation(representative.amplitudes(), n);
    Ok(ScalingResult {
        representative,
        accumulated_chain: chain.with_scalar(scalar),
        iterations,
        status,
        norm_trajectory: trajectory,
        final_deviation,
    })
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized_marginal(amps: &[Complex64], n: usize, k: usize) -> Mat2 {
    let m = reduced_moment(amps, amps, n, k);
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    m / c(tr, 0.0)
}

fn max_marginal_deviation(amps: &[Complex64], n: usize) -> f64 {
    let half = linalg::identity() * c(0.5, 0.0);
    (0..n).map(|k| linalg::frobenius(&(normalized_marginal(amps, n, k) - half))).fold(0.0, f64::max)
}

/// One pass over all qubits. Returns true if some marginal was numerically singular.
fn sweep(work: &mut SweepState, n: usize, min_eigenvalue: f64) -> bool {
    for k in 0..n {
        let rho = normalized_marginal(&work.amps, n, k);
        let [low, _] = linalg::hermitian_eigenvalues(&rho);
        if low < min_eigenvalue {
            return true;
        }
        let det = (low * linalg::hermitian_eigenvalues(&rho)[1]).sqrt();
        let g = linalg::inv_sqrt(&(rho / c(det, 0.0)));
        // renormalize so both the state and the chain use an exactly unimodular factor
        let g = linalg::unimodular(&g).map(|(u, _)| u).unwrap_or(g);
        apply_single_raw(&mut work.amps, n, k, &g);
        let acc = g * work.factors[k];
        work.factors[k] = linalg::unimodular(&acc).map(|(u, _)| u).unwrap_or(acc);
    }
    false
}

/// Smallest `|g phi|` over the identity and `trials` random elements of G.
///
/// For a critical `phi` every value is at least `|phi|`.
pub fn min_norm_probe(phi: &PureState, trials: usize, seed: u64) -> Result<f64> {
    if !criticality_report(phi, 1e-10)?.is_critical {
        return Err(Error::Precondition("input is not critical at 1e-10".into()));
    }
    let mut best = phi.norm();
    for t in 0..trials {
        let g = LocalOperatorChain::sample(phi.n(), GroupTag::G, derive_seed(seed, t as u64))?;
        best = best.min(g.apply(phi)?.norm());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slip::Slip;
    use crate::state::PureState;

    #[test]
    fn ln5_and_ghz4_are_critical() {
        let r = criticality_report(&PureState::ln(5, true).unwrap(), 1e-10).unwrap();
        assert!(r.max_deviation <= 1e-12 && r.is_critical);
        assert!(is_critical(&PureState::ghz(4, true).unwrap(), 1e-10).unwrap());
    }

    #[test]
    fn product_with_bell_is_not_critical() {
        // |0> x Bell: qubit 0 marginal is |0><0|, deviation 1/sqrt2
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0b000] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0b011] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = PureState::new(3, amps).unwrap();
        let r = criticality_report(&psi, 1e-10).unwrap();
        assert!((r.per_qubit_deviation[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(!r.is_critical);
    }

    #[test]
    fn unnormalized_input_rejected() {
        let w = PureState::w(3, false).unwrap();
        assert!(matches!(criticality_report(&w, 1e-10), Err(Error::NotNormalized(_))));
        assert!(scale_to_critical(&w, &ScalingOptions::default()).is_err());
        let ok = PureState::w(3, true).unwrap();
        assert!(criticality_report(&ok, 0.0).is_err());
    }

    #[test]
    fn critical_input_is_a_fixed_point() {
        let psi = PureState::ln(6, true).unwrap();
        let res = scale_to_critical(&psi, &ScalingOptions::default()).unwrap();
        assert_eq!(res.status, ScalingStatus::Converged);
        assert!(res.iterations <= 1);
        for f in res.accumulated_chain.factors() {
            assert!(linalg::frobenius(&(f - linalg::identity())) < 1e-8);
        }
    }

    #[test]
    fn two_qubit_schmidt_equalization() {
        let a = 0.9;
        let b = (1.0f64 - 0.81).sqrt();
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(a, 0.0);
        amps[3] = c(b, 0.0);
        let psi = PureState::new(2, amps).unwrap();
        let res = scale_to_critical(&psi, &ScalingOptions::default()).unwrap();
        assert_eq!(res.status, ScalingStatus::Converged);
        let bell = PureState::ghz(2, true).unwrap();
        assert!(res.representative.distance(&bell).unwrap() < 1e-8);
    }

    #[test]
    fn w3_is_in_the_null_cone() {
        let res = scale_to_critical(&PureState::w(3, true).unwrap(), &ScalingOptions::default()).unwrap();
        assert_eq!(res.status, ScalingStatus::NullCone);
        for pair in res.norm_trajectory.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }

    #[test]
    fn max_iter_verdict() {
        let psi = PureState::sample_haar(5, 4).unwrap();
        let opts = ScalingOptions { max_iter: 1, tol: 1e-14, ..ScalingOptions::default() };
        let res = scale_to_critical(&psi, &opts).unwrap();
        assert_eq!(res.status, ScalingStatus::MaxIter);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn reconstruction_and_idempotence() {
        for seed in 0..5 {
            let psi = PureState::sample_haar(5, seed).unwrap();
            let res = scale_to_critical(&psi, &ScalingOptions::default()).unwrap();
            assert_eq!(res.status, ScalingStatus::Converged);
            assert!(is_critical(&res.representative, 1e-10).unwrap());
            let mapped = res.accumulated_chain.apply(&psi).unwrap();
            assert!(mapped.distance(&res.representative).unwrap() < 1e-8);
            for f in res.accumulated_chain.factors() {
                assert!((linalg::det(f) - ONE).norm() < 1e-12);
            }
            let again = scale_to_critical(&res.representative, &ScalingOptions::default()).unwrap();
            assert_eq!(again.iterations, 0);
        }
    }

    #[test]
    fn representatives_share_invariants_with_their_orbit() {
        for (n, seed) in [(4usize, 1u64), (5, 2), (6, 3)] {
            let phi = scale_to_critical(&PureState::sample_haar(n, seed).unwrap(), &ScalingOptions::default())
                .unwrap()
                .representative;
            let g = LocalOperatorChain::sample(n, GroupTag::G, seed + 100).unwrap();
            let moved = g.apply(&phi).unwrap().normalized().unwrap();
            let rep = scale_to_critical(&moved, &ScalingOptions::default()).unwrap();
            assert_eq!(rep.status, ScalingStatus::Converged);
            let poly = Slip::for_qubits(n);
            let a = poly.evaluate(&phi).unwrap().value;
            let b = poly.evaluate(&rep.representative).unwrap().value;
            assert!((a - b).norm() <= 1e-6 * a.norm(), "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn min_norm_probe_examples() {
        let l5 = PureState::ln(5, true).unwrap();
        assert!(min_norm_probe(&l5, 100, 1).unwrap() >= 1.0 - 1e-12);
        let ghz3 = PureState::ghz(3, true).unwrap();
        assert!(min_norm_probe(&ghz3, 100, 2).unwrap() >= 1.0 - 1e-12);
        assert!((min_norm_probe(&l5, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(min_norm_probe(&PureState::w(3, true).unwrap(), 10, 0).is_err());
    }
}
