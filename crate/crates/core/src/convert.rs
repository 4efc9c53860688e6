//! Optimal one-round local conversion `psi -> phi = g psi` inside an SLOCC orbit.
//!
//! For a connector `g = g_1 x ... x g_n` rescaled so that `|g psi| = 1`, the all-zero outcome of
//! the local two-outcome measurements `N0_j = g_j / sqrt(lambda_j)`,
//! `N1_j = sqrt(I - g_j^dagger g_j / lambda_j)` with `lambda_j = lambda_max(g_j^dagger g_j)`
//! occurs with probability `1 / prod_j lambda_j = 1 / lambda_max(g^dagger g)` and leaves `phi`.
//! That probability is optimal when the `G~` stabilizer of `psi` is trivial, and a lower bound
//! otherwise.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{haar_su2, GroupTag, LocalOperatorChain};
use crate::critical::{scale_to_critical, ScalingOptions, ScalingStatus, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat2, ONE};
use crate::rng::{derive_seed, rng_from_seed};
use crate::state::{apply_single_raw, reduced_moment, PureState};

/// Whether a reported `p_max` is the optimum or only achievable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    ExactOptimum,
    LowerBound,
}

impl Optimality {
    /// Exact only when the caller has established a trivial `G~` stabilizer for the source.
    pub fn from_stabilizer(trivial: bool) -> Self {
        if trivial {
            Optimality::ExactOptimum
        } else {
            Optimality::LowerBound
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPair {
    #[serde(with = "crate::io::mat2")]
    pub success: Mat2,
    #[serde(with = "crate::io::mat2")]
    pub failure: Mat2,
}

impl MeasurementPair {
    /// `|N0^dagger N0 + N1^dagger N1 - I|_F`.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self.success.adjoint() * self.success + self.failure.adjoint() * self.failure;
        linalg::frobenius(&(sum - linalg::identity()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConversionPlan {
    /// Connector with its scalar set so that `|connector psi| = 1`.
    pub connector: LocalOperatorChain,
    /// `lambda_max(g_j'^dagger g_j')` with the normalization spread evenly over the parties.
    pub per_party_lambda: Vec<f64>,
    pub p_max: f64,
    pub optimality: Optimality,
    /// Empty until [`build_protocol`] fills it.
    pub measurements: Vec<MeasurementPair>,
    pub target: PureState,
}

impl ConversionPlan {
    pub fn lambda_product(&self) -> f64 {
        self.per_party_lambda.iter().product()
    }
}

/// `p_max = 1 / lambda_max(g'^dagger g')` for the connector `g' = g / |g psi|`.
pub fn pmax(psi: &PureState, g: &LocalOperatorChain, optimality: Optimality) -> Result<ConversionPlan> {
    psi.require_normalized(NORMALIZATION_TOL)?;
    if g.len() != psi.n() {
        return Err(Error::QubitMismatch { expected: psi.n(), found: g.len() });
    }
    for (j, f) in g.factors().iter().enumerate() {
        crate::chain::check_factor(f, GroupTag::GTilde)
            .map_err(|e| Error::Domain(format!("connector factor {j}: {e}")))?;
    }
    if g.scalar().norm() == 0.0 {
        return Err(Error::Domain("connector scalar is zero".into()));
    }
    let image = g.apply(psi)?;
    let image_norm = image.norm();
    if image_norm == 0.0 {
        return Err(Error::Domain("connector annihilates the state".into()));
    }
    let total_scalar = g.scalar() / image_norm;
    let connector = LocalOperatorChain::new(g.factors().to_vec(), GroupTag::GTilde)?.with_scalar(total_scalar);
    let target = image.scaled(c(1.0 / image_norm, 0.0));

    let n = psi.n() as f64;
    let spread = total_scalar.norm_sqr().powf(1.0 / n);
    let per_party_lambda: Vec<f64> = g.factors().iter().map(|f| spread * linalg::gram_lambda_max(f)).collect();
    let p_max = 1.0 / per_party_lambda.iter().product::<f64>();
    Ok(ConversionPlan { connector, per_party_lambda, p_max, optimality, measurements: Vec::new(), target })
}

/// [`pmax`] plus the per-party measurement operators achieving it.
pub fn build_protocol(psi: &PureState, g: &LocalOperatorChain, optimality: Optimality) -> Result<ConversionPlan> {
    let mut plan = pmax(psi, g, optimality)?;
    plan.measurements = plan
        .connector
        .factors()
        .iter()
        .map(|f| {
            let lambda = linalg::gram_lambda_max(f);
            if lambda.is_nan() || lambda <= 0.0 {
                return Err(Error::Internal(format!("non-positive lambda {lambda}")));
            }
            let success = f / c(lambda.sqrt(), 0.0);
            let defect = linalg::identity() - success.adjoint() * success;
            Ok(MeasurementPair { success, failure: linalg::psd_sqrt(&defect) })
        })
        .collect::<Result<_>>()?;
    Ok(plan)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRunStats {
    pub trials: usize,
    pub successes: usize,
    /// `None` for an empty run.
    pub empirical_p: Option<f64>,
    /// Mean fidelity of successful outputs with the plan's target; `None` without successes.
    pub mean_success_fidelity: Option<f64>,
    pub min_success_fidelity: Option<f64>,
    pub seed: u64,
}

impl ProtocolRunStats {
    /// `sqrt(p (1 - p) / trials)` at the given reference probability.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Monte Carlo run of the measurement protocol; party `j` measures after parties `< j`.
pub fn simulate_protocol(plan: &ConversionPlan, psi: &PureState, trials: usize, seed: u64) -> Result<ProtocolRunStats> {
    psi.require_normalized(NORMALIZATION_TOL)?;
    if plan.measurements.len() != psi.n() {
        return Err(Error::Domain("plan has no measurements for this state (use build_protocol)".into()));
    }
    let n = psi.n();
    let outcomes = run_trials(trials, |t| {
        let mut rng = rng_from_seed(derive_seed(seed, t as u64));
        let mut amps = psi.amplitudes().to_vec();
        for (j, m) in plan.measurements.iter().enumerate() {
            let mut next = amps.clone();
            apply_single_raw(&mut next, n, j, &m.success);
            let p0: f64 = next.iter().map(|z| z.norm_sqr()).sum();
            if rng.random::<f64>() >= p0 {
                return None;
            }
            let scale = 1.0 / p0.sqrt();
            amps = next.into_iter().map(|z| z * scale).collect();
        }
        let out = PureState::new(n, amps).ok()?;
        out.fidelity(&plan.target).ok()
    });
    let fidelities: Vec<f64> = outcomes.into_iter().flatten().collect();
    let successes = fidelities.len();
    let mean = (successes > 0).then(|| fidelities.iter().sum::<f64>() / successes as f64);
    let min = fidelities.iter().copied().reduce(f64::min);
    Ok(ProtocolRunStats {
        trials,
        successes,
        empirical_p: (trials > 0).then(|| successes as f64 / trials as f64),
        mean_success_fidelity: mean,
        min_success_fidelity: min,
        seed,
    })
}

#[cfg(feature = "parallel")]
fn run_trials<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials<T>(count: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(f).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convertibility {
    pub deterministic: bool,
    pub p_max: f64,
    /// `|g_j'^dagger g_j' - I|_F` per party, each factor normalized by its own `sqrt(lambda_j)`.
    pub unitarity_defects: Vec<f64>,
}

/// Deterministic conversion along `g` is possible iff the normalized connector is factor-wise
/// unitary (for sources with trivial `G~` stabilizer).
pub fn deterministic_convertible(psi: &PureState, g: &LocalOperatorChain) -> Result<Convertibility> {
    const TOL: f64 = 1e-10;
    let plan = pmax(psi, g, Optimality::ExactOptimum)?;
    let unitarity_defects: Vec<f64> = plan
        .connector
        .factors()
        .iter()
        .map(|f| {
            let normalized = f / c(linalg::gram_lambda_max(f).sqrt(), 0.0);
            linalg::frobenius(&(normalized.adjoint() * normalized - linalg::identity()))
        })
        .collect();
    let deterministic = unitarity_defects.iter().all(|&d| d <= TOL) && (plan.p_max - 1.0).abs() <= TOL;
    Ok(Convertibility { deterministic, p_max: plan.p_max, unitarity_defects })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConnectorSearch {
    /// `g` with `g psi = phi` (including phase) to the verification tolerance.
    Found { chain: LocalOperatorChain, fidelity: f64 },
    /// No local unitary linking the critical representatives was found within the budget.
    NotFound { best_fidelity: f64 },
}

/// Looks for a local connector `g` with `g psi = phi`.
///
/// Both states are scaled to their critical representatives `A psi`, `B phi`; a local unitary
/// `u` with `u A psi ~ B phi` is searched by alternating per-qubit updates, and
/// `g = B^{-1} u A` is returned after rescaling.
pub fn find_connector(psi: &PureState, phi: &PureState, restarts: usize, seed: u64) -> Result<ConnectorSearch> {
    const FIDELITY_GOAL: f64 = 1.0 - 1e-8;
    psi.require_normalized(NORMALIZATION_TOL)?;
    phi.require_normalized(NORMALIZATION_TOL)?;
    if psi.n() != phi.n() {
        return Err(Error::QubitMismatch { expected: psi.n(), found: phi.n() });
    }
    let opts = ScalingOptions::default();
    let a = scale_to_critical(psi, &opts)?;
    let b = scale_to_critical(phi, &opts)?;
    for (name, s) in [("source", &a), ("target", &b)] {
        if s.status != ScalingStatus::Converged {
            return Err(Error::NullCone(format!("{name} scaling ended with {:?}", s.status)));
        }
    }
    let n = psi.n();
    let (src, dst) = (&a.representative, &b.representative);

    let results = run_trials(restarts.max(1), |r| {
        let mut rng = rng_from_seed(derive_seed(seed, r as u64));
        let start: Vec<Mat2> =
            if r == 0 { vec![linalg::identity(); n] } else { (0..n).map(|_| haar_su2(&mut rng)).collect() };
        align_unitaries(src.amplitudes(), dst.amplitudes(), n, start)
    });
    let (best_u, best_fid) = results.into_iter().max_by(|x, y| x.1.total_cmp(&y.1)).expect("at least one restart");
    if best_fid < FIDELITY_GOAL {
        return Ok(ConnectorSearch::NotFound { best_fidelity: best_fid });
    }
    let u = LocalOperatorChain::new_unchecked(best_u, ONE, GroupTag::K);
    let g = b.accumulated_chain.inverse()?.compose(&u.compose(&a.accumulated_chain)?)?;
    let image = g.apply(psi)?;
    let overlap = image.inner(phi)?;
    if overlap.norm() == 0.0 {
        return Ok(ConnectorSearch::NotFound { best_fidelity: 0.0 });
    }
    // fix the global phase and norm so that g psi = phi
    let correction = overlap / (overlap.norm() * image.norm());
    let scalar = g.scalar() * correction;
    let chain = LocalOperatorChain::new_unchecked(g.factors().to_vec(), scalar, GroupTag::GTilde);
    let fidelity = chain.apply(psi)?.fidelity(phi)?;
    if fidelity < FIDELITY_GOAL {
        return Ok(ConnectorSearch::NotFound { best_fidelity: fidelity });
    }
    Ok(ConnectorSearch::Found { chain, fidelity })
}

/// Maximizes `|<dst|u src>|` over `SU(2)^n`; returns the factors and the final fidelity.
fn align_unitaries(src: &[Complex64], dst: &[Complex64], n: usize, mut u: Vec<Mat2>) -> (Vec<Mat2>, f64) {
    let apply_all = |u: &[Mat2]| {
        let mut v = src.to_vec();
        for (k, f) in u.iter().enumerate() {
            apply_single_raw(&mut v, n, k, f);
        }
        v
    };
    let overlap = |v: &[Complex64]| -> Complex64 { dst.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
    let mut v = apply_all(&u);
    let mut fid = overlap(&v).norm_sqr();
    for _ in 0..2000 {
        let phase = {
            let ov = overlap(&v);
            if ov.norm() > 0.0 {
                ov.conj() / ov.norm()
            } else {
                ONE
            }
        };
        let target: Vec<Complex64> = dst.iter().map(|z| z * phase.conj()).collect();
        for (k, uk) in u.iter_mut().enumerate() {
            apply_single_raw(&mut v, n, k, &uk.adjoint());
            let m = reduced_moment(&v, &target, n, k);
            if let Some(next) = linalg::su2_maximizer(&m) {
                *uk = next;
            }
            apply_single_raw(&mut v, n, k, uk);
        }
        v = apply_all(&u);
        let next = overlap(&v).norm_sqr();
        let done = next >= 1.0 - 1e-14 || next - fid <= 1e-15;
        fid = next;
        if done {
            break;
        }
    }
    (u, fid)
}
