//! Local symmetries of a state.
//!
//! * Continuous part: the kernel of the tangent map `X -> X|psi>` on `sl(2,C)^n`, read off
//!   from the singular values of the `2^n x 3n` matrix of generator images.
//! * Discrete part: on critical states with a finite stabilizer, every stabilizer element in G
//!   is unitary, so the search runs over `SU(2)^n` only. It maximizes `Re <t psi | u psi>` with
//!   per-qubit closed-form updates from random starts.
//! * `G~` part: elements `t g` with `g` in G and a phase `t`. On the generic set the phase is
//!   pinned by a non-vanishing invariant; the remaining `t = +-i` cases are searched directly.
//!
//! An empty search result is numerical evidence at the stated budget, not a proof.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{haar_su2, GroupTag, LocalOperatorChain};
use crate::critical::{criticality_report, scale_to_critical, ScalingOptions, ScalingStatus};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, I, ONE};
use crate::rng::{derive_seed, rng_from_seed};
use crate::slip::{Slip, SlipValue};
use crate::state::{apply_single_raw, reduced_moment, PureState};

/// Relative singular-value cutoff separating the kernel of the tangent map.
pub const DEFAULT_SVD_CUTOFF: f64 = 1e-8;
/// Criticality tolerance required before a compact-group search.
pub const SEARCH_CRITICALITY_TOL: f64 = 1e-8;
/// Candidates closer than this to the identity (after per-factor sign alignment) are dropped.
pub const IDENTITY_EXCLUSION: f64 = 1e-3;
/// Candidates closer than this to an earlier one are duplicates.
pub const DEDUP_RADIUS: f64 = 1e-6;
/// `|f|` below this counts as a vanishing invariant.
pub const SLIP_NONZERO: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieStabilizer {
    /// Complex dimension of `{X in sl(2,C)^n : X psi = 0}`.
    pub lie_dim: usize,
    /// Singular values of the tangent matrix, descending (`3n` entries).
    pub singular_values: Vec<f64>,
    pub cutoff: f64,
}

impl LieStabilizer {
    pub fn smallest_singular_value(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn rank(&self) -> usize {
        self.singular_values.len() - self.lie_dim
    }
}

/// Columns `(I x .. x X x .. x I) psi` for `X` in `{e, f, h}` at every qubit.
pub fn tangent_matrix(psi: &PureState) -> DMatrix<Complex64> {
    let n = psi.n();
    let basis = linalg::sl2_basis();
    let mut m = DMatrix::zeros(psi.dim(), 3 * n);
    for k in 0..n {
        for (a, x) in basis.iter().enumerate() {
            let mut col = psi.amplitudes().to_vec();
            apply_single_raw(&mut col, n, k, x);
            m.column_mut(3 * k + a).iter_mut().zip(col).for_each(|(dst, v)| *dst = v);
        }
    }
    m
}

fn sorted_svd(psi: &PureState) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let mut m = tangent_matrix(psi);
    let cols = m.ncols();
    if m.nrows() < cols {
        // zero rows keep the spectrum and make the thin SVD return all 3n values
        m = m.resize_vertically(cols, Complex64::new(0.0, 0.0));
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut pairs: Vec<(f64, Vec<Complex64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, v_t.row(i).iter().map(|z| z.conj()).collect()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.into_iter().unzip()
}

/// Dimension of the Lie algebra of the G-stabilizer, from the tangent-map rank.
pub fn lie_stabilizer_dim(psi: &PureState, cutoff: f64) -> LieStabilizer {
    let (singular_values, _) = sorted_svd(psi);
    lie_from_values(singular_values, cutoff)
}

fn lie_from_values(singular_values: Vec<f64>, cutoff: f64) -> LieStabilizer {
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let lie_dim = singular_values.iter().filter(|&&s| s <= cutoff * sigma_max).count();
    LieStabilizer { lie_dim, singular_values, cutoff }
}

/// `exp` of a traceless 2x2 matrix: `cosh(mu) I + sinh(mu)/mu X` with `mu^2 = -det X`.
fn exp_traceless(x: &Mat2) -> Mat2 {
    let mu = (-linalg::det(x)).sqrt();
    let (ch, sh_over) =
        if mu.norm() < 1e-8 { (ONE + mu * mu / 2.0, ONE + mu * mu / 6.0) } else { (mu.cosh(), mu.sinh() / mu) };
    linalg::identity() * ch + x * sh_over
}

/// A one-parameter-subgroup element `exp(X)` for a unit kernel vector `X` of the tangent map,
/// or `None` when the kernel is trivial at `cutoff`.
pub fn continuous_witness(psi: &PureState, cutoff: f64) -> Option<LocalOperatorChain> {
    let (values, vectors) = sorted_svd(psi);
    let lie = lie_from_values(values, cutoff);
    if lie.lie_dim == 0 {
        return None;
    }
    let kernel = vectors.last()?;
    let basis = linalg::sl2_basis();
    let factors = (0..psi.n())
        .map(|k| {
            let x = basis.iter().enumerate().fold(Mat2::zeros(), |acc, (a, b)| acc + b * kernel[3 * k + a]);
            exp_traceless(&x)
        })
        .collect();
    Some(LocalOperatorChain::new_unchecked(factors, ONE, GroupTag::G))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub restarts: usize,
    /// Acceptance threshold on `|u psi - t psi|`.
    pub tol: f64,
    pub seed: u64,
    /// Sweeps per restart.
    pub max_sweeps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 32, tol: 1e-8, seed: 0, max_sweeps: 3000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCandidate {
    /// Element of `SU(2)^n` with `u psi = psi`.
    pub chain: LocalOperatorChain,
    /// Independently recomputed `|u psi - psi|`.
    pub residual: f64,
    pub restart: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseHit {
    pub phase: Complex64,
    /// Element of `SU(2)^n` with `u psi = t psi`.
    pub unitary: LocalOperatorChain,
    /// `t^{-1} u` with the scalar moved into the first factor; a `G~` element fixing `psi`.
    pub witness: LocalOperatorChain,
    pub residual: f64,
    pub restart: usize,
}

struct SearchOutcome {
    factors: Vec<Mat2>,
    residual: f64,
}

/// Maximizes `Re <target | u psi>` over `u` in `SU(2)^n` from the given start.
fn ascend(psi: &[Complex64], target: &[Complex64], n: usize, mut u: Vec<Mat2>, opts: &SearchOptions) -> SearchOutcome {
    let apply_all = |u: &[Mat2]| {
        let mut phi = psi.to_vec();
        for (k, f) in u.iter().enumerate() {
            apply_single_raw(&mut phi, n, k, f);
        }
        phi
    };
    let distance = |phi: &[Complex64]| phi.iter().zip(target).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let mut phi = apply_all(&u);
    let mut residual = distance(&phi);
    let mut best = residual;
    let mut stalled = 0;
    for _ in 0..opts.max_sweeps {
        for (k, uk) in u.iter_mut().enumerate() {
            // peel u_k off: chi = u_k^dagger phi has every factor but k applied
            apply_single_raw(&mut phi, n, k, &uk.adjoint());
            let m = reduced_moment(&phi, target, n, k);
            if let Some(next) = linalg::su2_maximizer(&m) {
                *uk = next;
            }
            apply_single_raw(&mut phi, n, k, uk);
        }
        phi = apply_all(&u);
        residual = distance(&phi);
        if residual <= 1e-3 * opts.tol {
            break;
        }
        if residual > best * (1.0 - 1e-9) {
            stalled += 1;
            if stalled >= 5 {
                break;
            }
        } else {
            stalled = 0;
        }
        best = best.min(residual);
    }
    SearchOutcome { factors: u, residual }
}

fn random_start(n: usize, seed: u64) -> Vec<Mat2> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| haar_su2(&mut rng)).collect()
}

/// `max_j min_s |s a_j - b_j|_F`.
pub fn sign_aligned_chain_distance(a: &LocalOperatorChain, b: &LocalOperatorChain) -> f64 {
    a.factors().iter().zip(b.factors()).map(|(x, y)| linalg::sign_aligned_distance(x, y)).fold(0.0, f64::max)
}

/// Distance between chains after aligning each factor by its own phase.
pub fn phase_aligned_chain_distance(a: &LocalOperatorChain, b: &LocalOperatorChain) -> f64 {
    a.factors().iter().zip(b.factors()).map(|(x, y)| linalg::phase_aligned_distance(x, y)).fold(0.0, f64::max)
}

#[cfg(feature = "parallel")]
fn run_restarts<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_restarts<T>(count: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(f).collect()
}

fn check_search_preconditions(psi: &PureState) -> Result<()> {
    let report = criticality_report(psi, SEARCH_CRITICALITY_TOL)
        .map_err(|e| Error::Precondition(format!("criticality gate: {e}")))?;
    if !report.is_critical {
        return Err(Error::Precondition(format!(
            "criticality gate: max marginal deviation {:.3e} exceeds {SEARCH_CRITICALITY_TOL:e}",
            report.max_deviation
        )));
    }
    let lie = lie_stabilizer_dim(psi, DEFAULT_SVD_CUTOFF);
    if lie.lie_dim != 0 {
        return Err(Error::Precondition(format!("lie_dim gate: continuous stabilizer of dimension {}", lie.lie_dim)));
    }
    Ok(())
}

/// Unitary `u` (as restart outcomes) with `|u psi - t psi| <= tol`, re-verified and deduplicated.
fn search_phase(psi: &PureState, t: Complex64, opts: &SearchOptions) -> Result<Vec<(LocalOperatorChain, f64, usize)>> {
    let n = psi.n();
    let target: Vec<Complex64> = psi.amplitudes().iter().map(|z| z * t).collect();
    let target_state = PureState::new(n, target.clone())?;
    let outcomes = run_restarts(opts.restarts, |r| {
        let start = random_start(n, derive_seed(opts.seed, r as u64));
        ascend(psi.amplitudes(), &target, n, start, opts)
    });
    let identity = LocalOperatorChain::identity(n);
    let mut found: Vec<(LocalOperatorChain, f64, usize)> = Vec::new();
    for (r, out) in outcomes.into_iter().enumerate() {
        if out.residual > opts.tol {
            continue;
        }
        let chain = LocalOperatorChain::new_unchecked(out.factors, ONE, GroupTag::K);
        // independent residual through the public application path
        let residual = chain.apply(psi)?.distance(&target_state)?;
        if residual > opts.tol {
            continue;
        }
        if sign_aligned_chain_distance(&chain, &identity) <= IDENTITY_EXCLUSION {
            continue;
        }
        if found.iter().any(|(prev, _, _)| sign_aligned_chain_distance(prev, &chain) < DEDUP_RADIUS) {
            continue;
        }
        found.push((chain, residual, r));
    }
    Ok(found)
}

/// Non-identity elements of `SU(2)^n` fixing a critical state with finite stabilizer.
pub fn discrete_stabilizer_search(psi: &PureState, opts: &SearchOptions) -> Result<Vec<SymmetryCandidate>> {
    check_search_preconditions(psi)?;
    Ok(search_phase(psi, ONE, opts)?
        .into_iter()
        .map(|(chain, residual, restart)| SymmetryCandidate { chain, residual, restart })
        .collect())
}

/// Elements `u` of `SU(2)^n` with `u psi = t psi`, each giving the `G~` stabilizer element `t^{-1} u`.
pub fn phase_stabilizer_search(psi: &PureState, t: Complex64, opts: &SearchOptions) -> Result<Vec<PhaseHit>> {
    if (t.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("phase {t} is not of unit modulus")));
    }
    check_search_preconditions(psi)?;
    Ok(search_phase(psi, t, opts)?
        .into_iter()
        .map(|(unitary, residual, restart)| {
            let mut factors = unitary.factors().to_vec();
            factors[0] *= t.inv();
            let witness = LocalOperatorChain::new_unchecked(factors, ONE, GroupTag::KTilde);
            PhaseHit { phase: t, unitary, witness, residual, restart }
        })
        .collect())
}

/// `(|g psi - psi|, |g^dagger psi - psi|)` on a critical state.
pub fn adjoint_closure_check(psi: &PureState, chain: &LocalOperatorChain) -> Result<(f64, f64)> {
    let report = criticality_report(psi, SEARCH_CRITICALITY_TOL)?;
    if !report.is_critical {
        return Err(Error::Precondition("adjoint closure needs a critical state".into()));
    }
    let forward = chain.apply(psi)?.distance(psi)?;
    let backward = chain.adjoint().apply(psi)?.distance(psi)?;
    Ok((forward, backward))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Trivial,
    NonTrivial,
    Inconclusive,
}

/// The first check of the triviality pipeline that could not be passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Normalization,
    NullCone,
    ScalingNotConverged,
    /// The invariant that pins the phase of `G~` elements vanishes.
    VanishingInvariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerProbe {
    pub verdict: Verdict,
    pub failed_gate: Option<Gate>,
    pub scaling_status: Option<ScalingStatus>,
    pub scaling_iterations: usize,
    /// Critical representative the symmetry analysis ran on.
    pub representative: Option<PureState>,
    pub lie: Option<LieStabilizer>,
    /// Critical with a zero-dimensional stabilizer.
    pub in_c: bool,
    /// `exp(X)` for a kernel element of the tangent map, when one exists.
    pub continuous_witness: Option<LocalOperatorChain>,
    pub slip: Option<SlipValue>,
    pub discrete_candidates: Vec<SymmetryCandidate>,
    pub gtilde_phase_hits: Vec<PhaseHit>,
    pub budget: SearchOptions,
}

impl StabilizerProbe {
    fn new(budget: SearchOptions) -> Self {
        Self {
            verdict: Verdict::Inconclusive,
            failed_gate: None,
            scaling_status: None,
            scaling_iterations: 0,
            representative: None,
            lie: None,
            in_c: false,
            continuous_witness: None,
            slip: None,
            discrete_candidates: Vec::new(),
            gtilde_phase_hits: Vec::new(),
            budget,
        }
    }

    fn inconclusive(mut self, gate: Gate) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.failed_gate = Some(gate);
        self
    }

    pub fn lie_dim(&self) -> Option<usize> {
        self.lie.as_ref().map(|l| l.lie_dim)
    }
}

/// Decides whether the `G~` stabilizer of `psi` is trivial.
///
/// Scales to the critical representative, then: a positive-dimensional tangent kernel or any
/// search hit makes the verdict non-trivial; otherwise a non-vanishing `f2` (even n) or `f4`
/// (odd n) pins the phase so that the searches cover every candidate, giving `Trivial`;
/// a vanishing invariant leaves the verdict inconclusive.
pub fn gtilde_triviality_probe(psi: &PureState, budget: &SearchOptions) -> StabilizerProbe {
    let mut probe = StabilizerProbe::new(*budget);
    if psi.require_normalized(crate::critical::NORMALIZATION_TOL).is_err() {
        return probe.inconclusive(Gate::Normalization);
    }
    let scaled = match scale_to_critical(psi, &ScalingOptions::default()) {
        Ok(s) => s,
        Err(_) => return probe.inconclusive(Gate::Normalization),
    };
    probe.scaling_status = Some(scaled.status);
    probe.scaling_iterations = scaled.iterations;
    match scaled.status {
        ScalingStatus::NullCone => return probe.inconclusive(Gate::NullCone),
        ScalingStatus::MaxIter => return probe.inconclusive(Gate::ScalingNotConverged),
        ScalingStatus::Converged => {}
    }
    let phi = scaled.representative;
    let lie = lie_stabilizer_dim(&phi, DEFAULT_SVD_CUTOFF);
    let lie_dim = lie.lie_dim;
    probe.lie = Some(lie);
    probe.slip = Slip::for_qubits(phi.n()).evaluate(&phi).ok();
    if lie_dim > 0 {
        probe.continuous_witness = continuous_witness(&phi, DEFAULT_SVD_CUTOFF);
        probe.verdict = Verdict::NonTrivial;
        probe.representative = Some(phi);
        return probe;
    }
    probe.in_c = true;

    // preconditions hold by construction here
    probe.discrete_candidates = discrete_stabilizer_search(&phi, budget).unwrap_or_default();
    let n = phi.n();
    let pinned = probe.slip.map(|s| s.defined && s.value.norm() > SLIP_NONZERO).unwrap_or(false);
    if !n.is_multiple_of(2) {
        for (i, t) in [I, -I].into_iter().enumerate() {
            let opts = SearchOptions { seed: derive_seed(budget.seed, 1 + i as u64), ..*budget };
            probe.gtilde_phase_hits.extend(phase_stabilizer_search(&phi, t, &opts).unwrap_or_default());
        }
    }
    probe.representative = Some(phi);
    if !probe.discrete_candidates.is_empty() || !probe.gtilde_phase_hits.is_empty() {
        probe.verdict = Verdict::NonTrivial;
    } else if !pinned {
        probe = probe.inconclusive(Gate::VanishingInvariant);
    } else {
        probe.verdict = Verdict::Trivial;
    }
    probe
}

/// `u` applied to `|psi>` equals `t |psi>` up to `tol`.
pub fn fixes_up_to_phase(psi: &PureState, u: &LocalOperatorChain, t: Complex64, tol: f64) -> Result<bool> {
    Ok(u.apply(psi)?.distance(&psi.scaled(t))? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, pauli_x, pauli_y, pauli_z};

    #[test]
    fn lie_dims_match_analytic_values() {
        let cases = [
            (PureState::ghz(2, true).unwrap(), 3),
            (PureState::ghz(3, true).unwrap(), 2),
            (PureState::w(3, true).unwrap(), 2),
            (PureState::ln(5, true).unwrap(), 0),
        ];
        for (psi, want) in cases {
            let lie = lie_stabilizer_dim(&psi, DEFAULT_SVD_CUTOFF);
            assert_eq!(lie.lie_dim, want, "{:?}", lie.singular_values);
            assert_eq!(lie.lie_dim + lie.rank(), 3 * psi.n());
            assert_eq!(lie.singular_values.len(), 3 * psi.n());
        }
    }

    #[test]
    fn ghz3_has_two_exact_zeros() {
        let lie = lie_stabilizer_dim(&PureState::ghz(3, true).unwrap(), DEFAULT_SVD_CUTOFF);
        let smax = lie.singular_values[0];
        assert_eq!(lie.singular_values.iter().filter(|&&s| s < 1e-10 * smax).count(), 2);
    }

    #[test]
    fn continuous_witness_fixes_ghz3() {
        let ghz = PureState::ghz(3, true).unwrap();
        let g = continuous_witness(&ghz, DEFAULT_SVD_CUTOFF).unwrap();
        for f in g.factors() {
            assert!((linalg::det(f) - ONE).norm() < 1e-12);
        }
        assert!(g.apply(&ghz).unwrap().distance(&ghz).unwrap() < 1e-12);
        assert!(sign_aligned_chain_distance(&g, &LocalOperatorChain::identity(3)) > 1e-3);
        assert!(continuous_witness(&PureState::ln(5, true).unwrap(), DEFAULT_SVD_CUTOFF).is_none());
    }

    #[test]
    fn gabcd_pauli_strings_found() {
        let psi = PureState::gabcd(ONE, c(2.0, 1.0), c(3.0, 0.0), c(0.5, 0.0), true).unwrap();
        let cands = discrete_stabilizer_search(&psi, &SearchOptions::default()).unwrap();
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let target = LocalOperatorChain::new_unchecked(vec![p; 4], ONE, GroupTag::KTilde);
            assert!(
                cands.iter().any(|cand| phase_aligned_chain_distance(&cand.chain, &target) < 1e-6),
                "missing a Pauli string among {} candidates",
                cands.len()
            );
        }
        for cand in &cands {
            let (fwd, back) = adjoint_closure_check(&psi, &cand.chain).unwrap();
            assert!(fwd <= 1e-8 && back <= 10.0 * fwd.max(1e-15));
        }
    }

    #[test]
    fn ln5_search_finds_nothing_in_g() {
        let l5 = PureState::ln(5, true).unwrap();
        let opts = SearchOptions { restarts: 64, ..SearchOptions::default() };
        assert!(discrete_stabilizer_search(&l5, &opts).unwrap().is_empty());
    }

    #[test]
    fn ln5_phase_witness() {
        let l5 = PureState::ln(5, true).unwrap();
        let hits = phase_stabilizer_search(&l5, I, &SearchOptions::default()).unwrap();
        assert!(!hits.is_empty());
        // the t = i witness is diag(-1, 1)^{x5}, the square of diag(i, 1)^{x5}
        let expected = LocalOperatorChain::new_unchecked(vec![diag(-ONE, ONE); 5], ONE, GroupTag::KTilde);
        for hit in &hits {
            assert!(hit.residual <= 1e-6);
            let w = hit.witness.apply(&l5).unwrap();
            assert!(w.distance(&l5).unwrap() <= 1e-6);
            assert!(phase_aligned_chain_distance(&hit.witness, &expected) < 1e-6);
        }
    }

    #[test]
    fn search_preconditions_are_named() {
        let err =
            discrete_stabilizer_search(&PureState::sample_haar(4, 1).unwrap(), &SearchOptions::default()).unwrap_err();
        assert!(err.to_string().contains("criticality"));
        let err = discrete_stabilizer_search(&PureState::ghz(3, true).unwrap(), &SearchOptions::default()).unwrap_err();
        assert!(err.to_string().contains("lie_dim"));
        assert!(
            phase_stabilizer_search(&PureState::ln(5, true).unwrap(), c(2.0, 0.0), &SearchOptions::default()).is_err()
        );
    }

    #[test]
    fn adjoint_closure_examples() {
        let psi = PureState::gabcd(c(0.2, 0.3), c(1.0, 0.0), c(-0.5, 0.1), c(0.7, 0.0), true).unwrap();
        let sx = LocalOperatorChain::new_unchecked(vec![pauli_x(); 4], ONE, GroupTag::KTilde);
        let (a, b) = adjoint_closure_check(&psi, &sx).unwrap();
        assert!(a <= 1e-12 && b <= 1e-12);
        let (z, w) = (c(1.3, 0.4), c(0.2, -0.9));
        let v = (z * w).inv();
        let g = LocalOperatorChain::new_unchecked(
            vec![diag(z, z.inv()), diag(w, w.inv()), diag(v, v.inv())],
            ONE,
            GroupTag::G,
        );
        let (a, b) = adjoint_closure_check(&PureState::ghz(3, true).unwrap(), &g).unwrap();
        assert!(a <= 1e-10 && b <= 1e-10);
    }

    #[test]
    fn phase_one_matches_plain_search() {
        let psi = PureState::gabcd(ONE, c(2.0, 1.0), c(3.0, 0.0), c(0.5, 0.0), true).unwrap();
        let opts = SearchOptions { restarts: 8, ..SearchOptions::default() };
        let plain = discrete_stabilizer_search(&psi, &opts).unwrap();
        let phased = phase_stabilizer_search(&psi, ONE, &opts).unwrap();
        assert_eq!(plain.len(), phased.len());
        for (a, b) in plain.iter().zip(&phased) {
            assert_eq!(a.chain, b.unitary);
        }
    }

    #[test]
    fn probe_verdicts() {
        let ln5 = gtilde_triviality_probe(&PureState::ln(5, true).unwrap(), &SearchOptions::default());
        assert_eq!(ln5.verdict, Verdict::NonTrivial);
        assert!(ln5.discrete_candidates.is_empty());
        assert!(!ln5.gtilde_phase_hits.is_empty());

        let w3 = gtilde_triviality_probe(&PureState::w(3, true).unwrap(), &SearchOptions::default());
        assert_eq!(w3.verdict, Verdict::Inconclusive);
        assert_eq!(w3.failed_gate, Some(Gate::NullCone));

        let ghz3 = gtilde_triviality_probe(&PureState::ghz(3, true).unwrap(), &SearchOptions::default());
        assert_eq!(ghz3.verdict, Verdict::NonTrivial);
        assert!(ghz3.continuous_witness.is_some());
    }

    #[test]
    fn identity_fixes_everything() {
        let psi = PureState::ghz(2, true).unwrap();
        assert!(fixes_up_to_phase(&psi, &LocalOperatorChain::identity(2), ONE, 0.0).unwrap());
    }
}
