//! Acceptance suite, one PASS/FAIL line per check. Oracles here are computed independently of the
//! library code paths they check (dense Kronecker products, closed forms).

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slocc_core::chain::{GroupTag, LocalOperatorChain};
use slocc_core::convert::{build_protocol, simulate_protocol, Optimality};
use slocc_core::critical::{criticality_report, min_norm_probe, scale_to_critical, ScalingOptions, ScalingStatus};
use slocc_core::genericity::genericity_report;
use slocc_core::linalg::{self, diag, pauli_x, pauli_y, pauli_z, Mat2};
use slocc_core::slip::{f2, f4};
use slocc_core::stabilizer::{
    adjoint_closure_check, discrete_stabilizer_search, lie_stabilizer_dim, phase_aligned_chain_distance,
    phase_stabilizer_search, SearchOptions, DEFAULT_SVD_CUTOFF,
};
use slocc_core::state::PureState;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn dense(m: &Mat2) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, col| m[(r, col)])
}

fn dense_chain(g: &LocalOperatorChain) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, g.scalar());
    for f in g.factors() {
        out = kron(&out, &dense(f));
    }
    out
}

fn sigma_y_power(m: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for _ in 0..m {
        out = kron(&out, &dense(&pauli_y()));
    }
    out
}

fn bilinear(x: &[Complex64], y: &[Complex64], form: &DMatrix<Complex64>) -> Complex64 {
    let xv = DMatrix::from_column_slice(x.len(), 1, x);
    let yv = DMatrix::from_column_slice(y.len(), 1, y);
    (xv.transpose() * form * yv)[(0, 0)]
}

fn f2_oracle(psi: &PureState) -> Complex64 {
    let a = psi.amplitudes();
    bilinear(a, a, &sigma_y_power(psi.n()))
}

fn f4_oracle(psi: &PureState) -> Complex64 {
    let a = psi.amplitudes();
    let half = a.len() / 2;
    let (p0, p1) = a.split_at(half);
    let y = sigma_y_power(psi.n() - 1);
    bilinear(p0, p0, &y) * bilinear(p1, p1, &y) - bilinear(p0, p1, &y) * bilinear(p1, p0, &y)
}

fn slip_oracle(psi: &PureState) -> Complex64 {
    if psi.n().is_multiple_of(2) {
        f2_oracle(psi)
    } else {
        f4_oracle(psi)
    }
}

fn slip_lib(psi: &PureState) -> Complex64 {
    if psi.n().is_multiple_of(2) {
        f2(psi).value
    } else {
        f4(psi).unwrap().value
    }
}

fn basis_state(n: usize, idx: usize, amp: Complex64) -> PureState {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[idx] = amp;
    PureState::new(n, v).unwrap()
}

fn check_invariant_identities() -> Outcome {
    const TOL: f64 = 1e-10;
    let w4 = PureState::w(4, true).unwrap();
    let w5 = PureState::w(5, true).unwrap();
    check(f2(&w4).value.norm() <= TOL && f2_oracle(&w4).norm() <= TOL, "f2(w4) != 0")?;
    check(f4(&w5).unwrap().value.norm() <= TOL && f4_oracle(&w5).norm() <= TOL, "f4(w5) != 0")?;
    let w5u = PureState::w(5, false).unwrap();
    let tail = basis_state(5, 0b11111, c(2.0, 0.0))
        .combine(c(1.0, 0.0), &basis_state(5, 0, c(1.0, 0.0)), c(1.0, 0.0))
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let psi = w5u.combine(a, &tail, b).unwrap();
        let expected = -4.0 * b.powi(4);
        let got = f4(&psi).unwrap().value;
        worst = worst.max((got - expected).norm()).max((f4_oracle(&psi) - expected).norm());
    }
    check(worst <= TOL, format!("max |f4 + 4b^4| = {worst:.2e}"))?;
    Ok(format!("20 (a,b) pairs, max error {worst:.1e}"))
}

fn check_sl_invariance() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let n = [4, 5, 6][(i % 3) as usize];
        let psi = PureState::sample_haar(n, 1000 + i).unwrap();
        let g = LocalOperatorChain::sample(n, GroupTag::G, 2000 + i).unwrap();
        let before = slip_lib(&psi);
        let after = slip_lib(&g.apply(&psi).unwrap());
        let oracle = slip_oracle(&psi);
        check((before - oracle).norm() <= 1e-12, format!("library and dense oracle disagree at sample {i}"))?;
        worst = worst.max((after - before).norm() / before.norm().max(1.0));
    }
    check(worst <= 1e-8, format!("max relative drift {worst:.2e}"))?;
    Ok(format!("100 pairs, max relative drift {worst:.1e}"))
}

fn check_ln_criticality() -> Outcome {
    let mut worst = 0.0f64;
    for n in 4..=8 {
        let r = criticality_report(&PureState::ln(n, true).unwrap(), 1e-12).unwrap();
        worst = worst.max(r.max_deviation);
    }
    check(worst <= 1e-12, format!("max deviation {worst:.2e}"))?;
    Ok(format!("L4..L8 max deviation {worst:.1e}"))
}

fn check_stabilizer_dimensions() -> Outcome {
    let cases = [
        ("bell", PureState::ghz(2, true).unwrap(), 3),
        ("ghz3", PureState::ghz(3, true).unwrap(), 2),
        ("w3", PureState::w(3, true).unwrap(), 2),
        ("l5", PureState::ln(5, true).unwrap(), 0),
        ("l6", PureState::ln(6, true).unwrap(), 0),
        ("l7", PureState::ln(7, true).unwrap(), 0),
    ];
    let mut got = Vec::new();
    for (name, psi, want) in cases {
        let d = lie_stabilizer_dim(&psi, DEFAULT_SVD_CUTOFF).lie_dim;
        check(d == want, format!("{name}: lie_dim {d}, expected {want}"))?;
        got.push(format!("{name}={d}"));
    }
    Ok(got.join(" "))
}

fn pauli_strings() -> Vec<LocalOperatorChain> {
    [pauli_x(), pauli_y(), pauli_z()]
        .into_iter()
        .map(|p| LocalOperatorChain::new(vec![p; 4], GroupTag::KTilde).unwrap())
        .collect()
}

/// Every symmetry witness found by the Pauli and L5 checks, for the adjoint closure check.
#[derive(Default)]
struct Witnesses {
    pairs: Vec<(PureState, LocalOperatorChain)>,
}

fn check_pauli_symmetries(witnesses: &mut Witnesses) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_residual = 0.0f64;
    let mut worst_match = 0.0f64;
    for trial in 0..10 {
        let coef: Vec<Complex64> =
            (0..4).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let psi = PureState::gabcd(coef[0], coef[1], coef[2], coef[3], true).unwrap();
        for p in pauli_strings() {
            worst_residual = worst_residual.max(p.apply(&psi).unwrap().distance(&psi).unwrap());
        }
        let opts = SearchOptions { restarts: 32, seed: trial, ..SearchOptions::default() };
        let cands = discrete_stabilizer_search(&psi, &opts).map_err(|e| e.to_string())?;
        for (k, p) in pauli_strings().iter().enumerate() {
            let best =
                cands.iter().map(|cand| phase_aligned_chain_distance(&cand.chain, p)).fold(f64::INFINITY, f64::min);
            check(best <= 1e-6, format!("trial {trial}: Pauli string {k} not recovered (best {best:.2e})"))?;
            worst_match = worst_match.max(best);
        }
        witnesses.pairs.extend(cands.into_iter().map(|cand| (psi.clone(), cand.chain)));
    }
    check(worst_residual <= 1e-12, format!("Pauli residual {worst_residual:.2e}"))?;
    Ok(format!("10 coefficient sets, residual {worst_residual:.1e}, recovery distance {worst_match:.1e}"))
}

fn check_genericity() -> Outcome {
    let budget = SearchOptions::default();
    let mut parts = Vec::new();
    for (n, samples, want_lie, want_trivial) in [(5, 100, 1.0, Some(1.0)), (6, 50, 1.0, Some(1.0)), (3, 50, 0.0, None)]
    {
        let r = genericity_report(n, samples, 0, &budget).map_err(|e| e.to_string())?;
        check(r.fraction_lie_dim_zero == want_lie, format!("n={n}: lie_dim=0 fraction {}", r.fraction_lie_dim_zero))?;
        if let Some(t) = want_trivial {
            check(
                r.fraction_gtilde_trivial == t,
                format!(
                    "n={n}: gtilde-trivial fraction {} ({} inconclusive)",
                    r.fraction_gtilde_trivial, r.inconclusive
                ),
            )?;
        }
        parts.push(format!("n={n}: {}/{}", r.fraction_lie_dim_zero, r.fraction_gtilde_trivial));
    }
    Ok(parts.join(", "))
}

fn check_l5_phase_witness(witnesses: &mut Witnesses) -> Outcome {
    let l5 = PureState::ln(5, true).unwrap();
    let opts = SearchOptions::default();
    let hits = phase_stabilizer_search(&l5, c(0.0, 1.0), &opts).map_err(|e| e.to_string())?;
    check(!hits.is_empty(), "no witness at t = i")?;
    let best = hits.iter().map(|h| h.residual).fold(f64::INFINITY, f64::min);
    check(best <= 1e-6, format!("best witness residual {best:.2e}"))?;
    for h in &hits {
        let fixed = h.witness.apply(&l5).unwrap().distance(&l5).unwrap();
        check(fixed <= 1e-6, format!("witness moves L5 by {fixed:.2e}"))?;
    }
    let plain = discrete_stabilizer_search(&l5, &opts).map_err(|e| e.to_string())?;
    check(plain.is_empty(), format!("G-search found {} candidates", plain.len()))?;
    witnesses.pairs.extend(hits.iter().map(|h| (l5.clone(), h.witness.clone())));
    Ok(format!("{} witness(es), residual {best:.1e}; G-search empty", hits.len()))
}

fn check_minimal_norm() -> Outcome {
    let mut parts = Vec::new();
    for (name, phi) in [("l5", PureState::ln(5, true).unwrap()), ("ghz4", PureState::ghz(4, true).unwrap())] {
        let m = min_norm_probe(&phi, 200, 8).map_err(|e| e.to_string())?;
        check(m >= 1.0 - 1e-12, format!("{name}: min |g phi| = {m}"))?;
        parts.push(format!("{name} min {m:.15}"));
    }
    Ok(parts.join(", "))
}

fn check_scaling() -> Outcome {
    let opts = ScalingOptions::default();
    let mut max_iters = 0;
    for i in 0..50 {
        let psi = PureState::sample_haar(5, 9000 + i).unwrap();
        let r = scale_to_critical(&psi, &opts).map_err(|e| e.to_string())?;
        check(r.status == ScalingStatus::Converged, format!("sample {i}: {:?}", r.status))?;
        check(r.iterations <= 10_000, format!("sample {i}: {} sweeps", r.iterations))?;
        let dev = criticality_report(&r.representative, 1e-10).unwrap().max_deviation;
        check(dev <= 1e-10, format!("sample {i}: deviation {dev:.2e}"))?;
        for w in r.norm_trajectory.windows(2) {
            check(w[1] <= w[0] * (1.0 + 1e-14), format!("sample {i}: norm increased {} -> {}", w[0], w[1]))?;
        }
        max_iters = max_iters.max(r.iterations);
    }
    let w3 = scale_to_critical(&PureState::w(3, true).unwrap(), &opts).map_err(|e| e.to_string())?;
    check(w3.status == ScalingStatus::NullCone, format!("W3 status {:?}", w3.status))?;
    let (a, b) = (0.8f64, 0.6f64);
    let psi = basis_state(2, 0, c(a, 0.0)).combine(c(1.0, 0.0), &basis_state(2, 3, c(b, 0.0)), c(1.0, 0.0)).unwrap();
    let bell = PureState::ghz(2, true).unwrap();
    let r = scale_to_critical(&psi, &opts).map_err(|e| e.to_string())?;
    let dist = r.representative.distance(&bell).unwrap();
    check(dist <= 1e-8, format!("Bell representative off by {dist:.2e}"))?;
    Ok(format!("50 states, max {max_iters} sweeps; W3 null cone; Bell distance {dist:.1e}"))
}

fn check_conversion() -> Outcome {
    let l5 = PureState::ln(5, true).unwrap();
    let g = LocalOperatorChain::single(5, 0, diag(c(2.0, 0.0), c(0.5, 0.0)), GroupTag::G).unwrap();
    let plan = build_protocol(&l5, &g, Optimality::LowerBound).map_err(|e| e.to_string())?;
    let target = 17.0 / 32.0;
    check((plan.p_max - target).abs() <= 1e-12, format!("p_max {}", plan.p_max))?;
    let completeness = plan.measurements.iter().map(|m| m.completeness_residual()).fold(0.0, f64::max);
    check(completeness <= 1e-12, format!("completeness residual {completeness:.2e}"))?;
    let trials = 100_000;
    let stats = simulate_protocol(&plan, &l5, trials, 10).map_err(|e| e.to_string())?;
    let p = stats.empirical_p.unwrap();
    let se = stats.standard_error(target);
    check((p - target).abs() <= 3.0 * se, format!("empirical {p} vs {target} (se {se:.2e})"))?;
    let fmin = stats.min_success_fidelity.unwrap_or(0.0);
    check(fmin >= 1.0 - 1e-9, format!("success fidelity {fmin}"))?;
    Ok(format!("p_max {}, empirical {p:.5} ({:.2} se), fidelity >= {fmin:.12}", plan.p_max, (p - target) / se))
}

fn check_factorized_spectrum() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let n = 2 + (i % 5) as usize;
        let group = [GroupTag::G, GroupTag::GTilde][(i % 2) as usize];
        let g = LocalOperatorChain::sample(n, group, 1100 + i).unwrap().with_scalar(c(0.7, -0.3));
        let factorized: f64 = g.scalar().norm_sqr() * g.factors().iter().map(linalg::gram_lambda_max).product::<f64>();
        let m = dense_chain(&g);
        let gram = m.adjoint() * &m;
        let dense_max = gram.symmetric_eigenvalues().iter().copied().fold(f64::MIN, f64::max);
        worst = worst.max((factorized - dense_max).abs() / dense_max);
    }
    check(worst <= 1e-10, format!("max relative error {worst:.2e}"))?;
    Ok(format!("20 chains at n=2..6, max relative error {worst:.1e}"))
}

/// Below this the forward residual is roundoff and the ratio carries no information.
const RESIDUAL_FLOOR: f64 = 1e-15;

fn check_adjoint_closure(witnesses: &Witnesses) -> Outcome {
    check(!witnesses.pairs.is_empty(), "no witnesses collected")?;
    let mut worst_ratio = 0.0f64;
    for (k, (psi, g)) in witnesses.pairs.iter().enumerate() {
        let (fwd, back) = adjoint_closure_check(psi, g).map_err(|e| e.to_string())?;
        let ratio = back / fwd.max(RESIDUAL_FLOOR);
        check(ratio <= 10.0, format!("witness {k}: forward {fwd:.2e}, adjoint {back:.2e}"))?;
        worst_ratio = worst_ratio.max(ratio);
    }
    Ok(format!("{} witnesses, max adjoint/forward ratio {worst_ratio:.2}", witnesses.pairs.len()))
}

fn main() {
    let mut witnesses = Witnesses::default();
    let mut failures = 0;
    let mut run = |id: usize, name: &str, budget: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("{tag} [{id:>2}] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64());
    };
    let s = Duration::from_secs;
    run(1, "invariant polynomial identities", s(1), &mut check_invariant_identities);
    run(2, "SL invariance", s(10), &mut check_sl_invariance);
    run(3, "L_n criticality", s(1), &mut check_ln_criticality);
    run(4, "stabilizer dimensions", s(5), &mut check_stabilizer_dimensions);
    run(5, "four-qubit Pauli symmetries", s(120), &mut || check_pauli_symmetries(&mut witnesses));
    run(6, "genericity", s(1800), &mut check_genericity);
    run(7, "L5 phase witness", s(60), &mut || check_l5_phase_witness(&mut witnesses));
    run(8, "minimal norm on critical states", s(10), &mut check_minimal_norm);
    run(9, "scaling", s(300), &mut check_scaling);
    run(10, "conversion", s(60), &mut check_conversion);
    run(11, "factorized spectrum", s(30), &mut check_factorized_spectrum);
    run(12, "adjoint closure", s(10), &mut || check_adjoint_closure(&witnesses));
    println!("{} of 12 criteria passed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
