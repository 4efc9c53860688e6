//! Monte Carlo census of stabilizers over Haar-random states, plus a fixed benchmark battery.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critical::criticality_report;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::stabilizer::{gtilde_triviality_probe, Gate, SearchOptions, StabilizerProbe, Verdict};
use crate::state::PureState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub seed: u64,
    /// `None` when scaling did not reach a critical point.
    pub lie_dim: Option<usize>,
    pub smallest_singular_value: Option<f64>,
    pub discrete_candidates: usize,
    pub phase_hits: usize,
    pub verdict: Verdict,
    pub failed_gate: Option<Gate>,
}

impl SampleRecord {
    fn from_probe(index: usize, seed: u64, probe: &StabilizerProbe) -> Self {
        Self {
            index,
            seed,
            lie_dim: probe.lie_dim(),
            smallest_singular_value: probe.lie.as_ref().map(|l| l.smallest_singular_value()),
            discrete_candidates: probe.discrete_candidates.len(),
            phase_hits: probe.gtilde_phase_hits.len(),
            verdict: probe.verdict,
            failed_gate: probe.failed_gate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: SearchOptions,
    pub records: Vec<SampleRecord>,
    pub fraction_lie_dim_zero: f64,
    pub fraction_gtilde_trivial: f64,
    pub fraction_with_discrete_candidates: f64,
    pub inconclusive: usize,
}

/// Haar sample `i` is drawn with seed `derive_seed(seed, i)`, so reports do not depend on
/// scheduling.
pub fn genericity_report(n: usize, samples: usize, seed: u64, budget: &SearchOptions) -> Result<GenericityReport> {
    if n < 2 {
        return Err(Error::Domain(format!("genericity needs n >= 2, got {n}")));
    }
    if samples == 0 {
        return Err(Error::Domain("genericity needs at least one sample".into()));
    }
    let records = map_samples(samples, |i| {
        let s = derive_seed(seed, i as u64);
        let search = SearchOptions { seed: derive_seed(budget.seed, s), ..*budget };
        match PureState::sample_haar(n, s) {
            Ok(psi) => SampleRecord::from_probe(i, s, &gtilde_triviality_probe(&psi, &search)),
            Err(_) => SampleRecord {
                index: i,
                seed: s,
                lie_dim: None,
                smallest_singular_value: None,
                discrete_candidates: 0,
                phase_hits: 0,
                verdict: Verdict::Inconclusive,
                failed_gate: Some(Gate::Normalization),
            },
        }
    });
    let frac =
        |pred: &dyn Fn(&SampleRecord) -> bool| records.iter().filter(|r| pred(r)).count() as f64 / samples as f64;
    Ok(GenericityReport {
        n,
        samples,
        seed,
        budget: *budget,
        fraction_lie_dim_zero: frac(&|r| r.lie_dim == Some(0)),
        fraction_gtilde_trivial: frac(&|r| r.verdict == Verdict::Trivial),
        fraction_with_discrete_candidates: frac(&|r| r.discrete_candidates > 0),
        inconclusive: records.iter().filter(|r| r.verdict == Verdict::Inconclusive).count(),
        records,
    })
}

#[cfg(feature = "parallel")]
fn map_samples<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_samples<T>(count: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(f).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub label: String,
    pub n: usize,
    /// Marginal deviation of the input itself, before any scaling.
    pub input_max_deviation: f64,
    pub input_is_critical: bool,
    pub lie_dim: Option<usize>,
    pub discrete_candidates: usize,
    pub phase_hits: usize,
    pub verdict: Verdict,
    pub failed_gate: Option<Gate>,
    pub slip: Option<Complex64>,
}

/// Coefficients used for the `Psi(a,b,c,d)` row.
pub const CENSUS_GABCD: [f64; 4] = [0.9, 0.4, -0.7, 1.3];

pub fn benchmark_battery() -> Vec<(String, PureState)> {
    let [a, b, cc, d] = CENSUS_GABCD.map(|x| Complex64::new(x, 0.0));
    let mut out = vec![
        ("bell".to_string(), PureState::ghz(2, true)),
        ("ghz3".to_string(), PureState::ghz(3, true)),
        ("w3".to_string(), PureState::w(3, true)),
        ("ghz4".to_string(), PureState::ghz(4, true)),
        ("gabcd".to_string(), PureState::gabcd(a, b, cc, d, true)),
    ];
    for n in 4..=8 {
        out.push((format!("l{n}"), PureState::ln(n, true)));
    }
    out.into_iter().map(|(k, s)| (k, s.expect("battery states are valid"))).collect()
}

/// Runs every battery state through criticality, tangent rank, discrete and phase searches.
pub fn benchmark_census(budget: &SearchOptions) -> Vec<CensusRow> {
    benchmark_battery()
        .into_iter()
        .map(|(label, psi)| {
            let report = criticality_report(&psi, 1e-10).expect("normalized battery state");
            let probe = gtilde_triviality_probe(&psi, budget);
            CensusRow {
                label,
                n: psi.n(),
                input_max_deviation: report.max_deviation,
                input_is_critical: report.is_critical,
                lie_dim: probe.lie_dim(),
                discrete_candidates: probe.discrete_candidates.len(),
                phase_hits: probe.gtilde_phase_hits.len(),
                verdict: probe.verdict,
                failed_gate: probe.failed_gate,
                slip: probe.slip.filter(|s| s.defined).map(|s| s.value),
            }
        })
        .collect()
}
