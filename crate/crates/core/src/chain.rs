//! Tensor products of single-qubit operators `g = c * g_1 x ... x g_n`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, det, frobenius, frobenius_sqr, is_unitary, Mat2, ONE};
use crate::rng::{complex_gaussian, rng_from_seed};
use crate::state::{apply_single_raw, PureState};

/// Tolerance used when validating group membership of factors.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Which local group the factors belong to.
///
/// `G = SL(2,C)^n`, `K = SU(2)^n`, `GTilde = GL(2,C)^n`, `KTilde = U(2)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    G,
    K,
    #[serde(rename = "Gt")]
    GTilde,
    #[serde(rename = "Kt")]
    KTilde,
}

impl GroupTag {
    fn unimodular(self) -> bool {
        matches!(self, GroupTag::G | GroupTag::K)
    }

    fn unitary(self) -> bool {
        matches!(self, GroupTag::K | GroupTag::KTilde)
    }

    fn from_flags(unimodular: bool, unitary: bool) -> Self {
        match (unimodular, unitary) {
            (true, true) => GroupTag::K,
            (true, false) => GroupTag::G,
            (false, true) => GroupTag::KTilde,
            (false, false) => GroupTag::GTilde,
        }
    }

    /// Smallest of the four groups containing the product of elements of `self` and `other`.
    pub fn join(self, other: Self) -> Self {
        Self::from_flags(self.unimodular() && other.unimodular(), self.unitary() && other.unitary())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GroupTag::G => "G",
            GroupTag::K => "K",
            GroupTag::GTilde => "Gt",
            GroupTag::KTilde => "Kt",
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" => Ok(GroupTag::G),
            "K" => Ok(GroupTag::K),
            "Gt" => Ok(GroupTag::GTilde),
            "Kt" => Ok(GroupTag::KTilde),
            other => Err(Error::Parse(format!("unknown group tag {other:?} (expected G|K|Gt|Kt)"))),
        }
    }
}

/// Checks one factor against the membership rules of `group`.
pub fn check_factor(m: &Mat2, group: GroupTag) -> Result<()> {
    let d = det(m);
    if group.unimodular() && (d - ONE).norm() > MEMBERSHIP_TOL {
        return Err(Error::Domain(format!("factor determinant {d} is not 1 (group {group})")));
    }
    if group.unitary() && !is_unitary(m, MEMBERSHIP_TOL) {
        return Err(Error::Domain(format!("factor is not unitary (group {group})")));
    }
    if d.norm() < MEMBERSHIP_TOL * frobenius_sqr(m) || frobenius_sqr(m) == 0.0 {
        return Err(Error::Domain("factor is numerically singular".into()));
    }
    Ok(())
}

/// A local operator `scalar * (g_1 x ... x g_n)`.
///
/// The group tag constrains the factors only; `scalar` is a separate normalization constant
/// (1 unless set explicitly) so unit-determinant structure survives rescaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "crate::io::ChainFile", try_from = "crate::io::ChainFile")]
pub struct LocalOperatorChain {
    factors: Vec<Mat2>,
    scalar: Complex64,
    group: GroupTag,
}

impl LocalOperatorChain {
    pub fn new(factors: Vec<Mat2>, group: GroupTag) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("chain needs at least one factor".into()));
        }
        for (j, f) in factors.iter().enumerate() {
            check_factor(f, group).map_err(|e| Error::Domain(format!("factor {j}: {e}")))?;
        }
        Ok(Self { factors, scalar: ONE, group })
    }

    /// Builds a chain without validating group membership.
    pub(crate) fn new_unchecked(factors: Vec<Mat2>, scalar: Complex64, group: GroupTag) -> Self {
        Self { factors, scalar, group }
    }

    pub fn identity(n: usize) -> Self {
        Self { factors: vec![linalg::identity(); n], scalar: ONE, group: GroupTag::K }
    }

    /// `m` on every qubit.
    pub fn uniform(n: usize, m: Mat2, group: GroupTag) -> Result<Self> {
        Self::new(vec![m; n], group)
    }

    /// `m` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, m: Mat2, group: GroupTag) -> Result<Self> {
        if qubit >= n {
            return Err(Error::Domain(format!("qubit {qubit} out of range for n = {n}")));
        }
        let mut factors = vec![linalg::identity(); n];
        factors[qubit] = m;
        Self::new(factors, group)
    }

    pub fn with_scalar(mut self, scalar: Complex64) -> Self {
        self.scalar = scalar;
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Mat2] {
        &self.factors
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn group(&self) -> GroupTag {
        self.group
    }

    /// `g |psi>`, one qubit at a time.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if self.len() != psi.n() {
            return Err(Error::QubitMismatch { expected: self.len(), found: psi.n() });
        }
        let n = psi.n();
        let mut amps = psi.amplitudes().to_vec();
        for (k, f) in self.factors.iter().enumerate() {
            apply_single_raw(&mut amps, n, k, f);
        }
        if self.scalar != ONE {
            amps.iter_mut().for_each(|z| *z *= self.scalar);
        }
        PureState::new(n, amps)
    }

    /// Factor-wise product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::QubitMismatch { expected: self.len(), found: other.len() });
        }
        let factors = self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect();
        Ok(Self { factors, scalar: self.scalar * other.scalar, group: self.group.join(other.group) })
    }

    /// Factor-wise conjugate transpose, with the scalar conjugated.
    pub fn adjoint(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|f| f.adjoint()).collect(),
            scalar: self.scalar.conj(),
            group: self.group,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let factors = self
            .factors
            .iter()
            .map(|f| linalg::inverse(f).ok_or_else(|| Error::Domain("singular factor".into())))
            .collect::<Result<Vec<_>>>()?;
        if self.scalar.norm() == 0.0 {
            return Err(Error::Domain("zero scalar".into()));
        }
        Ok(Self { factors, scalar: self.scalar.inv(), group: self.group })
    }

    /// Re-tags the chain after re-validating every factor against `group`.
    pub fn retag(self, group: GroupTag) -> Result<Self> {
        Self::new(self.factors, group).map(|ch| ch.with_scalar(self.scalar))
    }

    /// `max_j |g_j^dagger g_j - I|_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors.iter().map(|f| frobenius(&(f.adjoint() * f - linalg::identity()))).fold(0.0, f64::max)
    }

    /// Random element of `group`: Ginibre factors divided by the principal square root of
    /// their determinant for `G`, Haar-random `SU(2)` for `K`, plain Ginibre for `GTilde`
    /// and Haar `U(2)` for `KTilde`.
    pub fn sample(n: usize, group: GroupTag, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("chain needs at least one factor".into()));
        }
        let mut rng = rng_from_seed(seed);
        let factors = (0..n).map(|_| sample_factor(&mut rng, group)).collect();
        Self::new(factors, group)
    }
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    Mat2::new(complex_gaussian(rng), complex_gaussian(rng), complex_gaussian(rng), complex_gaussian(rng))
}

pub(crate) fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm > 1e-12 {
            return linalg::su2_from_quaternion([a.re / norm, a.im / norm, b.re / norm, b.im / norm]);
        }
    }
}

fn sample_factor<R: Rng + ?Sized>(rng: &mut R, group: GroupTag) -> Mat2 {
    match group {
        GroupTag::K => haar_su2(rng),
        GroupTag::KTilde => {
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            haar_su2(rng) * Complex64::from_polar(1.0, phase)
        }
        GroupTag::G | GroupTag::GTilde => loop {
            let m = ginibre(rng);
            let d = det(&m);
            if d.norm() < MEMBERSHIP_TOL * frobenius_sqr(&m) {
                continue;
            }
            if group == GroupTag::GTilde {
                return m;
            }
            let (unit, _) = linalg::unimodular(&m).expect("nonsingular");
            // one Newton-style correction keeps det within roundoff of 1
            let (unit, _) = linalg::unimodular(&unit).expect("nonsingular");
            if check_factor(&unit, GroupTag::G).is_ok() {
                return unit;
            }
        },
    }
}

/// `sigma^{x n}` for a Pauli matrix, as a `K` element (`i sigma` per factor, times a phase).
pub fn pauli_string(n: usize, pauli: Mat2) -> LocalOperatorChain {
    LocalOperatorChain::new_unchecked(vec![pauli; n], ONE, GroupTag::KTilde)
}
