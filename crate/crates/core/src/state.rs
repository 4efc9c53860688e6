//! Dense n-qubit pure states.
//!
//! Amplitudes are stored big-endian: qubit 0 is the most significant bit of the basis index,
//! so splitting a state on its first qubit is a contiguous halving of the amplitude vector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, Mat2, ONE, ZERO};
use crate::rng::{complex_gaussian, rng_from_seed};

/// Upper bound on the qubit count accepted by constructors (dense storage).
pub const MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(into = "crate::io::StateFile", try_from = "crate::io::StateFile")]
pub struct PureState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Domain(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::Domain(format!(
                "{} amplitudes given for {n} qubits (expected {})",
                amplitudes.len(),
                1usize << n
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite amplitude".into()));
        }
        Ok(Self { n, amplitudes })
    }

    /// Infers the qubit count from the amplitude count, which must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Domain(format!("amplitude count {len} is not a power of two >= 2")));
        }
        Self::new(len.trailing_zeros() as usize, amplitudes)
    }

    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Domain(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        Ok(Self { n, amplitudes: vec![ZERO; 1 << n] })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        if index >= s.dim() {
            return Err(Error::Domain(format!("basis index {index} out of range")));
        }
        s.amplitudes[index] = ONE;
        Ok(s)
    }

    /// Product state of single-qubit vectors, qubit 0 first.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        let n = factors.len();
        let mut amps = vec![ONE];
        for f in factors {
            amps = amps.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
        }
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized(norm));
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(c(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, t: Complex64) -> Self {
        Self { n: self.n, amplitudes: self.amplitudes.iter().map(|z| z * t).collect() }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_same_n(other)?;
        let amplitudes = self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { n: self.n, amplitudes })
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_n(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| x.conj() * y).sum())
    }

    /// `|<self|other>|^2 / (|self|^2 |other|^2)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let ov = self.inner(other)?;
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == 0.0 {
            return Err(Error::Domain("fidelity with the zero vector".into()));
        }
        Ok((ov.norm_sqr() / denom).min(1.0))
    }

    /// Euclidean distance `|self - other|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_n(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::Domain(format!("qubit index {qubit} out of range for n = {}", self.n)));
        }
        Ok(())
    }

    /// Applies `m` to one qubit in place.
    pub fn apply_single(&mut self, qubit: usize, m: &Mat2) -> Result<()> {
        self.check_qubit(qubit)?;
        apply_single_raw(&mut self.amplitudes, self.n, qubit, m);
        Ok(())
    }

    /// Reduced density matrix of one qubit, normalized by `|psi|^2`.
    pub fn reduced_density(&self, qubit: usize) -> Result<DensityMatrix2> {
        self.check_qubit(qubit)?;
        let norm_sqr = self.norm_sqr();
        if norm_sqr == 0.0 {
            return Err(Error::Domain("reduced density of the zero vector".into()));
        }
        let m = reduced_moment(&self.amplitudes, &self.amplitudes, self.n, qubit);
        // m[(b, a)] = sum psi[b, rest] conj(psi[a, rest]) = rho[(b, a)]
        Ok(DensityMatrix2(m / c(norm_sqr, 0.0)))
    }

    /// Relabels qubits: input qubit `k` becomes output qubit `perm[k]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::Domain(format!("permutation of length {} for n = {n}", perm.len())));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain(format!("{perm:?} is not a permutation of 0..{n}")));
            }
        }
        let mut out = vec![ZERO; self.dim()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let mut target = 0usize;
            for (k, &p) in perm.iter().enumerate() {
                let bit = (idx >> (n - 1 - k)) & 1;
                target |= bit << (n - 1 - p);
            }
            out[target] = *amp;
        }
        Ok(Self { n, amplitudes: out })
    }

    /// Haar-random state: i.i.d. standard complex Gaussian amplitudes, normalized.
    pub fn sample_haar(n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Domain(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        let mut rng = rng_from_seed(seed);
        let amps = (0..1usize << n).map(|_| complex_gaussian(&mut rng)).collect();
        Self::new(n, amps)?.normalized()
    }

    /// `|W_n>`: equal superposition of the weight-one basis states.
    /// Unnormalized form has unit amplitudes (`sqrt(n) |W_n>`).
    pub fn w(n: usize, normalized: bool) -> Result<Self> {
        require_at_least_two(n)?;
        let amp = if normalized { 1.0 / (n as f64).sqrt() } else { 1.0 };
        let mut s = Self::zero(n)?;
        for k in 0..n {
            s.amplitudes[1 << k] = c(amp, 0.0);
        }
        Ok(s)
    }

    /// `|L_n> = (sqrt(n-2) |1...1> + sqrt(n) |W_n>) / sqrt(2(n-1))`.
    /// Unnormalized form drops the `1/sqrt(2(n-1))` prefactor.
    pub fn ln(n: usize, normalized: bool) -> Result<Self> {
        require_at_least_two(n)?;
        let mut s = Self::w(n, false)?;
        let top = s.dim() - 1;
        s.amplitudes[top] += c(((n - 2) as f64).sqrt(), 0.0);
        if normalized {
            let pre = 1.0 / (2.0 * (n as f64 - 1.0)).sqrt();
            s = s.scaled(c(pre, 0.0));
        }
        Ok(s)
    }

    /// `|0...0> + |1...1>`, divided by `sqrt 2` when normalized.
    pub fn ghz(n: usize, normalized: bool) -> Result<Self> {
        require_at_least_two(n)?;
        let amp = if normalized { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
        let mut s = Self::zero(n)?;
        let top = s.dim() - 1;
        s.amplitudes[0] = c(amp, 0.0);
        s.amplitudes[top] = c(amp, 0.0);
        Ok(s)
    }

    /// Four-qubit generic family
    /// `a(|0000>+|1111>) + b(|0011>+|1100>) + c(|0101>+|1010>) + d(|0110>+|1001>)`.
    pub fn gabcd(a: Complex64, b: Complex64, cc: Complex64, d: Complex64, normalized: bool) -> Result<Self> {
        if [a, b, cc, d].iter().all(|z| z.norm() == 0.0) {
            return Err(Error::Domain("all four coefficients are zero".into()));
        }
        let mut s = Self::zero(4)?;
        for (coef, idx) in [(a, 0b0000), (b, 0b0011), (cc, 0b0101), (d, 0b0110)] {
            s.amplitudes[idx] = coef;
            s.amplitudes[idx ^ 0b1111] = coef;
        }
        if normalized {
            s = s.normalized()?;
        }
        Ok(s)
    }
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 qubits, got {n}")));
    }
    if n > MAX_QUBITS {
        return Err(Error::Domain(format!("qubit count {n} exceeds {MAX_QUBITS}")));
    }
    Ok(())
}

/// In-place `(I x .. x m x .. x I) amps` on `qubit`.
pub(crate) fn apply_single_raw(amps: &mut [Complex64], n: usize, qubit: usize, m: &Mat2) {
    let stride = 1usize << (n - 1 - qubit);
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for block in (0..amps.len()).step_by(2 * stride) {
        for i0 in block..block + stride {
            let i1 = i0 + stride;
            let (x0, x1) = (amps[i0], amps[i1]);
            amps[i0] = m00 * x0 + m01 * x1;
            amps[i1] = m10 * x0 + m11 * x1;
        }
    }
}

/// `M[(b, a)] = sum_rest x[b @ qubit, rest] * conj(y[a @ qubit, rest])`.
pub(crate) fn reduced_moment(x: &[Complex64], y: &[Complex64], n: usize, qubit: usize) -> Mat2 {
    let stride = 1usize << (n - 1 - qubit);
    let mut m = Mat2::zeros();
    for block in (0..x.len()).step_by(2 * stride) {
        for i0 in block..block + stride {
            let i1 = i0 + stride;
            let (x0, x1) = (x[i0], x[i1]);
            let (y0, y1) = (y[i0].conj(), y[i1].conj());
            m[(0, 0)] += x0 * y0;
            m[(0, 1)] += x0 * y1;
            m[(1, 0)] += x1 * y0;
            m[(1, 1)] += x1 * y1;
        }
    }
    m
}

/// Single-qubit reduced state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix2(Mat2);

impl DensityMatrix2 {
    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        crate::linalg::hermitian_eigenvalues(&self.0)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        crate::linalg::frobenius(&(self.0 - self.0.adjoint()))
    }

    /// `|rho - I/2|_F`.
    pub fn deviation_from_maximally_mixed(&self) -> f64 {
        crate::linalg::frobenius(&(self.0 - crate::linalg::identity() * c(0.5, 0.0)))
    }
}
