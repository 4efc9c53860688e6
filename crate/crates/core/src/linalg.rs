//! Closed-form 2x2 complex linear algebra used throughout the crate.

use nalgebra::Matrix2;
use num_complex::Complex64;

pub type Mat2 = Matrix2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn diag(a: Complex64, d: Complex64) -> Mat2 {
    Mat2::new(a, ZERO, ZERO, d)
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// Basis of sl(2, C): raising, lowering and Cartan generators.
pub fn sl2_basis() -> [Mat2; 3] {
    [Mat2::new(ZERO, ONE, ZERO, ZERO), Mat2::new(ZERO, ZERO, ONE, ZERO), pauli_z()]
}

pub fn det(m: &Mat2) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

pub fn frobenius(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_sqr(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

pub fn inverse(m: &Mat2) -> Option<Mat2> {
    let d = det(m);
    if d.norm() <= 1e-300 {
        return None;
    }
    Some(Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / d)
}

/// `m / sqrt(det m)` with the principal branch, so the result has unit determinant.
pub fn unimodular(m: &Mat2) -> Option<(Mat2, Complex64)> {
    let d = det(m);
    if d.norm() <= 1e-300 {
        return None;
    }
    let s = d.sqrt();
    Some((m / s, s))
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending. Only the Hermitian part is read.
pub fn hermitian_eigenvalues(h: &Mat2) -> [f64; 2] {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

/// Largest eigenvalue of `g^dagger g`, i.e. the squared spectral norm of `g`.
pub fn gram_lambda_max(g: &Mat2) -> f64 {
    hermitian_eigenvalues(&(g.adjoint() * g))[1]
}

/// Applies a scalar function to a Hermitian 2x2 matrix through its spectrum.
///
/// Uses `f(H) = (f(l1) + f(l2))/2 I + [f(l1), f(l2)] (H - m I)` where the divided difference
/// falls back to `df(m)` for (nearly) degenerate spectra, which keeps the result accurate
/// close to multiples of the identity.
pub fn hermitian_fn(h: &Mat2, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Mat2 {
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let [l1, l2] = hermitian_eigenvalues(&herm);
    let mean = 0.5 * (l1 + l2);
    let gap = l2 - l1;
    let slope = if gap > 1e-6 * (l1.abs() + l2.abs()) { (f(l2) - f(l1)) / gap } else { df(mean) };
    let centered = herm - identity() * c(mean, 0.0);
    identity() * c(0.5 * (f(l1) + f(l2)), 0.0) + centered * c(slope, 0.0)
}

/// Positive square root of a positive semidefinite matrix. Negative roundoff eigenvalues clamp to 0.
pub fn psd_sqrt(h: &Mat2) -> Mat2 {
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let [l1, l2] = hermitian_eigenvalues(&herm);
    let (s1, s2) = (l1.max(0.0).sqrt(), l2.max(0.0).sqrt());
    let gap = l2 - l1;
    // sqrt(l2) - sqrt(l1) = (l2 - l1) / (sqrt(l2) + sqrt(l1)) when both are nonnegative
    let slope = if l1 >= 0.0 && s1 + s2 > 0.0 {
        1.0 / (s1 + s2)
    } else if gap > 0.0 {
        (s2 - s1) / gap
    } else {
        0.0
    };
    let centered = herm - identity() * c(0.5 * (l1 + l2), 0.0);
    identity() * c(0.5 * (s1 + s2), 0.0) + centered * c(slope, 0.0)
}

/// `H^{-1/2}` for a positive definite Hermitian matrix.
pub fn inv_sqrt(h: &Mat2) -> Mat2 {
    hermitian_fn(h, |x| x.powf(-0.5), |x| -0.5 * x.powf(-1.5))
}

pub fn is_unitary(m: &Mat2, tol: f64) -> bool {
    frobenius(&(m.adjoint() * m - identity())) <= tol
}

/// Element of SU(2) from a unit quaternion `(a, b, c, d)`: `[[a+ib, -(c-id)], [c+id, a-ib]]`.
pub fn su2_from_quaternion(q: [f64; 4]) -> Mat2 {
    let alpha = c(q[0], q[1]);
    let beta = c(q[2], q[3]);
    Mat2::new(alpha, -beta.conj(), beta, alpha.conj())
}

/// The element of SU(2) maximizing `Re tr(u m)`.
///
/// `Re tr(u m)` is linear in the quaternion coordinates of `u`, so the maximizer is the
/// normalized coefficient vector. Returns `None` when `m` has no SU(2)-visible component.
pub fn su2_maximizer(m: &Mat2) -> Option<Mat2> {
    let coeff = [
        (m[(0, 0)] + m[(1, 1)]).re,
        m[(1, 1)].im - m[(0, 0)].im,
        m[(0, 1)].re - m[(1, 0)].re,
        -m[(0, 1)].im - m[(1, 0)].im,
    ];
    let norm = coeff.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-300 {
        return None;
    }
    Some(su2_from_quaternion(coeff.map(|x| x / norm)))
}

/// `min_{s = +-1} |s a - b|_F`.
pub fn sign_aligned_distance(a: &Mat2, b: &Mat2) -> f64 {
    frobenius(&(a - b)).min(frobenius(&(a + b)))
}

/// `min_{|c| = 1} |c a - b|_F`.
pub fn phase_aligned_distance(a: &Mat2, b: &Mat2) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let val = frobenius_sqr(a) + frobenius_sqr(b) - 2.0 * overlap.norm();
    val.max(0.0).sqrt()
}
