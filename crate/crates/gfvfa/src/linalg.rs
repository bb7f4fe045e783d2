//! Crate-internal helpers for mixed real/complex dense algebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Lift a real matrix to complex entries.
pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Split a complex matrix into (real, imaginary) parts.
pub(crate) fn split(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|v| v.re), m.map(|v| v.im))
}

/// Recombine real and imaginary parts.
pub(crate) fn join(re: DMatrix<f64>, im: DMatrix<f64>) -> DMatrix<Complex64> {
    let (r, c) = (re.nrows(), re.ncols());
    DMatrix::from_fn(r, c, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

/// `M * B` for real `M` and complex `B`, via two real products.
pub(crate) fn real_mul_cmat(m: &DMatrix<f64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (re, im) = split(b);
    join(m * re, m * im)
}

/// `M^T * B` for real `M` and complex `B`.
pub(crate) fn real_tr_mul_cmat(m: &DMatrix<f64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (re, im) = split(b);
    join(m.tr_mul(&re), m.tr_mul(&im))
}

/// `M * x` for real `M` and complex `x`.
pub(crate) fn real_mul_cvec(m: &DMatrix<f64>, x: &DVector<Complex64>) -> DVector<Complex64> {
    let re = m * x.map(|v| v.re);
    let im = m * x.map(|v| v.im);
    DVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
}

/// `M^T * x` for real `M` and complex `x`.
pub(crate) fn real_tr_mul_cvec(m: &DMatrix<f64>, x: &DVector<Complex64>) -> DVector<Complex64> {
    let re = m.tr_mul(&x.map(|v| v.re));
    let im = m.tr_mul(&x.map(|v| v.im));
    DVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
}

/// Frobenius norm of a complex matrix.
pub(crate) fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `|| M^H M - I ||_F`, the unitarity residual.
pub(crate) fn unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    let n = m.ncols();
    let mut g = m.ad_mul(m);
    for i in 0..n {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    frobenius(&g)
}

/// `|| M^T M - I ||_F` for a real matrix.
pub(crate) fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    let mut g = m.tr_mul(m);
    for i in 0..n {
        g[(i, i)] -= 1.0;
    }
    g.norm()
}
