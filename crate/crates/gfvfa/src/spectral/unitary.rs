//! Principal-branch fractional powers of unitary matrices.
//!
//! A real orthogonal (or complex unitary) matrix `F` is normal, so it has a
//! unitary spectral factorization `F = Q diag(e^{i theta_j}) Q^H` with
//! `theta_j` in the principal branch `(-pi, pi]`. The fractional power is
//! then `F^a = Q diag(e^{i a theta_j}) Q^H`, which makes `a = 0` the
//! identity, `a = 1` the matrix itself, and gives exact index additivity
//! `F^a F^b = F^{a+b}` by construction.
//!
//! The factorization never calls a general nonsymmetric eigensolver.
//! For real orthogonal input it mirrors the real Schur structure of an
//! orthogonal matrix (eigenvalues `+-1` plus 2x2 rotation blocks): the
//! symmetric part `(F + F^T)/2` is diagonalized to find the rotation
//! angles' cosines, and the antisymmetric part restricted to each cosine
//! eigenspace — a Hermitian matrix after multiplication by `-i` — splits
//! the conjugate rotation pairs. Complex unitary input follows the same
//! two-stage commuting-Hermitian scheme with `(V + V^H)/2` and
//! `(V - V^H)/(2i)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance for accepting an input matrix as orthogonal/unitary.
const INPUT_TOL: f64 = 1e-8;
/// Eigenvalues of the Hermitian part closer than this are treated as one
/// invariant cluster.
const CLUSTER_TOL: f64 = 1e-7;

/// Spectral factorization `Q diag(e^{i theta}) Q^H` of a unitary matrix,
/// with angles on the principal branch `(-pi, pi]`.
#[derive(Debug, Clone)]
pub struct UnitarySpectrum {
    vectors: DMatrix<Complex64>,
    angles: Vec<f64>,
}

impl UnitarySpectrum {
    /// Factor a real orthogonal matrix.
    pub fn from_real_orthogonal(f: &DMatrix<f64>) -> Result<Self> {
        let n = square_dim(f.nrows(), f.ncols())?;
        let ortho = linalg::orthogonality_residual(f);
        if ortho > INPUT_TOL {
            return Err(Error::Numerical(format!(
                "matrix is not orthogonal (residual {ortho:.3e})"
            )));
        }

        let sym = (f + f.transpose()) * 0.5;
        let antisym = (f - f.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

        let fc = linalg::to_complex(f);
        let mut vectors = DMatrix::zeros(n, n);
        let mut angles = Vec::with_capacity(n);
        let mut col = 0usize;
        for cluster in cluster_ranges(&order, &eig.eigenvalues) {
            let m = cluster.len();
            let mut basis = DMatrix::zeros(n, m);
            for (j, &src) in cluster.iter().enumerate() {
                basis.set_column(j, &eig.eigenvectors.column(src));
            }
            // Hermitian restriction of -i * antisymmetric part: its
            // eigenvalues are the sines of the rotation angles.
            let k_c = basis.tr_mul(&antisym) * &basis;
            let herm = DMatrix::from_fn(m, m, |p, q| Complex64::new(0.0, -k_c[(p, q)]));
            let (_, w) = hermitian_eigen(&herm);
            let basis_c = linalg::to_complex(&basis);
            for j in 0..m {
                let q = &basis_c * w.column(j);
                angles.push(rayleigh_angle(&fc, &q));
                vectors.set_column(col, &q);
                col += 1;
            }
        }

        let spectrum = Self { vectors, angles };
        spectrum.validate(&fc)?;
        Ok(spectrum)
    }

    /// Factor a complex unitary matrix.
    pub fn from_complex_unitary(v: &DMatrix<Complex64>) -> Result<Self> {
        let n = square_dim(v.nrows(), v.ncols())?;
        let res = linalg::unitarity_residual(v);
        if res > INPUT_TOL {
            return Err(Error::Numerical(format!(
                "matrix is not unitary (residual {res:.3e})"
            )));
        }

        let vh = v.adjoint();
        let herm_re = (v + &vh).map(|z| z * Complex64::new(0.5, 0.0));
        let herm_im = (v - &vh).map(|z| z * Complex64::new(0.0, -0.5));

        let (cos_vals, q_a) = hermitian_eigen(&herm_re);
        let order: Vec<usize> = (0..n).collect();
        let mut vectors = DMatrix::zeros(n, n);
        let mut angles = Vec::with_capacity(n);
        let mut col = 0usize;
        for cluster in cluster_ranges(&order, &cos_vals) {
            let m = cluster.len();
            let mut basis = DMatrix::zeros(n, m);
            for (j, &src) in cluster.iter().enumerate() {
                basis.set_column(j, &q_a.column(src));
            }
            let restricted = basis.ad_mul(&herm_im) * &basis;
            let (_, w) = hermitian_eigen(&restricted);
            for j in 0..m {
                let q = &basis * w.column(j);
                angles.push(rayleigh_angle(v, &q));
                vectors.set_column(col, &q);
                col += 1;
            }
        }

        let spectrum = Self { vectors, angles };
        spectrum.validate(v)?;
        Ok(spectrum)
    }

    fn validate(&self, original: &DMatrix<Complex64>) -> Result<()> {
        let n = self.dimension() as f64;
        let unit = linalg::unitarity_residual(&self.vectors);
        if unit > 1e-10 * n.sqrt().max(1.0) {
            return Err(Error::Numerical(format!(
                "spectral factor is not unitary (residual {unit:.3e})"
            )));
        }
        let recon = self.power(1.0) - original;
        let err = linalg::frobenius(&recon);
        if err > 1e-9 * n.sqrt().max(1.0) {
            return Err(Error::Numerical(format!(
                "spectral factorization residual {err:.3e} exceeds tolerance"
            )));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.vectors.nrows()
    }

    /// Eigenvalue angles on the principal branch, in factorization order.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Unitary eigenvector matrix `Q`.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// The fractional power `Q diag(e^{i a theta}) Q^H`.
    pub fn power(&self, exponent: f64) -> DMatrix<Complex64> {
        let n = self.dimension();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let phase = Complex64::from_polar(1.0, exponent * self.angles[j]);
            for i in 0..n {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

fn square_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows == 0 || rows != cols {
        return Err(Error::InvalidArgument(format!(
            "expected a nonempty square matrix, got {rows}x{cols}"
        )));
    }
    Ok(rows)
}

/// Group sorted eigenvalue indices into clusters separated by gaps larger
/// than `CLUSTER_TOL`.
fn cluster_ranges(order: &[usize], values: &DVector<f64>) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in order {
        match clusters.last_mut() {
            Some(cluster)
                if (values[idx] - values[*cluster.last().unwrap()]).abs() <= CLUSTER_TOL =>
            {
                cluster.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }
    clusters
}

/// Principal-branch angle of the Rayleigh quotient `q^H F q`.
///
/// The Rayleigh quotient is second-order accurate in the eigenvector
/// residual, so per-vector angles stay sharp even when clustering merged
/// nearly equal cosines. Angles within roundoff of `-pi` are mapped to
/// `+pi`, the principal-branch representative of eigenvalue -1.
fn rayleigh_angle(f: &DMatrix<Complex64>, q: &DVector<Complex64>) -> f64 {
    let fq = f * q;
    let mu = q.dotc(&fq);
    let theta = mu.im.atan2(mu.re);
    if theta <= -PI + 1e-9 {
        PI
    } else {
        theta
    }
}

/// Cyclic-sweep Jacobi eigensolver for Hermitian matrices.
///
/// Returns ascending eigenvalues and a unitary eigenvector matrix. Small
/// dense problems only; the large symmetric decompositions in this crate go
/// through the real symmetric solver instead.
fn hermitian_eigen(a: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v: DMatrix<Complex64> = DMatrix::identity(n, n);
    let scale = linalg::frobenius(a).max(f64::MIN_POSITIVE);

    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let absg = g.norm();
                if absg <= 1e-18 * scale {
                    continue;
                }
                let phase = g / absg;
                let alpha = m[(p, p)].re;
                let beta = m[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * absg);
                // Smaller root of t^2 - 2 tau t - 1 = 0.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase * s;

                // A <- A J (columns p, q), then A <- J^H A (rows p, q).
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * c + akq * sp.conj();
                    m[(k, q)] = -akp * sp + akq * c;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = apk * c + aqk * sp;
                    m[(q, k)] = -apk * sp.conj() + aqk * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * sp.conj();
                    v[(k, q)] = -vkp * sp + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)].re));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    (values, vectors)
}
