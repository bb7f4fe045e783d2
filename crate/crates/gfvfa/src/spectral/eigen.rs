//! Eigendecomposition of symmetric shift operators and the GFT.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg;
use crate::signal::GraphSignal;

/// Orthonormal eigenbasis of a symmetric shift operator.
///
/// Columns of `u` are eigenvectors sorted by ascending eigenvalue. The sign
/// of each column is fixed deterministically: the entry of largest absolute
/// value is positive, ties broken by lowest row index. Repeated eigenvalues
/// make the basis convention-dependent; the convention here is exactly the
/// sorted, sign-fixed output of the symmetric eigensolver, so identical
/// inputs always produce identical bases.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    u: DMatrix<f64>,
    lambda: DVector<f64>,
    fingerprint: u64,
}

impl EigenBasis {
    /// Diagonalize a symmetric matrix (symmetric within `1e-10`).
    pub fn new(z: &DMatrix<f64>) -> Result<Self> {
        let n = z.nrows();
        if n == 0 || z.ncols() != n {
            return Err(Error::InvalidArgument(
                "shift operator must be square and nonempty".into(),
            ));
        }
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                asym = asym.max((z[(i, j)] - z[(j, i)]).abs());
            }
        }
        if asym > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "shift operator is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        // Work on the symmetrized matrix so roundoff asymmetry cannot leak in.
        let sym = (z + z.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

        let mut u = DMatrix::zeros(n, n);
        let mut lambda = DVector::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            lambda[dst] = eig.eigenvalues[src];
            let col = eig.eigenvectors.column(src);
            // Deterministic sign: largest-magnitude entry positive, first
            // such row wins ties.
            let mut best = 0;
            for i in 1..n {
                if col[i].abs() > col[best].abs() {
                    best = i;
                }
            }
            let flip = if col[best] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..n {
                u[(i, dst)] = flip * col[i];
            }
        }

        let basis = Self {
            fingerprint: fingerprint(&u, &lambda),
            u,
            lambda,
        };
        basis.validate(&sym)?;
        Ok(basis)
    }

    /// Diagonalize the shift operator selected by the graph.
    pub fn from_graph(graph: &Graph) -> Result<Self> {
        Self::new(&graph.shift_matrix())
    }

    fn validate(&self, z: &DMatrix<f64>) -> Result<()> {
        let ortho = linalg::orthogonality_residual(&self.u);
        if ortho > 1e-10 {
            return Err(Error::Numerical(format!(
                "eigenvector matrix is not orthonormal (residual {ortho:.3e})"
            )));
        }
        let scale = self.lambda.iter().fold(1.0f64, |m, &v| m.max(v.abs()));
        for k in 0..self.dimension() {
            let col = self.u.column(k);
            let r = (z * col - self.lambda[k] * col).norm();
            if r > 1e-8 * scale.max(1.0) {
                return Err(Error::Numerical(format!(
                    "eigenpair {k} residual {r:.3e} exceeds tolerance"
                )));
            }
        }
        Ok(())
    }

    /// Orthonormal eigenvector matrix `U` (columns are eigenvectors).
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.lambda
    }

    pub fn dimension(&self) -> usize {
        self.u.nrows()
    }

    /// Stable content hash of the basis, used for provenance tagging.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

/// FNV-1a over the raw eigenvector and eigenvalue bits.
fn fingerprint(u: &DMatrix<f64>, lambda: &DVector<f64>) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    let mut eat = |v: f64| {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    u.iter().for_each(|&v| eat(v));
    lambda.iter().for_each(|&v| eat(v));
    h
}

/// Graph Fourier transform `U^T x` (the eigenbasis is real orthogonal, so
/// the inverse-transpose convention reduces to a transpose).
pub fn gft(x: &GraphSignal, basis: &EigenBasis) -> Result<GraphSignal> {
    if x.len() != basis.dimension() {
        return Err(Error::DimensionMismatch {
            expected: basis.dimension(),
            actual: x.len(),
        });
    }
    Ok(linalg::real_tr_mul_cvec(basis.vectors(), x))
}

/// Inverse graph Fourier transform `U x_hat`.
pub fn igft(x_hat: &GraphSignal, basis: &EigenBasis) -> Result<GraphSignal> {
    if x_hat.len() != basis.dimension() {
        return Err(Error::DimensionMismatch {
            expected: basis.dimension(),
            actual: x_hat.len(),
        });
    }
    Ok(linalg::real_mul_cvec(basis.vectors(), x_hat))
}
