//! Treating an arbitrary signal as a graph chirp (experimental).
//!
//! Any nonzero real signal can be declared a graph chirp with rate `a` and
//! initial frequency `k`: normalize it, embed it as column `k` of an
//! orthonormal matrix, call that matrix the inverse order-`a` transform, and
//! raise it to the power `1/a` to recover a candidate eigenvector matrix for
//! a shift operator. Pairing that matrix with any diagonal eigenvalue
//! assignment yields a graph on which the signal is exactly a chirp.
//!
//! The `1/a`-th matrix power inherits the usual branch ambiguity for
//! non-integer exponents; this implementation applies the same principal
//! branch as everywhere else and should be treated as experimental.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::unitary::UnitarySpectrum;
use crate::error::{Error, Result};
use crate::linalg;

/// Result of [`graph_from_signal`]: the candidate eigenvector matrix plus
/// the real orthogonal completion it was derived from.
#[derive(Debug, Clone)]
pub struct SignalBasis {
    /// Candidate eigenvector matrix `U = M^{1/a}` (complex unitary).
    pub u: DMatrix<Complex64>,
    /// The orthonormal completion `M` with the normalized signal embedded
    /// as column `k`; this is the inverse order-`a` transform by fiat.
    pub inverse_transform: DMatrix<f64>,
}

/// Build a candidate eigenvector matrix that makes `x` a graph chirp with
/// rate `order` and 1-based initial frequency `k`.
///
/// The orthonormal completion is deterministic: seeded Gaussian vectors are
/// orthogonalized (twice, for stability) against the normalized signal and
/// against each other, column by column.
pub fn graph_from_signal(x: &DVector<f64>, order: f64, k: usize, seed: u64) -> Result<SignalBasis> {
    let n = x.len();
    if order == 0.0 {
        return Err(Error::ZeroOrder);
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let norm = x.norm();
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::InvalidArgument(
            "signal must be nonzero and finite".into(),
        ));
    }

    let normalized = x / norm;
    let mut m = DMatrix::<f64>::zeros(n, n);
    m.set_column(k - 1, &normalized);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut filled: Vec<usize> = vec![k - 1];
    for col in 0..n {
        if col == k - 1 {
            continue;
        }
        // Redraw until the candidate survives orthogonalization; with
        // Gaussian draws a failure is a measure-zero fluke, but the loop
        // keeps the construction total.
        loop {
            let mut v = DVector::<f64>::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            for _ in 0..2 {
                for &j in &filled {
                    let proj = m.column(j).dot(&v);
                    v -= proj * m.column(j).into_owned();
                }
            }
            let vn = v.norm();
            if vn > 1e-8 {
                m.set_column(col, &(v / vn));
                filled.push(col);
                break;
            }
        }
    }

    // Integer exponent 1/1: the fractional power is the matrix itself, so
    // keep it exact instead of round-tripping through the factorization.
    let u = if order == 1.0 {
        linalg::to_complex(&m)
    } else {
        UnitarySpectrum::from_real_orthogonal(&m)?.power(1.0 / order)
    };
    let residual = linalg::unitarity_residual(&u);
    if residual > 1e-8 {
        return Err(Error::Numerical(format!(
            "candidate eigenvector matrix is not unitary (residual {residual:.3e})"
        )));
    }
    Ok(SignalBasis {
        u,
        inverse_transform: m,
    })
}
