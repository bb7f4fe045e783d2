//! Spectral transforms: shift-operator eigendecomposition, the graph
//! Fourier transform, and its fractional generalization.
//!
//! The pipeline is `Graph -> EigenBasis -> FractionalBasis -> FrftOperator`:
//! the shift operator is diagonalized once, the resulting orthogonal
//! transform matrix is factored once into rotation angles, and operators of
//! any fractional order are then cheap to materialize.

mod eigen;
mod frft;
mod synthesis;
mod unitary;

pub use eigen::{gft, igft, EigenBasis};
pub use frft::{
    dfrft_reference, dft_matrix, gfrft, gfrft_matrix, igfrft, FractionalBasis, FrftOperator,
};
pub use synthesis::{graph_from_signal, SignalBasis};
pub use unitary::UnitarySpectrum;
