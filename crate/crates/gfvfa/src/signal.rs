//! Graph signals: complex-valued vectors indexed by vertex.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// A graph signal assigns one complex sample to every vertex.
pub type GraphSignal = DVector<Complex64>;

/// Lift a real-valued signal to the complex signal type.
pub fn from_real(values: &[f64]) -> GraphSignal {
    DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)))
}

/// Signal energy `sum |x(n)|^2`.
pub fn energy(x: &GraphSignal) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Elementwise magnitudes `|x(n)|`.
pub fn magnitudes(x: &GraphSignal) -> DVector<f64> {
    DVector::from_iterator(x.len(), x.iter().map(|v| v.norm()))
}

/// Seeded standard complex Gaussian signal (unit variance per entry),
/// used throughout the test and experiment harnesses.
pub fn random_complex(n: usize, seed: u64) -> GraphSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_iterator(
        n,
        (0..n).map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) / 2f64.sqrt()
        }),
    )
}

/// Seeded standard real Gaussian signal, lifted to complex.
pub fn random_real(n: usize, seed: u64) -> GraphSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_iterator(
        n,
        (0..n).map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, 0.0)
        }),
    )
}
