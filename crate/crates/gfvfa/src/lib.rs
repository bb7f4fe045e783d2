//! Graph fractional vertex-frequency analysis.
//!
//! This crate implements a spectral toolbox for analyzing *graph chirp
//! signals*: it combines the graph Fourier transform (GFT) and its
//! fractional generalization (GFRFT) with joint vertex-frequency energy
//! distributions and a distribution-domain optimal filter.
//!
//! The pieces, bottom to top:
//!
//! * [`graph`] — undirected weighted graphs, shift operators, generators
//!   (cycles, k-NN, seeded sensor and community templates), edge-list I/O.
//! * [`spectral`] — eigendecomposition of the shift operator, the GFT,
//!   principal-branch fractional powers of unitary matrices, and the GFRFT
//!   `F^a` with its index-additivity structure.
//! * [`chirp`] — graph chirp signals `(F^a)^{-1} e_k`, rate shifting, and
//!   multi-component compositions.
//! * [`distribution`] — the fractional vertex-frequency energy distribution,
//!   kernel-generalized distributions (delta and Choi-Williams kernels),
//!   marginals, moments, and Shannon-entropy concentration measures.
//! * [`filtering`] — closed-form noise moments of the transformed
//!   distribution, the MSE-optimal transfer matrix, signal reconstruction
//!   from the vertex marginal, and the ideal rank-one Wiener baseline.
//!
//! # Quick start
//!
//! ```
//! use gfvfa::graph::cycle_graph;
//! use gfvfa::spectral::{EigenBasis, FractionalBasis};
//! use gfvfa::chirp::chirp;
//!
//! let graph = cycle_graph(16)?;
//! let basis = EigenBasis::from_graph(&graph)?;
//! let frac = FractionalBasis::new(&basis)?;
//!
//! // A graph chirp with rate 0.7 and initial frequency 3 transforms to a
//! // spectral impulse at index 3 when the order matches the rate.
//! let c = chirp(&frac, 3, 0.7)?;
//! let spectrum = frac.operator(0.7).apply(c.values())?;
//! assert!((spectrum[2].norm() - 1.0).abs() < 1e-9);
//! # Ok::<(), gfvfa::Error>(())
//! ```
//!
//! All randomized helpers take explicit seeds and are bit-reproducible;
//! every type is immutable after construction and safe to share across
//! threads.

pub mod chirp;
pub mod distribution;
pub mod error;
pub mod filtering;
pub mod graph;
pub mod io;
pub mod signal;
pub mod spectral;

mod linalg;

pub use error::{Error, Result};


// Run the guide's code listings as doc-tests so the book can never drift
// from the library (mdbook itself cannot test snippets against the crate).
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(
        graphs_and_spectra,
        "../../../book/src/graphs-and-spectra.md"
    );
    chapter!(
        fractional_transform,
        "../../../book/src/fractional-transform.md"
    );
    chapter!(graph_chirps, "../../../book/src/graph-chirps.md");
    chapter!(
        energy_distributions,
        "../../../book/src/energy-distributions.md"
    );
    chapter!(
        reduced_interference,
        "../../../book/src/reduced-interference.md"
    );
    chapter!(filtering_chapter, "../../../book/src/filtering.md");
    chapter!(readme, "../../../README.md");
}
