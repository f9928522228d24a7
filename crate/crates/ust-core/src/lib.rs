//! Exact and sampled properties of uniform (and weight-selected) random
//! spanning trees on finite weighted multigraphs.
//!
//! The crate is organized around a few tightly coupled pieces:
//!
//! * [`graph`] — weighted multigraphs with deletion, contraction, standard
//!   families and spanning-structure predicates;
//! * [`harmonic`] — the discrete Laplacian, potential solvers for battery and
//!   unit-current problems, effective resistance, and closed-form Fourier
//!   solutions on the torus;
//! * [`transfer`] — transfer-impedance matrices whose determinants give exact
//!   edge-inclusion probabilities for uniform spanning trees, plus a weighted
//!   deletion/contraction fallback;
//! * [`sampler`] — random-walk (Aldous–Broder) tree sampling with
//!   bit-reproducible seeding;
//! * [`oracle`] — brute-force enumeration and matrix-tree ground truth;
//! * [`limits`] — desk-scale limit experiments: complete-graph degree laws,
//!   Galton–Watson trees, tree moments, spanning-tree entropy and the
//!   tree/domino correspondence.
//!
//! Throughout, the default scalar is an arbitrary-precision rational so that
//! small-graph answers are exact; `f64` variants back the large-graph and
//! Monte Carlo paths.

pub mod graph;
pub mod harmonic;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod sampler;
pub mod stats;
pub mod transfer;

mod error;

pub use error::{Error, Result};

/// Exact scalar used by all rational computations.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from an integer numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(value: i64) -> Rat {
    Rat::from_integer(value.into())
}
