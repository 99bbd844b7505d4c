//! Small quantum cohomology of Fano manifolds.
//!
//! The crate builds cohomology rings of projective spaces, their products,
//! hypersurfaces and Grassmannians, computes Gamma classes and J-functions, and
//! checks the large-time asymptotics of J against the Gamma class together with
//! the matching statements on the mirror side (Laurent polynomials, conifold
//! points, oscillatory integrals) and the Gram/mutation algebra of exceptional
//! collections.
//!
//! Runnable tours of each capability live in `examples/`.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exceptional;
pub mod grassmann;
pub mod jfunction;
pub mod mirror;
pub mod oscillatory;
pub mod ring;
pub mod scalars;

pub use error::{Error, Result};
