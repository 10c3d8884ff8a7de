//! Quantitative density of group-orbit unions under the Hausdorff semimetric.
//!
//! The crate covers circle rotations and dilations, three-interval exchange
//! transformations, continued fractions, `SL(n, Z)` and abelian toral
//! automorphism actions, and the arithmetic/Fourier toolkit (Ramanujan-type
//! sums, bump functions, Abel summation) used to bound them.

pub mod cfrac;
pub mod circle_dyn;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod iet;
pub mod torus_group;

pub use error::{Error, Result};
