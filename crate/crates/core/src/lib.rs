//! Exact computational machinery for cubic surface pairs and the Eckardt
//! cubic threefolds they generate.
//!
//! The crate is organized bottom-up:
//!
//! - [`frac`], [`poly`], [`binform`], [`matrix`]: exact arithmetic over the
//!   rationals (sparse multivariate polynomials, binary forms, resultants,
//!   fraction-free linear algebra).
//! - [`jacobian`]: graded Jacobian rings of hypersurfaces, smoothness
//!   certification, Macaulay pairings and involution eigenspaces.
//! - [`geometry`]: cubic surface pairs, Eckardt cubics, invariant lines and
//!   the numeric search for the 27 lines on a cubic surface.
//! - [`fibrations`]: projections from points and lines, discriminant
//!   matrices and degeneracy loci.
//! - [`covers`]: genus bookkeeping for the towers of double covers living
//!   over a line projection, branch sextics and j-invariant matching.
//! - [`reconstruct`]: rebuilding surfaces and Eckardt cubics from quartics
//!   with a marked bitangent, with round-trip verification.

pub mod acceptance;
pub mod binform;
pub mod covers;
pub mod error;
pub mod fibrations;
pub mod fixtures;
pub mod frac;
pub mod geometry;
pub mod jacobian;
pub mod lines;
pub mod matrix;
mod modrank;
pub mod numeric;
pub mod poly;
pub mod reconstruct;
pub mod testgen;
mod univar;

pub use binform::BinForm;
pub use error::{Error, Result};
pub use frac::Frac;
pub use matrix::{FracMat, LinearChange};
pub use poly::{graded_basis, Expo, Poly};
