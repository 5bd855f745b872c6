// SPDX-License-Identifier: Apache-2.0

//! Homogeneous Hermitian holomorphic vector bundles over the polydisc, as
//! executable objects.
//!
//! The crate is organised around five building blocks:
//!
//! * [`mobius`]: the group `SU(1,1)^n` acting on the polydisc, with a
//!   winding counter so fractional powers of derivatives stay continuous.
//! * [`kernels`]: matrix-valued sesqui-holomorphic kernels (rank one, rank
//!   two, the two rank-three families and combinators), Gram tests,
//!   normalization and permutation twists.
//! * [`representations`]: representations of the solvable algebra `b^n`,
//!   the joint-eigenvalue lattice and the indecomposability criterion.
//! * [`cocycles`]: multipliers `J(g, z)` in closed form or built from a
//!   representation, with identity and quasi-invariance checks.
//! * [`curvature`]: the curvature tensor by finite differences on the
//!   holomorphic slots, the transformation rule, and curvature invariants.
//!
//! [`spec`] holds the JSON documents and [`cli`] the command-line front end.

pub mod cli;
pub mod cocycles;
pub mod curvature;
pub mod kernels;
pub mod linalg;
pub mod mobius;
pub mod representations;
pub mod sampling;
pub mod spec;

pub use nalgebra::Complex;

/// Double-precision complex scalar used throughout.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type Mat = nalgebra::DMatrix<C64>;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub use cocycles::{Cocycle, CocycleSource};
pub use kernels::{DiscFactor, Family, MatrixKernel};
pub use mobius::{MobiusElement, MobiusTuple};
pub use representations::LieRep;
