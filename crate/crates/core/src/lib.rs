//! Numerical laboratory for complex-like quaternionic functions `f = u + iota v`.
//!
//! The crate provides exact quaternion algebra, the `(t, r, alpha, beta)` chart,
//! a small algebra of complex-like functions, the Fueter-type operators acting
//! on them, tensor-product quadrature over regions of H disjoint from the real
//! axis, and residual suites that certify the operator and integral identities
//! of hyperholomorphic functions (those with `D_l f = -2 v / r`).

pub mod coords;
pub mod error;
pub mod field;
pub mod functions;
pub mod integrate;
pub mod operators;
pub mod quadrature;
pub mod quat;
pub mod report;
pub mod verify;

pub use coords::{from_spherical, to_spherical, SphericalCoords};
pub use error::{Error, Result};
pub use functions::{ComplexLikePair, GeneratorSpec, Stem};
pub use integrate::{QuadratureSpec, Region};
pub use operators::{OperatorValue, Side};
pub use quat::Quaternion;
pub use report::CheckReport;
pub use verify::{SampleWindow, Suite, Tolerances};
