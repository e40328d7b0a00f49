//! Exact computations on the Artin–Schreier–Mumford curve
//! `(X^q + X)(Y^q + Y) = c` over the finite-field tower
//! `F_p ⊂ F_q ⊂ F_{q^2} ⊂ F_{q^4}`.
//!
//! The crate is organized bottom-up:
//!
//! * [`ff`]: the field tower, traces, subfield tests, `q`-th roots.
//! * [`symbolic`]: sparse multivariate polynomials, truncated power series,
//!   Hensel lifting and order sequences by pivoting.
//! * [`curve`]: the plane curve, its points, singularities and branches.
//! * [`classic`]: osculating conics and Frobenius checks.
//! * [`adjoint`]: the degree-`q` adjoint linear system.
//! * [`model`]: the quadratic morphism into `PG(3)` and induced matrices.
//! * [`aut`]: the automorphism group, its structure and orbits.
//! * [`report`]: the batch verification driver behind the CLI.

pub mod adjoint;
pub mod aut;
pub mod classic;
pub mod curve;
pub mod error;
pub mod ff;
pub mod linalg;
pub mod model;
pub mod report;
pub mod symbolic;

pub use error::{Error, Result};
pub use ff::{FieldElement, QuadExtDescriptor, Subfield, TowerField};
