//! Single and double layer potentials for constant-coefficient second
//! order elliptic operators on closed planar curves of class `C^{m,1}`,
//! together with the derivative-reduction identities that express their
//! gradients as further layer potentials, and empirical `ω₁`-Hölder
//! (generalized Schauder) diagnostics for the limiting exponent `α = 1`.
//!
//! Module map:
//!
//! - [`moduli`]: moduli of continuity, sampled Hölder seminorms.
//! - [`geometry`]: parametrized curves, boundary frames, densities,
//!   tangential derivatives, point classification.
//! - [`operators`]: coefficient aggregate, ellipticity, `a2 = T Tᵗ`,
//!   `P[a,D]` and the conormal operator.
//! - [`kernels`]: closed-form fundamental solutions, principal part
//!   splitting, homogeneous kernel checks, kernel-class norms.
//! - [`quadrature`]: periodic trapezoid, log-product, near-singular rules.
//! - [`potentials`]: layer potentials, reduced gradient formulas, traces.
//! - [`harness`]: experiment drivers behind the `miranda-layers` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod exec;
pub mod geometry;
pub mod harness;
pub mod kernels;
pub mod moduli;
pub mod operators;
pub mod potentials;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// A point or vector in the plane.
pub type Point2 = [f64; 2];

pub(crate) fn dot2(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn sub2(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn norm2(a: Point2) -> f64 {
    a[0].hypot(a[1])
}
