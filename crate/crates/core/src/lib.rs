//! Condition checking and constrained extension of finitely sampled vector fields.
//!
//! Given a finite set of domain points `X` with target values `v(x)`, this crate
//! decides whether `v` satisfies the averaged-Lipschitz condition
//! `‖v(x) − Σ tᵢ v(xᵢ)‖ ≤ ‖x − Σ tᵢ xᵢ‖` (over simplex weights `t`), the analogous
//! averaged-monotone condition, or the 1-semi-bounded-strain condition, and it
//! constructs 1-Lipschitz / monotone / strain-bounded extensions of a partial map
//! `u` given on a subset `A ⊆ X` while keeping every offset `u(x) − v(x)` inside a
//! prescribed convex body `K`.
//!
//! The pieces:
//!
//! - [`geometry`]: dense vector arithmetic, elementary projections, an exact
//!   min-norm-point hull projector, and rigid embedding of distance matrices.
//! - [`body`]: the offset body `K` (ball, half-space intersection, whole space)
//!   with membership and nearest-point projection.
//! - [`simplex`]: exact optimization of quadratics over the probability simplex,
//!   the computational core of the condition checkers.
//! - [`checker`]: the condition checkers with violation certificates.
//! - [`feasibility`]: Dykstra's best-approximation iteration over finite
//!   intersections of convex sets, with a numerical infeasibility probe.
//! - [`extension`]: greedy pointwise extension engines and their verifier.
//! - [`necessity`]: counterexample machinery — the δ-threshold, the aligned
//!   offset-isometry constructor, per-tuple necessity probes, and the unit-square
//!   demonstration with its exact constants.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("lipext-core requires either the `std` or the `libm` feature");

pub mod body;
pub mod checker;
pub mod error;
pub mod extension;
pub mod feasibility;
pub mod geometry;
pub mod necessity;
pub mod simplex;

mod linalg;
mod scalar;

pub use error::Error;
pub use geometry::{PointSet, RealVector, Tolerances};
