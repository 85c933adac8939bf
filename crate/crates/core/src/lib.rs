//! Pseudospectral laboratory for the higher-order semilinear heat equation
//!
//! ```text
//! u_t + (-Δ)^m u = |u|^p,   x ∈ ℝⁿ (periodic box),   u(·,0) = ε u₀
//! ```
//!
//! The crate measures blow-up lifespans `T_ε`, fits them against the
//! two-regime lifespan law (power law below the Fujita exponent
//! `1 + 2m/n`, exponential law at it) and checks the analytic machinery behind
//! that law numerically: polyharmonic semigroup decay rates, the cutoff pair
//! `ψ_R`, `ψ_R*`, the weak identity and the logarithmic averaging inequality.
//!
//! Module map:
//!
//! * [`spectral`]: grids, fields, FFTs, norms, field file formats.
//! * [`semigroup`]: `e^{-t(-Δ)^m}`, kernels, decay-exponent fits.
//! * [`integrator`]: ETD1/ETDRK4 time stepping, blow-up detection, Duhamel
//!   residual.
//! * [`harness`]: regime classification, lifespan runs with domain
//!   convergence, ε-sweeps, scaling fits, the `M(t)` functional.
//! * [`testfn`]: cutoff functions, the derivative bound, weak identity and
//!   `X`/`Y`/`W` checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod error;
pub mod harness;
pub mod integrator;
pub mod semigroup;
pub mod spectral;
pub mod stats;
pub mod testfn;

pub use error::{Error, Result};
