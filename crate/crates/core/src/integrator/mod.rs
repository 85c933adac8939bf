//! Time integration of `u_t + (-Δ)^m u = |u|^p`.
//!
//! The production scheme is ETDRK4 (Cox–Matthews) with the stiff linear part
//! handled exactly in Fourier space. Steps adapt to the growth of `‖u‖_∞`;
//! the run stops when the sup norm crosses `U_max`, the step collapses below
//! `dt_min`, or `t_end` is reached.

mod blowup;
mod duhamel;
mod etd;
mod evolve;
mod params;
mod phi;

pub use blowup::{estimate_blowup_time, BlowupEstimate, MIN_GROWTH, MIN_R2};
pub use duhamel::{duhamel_residual, DuhamelReport, MIN_DUHAMEL_NODES};
pub use etd::{etd_step, EtdStepper, State, StepOutcome};
pub use evolve::{evolve, NormSample, Outcome, Snapshot, SnapshotKind, Trajectory};
pub use params::{InitialProfile, Nonlinearity, Scheme, SimParams, SnapshotPolicy};
pub use phi::phi_functions;
