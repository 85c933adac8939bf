//! Cutoff functions of the test-function method and the inequalities built
//! on them.
//!
//! `ψ_R = φ(s_R)^l` and `ψ_R* = φ*(s_R)^l` with `s_R = (|x|^{2m}+t)/R`. The
//! bump `φ` is the `e^{-1/θ}` partition-of-unity bridge between `s = 1/2` and
//! `s = 1`. Spatial derivatives use 8th-order central differences; time
//! derivatives are analytic.

mod cutoff;
mod fd;
mod lemma;
mod quad;
mod weak;
mod xyw;

pub use cutoff::{bump_derivative, bump_profile, cutoff_eval, min_exponent, CutoffSpec};
pub use fd::{central_weights, fornberg_weights, PolyharmonicStencil, FD_ACCURACY};
pub use lemma::{lemma_ratio, LemmaGrid, LemmaReport, MIN_LAYER_CELLS, RICHARDSON_TOLERANCE};
pub use weak::{weak_identity_residual, WeakIdentityReport, MIN_TIME_LEVELS};
pub use xyw::{r_grid, xyw_check, XYWRecord, XywReport, LOG_LEMMA_SLACK, MIN_R_POINTS, R_GRID_RATIO};
