//! Lifespan measurements.
//!
//! [`run_lifespan`] emulates the whole space by doubling the periodic box
//! until the blow-up time settles, [`sweep_epsilon`] repeats that over a list
//! of amplitudes and [`fit_scaling`] compares the result with the lifespan
//! law of the regime. [`m_functional_check`] evaluates the functional used for
//! the lower bound.

mod lifespan;
mod mfunc;
mod regime;
mod sweep;

pub use lifespan::{run_lifespan, DomainEntry, DomainPolicy, LifespanResult, LifespanStatus};
pub use mfunc::{decay_integral, m_functional_check, MTrace};
pub use regime::{classify_regime, Regime, RegimeInfo, CRITICAL_TOLERANCE};
pub use sweep::{fit_scaling, sweep_epsilon, thread_cap, FitReport, SweepRow, SweepTable, MIN_FIT_ROWS, THREADS_ENV};
