use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{GridSpec, RealField};

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Exponential Euler.
    Etd1,
    /// Cox–Matthews fourth-order exponential Runge–Kutta.
    Etdrk4,
}

/// Source term of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Nonlinearity {
    /// `|u|^p`.
    Power,
    /// Source switched off; the flow is the bare semigroup.
    Off,
}

/// Named initial profile `u₀` (before scaling by ε).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialProfile {
    /// `mass · (2π w²)^{-n/2} exp(-|x|²/2w²)`.
    Gaussian {
        mass: f64,
        width: f64,
    },
    Constant {
        value: f64,
    },
    Zero,
}

impl Default for InitialProfile {
    fn default() -> Self {
        InitialProfile::Gaussian { mass: 1.0, width: 1.0 }
    }
}

impl InitialProfile {
    pub fn sample(&self, grid: GridSpec) -> Result<RealField> {
        match *self {
            InitialProfile::Gaussian { mass, width } => {
                if !(width > 0.0) {
                    return Err(invalid("u0_width", "Gaussian width must be positive"));
                }
                let n = grid.dim() as f64;
                let norm = mass * (2.0 * PI * width * width).powf(-0.5 * n);
                RealField::from_fn(grid, |x| {
                    let r2: f64 = x.iter().map(|c| c * c).sum();
                    norm * (-r2 / (2.0 * width * width)).exp()
                })
            }
            InitialProfile::Constant { value } => RealField::new(grid, vec![value; grid.len()]),
            InitialProfile::Zero => Ok(RealField::zeros(grid)),
        }
    }

    /// Length scale of the profile, if it has one.
    pub fn width(&self) -> Option<f64> {
        match *self {
            InitialProfile::Gaussian { width, .. } => Some(width),
            _ => None,
        }
    }

    /// Whether the profile is invariant under translations of the box.
    pub fn is_translation_invariant(&self) -> bool {
        !matches!(self, InitialProfile::Gaussian { .. })
    }
}

/// When to keep full copies of the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotPolicy {
    /// Uniform snapshots at `k · t_end / uniform_levels`; steps are clipped to
    /// land on these times exactly.
    pub uniform_levels: usize,
    /// Extra snapshot each time `‖u‖_∞` grows by this factor (0 disables).
    pub growth_factor: f64,
}

impl Default for SnapshotPolicy {
    fn default() -> Self {
        SnapshotPolicy {
            uniform_levels: 128,
            growth_factor: 2.0,
        }
    }
}

/// One problem instance plus integrator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub m: u32,
    pub p: f64,
    pub grid: GridSpec,
    pub epsilon: f64,
    pub u0: InitialProfile,
    pub t_end: f64,
    pub dt0: f64,
    pub dt_min: f64,
    /// Upper bound on the step; defaults to the uniform snapshot spacing.
    pub dt_max: Option<f64>,
    /// Blow-up threshold on `‖u‖_∞`.
    pub u_max: f64,
    /// Largest accepted per-step ratio `‖u⁺‖_∞ / ‖u‖_∞`.
    pub growth_cap: f64,
    /// Steps also satisfy `h · ‖u‖_∞^{p-1} <= rate_cap`.
    pub rate_cap: f64,
    pub scheme: Scheme,
    pub nonlinearity: Nonlinearity,
    /// Zero the upper third of the source spectrum (integer `p` only).
    pub dealias: bool,
    pub snapshots: SnapshotPolicy,
}

impl SimParams {
    pub const DEFAULT_U_MAX: f64 = 1e8;
    pub const DEFAULT_GROWTH_CAP: f64 = 1.25;
    pub const DEFAULT_DT_MIN: f64 = 1e-12;
    pub const DEFAULT_RATE_CAP: f64 = 0.05;

    /// Parameters with the documented integrator defaults.
    pub fn new(m: u32, p: f64, grid: GridSpec, epsilon: f64, u0: InitialProfile, t_end: f64) -> Self {
        SimParams {
            m,
            p,
            grid,
            epsilon,
            u0,
            t_end,
            dt0: 1e-2,
            dt_min: Self::DEFAULT_DT_MIN,
            dt_max: None,
            u_max: Self::DEFAULT_U_MAX,
            growth_cap: Self::DEFAULT_GROWTH_CAP,
            rate_cap: Self::DEFAULT_RATE_CAP,
            scheme: Scheme::Etdrk4,
            nonlinearity: Nonlinearity::Power,
            dealias: false,
            snapshots: SnapshotPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid("m", "operator order must be >= 1"));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(invalid("p", "p must exceed 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid("epsilon", "epsilon must be positive"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", "t_end must be positive"));
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt0) {
            return Err(invalid("dt_min", "need 0 < dt_min < dt0"));
        }
        if let Some(dt_max) = self.dt_max {
            if !(dt_max >= self.dt0) {
                return Err(invalid("dt_max", "need dt_max >= dt0"));
            }
        }
        if !(self.u_max >= 1e6) {
            return Err(invalid("U_max", "blow-up threshold must be >= 1e6"));
        }
        if !(self.growth_cap > 1.0 && self.growth_cap <= 2.0) {
            return Err(invalid("growth_cap", "growth cap must lie in (1, 2]"));
        }
        if !(self.rate_cap > 0.0) {
            return Err(invalid("rate_cap", "rate cap must be positive"));
        }
        if self.dealias && self.p.fract() != 0.0 {
            return Err(invalid("dealias", "dealiasing requires an integer p"));
        }
        if self.snapshots.uniform_levels < 1 {
            return Err(invalid("snapshots", "need at least one uniform level"));
        }
        if self.snapshots.growth_factor != 0.0 && !(self.snapshots.growth_factor > 1.0) {
            return Err(invalid("snapshots", "growth factor must exceed 1 (or be 0)"));
        }
        Ok(())
    }

    /// Spacing of uniform snapshots.
    pub fn snapshot_interval(&self) -> f64 {
        self.t_end / self.snapshots.uniform_levels as f64
    }

    /// `ε u₀` sampled on the grid.
    pub fn initial_field(&self) -> Result<RealField> {
        Ok(self.u0.sample(self.grid)?.scaled(self.epsilon))
    }
}
