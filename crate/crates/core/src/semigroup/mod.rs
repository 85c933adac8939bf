//! The polyharmonic heat semigroup `e^{-t(-Δ)^m}` on the periodic box.
//!
//! On the lattice the semigroup is diagonal in Fourier space, so it is
//! realized exactly: multiply each coefficient by `exp(-t|ξ_k|^{2m})`.

mod decay;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{FourierSymbol, GridSpec, RealField, SpectralPlan};

pub use decay::{decay_exponent_fit, default_probes, gaussian_probe, DecayFitReport};

/// Spectral tail below which a propagated field counts as resolved.
pub const RESOLUTION_THRESHOLD: f64 = 1e-12;

/// `(-Δ)^m` on a grid, together with a cached FFT plan.
#[derive(Debug, Clone)]
pub struct PropagatorSpec {
    order: u32,
    symbol: FourierSymbol,
    plan: SpectralPlan,
}

impl PropagatorSpec {
    pub fn new(order: u32, grid: GridSpec) -> Result<Self> {
        if order < 1 {
            return Err(invalid("m", "operator order must be an integer >= 1"));
        }
        Ok(PropagatorSpec {
            order,
            symbol: FourierSymbol::polyharmonic(grid, order),
            plan: SpectralPlan::new(grid),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn grid(&self) -> &GridSpec {
        self.symbol.grid()
    }

    pub fn symbol(&self) -> &FourierSymbol {
        &self.symbol
    }

    pub fn plan(&self) -> &SpectralPlan {
        &self.plan
    }

    /// `exp(-t·σ_max)`: the damping applied to the outermost resolved mode.
    pub fn tail_damping(&self, t: f64) -> f64 {
        (-t * self.symbol.max()).exp()
    }

    pub fn is_resolved_at(&self, t: f64) -> bool {
        self.tail_damping(t) < RESOLUTION_THRESHOLD
    }

    /// `e^{-t(-Δ)^m} u`.
    pub fn propagate(&self, u: &RealField, t: f64) -> Result<RealField> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(invalid("t", format!("time must be nonnegative, got {t}")));
        }
        if u.grid() != self.grid() {
            return Err(crate::Error::GridMismatch);
        }
        let mut buf: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plan.forward_in_place(&mut buf);
        for (c, s) in buf.iter_mut().zip(self.symbol.values()) {
            *c *= (-t * s).exp();
        }
        self.plan.inverse_in_place(&mut buf);
        RealField::new(*self.grid(), buf.into_iter().map(|c| c.re).collect())
    }

    /// Lattice fundamental solution: the semigroup applied to the unit-mass
    /// discrete delta at the origin.
    pub fn kernel_field(&self, t: f64) -> Result<KernelField> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid("t", format!("kernel time must be positive, got {t}")));
        }
        let under_resolved = !self.is_resolved_at(t);
        if under_resolved {
            log::warn!(
                "kernel at t={t} is under-resolved: tail damping {:e} >= {RESOLUTION_THRESHOLD:e}",
                self.tail_damping(t)
            );
        }
        let field = self.propagate(&RealField::delta(*self.grid()), t)?;
        Ok(KernelField {
            t,
            field,
            under_resolved,
        })
    }
}

/// Convenience constructor mirroring [`PropagatorSpec::new`].
pub fn make_propagator(order: u32, grid: GridSpec) -> Result<PropagatorSpec> {
    PropagatorSpec::new(order, grid)
}

/// Sampled kernel `K_t^{(m)}` with its resolution tag.
#[derive(Debug, Clone)]
pub struct KernelField {
    pub t: f64,
    pub field: RealField,
    /// Set when `exp(-t·σ_max) >= 1e-12`; the periodic kernel then differs
    /// visibly from the whole-space one.
    pub under_resolved: bool,
}

/// Summary of the negative lobes of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativePart {
    pub min_value: f64,
    pub min_location: f64,
    /// `∫ max(-K, 0)`.
    pub negative_mass: f64,
}

impl KernelField {
    pub fn negative_part(&self) -> NegativePart {
        let grid = self.field.grid();
        let (mut min_value, mut min_flat) = (f64::INFINITY, 0);
        let mut negative = 0.0;
        for (flat, &v) in self.field.values().iter().enumerate() {
            if v < min_value {
                min_value = v;
                min_flat = flat;
            }
            if v < 0.0 {
                negative -= v;
            }
        }
        let x = grid.position(min_flat);
        let radius = x[..grid.dim()].iter().map(|c| c * c).sum::<f64>().sqrt();
        NegativePart {
            min_value,
            min_location: radius,
            negative_mass: negative * grid.cell_volume(),
        }
    }
}
