use num_complex::Complex64;

use super::grid::GridSpec;
use super::transform::SpectralPlan;
use crate::error::{Error, Result};

/// Real scalar field sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    /// Wraps `values`, rejecting wrong lengths and non-finite entries.
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(RealField { grid, values })
    }

    pub(crate) fn new_unchecked(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        RealField { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        RealField {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f` at every lattice point. Unused trailing coordinates are 0.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = grid.dim();
        let values = (0..grid.len()).map(|flat| f(&grid.position(flat)[..dim])).collect();
        Self::new(grid, values)
    }

    /// Discrete delta of unit mass at the origin node.
    pub fn delta(grid: GridSpec) -> Self {
        let mut field = Self::zeros(grid);
        field.values[grid.origin_index()] = 1.0 / grid.cell_volume();
        field
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, factor: f64) -> Self {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Largest pointwise difference; fails if the grids differ.
    pub fn max_abs_diff(&self, other: &RealField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn forward(&self) -> SpectralCoeffs {
        let plan = SpectralPlan::new(self.grid);
        SpectralCoeffs::new_unchecked(self.grid, plan.forward(&self.values))
    }
}

/// Discrete Fourier coefficients, normalized so that the zero mode is the
/// spatial mean. Storage follows the FFT layout of [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(SpectralCoeffs { grid, coeffs })
    }

    pub(crate) fn new_unchecked(grid: GridSpec, coeffs: Vec<Complex64>) -> Self {
        SpectralCoeffs { grid, coeffs }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of the signed wavenumber vector `k` (one entry per axis).
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        let n = self.grid.points() as i64;
        let flat = k
            .iter()
            .take(self.grid.dim())
            .fold(0usize, |acc, &ki| acc * n as usize + ki.rem_euclid(n) as usize);
        self.coeffs[flat]
    }

    /// Largest violation of `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|flat| {
                let mirror = self.grid.mirror_index(flat);
                (self.coeffs[mirror] - self.coeffs[flat].conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Scales every coefficient by `map(ξ_k)`.
    ///
    /// `map` receives the frequency vector (one entry per axis) and must be
    /// finite at every grid frequency.
    pub fn apply_multiplier(&self, map: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = self.grid.dim();
        let mut out = self.coeffs.clone();
        for (flat, c) in out.iter_mut().enumerate() {
            let factor = map(&self.grid.frequency_vector(flat)[..dim]);
            if !factor.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "multiplier",
                    reason: format!("non-finite value at frequency index {flat}"),
                });
            }
            *c *= factor;
        }
        Ok(SpectralCoeffs {
            grid: self.grid,
            coeffs: out,
        })
    }

    /// Inverse transform. Requires Hermitian symmetry (to 1e-9 relative).
    pub fn inverse(&self) -> Result<RealField> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let defect = self.hermitian_defect();
        if defect > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                reason: format!("not Hermitian-symmetric (defect {defect:e})"),
            });
        }
        let plan = SpectralPlan::new(self.grid);
        RealField::new(self.grid, plan.inverse(&self.coeffs))
    }
}

/// Nonnegative real multiplier sampled at every grid frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    grid: GridSpec,
    values: Vec<f64>,
}

impl FourierSymbol {
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = grid.dim();
        let values: Vec<f64> = (0..grid.len())
            .map(|flat| f(&grid.frequency_vector(flat)[..dim]))
            .collect();
        if let Some(index) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "symbol",
                reason: format!("negative or non-finite value at index {index}"),
            });
        }
        Ok(FourierSymbol { grid, values })
    }

    /// `|ξ|^{2m}`, the symbol of `(-Δ)^m`.
    pub fn polyharmonic(grid: GridSpec, order: u32) -> Self {
        let values = (0..grid.len())
            .map(|flat| {
                let xi = grid.frequency_vector(flat);
                let r2: f64 = xi[..grid.dim()].iter().map(|x| x * x).sum();
                r2.powi(order as i32)
            })
            .collect();
        FourierSymbol { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}
