use serde::{Deserialize, Serialize};

use super::PropagatorSpec;
use crate::error::{invalid, Error, Result};
use crate::spectral::{lp_norm, Exponent, RealField};
use crate::stats::fit_line;

/// Empirical `L^p → L^q` smoothing rate of the semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFitReport {
    pub m: u32,
    pub n: usize,
    pub p: Exponent,
    pub q: Exponent,
    pub t_samples: Vec<f64>,
    /// `max over probes ‖e^{-t(-Δ)^m} f‖_q / ‖f‖_p` at each sample time.
    pub ratios: Vec<f64>,
    pub fitted_slope: f64,
    /// `-(n/2m)(1/p - 1/q)`.
    pub theoretical_slope: f64,
    /// RMS of the log-log fit.
    pub residual: f64,
    /// `exp(intercept)`: the observed constant in front of the power law.
    pub prefactor: f64,
}

impl DecayFitReport {
    pub fn relative_slope_error(&self) -> f64 {
        if self.theoretical_slope == 0.0 {
            self.fitted_slope.abs()
        } else {
            ((self.fitted_slope - self.theoretical_slope) / self.theoretical_slope).abs()
        }
    }
}

pub fn theoretical_slope(n: usize, m: u32, p: Exponent, q: Exponent) -> f64 {
    -(n as f64 / (2.0 * m as f64)) * (p.reciprocal() - q.reciprocal())
}

/// Unit-mass Gaussian `(2πw²)^{-n/2} exp(-|x|²/2w²)` on the grid.
pub fn gaussian_probe(grid: crate::spectral::GridSpec, width: f64) -> Result<RealField> {
    let n = grid.dim() as i32;
    let norm = (2.0 * std::f64::consts::PI * width * width).powf(-0.5 * n as f64);
    RealField::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        norm * (-r2 / (2.0 * width * width)).exp()
    })
}

/// Discrete delta plus Gaussians of widths `L/64`, `L/32`, `L/16`.
pub fn default_probes(grid: crate::spectral::GridSpec) -> Result<Vec<RealField>> {
    let mut probes = vec![RealField::delta(grid)];
    for div in [64.0, 32.0, 16.0] {
        probes.push(gaussian_probe(grid, grid.length() / div)?);
    }
    Ok(probes)
}

/// Fits the slope of `log r(t)` against `log t`.
pub fn decay_exponent_fit(
    prop: &PropagatorSpec,
    p: Exponent,
    q: Exponent,
    t_list: &[f64],
    probes: &[RealField],
) -> Result<DecayFitReport> {
    let p = p.validate()?;
    let q = q.validate()?;
    if p.reciprocal() < q.reciprocal() {
        return Err(invalid("p", format!("need p <= q, got p={p}, q={q}")));
    }
    if t_list.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(invalid("t_list", "times must be positive"));
    }
    if t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("t_list", "times must be strictly increasing"));
    }
    if t_list.len() < 2 || t_list[t_list.len() - 1] < 8.0 * t_list[0] {
        return Err(invalid("t_list", "times must span at least a factor of 8"));
    }
    if probes.is_empty() {
        return Err(invalid("probes", "at least one probe is required"));
    }

    let t_min = t_list[0];
    let mut norms_p = Vec::with_capacity(probes.len());
    for (i, probe) in probes.iter().enumerate() {
        if probe.grid() != prop.grid() {
            return Err(Error::GridMismatch);
        }
        let np = lp_norm(probe, p)?;
        if np == 0.0 {
            return Err(invalid("probes", format!("probe {i} is identically zero")));
        }
        ensure_resolved(prop, probe, t_min, i)?;
        norms_p.push(np);
    }

    let mut ratios = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mut best = 0.0f64;
        for (probe, np) in probes.iter().zip(&norms_p) {
            let out = prop.propagate(probe, t)?;
            best = best.max(lp_norm(&out, q)? / np);
        }
        ratios.push(best);
    }

    let xs: Vec<f64> = t_list.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let fit = fit_line(&xs, &ys)?;
    Ok(DecayFitReport {
        m: prop.order(),
        n: prop.grid().dim(),
        p,
        q,
        t_samples: t_list.to_vec(),
        ratios,
        fitted_slope: fit.slope,
        theoretical_slope: theoretical_slope(prop.grid().dim(), prop.order(), p, q),
        residual: fit.rms,
        prefactor: fit.intercept.exp(),
    })
}

/// Rejects probes whose spectrum is not damped below the resolution
/// threshold by the earliest sample time.
fn ensure_resolved(prop: &PropagatorSpec, probe: &RealField, t: f64, index: usize) -> Result<()> {
    let coeffs = probe.forward();
    let zero = coeffs.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let grid = prop.grid();
    let edge = 0.5 * grid.max_frequency();
    let mut tail = 0.0f64;
    for (flat, (c, s)) in coeffs.coeffs().iter().zip(prop.symbol().values()).enumerate() {
        let xi = grid.frequency_vector(flat);
        let outer = xi[..grid.dim()].iter().any(|v| v.abs() >= edge);
        if outer {
            tail = tail.max(c.norm() * (-t * s).exp());
        }
    }
    if tail > super::RESOLUTION_THRESHOLD * zero {
        return Err(Error::Unresolved(format!(
            "probe {index}: spectral tail {:e} at t={t} exceeds threshold; refine the grid",
            tail / zero
        )));
    }
    Ok(())
}
