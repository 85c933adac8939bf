use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use super::fd::PolyharmonicStencil;
use crate::error::{invalid, Error, Result};

/// Largest tolerated relative disagreement between the `h` and `h/2`
/// derivative estimates.
pub const RICHARDSON_TOLERANCE: f64 = 0.01;
/// Minimum number of sampling cells across the transition layer.
pub const MIN_LAYER_CELLS: f64 = 64.0;
/// Points where both `ψ_R*` and the numerator fall below this are skipped.
pub const NEGLIGIBLE: f64 = 1e-14;

/// Sampling of the ray `x = (r, 0, 0)`, `0 ≤ r ≤ R^{1/2m}`, `0 ≤ t ≤ R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaGrid {
    pub radial: usize,
    pub temporal: usize,
}

impl LemmaGrid {
    /// At least 128 cells across the layer in both directions.
    pub fn for_order(m: u32) -> Self {
        LemmaGrid {
            radial: (128.0 / layer_fraction(m)).ceil() as usize,
            temporal: 256,
        }
    }
}

/// Width of `{1/2 < |y|^{2m} < 1}` along a ray in scaled units.
fn layer_fraction(m: u32) -> f64 {
    1.0 - 0.5f64.powf(0.5 / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub r: f64,
    pub n: usize,
    pub m: u32,
    pub p: f64,
    pub l: u32,
    /// `sup R (|∂_t ψ_R| + |Δ^m ψ_R|) / (ψ_R*)^{1/p}`.
    pub c_emp: f64,
    /// `(|x|, t)` of the maximiser.
    pub location: (f64, f64),
    pub s_at_max: f64,
    pub points_used: usize,
    /// Max `|Δ^m_h ψ - Δ^m_{h/2} ψ|` over the max `|Δ^m_{h/2} ψ|`.
    pub richardson_defect: f64,
    pub step: f64,
}

/// Empirical constant in `|∂_t ψ_R| + |Δ^m ψ_R| ≤ C R^{-1} (ψ_R*)^{1/p}`.
pub fn lemma_ratio(spec: &CutoffSpec, n: usize, grid: LemmaGrid) -> Result<LemmaReport> {
    if !(1..=3).contains(&n) {
        return Err(invalid("n", "dimension must be 1, 2 or 3"));
    }
    let radial_cells = layer_fraction(spec.m) * grid.radial as f64;
    let temporal_cells = 0.5 * grid.temporal as f64;
    if radial_cells < MIN_LAYER_CELLS || temporal_cells < MIN_LAYER_CELLS {
        return Err(Error::Unresolved(format!(
            "transition layer spans {radial_cells:.0} radial and {temporal_cells:.0} temporal cells, need {MIN_LAYER_CELLS}"
        )));
    }

    let stencil = PolyharmonicStencil::new(n, spec.m);
    let step = spec.support_radius() / grid.radial as f64;

    let mut best = (0.0f64, (0.0, 0.0), 0.0);
    let mut used = 0usize;
    let mut max_diff = 0.0f64;
    let mut max_fine = 0.0f64;
    let mut x = [0.0; 3];
    for j in 0..=grid.temporal {
        let t = spec.r * j as f64 / grid.temporal as f64;
        let psi = |y: &[f64]| spec.psi(y, t);
        for i in 0..=grid.radial {
            x[0] = step * i as f64;
            let s = spec.s(&x[..n], t);
            if !(0.5..1.0).contains(&s) {
                continue;
            }
            let star = spec.psi_star(&x[..n], t);
            let coarse = stencil.apply(psi, &x[..n], step);
            let fine = stencil.apply(psi, &x[..n], 0.5 * step);
            max_diff = max_diff.max((coarse - fine).abs());
            max_fine = max_fine.max(fine.abs());
            let num = spec.dpsi_dt(&x[..n], t).abs() + fine.abs();
            if num < NEGLIGIBLE && star < NEGLIGIBLE {
                continue;
            }
            if star == 0.0 {
                continue;
            }
            used += 1;
            let ratio = spec.r * num / star.powf(1.0 / spec.p);
            if ratio > best.0 {
                best = (ratio, (x[0], t), s);
            }
        }
    }
    let defect = if max_fine > 0.0 { max_diff / max_fine } else { 0.0 };
    if defect > RICHARDSON_TOLERANCE {
        return Err(Error::Unresolved(format!(
            "Richardson check failed: h and h/2 derivatives differ by {:.2}%",
            100.0 * defect
        )));
    }
    Ok(LemmaReport {
        r: spec.r,
        n,
        m: spec.m,
        p: spec.p,
        l: spec.l,
        c_emp: best.0,
        location: best.1,
        s_at_max: best.2,
        points_used: used,
        richardson_defect: defect,
        step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_and_scale_free() {
        let mut values = Vec::new();
        for r in [16.0, 32.0, 64.0] {
            let spec = CutoffSpec::new(r, 1, 2.0).unwrap();
            let rep = lemma_ratio(&spec, 1, LemmaGrid::for_order(1)).unwrap();
            assert!(rep.c_emp.is_finite() && rep.c_emp > 0.0);
            assert!(rep.s_at_max > 0.5 && rep.s_at_max < 1.0);
            values.push(rep.c_emp);
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 < 0.05, "{values:?}");
    }

    #[test]
    fn coarse_sampling_is_rejected() {
        let spec = CutoffSpec::new(16.0, 1, 2.0).unwrap();
        let err = lemma_ratio(
            &spec,
            1,
            LemmaGrid {
                radial: 64,
                temporal: 256,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unresolved(_)));
    }

    #[test]
    fn two_dimensional_ray() {
        let spec = CutoffSpec::new(16.0, 1, 2.0).unwrap();
        let rep = lemma_ratio(&spec, 2, LemmaGrid::for_order(1)).unwrap();
        assert!(rep.c_emp.is_finite() && rep.c_emp > 0.0);
    }
}
