use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use super::fd::PolyharmonicStencil;
use super::quad::time_nodes;
use crate::error::{invalid, Error, Result};
use crate::integrator::{Nonlinearity, Trajectory};

/// Minimum number of time levels (intervals) for the space-time quadrature.
pub const MIN_TIME_LEVELS: usize = 32;

/// Both sides of
/// `ε∫u₀ψ_R(·,0) + ∫∫|u|^pψ_R = ∫∫u(-Δ)^mψ_R - ∫∫u∂_tψ_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakIdentityReport {
    pub r: f64,
    pub horizon: f64,
    pub levels: usize,
    pub data_term: f64,
    /// Zero when the trajectory was run with the source switched off.
    pub source_term: f64,
    pub diffusion_term: f64,
    pub time_term: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Finite-difference step for `Δ^m ψ_R`: 128 steps across the layer.
pub(crate) fn fd_step(spec: &CutoffSpec) -> f64 {
    let layer = 1.0 - 0.5f64.powf(0.5 / spec.m as f64);
    spec.support_radius() * layer / 128.0
}

/// Errors unless the support of `ψ_R` (plus the stencil reach) fits in the
/// box.
pub(crate) fn check_support(traj: &Trajectory, spec: &CutoffSpec, margin: f64) -> Result<()> {
    let half = 0.5 * traj.params.grid.length();
    let need = spec.support_radius() + margin;
    if need > half {
        return Err(invalid(
            "R",
            format!("support radius {need:.4} of ψ_R exceeds the half box {half}"),
        ));
    }
    Ok(())
}

/// Relative residual `|LHS - RHS| / (|LHS| + |RHS|)` of the weak identity.
///
/// The source term follows the trajectory: with the nonlinearity switched off
/// the flow is linear and the term is absent from both the flow and the
/// identity.
pub fn weak_identity_residual(traj: &Trajectory, spec: &CutoffSpec, horizon: f64) -> Result<WeakIdentityReport> {
    let params = &traj.params;
    if spec.m != params.m {
        return Err(invalid("m", "cutoff order differs from the trajectory"));
    }
    if !(horizon >= spec.r) {
        return Err(invalid(
            "T",
            format!("ψ_R does not vanish at T = {horizon}; need T >= R = {}", spec.r),
        ));
    }
    let grid = params.grid;
    let n = grid.dim();
    let stencil = PolyharmonicStencil::new(n, spec.m);
    let h = fd_step(spec);
    check_support(traj, spec, stencil.reach() as f64 * h)?;

    let nodes = time_nodes(traj, horizon);
    if nodes.len() < MIN_TIME_LEVELS + 1 {
        return Err(Error::InsufficientData(format!(
            "{} time levels in [0, {horizon}], need {MIN_TIME_LEVELS}",
            nodes.len().saturating_sub(1)
        )));
    }
    let last = nodes[nodes.len() - 1].t;
    if last < spec.r * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(format!(
            "trajectory stored up to t = {last}, ψ_R lives until t = {}",
            spec.r
        )));
    }

    let cv = grid.cell_volume();
    let sign = if spec.m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let with_source = params.nonlinearity == Nonlinearity::Power;
    let positions: Vec<[f64; 3]> = (0..grid.len()).map(|i| grid.position(i)).collect();

    let mut data = 0.0;
    let (mut source, mut diffusion, mut time) = (0.0, 0.0, 0.0);
    for (k, node) in nodes.iter().enumerate() {
        let t = node.t;
        if t >= spec.r {
            break;
        }
        let psi = |y: &[f64]| spec.psi(y, t);
        let (mut src, mut dif, mut tim) = (0.0, 0.0, 0.0);
        for (x, &u) in positions.iter().zip(node.field.values()) {
            let x = &x[..n];
            let s = spec.s(x, t);
            if s >= 1.0 {
                continue;
            }
            let weight = spec.psi(x, t);
            if k == 0 {
                data += u * weight * cv;
            }
            if with_source {
                src += u.abs().powf(params.p) * weight;
            }
            if s > 0.5 {
                dif += u * sign * stencil.apply(psi, x, h);
                tim += u * spec.dpsi_dt(x, t);
            }
        }
        source += node.weight * src * cv;
        diffusion += node.weight * dif * cv;
        time += node.weight * tim * cv;
    }
    let lhs = data + source;
    let rhs = diffusion - time;
    Ok(WeakIdentityReport {
        r: spec.r,
        horizon,
        levels: nodes.len() - 1,
        data_term: data,
        source_term: source,
        diffusion_term: diffusion,
        time_term: time,
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1e-300),
    })
}
