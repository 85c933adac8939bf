use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::etd::power;
use super::evolve::Trajectory;
use super::params::Nonlinearity;
use crate::error::{invalid, Error, Result};
use crate::semigroup::PropagatorSpec;
use crate::spectral::sup_norm;

/// Minimum number of stored snapshots in `[0, t_check]`.
pub const MIN_DUHAMEL_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuhamelReport {
    /// Snapshot time the identity was checked at.
    pub t: f64,
    pub nodes: usize,
    /// `‖u(t) - ε e^{-tA}u₀ - ∫₀ᵗ e^{-(t-s)A}|u(s)|^p ds‖_∞ / ‖u(t)‖_∞`.
    pub residual: f64,
}

/// Relative defect of the mild (Duhamel) formulation at `t_check`.
///
/// The linear part is propagated exactly; the source integral uses the
/// trapezoidal rule over every stored snapshot in `[0, t_check]`. The check is
/// made at the last snapshot not after `t_check`.
pub fn duhamel_residual(traj: &Trajectory, t_check: f64) -> Result<DuhamelReport> {
    let last = traj.snapshots.last().map_or(0.0, |s| s.t);
    if !(t_check >= 0.0 && t_check <= last * (1.0 + 1e-12)) {
        return Err(invalid(
            "t_check",
            format!("must lie in [0, {last}] (last stored time), got {t_check}"),
        ));
    }
    let mut nodes: Vec<_> = traj
        .snapshots
        .iter()
        .filter(|s| s.t <= t_check * (1.0 + 1e-12))
        .collect();
    nodes.sort_by(|a, b| a.t.total_cmp(&b.t));
    nodes.dedup_by(|a, b| a.t == b.t);
    if nodes.len() < MIN_DUHAMEL_NODES {
        return Err(Error::InsufficientData(format!(
            "{} snapshots in [0, {t_check}], need {MIN_DUHAMEL_NODES}",
            nodes.len()
        )));
    }

    let params = &traj.params;
    let prop = PropagatorSpec::new(params.m, params.grid)?;
    let plan = prop.plan();
    let sigma = prop.symbol().values();
    let t = nodes[nodes.len() - 1].t;

    let mut acc = plan.forward(traj.initial_field().values());
    for (c, s) in acc.iter_mut().zip(sigma) {
        *c *= (-t * s).exp();
    }
    if params.nonlinearity == Nonlinearity::Power {
        let mut buf = vec![Complex64::default(); acc.len()];
        for (i, node) in nodes.iter().enumerate() {
            let left = if i > 0 { node.t - nodes[i - 1].t } else { 0.0 };
            let right = if i + 1 < nodes.len() {
                nodes[i + 1].t - node.t
            } else {
                0.0
            };
            let weight = 0.5 * (left + right);
            if weight == 0.0 {
                continue;
            }
            for (b, &v) in buf.iter_mut().zip(node.field.values()) {
                *b = Complex64::new(power(v, params.p), 0.0);
            }
            plan.forward_in_place(&mut buf);
            let lag = t - node.t;
            for ((a, b), s) in acc.iter_mut().zip(&buf).zip(sigma) {
                *a += b * (weight * (-lag * s).exp());
            }
        }
    }
    let predicted = plan.inverse(&acc);
    let actual = nodes[nodes.len() - 1].field.values();
    let defect = actual
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = sup_norm(actual);
    let residual = if defect == 0.0 { 0.0 } else { defect / scale };
    Ok(DuhamelReport {
        t,
        nodes: nodes.len(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::evolve::evolve;
    use crate::integrator::params::{InitialProfile, SimParams};
    use crate::spectral::GridSpec;

    #[test]
    fn exact_without_source() {
        let g = GridSpec::new(1, 256, 40.0).unwrap();
        let mut params = SimParams::new(2, 2.0, g, 0.5, InitialProfile::default(), 4.0);
        params.nonlinearity = Nonlinearity::Off;
        let traj = evolve(&params).unwrap();
        let rep = duhamel_residual(&traj, 4.0).unwrap();
        assert_eq!(rep.nodes, 129);
        assert!(rep.residual < 1e-10, "{}", rep.residual);
    }

    #[test]
    fn scalar_ode_identity() {
        // c(t) = ε + ∫ c² with c = ε/(1-εt); 64 uniform snapshots on [0, 5]
        let g = GridSpec::new(1, 16, 4.0).unwrap();
        let mut params = SimParams::new(1, 2.0, g, 0.1, InitialProfile::Constant { value: 1.0 }, 5.0);
        params.snapshots.uniform_levels = 64;
        params.snapshots.growth_factor = 0.0;
        let traj = evolve(&params).unwrap();
        let rep = duhamel_residual(&traj, 5.0).unwrap();
        assert_eq!(rep.nodes, 65);
        assert!(rep.residual < 1e-4, "{}", rep.residual);
    }

    #[test]
    fn too_few_snapshots() {
        let g = GridSpec::new(1, 16, 4.0).unwrap();
        let mut params = SimParams::new(1, 2.0, g, 0.1, InitialProfile::Constant { value: 1.0 }, 1.0);
        params.snapshots.uniform_levels = 8;
        params.snapshots.growth_factor = 0.0;
        let traj = evolve(&params).unwrap();
        assert!(matches!(duhamel_residual(&traj, 1.0), Err(Error::InsufficientData(_))));
        assert!(duhamel_residual(&traj, 2.0).is_err());
    }
}
