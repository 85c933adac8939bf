use crate::integrator::Trajectory;
use crate::spectral::RealField;

/// A time level of the space-time quadrature.
pub(crate) struct Node<'a> {
    pub t: f64,
    pub weight: f64,
    pub field: &'a RealField,
}

/// Uniform snapshots with `t ≤ t_stop` and their trapezoid weights.
pub(crate) fn time_nodes(traj: &Trajectory, t_stop: f64) -> Vec<Node<'_>> {
    let snaps: Vec<_> = traj
        .uniform_snapshots()
        .into_iter()
        .filter(|s| s.t <= t_stop * (1.0 + 1e-12))
        .collect();
    let k = snaps.len();
    snaps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let left = if i > 0 { s.t - snaps[i - 1].t } else { 0.0 };
            let right = if i + 1 < k { snaps[i + 1].t - s.t } else { 0.0 };
            Node {
                t: s.t,
                weight: 0.5 * (left + right),
                field: &s.field,
            }
        })
        .collect()
}
