use serde::{Deserialize, Serialize};

use super::evolve::{Outcome, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::stats::fit_line;

/// Blow-up time extrapolated from the type-I rate
/// `‖u(t)‖_∞ ≈ κ (T - t)^{-1/(p-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupEstimate {
    pub t_est: f64,
    pub fit_window: (f64, f64),
    pub fit_r2: f64,
    /// Fitted `κ`.
    pub rate_constant: f64,
    pub points: usize,
    /// Growth of `‖u‖_∞` from its minimum to the end of the run.
    pub growth: f64,
    /// Set when the run did not blow up, grew by less than 10², or the fit
    /// has `R² < 0.99`.
    pub low_confidence: bool,
}

/// Minimum overall growth of the sup norm for a trusted estimate.
pub const MIN_GROWTH: f64 = 1e2;
pub const MIN_R2: f64 = 0.99;

/// Fits `‖u‖_∞^{-(p-1)}` linearly in `t` over the last decade of growth and
/// returns the root of the fitted line.
pub fn estimate_blowup_time(traj: &Trajectory, p: f64) -> Result<BlowupEstimate> {
    if !(p > 1.0) {
        return Err(invalid("p", "p must exceed 1"));
    }
    let history = &traj.norm_history;
    let last = traj.last().linf;
    if !(last > 0.0) {
        return Err(Error::InsufficientData("sup norm is zero at the end of the run".into()));
    }
    let floor = history.iter().map(|s| s.linf).fold(f64::INFINITY, f64::min);
    let growth = last / floor;

    // tail of the run after the last sample below a tenth of the final value
    let start = history.iter().rposition(|s| s.linf < 0.1 * last).map_or(0, |i| i + 1);
    let window = &history[start..];
    if window.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} samples in the last decade of growth",
            window.len()
        )));
    }
    let ts: Vec<f64> = window.iter().map(|s| s.t).collect();
    let ys: Vec<f64> = window.iter().map(|s| s.linf.powf(1.0 - p)).collect();
    let fit = fit_line(&ts, &ys)?;
    if !(fit.slope < 0.0) {
        return Err(Error::InsufficientData(format!(
            "sup norm is not growing over the fit window (slope {:e})",
            fit.slope
        )));
    }
    let t_est = fit.root();
    let fit_window = (ts[0], ts[ts.len() - 1]);
    let rate_constant = (-fit.slope).powf(-1.0 / (p - 1.0));
    let low_confidence = matches!(traj.outcome, Outcome::Resolved { .. })
        || growth < MIN_GROWTH
        || fit.r2 < MIN_R2
        || t_est <= fit_window.1;
    Ok(BlowupEstimate {
        t_est,
        fit_window,
        fit_r2: fit.r2,
        rate_constant,
        points: window.len(),
        growth,
        low_confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::evolve::evolve;
    use crate::integrator::params::{InitialProfile, SimParams};
    use crate::spectral::GridSpec;

    fn ode_run(eps: f64, p: f64, t_end: f64) -> Trajectory {
        let g = GridSpec::new(1, 16, 8.0).unwrap();
        evolve(&SimParams::new(
            1,
            p,
            g,
            eps,
            InitialProfile::Constant { value: 1.0 },
            t_end,
        ))
        .unwrap()
    }

    #[test]
    fn quadratic_ode_time() {
        // T = (p-1)^{-1} ε^{1-p} = 10
        let est = estimate_blowup_time(&ode_run(0.1, 2.0, 20.0), 2.0).unwrap();
        assert!(((est.t_est - 10.0) / 10.0).abs() < 5e-3, "{}", est.t_est);
        assert!(!est.low_confidence);
        assert!(est.t_est > est.fit_window.1);
        // u = 1/(T - t): κ = 1
        assert!((est.rate_constant - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cubic_ode_time() {
        // T = (1/2)(0.5)^{-2} = 2
        let est = estimate_blowup_time(&ode_run(0.5, 3.0, 5.0), 3.0).unwrap();
        assert!(((est.t_est - 2.0) / 2.0).abs() < 1e-2, "{}", est.t_est);
        assert!((est.rate_constant - 0.5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn modest_growth_is_flagged() {
        // ε = 0.1, run to t = 3.4: c grows from 0.1 to 0.1/0.66 ≈ 0.15
        let traj = ode_run(0.1, 2.0, 3.4);
        assert!(!traj.outcome.is_blowup());
        let est = estimate_blowup_time(&traj, 2.0).unwrap();
        assert!(est.growth < 1.6);
        assert!(est.low_confidence);
    }

    #[test]
    fn decaying_run_is_an_error() {
        let g = GridSpec::new(1, 256, 60.0).unwrap();
        let params = SimParams::new(1, 4.0, g, 0.01, InitialProfile::default(), 10.0);
        let traj = evolve(&params).unwrap();
        assert!(estimate_blowup_time(&traj, 4.0).is_err());
    }
}
