use serde::{Deserialize, Serialize};

use super::regime::{classify_regime, RegimeInfo};
use crate::error::{invalid, Error, Result};
use crate::integrator::{estimate_blowup_time, evolve, BlowupEstimate, InitialProfile, Outcome, SimParams};
use crate::spectral::GridSpec;

/// How `run_lifespan` sizes and refines the periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainPolicy {
    /// Initial box length in diffusion lengths `T_pred^{1/2m}`.
    pub c_dom: f64,
    /// Relative change of `T` between successive boxes that counts as
    /// converged.
    pub convergence_tol: f64,
    pub max_doublings: usize,
    /// Target grid spacing; defaults to `width / 2.5` of the initial profile.
    pub dx_target: Option<f64>,
    /// Lower bound on the box length in units of the profile width.
    pub min_width_multiple: f64,
    /// First horizon is this multiple of the expected lifespan.
    pub horizon_factor: f64,
    /// Times the horizon is quadrupled when a run ends without blow-up.
    pub max_extensions: usize,
    /// Cap on points per axis; boxes beyond it keep the last resolution.
    pub max_points: usize,
}

impl Default for DomainPolicy {
    fn default() -> Self {
        DomainPolicy {
            c_dom: 12.0,
            convergence_tol: 0.01,
            max_doublings: 4,
            dx_target: None,
            min_width_multiple: 20.0,
            horizon_factor: 8.0,
            max_extensions: 4,
            max_points: 1 << 15,
        }
    }
}

impl DomainPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_dom > 0.0) {
            return Err(invalid("c_dom", "must be positive"));
        }
        if !(self.convergence_tol > 0.0 && self.convergence_tol < 1.0) {
            return Err(invalid("convergence_tol", "must lie in (0, 1)"));
        }
        if let Some(dx) = self.dx_target {
            if !(dx > 0.0) {
                return Err(invalid("dx_target", "must be positive"));
            }
        }
        if !(self.horizon_factor > 1.0) {
            return Err(invalid("horizon_factor", "must exceed 1"));
        }
        if self.max_points < 16 || !self.max_points.is_power_of_two() {
            return Err(invalid("max_points", "must be a power of two >= 16"));
        }
        Ok(())
    }

    /// First box `(L, N)` for a run whose time scale is `horizon`.
    pub fn initial_box(&self, u0: &InitialProfile, m: u32, horizon: f64) -> (f64, usize) {
        let width = u0.width();
        let mut length = self.c_dom * horizon.powf(0.5 / m as f64);
        if let Some(w) = width {
            length = length.max(self.min_width_multiple * w);
        }
        let points = match (self.dx_target, width) {
            _ if u0.is_translation_invariant() => 16,
            (Some(dx), _) => points_for(length, dx, self.max_points),
            (None, Some(w)) => points_for(length, w / 2.5, self.max_points),
            (None, None) => points_for(length, length / 256.0, self.max_points),
        };
        (length, points)
    }
}

/// One box of the domain-convergence sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainEntry {
    pub length: f64,
    pub points: usize,
    /// Lifespan estimate in this box (`∞` if no blow-up was seen).
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LifespanStatus {
    Converged,
    /// Blow-up seen in every box but the estimates never settled.
    NotConverged,
    NoBlowup {
        t_end: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifespanResult {
    /// Parameters of the last box.
    pub params: SimParams,
    pub regime: RegimeInfo,
    pub t_eps: f64,
    pub domain_record: Vec<DomainEntry>,
    pub converged: bool,
    pub status: LifespanStatus,
    /// Estimate from the last box.
    pub blowup: Option<BlowupEstimate>,
}

impl LifespanResult {
    pub fn final_entry(&self) -> &DomainEntry {
        self.domain_record.last().expect("at least one box is always run")
    }
}

fn points_for(length: f64, dx: f64, cap: usize) -> usize {
    let raw = (length / dx).ceil().max(16.0) as usize;
    raw.next_power_of_two().min(cap)
}

/// Lifespan of `base` in a sequence of growing periodic boxes.
///
/// The grid of `base` is ignored apart from its dimension. Its `t_end` is used
/// only when the regime law gives no prediction (supercritical runs).
pub fn run_lifespan(base: &SimParams, policy: &DomainPolicy) -> Result<LifespanResult> {
    policy.validate()?;
    base.validate()?;
    let n = base.grid.dim();
    let regime = classify_regime(n, base.m, base.p)?;
    let predicted = regime.predicted_lifespan(base.epsilon);

    let (mut length, mut points) = policy.initial_box(&base.u0, base.m, predicted.unwrap_or(base.t_end));

    let mut record: Vec<DomainEntry> = Vec::new();
    let mut params = base.clone();
    let mut guess = predicted;
    let mut blowup = None;
    let mut status = LifespanStatus::NotConverged;

    for _ in 0..=policy.max_doublings {
        params.grid = GridSpec::new(n, points, length)?;
        let (t_box, estimate, t_end) = run_box(&mut params, guess, policy)?;
        record.push(DomainEntry {
            length,
            points,
            t: t_box,
        });
        blowup = estimate;
        if estimate.is_none() {
            status = LifespanStatus::NoBlowup { t_end };
            break;
        }
        log::debug!("box L={length} N={points}: T={t_box}");
        if let [.., a, b] = record.as_slice() {
            if ((b.t - a.t) / a.t).abs() < policy.convergence_tol {
                status = LifespanStatus::Converged;
                break;
            }
        }
        guess = Some(t_box);
        length *= 2.0;
        if !base.u0.is_translation_invariant() {
            if points * 2 <= policy.max_points {
                points *= 2;
            } else {
                log::warn!("point cap {} reached; box L={length} is coarser", policy.max_points);
            }
        }
    }

    let last = record.last().expect("loop runs at least once");
    Ok(LifespanResult {
        params,
        regime,
        t_eps: last.t,
        converged: status == LifespanStatus::Converged,
        domain_record: record,
        status,
        blowup,
    })
}

/// Runs one box, lengthening the horizon while no blow-up is seen.
fn run_box(
    params: &mut SimParams,
    guess: Option<f64>,
    policy: &DomainPolicy,
) -> Result<(f64, Option<BlowupEstimate>, f64)> {
    let extensions = if guess.is_some() { policy.max_extensions } else { 0 };
    if let Some(g) = guess {
        params.t_end = policy.horizon_factor * g;
    }
    for attempt in 0..=extensions {
        let traj = evolve(params)?;
        if let Outcome::Resolved { t_end } = traj.outcome {
            if attempt == extensions {
                return Ok((f64::INFINITY, None, t_end));
            }
            params.t_end *= 4.0;
            continue;
        }
        let est = match estimate_blowup_time(&traj, params.p) {
            Ok(est) => est,
            Err(Error::InsufficientData(why)) => {
                log::warn!(
                    "run ended at t={} without a usable blow-up fit: {why}",
                    traj.outcome.time()
                );
                return Ok((f64::INFINITY, None, traj.outcome.time()));
            }
            Err(e) => return Err(e),
        };
        if est.low_confidence {
            log::warn!("low-confidence blow-up estimate {} (R²={})", est.t_est, est.fit_r2);
        }
        return Ok((est.t_est, Some(est), params.t_end));
    }
    unreachable!("the last attempt always returns")
}
