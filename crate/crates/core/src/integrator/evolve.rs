use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::etd::EtdStepper;
use super::params::{Nonlinearity, SimParams};
use crate::error::Result;
use crate::semigroup::PropagatorSpec;
use crate::spectral::io::fmt_f64;
use crate::spectral::{lp_norm_values, mass, sup_norm, Exponent, RealField};

/// Norms after one accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    /// Step that produced this sample (0 for the initial state).
    pub dt: f64,
    pub l1: f64,
    pub linf: f64,
    /// `‖u‖_p` with `p` the nonlinearity exponent.
    pub lp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnapshotKind {
    Initial,
    Uniform,
    Growth,
    Final,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub kind: SnapshotKind,
    pub field: RealField,
}

/// How a run ended. None of these is an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Resolved { t_end: f64 },
    BlowupDetected { t_detect: f64 },
    StepCollapse { t: f64 },
}

impl Outcome {
    pub fn is_blowup(&self) -> bool {
        !matches!(self, Outcome::Resolved { .. })
    }

    pub fn time(&self) -> f64 {
        match *self {
            Outcome::Resolved { t_end } => t_end,
            Outcome::BlowupDetected { t_detect } => t_detect,
            Outcome::StepCollapse { t } => t,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: SimParams,
    pub norm_history: Vec<NormSample>,
    pub snapshots: Vec<Snapshot>,
    pub outcome: Outcome,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.norm_history.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &NormSample {
        self.norm_history
            .last()
            .expect("history always holds the initial state")
    }

    pub fn initial_field(&self) -> &RealField {
        &self.snapshots[0].field
    }

    /// Snapshots taken on the uniform time lattice, including `t = 0`.
    pub fn uniform_snapshots(&self) -> Vec<&Snapshot> {
        self.snapshots
            .iter()
            .filter(|s| matches!(s.kind, SnapshotKind::Initial | SnapshotKind::Uniform))
            .collect()
    }

    /// Norm history as CSV with columns `t, dt, l1, linf, lp`.
    pub fn write_norm_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,dt,l1,linf,lp")?;
        for s in &self.norm_history {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(s.t),
                fmt_f64(s.dt),
                fmt_f64(s.l1),
                fmt_f64(s.linf),
                fmt_f64(s.lp)
            )?;
        }
        Ok(())
    }
}

/// Accepted steps in a row below half the growth cap before `h` doubles.
const CALM_STEPS_BEFORE_DOUBLING: usize = 8;

/// Integrates from `ε u₀` until blow-up, step collapse or `t_end`.
pub fn evolve(params: &SimParams) -> Result<Trajectory> {
    params.validate()?;
    let grid = params.grid;
    let prop = PropagatorSpec::new(params.m, grid)?;
    let initial = params.initial_field()?;
    let initial_mass = mass(&initial);
    if initial_mass <= 0.0 {
        log::warn!("initial mass {initial_mass:e} is not positive; blow-up is not guaranteed");
    }

    let cv = grid.cell_volume();
    let lp_exp = Exponent::Finite(params.p);
    let sample = |t: f64, dt: f64, values: &[f64]| NormSample {
        t,
        dt,
        l1: lp_norm_values(values, cv, Exponent::Finite(1.0)),
        linf: sup_norm(values),
        lp: lp_norm_values(values, cv, lp_exp),
    };

    let mut stepper = EtdStepper::new(&prop, params.p, params.nonlinearity, params.scheme, params.dealias);
    let mut state = stepper.state(initial.values().to_vec());
    let mut history = vec![sample(0.0, 0.0, &state.physical)];
    let mut snapshots = vec![Snapshot {
        t: 0.0,
        kind: SnapshotKind::Initial,
        field: initial,
    }];

    let interval = params.snapshot_interval();
    let dt_max = params.dt_max.unwrap_or(interval);
    let levels = params.snapshots.uniform_levels;
    let growth_factor = params.snapshots.growth_factor;
    let calm_threshold = 1.0 + 0.5 * (params.growth_cap - 1.0);

    let mut t = 0.0;
    let mut h = params.dt0.min(dt_max);
    let mut next_level = 1usize;
    let mut calm = 0usize;
    let mut rejected = 0usize;
    let mut linf = history[0].linf;
    let mut next_growth_snapshot = if growth_factor > 0.0 && linf > 0.0 {
        linf * growth_factor
    } else {
        f64::INFINITY
    };

    let outcome = loop {
        if linf >= params.u_max {
            break Outcome::BlowupDetected { t_detect: t };
        }
        if next_level > levels {
            break Outcome::Resolved { t_end: t };
        }

        let mut h_try = h.min(dt_max);
        if params.nonlinearity == Nonlinearity::Power && linf > 0.0 {
            h_try = h_try.min(params.rate_cap / linf.powf(params.p - 1.0));
        }
        // land exactly on the uniform lattice; never leave a sliver behind
        let target = if next_level == levels {
            params.t_end
        } else {
            next_level as f64 * interval
        };
        let clipped = t + h_try >= target - 1e-3 * h_try;
        if clipped {
            h_try = target - t;
        }
        if h_try < params.dt_min {
            break Outcome::StepCollapse { t };
        }

        let Some(next) = stepper.advance(&state, h_try) else {
            rejected += 1;
            calm = 0;
            h = 0.5 * h_try;
            if h < params.dt_min {
                break Outcome::StepCollapse { t };
            }
            continue;
        };
        let new_linf = sup_norm(&next.physical);
        let growth = if linf > 0.0 { new_linf / linf } else { 1.0 };
        if growth > params.growth_cap {
            rejected += 1;
            calm = 0;
            h = 0.5 * h_try;
            if h < params.dt_min {
                break Outcome::StepCollapse { t };
            }
            continue;
        }

        t = if clipped { target } else { t + h_try };
        state = next;
        linf = new_linf;
        history.push(sample(t, h_try, &state.physical));

        if growth < calm_threshold {
            calm += 1;
            if calm >= CALM_STEPS_BEFORE_DOUBLING {
                h = (2.0 * h).min(dt_max);
                calm = 0;
            }
        } else {
            calm = 0;
        }

        if clipped {
            next_level += 1;
            snapshots.push(Snapshot {
                t,
                kind: SnapshotKind::Uniform,
                field: RealField::new_unchecked(grid, state.physical.clone()),
            });
        } else if linf >= next_growth_snapshot {
            snapshots.push(Snapshot {
                t,
                kind: SnapshotKind::Growth,
                field: RealField::new_unchecked(grid, state.physical.clone()),
            });
        }
        if linf >= next_growth_snapshot {
            next_growth_snapshot = linf * growth_factor;
        }
    };

    if snapshots.last().map(|s| s.t) != Some(t) {
        snapshots.push(Snapshot {
            t,
            kind: SnapshotKind::Final,
            field: RealField::new_unchecked(grid, state.physical.clone()),
        });
    }

    Ok(Trajectory {
        params: params.clone(),
        norm_history: history,
        snapshots,
        outcome,
        rejected_steps: rejected,
    })
}
