use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::regime::RegimeInfo;
use crate::error::{invalid, Result};
use crate::integrator::Trajectory;
use crate::spectral::io::fmt_f64;

/// The running supremum
/// `M(t) = sup_{τ<t} (1+τ)^{n/2m} ‖u(τ)‖_∞ + ‖u(τ)‖₁` and the smallest
/// constants in `M(t) ≤ C₀ε + C₁ M(t)^p I(t)`, where
/// `I(t) = ∫₀ᵗ (1+τ)^{-n(p-1)/2m} dτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MTrace {
    pub times: Vec<f64>,
    pub m_values: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    /// First recorded time with `M(t) ≥ 2C₀ε`.
    pub t1_observed: Option<f64>,
    /// `M ≡ 0`: the inequality holds vacuously and the constants are zero.
    pub degenerate: bool,
}

impl MTrace {
    pub fn is_monotone(&self) -> bool {
        self.m_values.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,M")?;
        for (t, m) in self.times.iter().zip(&self.m_values) {
            writeln!(out, "{},{}", fmt_f64(*t), fmt_f64(*m))?;
        }
        Ok(())
    }
}

/// `∫₀ᵗ (1+τ)^{-a} dτ` in closed form.
pub fn decay_integral(t: f64, a: f64) -> f64 {
    if (a - 1.0).abs() < 1e-12 {
        t.ln_1p()
    } else {
        ((1.0 + t).powf(1.0 - a) - 1.0) / (1.0 - a)
    }
}

pub fn m_functional_check(traj: &Trajectory, regime: &RegimeInfo) -> Result<MTrace> {
    let params = &traj.params;
    if regime.n != params.grid.dim() || regime.m != params.m || regime.p != params.p {
        return Err(invalid("regime", "regime does not describe this trajectory"));
    }
    let weight_exp = regime.n as f64 / (2.0 * regime.m as f64);
    let a = weight_exp * (regime.p - 1.0);
    let eps = params.epsilon;

    let times: Vec<f64> = traj.norm_history.iter().map(|s| s.t).collect();
    let mut m_values = Vec::with_capacity(times.len());
    let mut running = 0.0f64;
    for s in &traj.norm_history {
        running = running.max((1.0 + s.t).powf(weight_exp) * s.linf + s.l1);
        m_values.push(running);
    }

    let m0 = m_values[0];
    if m_values.iter().all(|&m| m == 0.0) {
        return Ok(MTrace {
            times,
            m_values,
            c0: 0.0,
            c1: 0.0,
            t1_observed: None,
            degenerate: true,
        });
    }
    let c0 = m0 / eps;
    let mut c1 = 0.0f64;
    for (&t, &m) in times.iter().zip(&m_values).skip(1) {
        let excess = m - c0 * eps;
        if excess > 0.0 {
            c1 = c1.max(excess / (m.powf(regime.p) * decay_integral(t, a)));
        }
    }
    let t1_observed = times
        .iter()
        .zip(&m_values)
        .find(|(_, &m)| m >= 2.0 * c0 * eps)
        .map(|(&t, _)| t);
    Ok(MTrace {
        times,
        m_values,
        c0,
        c1,
        t1_observed,
        degenerate: false,
    })
}
