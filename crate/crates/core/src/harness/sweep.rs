use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lifespan::{run_lifespan, DomainPolicy, LifespanResult};
use super::regime::{Regime, RegimeInfo};
use crate::error::{invalid, Error, Result};
use crate::integrator::SimParams;
use crate::spectral::io::fmt_f64;
use crate::stats::fit_line;

/// Environment variable capping the sweep worker count.
pub const THREADS_ENV: &str = "FUJITA_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub t_eps: f64,
    pub converged: bool,
    pub l_final: f64,
    pub n_final: usize,
    /// `R²` of the blow-up fit in the last box (NaN without blow-up).
    pub fit_r2: f64,
}

impl SweepRow {
    pub fn from_result(eps: f64, res: &LifespanResult) -> Self {
        let last = res.final_entry();
        SweepRow {
            eps,
            t_eps: res.t_eps,
            converged: res.converged,
            l_final: last.length,
            n_final: last.points,
            fit_r2: res.blowup.map_or(f64::NAN, |b| b.fit_r2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub results: Vec<LifespanResult>,
}

impl SweepTable {
    /// CSV with columns `eps, T_eps, converged, L_final, N_final, fit_r2`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "eps,T_eps,converged,L_final,N_final,fit_r2")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_f64(r.eps),
                fmt_f64(r.t_eps),
                r.converged,
                fmt_f64(r.l_final),
                r.n_final,
                fmt_f64(r.fit_r2)
            )?;
        }
        Ok(())
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// Worker count from `FUJITA_LAB_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// One `run_lifespan` per ε, rows in input order.
pub fn sweep_epsilon(base: &SimParams, eps_list: &[f64], policy: &DomainPolicy) -> Result<SweepTable> {
    if eps_list.is_empty() {
        return Err(invalid("eps_list", "at least one ε is required"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(invalid("eps_list", "every ε must be positive"));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps_list", "ε values must be strictly decreasing"));
    }
    let run = || -> Result<Vec<LifespanResult>> {
        eps_list
            .par_iter()
            .map(|&eps| {
                let mut params = base.clone();
                params.epsilon = eps;
                run_lifespan(&params, policy)
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let results = pool.install(run)?;
    let rows = eps_list
        .iter()
        .zip(&results)
        .map(|(&eps, r)| SweepRow::from_result(eps, r))
        .collect();
    Ok(SweepTable { rows, results })
}

/// Minimum number of converged rows for `fit_scaling`.
pub const MIN_FIT_ROWS: usize = 4;

/// Scaling-law fit of a sweep.
///
/// Subcritical: `log T` against `log ε`. Critical: `log T` against
/// `ε^{-(p-1)}`, with the power-law fit kept as `alternative_rms` for model
/// selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub regime: Regime,
    pub theoretical_exponent: Option<f64>,
    pub fitted_slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r2: f64,
    /// RMS residual of `log T` under the fitted law.
    pub rms: f64,
    /// RMS residual of `log T` under the log-log power law (critical only).
    pub alternative_rms: Option<f64>,
    pub rows_used: usize,
}

impl FitReport {
    /// `|fitted - theoretical| / |theoretical|`, subcritical only.
    pub fn relative_exponent_error(&self) -> Option<f64> {
        self.theoretical_exponent.map(|e| ((self.fitted_slope - e) / e).abs())
    }
}

pub fn fit_scaling(rows: &[SweepRow], regime: &RegimeInfo) -> Result<FitReport> {
    let used: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.converged && r.t_eps.is_finite() && r.t_eps > 0.0)
        .collect();
    if used.len() < MIN_FIT_ROWS {
        return Err(Error::InsufficientData(format!(
            "{} converged rows, need {MIN_FIT_ROWS}",
            used.len()
        )));
    }
    let log_t: Vec<f64> = used.iter().map(|r| r.t_eps.ln()).collect();
    let log_eps: Vec<f64> = used.iter().map(|r| r.eps.ln()).collect();
    match regime.regime {
        Regime::Subcritical => {
            let fit = fit_line(&log_eps, &log_t)?;
            Ok(FitReport {
                regime: regime.regime,
                theoretical_exponent: regime.theoretical_exponent,
                fitted_slope: fit.slope,
                intercept: fit.intercept,
                stderr: fit.slope_stderr,
                r2: fit.r2,
                rms: fit.rms,
                alternative_rms: None,
                rows_used: used.len(),
            })
        }
        Regime::Critical => {
            let xs: Vec<f64> = used.iter().map(|r| r.eps.powf(1.0 - regime.p)).collect();
            let fit = fit_line(&xs, &log_t)?;
            let power = fit_line(&log_eps, &log_t)?;
            Ok(FitReport {
                regime: regime.regime,
                theoretical_exponent: None,
                fitted_slope: fit.slope,
                intercept: fit.intercept,
                stderr: fit.slope_stderr,
                r2: fit.r2,
                rms: fit.rms,
                alternative_rms: Some(power.rms),
                rows_used: used.len(),
            })
        }
        Regime::Supercritical => Err(invalid("regime", "no lifespan law to fit in the supercritical regime")),
    }
}
