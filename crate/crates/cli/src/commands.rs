//! The five verbs. Each one writes its artifacts through an [`Emitter`] and
//! reports a [`RunStatus`].

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use fujita_core::harness::{
    classify_regime, fit_scaling, sweep_epsilon, FitReport, LifespanStatus, Regime, RegimeInfo,
};
use fujita_core::integrator::{estimate_blowup_time, evolve, BlowupEstimate, Outcome, SnapshotKind};
use fujita_core::semigroup::{decay_exponent_fit, default_probes, NegativePart, PropagatorSpec};
use fujita_core::spectral::io::{fmt_f64, to_binary};
use fujita_core::spectral::{mass, sup_norm, GridSpec};
use fujita_core::testfn::{
    lemma_ratio, weak_identity_residual, xyw_check, CutoffSpec, LemmaGrid, LemmaReport, WeakIdentityReport,
};
use fujita_core::Error;

use crate::config::{Config, ConfigError};
use crate::output::Emitter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Simulate,
    Sweep,
    Kernel,
    DecayCheck,
    TestfnVerify,
}

impl Verb {
    pub const ALL: [Verb; 5] = [
        Verb::Simulate,
        Verb::Sweep,
        Verb::Kernel,
        Verb::DecayCheck,
        Verb::TestfnVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Simulate => "simulate",
            Verb::Sweep => "sweep",
            Verb::Kernel => "kernel",
            Verb::DecayCheck => "decay-check",
            Verb::TestfnVerify => "testfn-verify",
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Verb::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown verb `{s}`"))
    }
}

/// Completed run. `NotConverged` still leaves every output in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Success,
    NotConverged,
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Core(#[from] Error),
}

type CmdResult = Result<RunStatus, CommandError>;

pub fn dispatch(verb: Verb, cfg: &Config, em: &mut Emitter) -> CmdResult {
    match verb {
        Verb::Simulate => simulate(cfg, em),
        Verb::Sweep => sweep(cfg, em),
        Verb::Kernel => kernel(cfg, em),
        Verb::DecayCheck => decay_check(cfg, em),
        Verb::TestfnVerify => testfn_verify(cfg, em),
    }
}

/// Checks the verb's required keys before anything is written.
pub fn preflight(verb: Verb, cfg: &Config) -> Result<(), ConfigError> {
    match verb {
        Verb::Simulate => {
            cfg.sim_params(require_epsilon(cfg, verb)?)?;
        }
        Verb::TestfnVerify => {
            cfg.sim_params(require_epsilon(cfg, verb)?)?;
            let horizon = cfg.testfn.horizon.unwrap_or(cfg.problem.t_end);
            if horizon > cfg.problem.t_end {
                return Err(cfg.error("testfn.horizon", "must not exceed problem.t_end"));
            }
            if let Some(r) = cfg.testfn.r_list.iter().find(|r| **r > horizon) {
                return Err(cfg.error(
                    "testfn.R_list",
                    format!("R = {r} exceeds the weak-identity horizon {horizon}; ψ_R must vanish by then"),
                ));
            }
        }
        Verb::Sweep => {
            let list = &cfg.problem.eps_list;
            if list.is_empty() {
                return Err(cfg.error("problem.eps_list", "required by `sweep`"));
            }
            if list.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(cfg.error("problem.eps_list", "must be strictly decreasing"));
            }
            let regime = regime_of(cfg)?;
            if regime.regime == Regime::Critical {
                let cap = cfg.harness.eps_cap_critical;
                if let Some(e) = list.iter().find(|e| **e < cap) {
                    return Err(cfg.error(
                        "problem.eps_list",
                        format!("epsilon {e} is below harness.eps_cap_critical = {cap} in the critical regime"),
                    ));
                }
            }
            cfg.sim_params(list[0])?;
        }
        Verb::Kernel | Verb::DecayCheck => {
            cfg.grid_spec()?;
        }
    }
    Ok(())
}

fn require_epsilon(cfg: &Config, verb: Verb) -> Result<f64, ConfigError> {
    cfg.problem
        .epsilon
        .ok_or_else(|| cfg.error("problem.epsilon", format!("required by `{verb}`")))
}

fn regime_of(cfg: &Config) -> Result<RegimeInfo, ConfigError> {
    classify_regime(cfg.problem.n, cfg.problem.m, cfg.problem.p).map_err(|e| cfg.error("problem.p", e.to_string()))
}

#[derive(Serialize)]
struct SimulateReport {
    epsilon: f64,
    grid: GridSpec,
    outcome: Outcome,
    rejected_steps: usize,
    steps: usize,
    blowup: Option<BlowupEstimate>,
    blowup_note: Option<String>,
}

fn simulate(cfg: &Config, em: &mut Emitter) -> CmdResult {
    let eps = require_epsilon(cfg, Verb::Simulate)?;
    let params = cfg.sim_params(eps)?;
    let traj = em.stage("evolve", |_| evolve(&params))?;
    let (blowup, blowup_note) = match traj.outcome {
        Outcome::BlowupDetected { .. } => match estimate_blowup_time(&traj, params.p) {
            Ok(est) => (Some(est), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, Some("no blow-up within t_end".to_string())),
    };
    em.stage("write", |em| -> io::Result<()> {
        em.csv("tables/norms.csv", |b| traj.write_norm_csv(b))?;
        let mut index = Vec::new();
        for (k, snap) in traj.snapshots.iter().enumerate() {
            let rel = format!("fields/snapshot_{k:04}.bin");
            if let Some(sha) = em.bin(&rel, &to_binary(&snap.field))? {
                index.push((snap.t, snap.kind, rel, sha));
            }
        }
        if !index.is_empty() {
            em.csv("tables/snapshots.csv", |b| {
                writeln!(b, "t,kind,path,sha256")?;
                for (t, kind, rel, sha) in &index {
                    writeln!(b, "{},{},{rel},{sha}", fmt_f64(*t), kind_name(*kind))?;
                }
                Ok(())
            })?;
        }
        em.json(
            "reports/simulate.json",
            &SimulateReport {
                epsilon: eps,
                grid: params.grid,
                outcome: traj.outcome,
                rejected_steps: traj.rejected_steps,
                steps: traj.norm_history.len() - 1,
                blowup,
                blowup_note,
            },
        )
    })?;
    Ok(match traj.outcome {
        Outcome::StepCollapse { .. } => RunStatus::NotConverged,
        _ => RunStatus::Success,
    })
}

fn kind_name(kind: SnapshotKind) -> &'static str {
    match kind {
        SnapshotKind::Initial => "initial",
        SnapshotKind::Uniform => "uniform",
        SnapshotKind::Growth => "growth",
        SnapshotKind::Final => "final",
    }
}

#[derive(Serialize)]
struct LifespanEntry {
    eps: f64,
    t_eps: f64,
    status: LifespanStatus,
    domain_record: Vec<fujita_core::harness::DomainEntry>,
    blowup: Option<BlowupEstimate>,
}

#[derive(Serialize)]
struct SweepReport {
    regime: RegimeInfo,
    fit: Option<FitReport>,
    fit_note: Option<String>,
    lifespans: Vec<LifespanEntry>,
}

fn sweep(cfg: &Config, em: &mut Emitter) -> CmdResult {
    let list = cfg.problem.eps_list.clone();
    let base = cfg.sim_params(list[0])?;
    let regime = regime_of(cfg)?;
    let table = em.stage("sweep", |_| sweep_epsilon(&base, &list, &cfg.harness.policy))?;
    let fit = em.stage("fit", |_| fit_scaling(&table.rows, &regime));
    let (fit, fit_note) = match fit {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let lifespans = list
        .iter()
        .zip(&table.results)
        .map(|(&eps, r)| LifespanEntry {
            eps,
            t_eps: r.t_eps,
            status: r.status,
            domain_record: r.domain_record.clone(),
            blowup: r.blowup,
        })
        .collect();
    em.stage("write", |em| -> io::Result<()> {
        em.csv("tables/sweep.csv", |b| table.write_csv(b))?;
        if let Some(f) = &fit {
            em.json("reports/fit.json", f)?;
        }
        em.json(
            "reports/sweep.json",
            &SweepReport {
                regime,
                fit: fit.clone(),
                fit_note,
                lifespans,
            },
        )
    })?;
    Ok(if table.all_converged() && fit.is_some() {
        RunStatus::Success
    } else {
        RunStatus::NotConverged
    })
}

#[derive(Serialize)]
struct KernelEntry {
    t: f64,
    table: String,
    max: f64,
    mass: f64,
    negative: NegativePart,
    under_resolved: bool,
}

fn kernel(cfg: &Config, em: &mut Emitter) -> CmdResult {
    let grid = cfg.grid_spec()?;
    let prop = PropagatorSpec::new(cfg.problem.m, grid)?;
    let mut entries = Vec::new();
    em.stage("kernel", |em| -> CmdResult {
        for (k, &t) in cfg.kernel.t_list.iter().enumerate() {
            let kf = prop.kernel_field(t)?;
            let rel = format!("tables/kernel_{k:02}.csv");
            em.csv(&rel, |b| {
                let axes = ["x", "y", "z"];
                writeln!(b, "{},K", axes[..grid.dim()].join(","))?;
                for (flat, v) in kf.field.values().iter().enumerate() {
                    let idx = grid.unravel(flat);
                    for &j in &idx[..grid.dim()] {
                        write!(b, "{},", fmt_f64(grid.coordinate(j)))?;
                    }
                    writeln!(b, "{}", fmt_f64(*v))?;
                }
                Ok(())
            })?;
            entries.push(KernelEntry {
                t,
                table: rel,
                max: sup_norm(kf.field.values()),
                mass: mass(&kf.field),
                negative: kf.negative_part(),
                under_resolved: kf.under_resolved,
            });
        }
        Ok(RunStatus::Success)
    })?;
    em.json("reports/kernel.json", &entries)?;
    Ok(if entries.iter().any(|e| e.under_resolved) {
        RunStatus::NotConverged
    } else {
        RunStatus::Success
    })
}

fn decay_check(cfg: &Config, em: &mut Emitter) -> CmdResult {
    let grid = cfg.grid_spec()?;
    let prop = PropagatorSpec::new(cfg.problem.m, grid)?;
    let d = &cfg.decay;
    let report = em.stage("fit", |_| -> fujita_core::Result<_> {
        let probes = default_probes(grid)?;
        decay_exponent_fit(&prop, d.p, d.q, &d.t_list, &probes)
    })?;
    em.csv("tables/decay.csv", |b| {
        writeln!(b, "t,ratio")?;
        for (t, r) in report.t_samples.iter().zip(&report.ratios) {
            writeln!(b, "{},{}", fmt_f64(*t), fmt_f64(*r))?;
        }
        Ok(())
    })?;
    em.json("reports/decay.json", &report)?;
    Ok(if report.relative_slope_error() <= d.tolerance {
        RunStatus::Success
    } else {
        RunStatus::NotConverged
    })
}

#[derive(Serialize)]
struct XywSummary {
    r: f64,
    table: String,
    t_last: f64,
    log_lemma_holds: bool,
    holder_holds: bool,
}

#[derive(Serialize)]
struct TestfnReport {
    l: u32,
    r0: f64,
    lemma: Vec<LemmaReport>,
    lemma_failures: Vec<String>,
    weak_identity: Vec<WeakIdentityReport>,
    weak_identity_skipped: Vec<String>,
    xyw: Vec<XywSummary>,
}

/// `R` errors from the support check mean the box is too small: a config
/// problem, reported against `testfn.R_list`.
fn radius_error(cfg: &Config, e: Error) -> CommandError {
    match e {
        Error::InvalidParameter { name: "R", reason } => cfg.error("testfn.R_list", reason).into(),
        other => other.into(),
    }
}

fn testfn_verify(cfg: &Config, em: &mut Emitter) -> CmdResult {
    let eps = require_epsilon(cfg, Verb::TestfnVerify)?;
    let params = cfg.sim_params(eps)?;
    let tf = &cfg.testfn;
    let (m, p, n) = (params.m, params.p, params.grid.dim());
    let specs = tf
        .r_list
        .iter()
        .map(|&r| CutoffSpec::with_exponent(r, m, p, tf.l))
        .collect::<fujita_core::Result<Vec<_>>>()?;

    let mut lemma = Vec::new();
    let mut lemma_failures = Vec::new();
    em.stage("lemma", |_| {
        for spec in &specs {
            match lemma_ratio(spec, n, LemmaGrid::for_order(m)) {
                Ok(rep) => lemma.push(rep),
                Err(e) => lemma_failures.push(format!("R = {}: {e}", spec.r)),
            }
        }
    });

    let traj = em.stage("evolve", |_| evolve(&params))?;
    let last_uniform = traj.uniform_snapshots().last().map_or(0.0, |s| s.t);
    let horizon = tf.horizon.unwrap_or(last_uniform);
    if horizon > last_uniform * (1.0 + 1e-12) {
        return Err(cfg
            .error(
                "testfn.horizon",
                format!("horizon {horizon} lies beyond the last uniform snapshot at t = {last_uniform}"),
            )
            .into());
    }
    let mut weak_skipped = Vec::new();
    let weak = em.stage("weak_identity", |_| {
        specs
            .iter()
            .filter(|s| {
                let fits = s.r <= horizon;
                if !fits {
                    weak_skipped.push(format!("R = {}: run ended at t = {horizon} before ψ_R vanishes", s.r));
                }
                fits
            })
            .map(|s| weak_identity_residual(&traj, s, horizon))
            .collect::<fujita_core::Result<Vec<_>>>()
    });
    let weak = weak.map_err(|e| radius_error(cfg, e))?;
    let xyw = em.stage("xyw", |_| {
        specs
            .iter()
            .map(|s| xyw_check(&traj, s, tf.xyw_points))
            .collect::<fujita_core::Result<Vec<_>>>()
    });
    let xyw = xyw.map_err(|e| radius_error(cfg, e))?;

    let mut summaries = Vec::new();
    em.stage("write", |em| -> io::Result<()> {
        em.csv("tables/lemma.csv", |b| {
            writeln!(b, "R,n,m,p,l,C_emp,x_max,t_max,s_at_max,richardson_defect")?;
            for r in &lemma {
                writeln!(
                    b,
                    "{},{},{},{},{},{},{},{},{},{}",
                    fmt_f64(r.r),
                    r.n,
                    r.m,
                    fmt_f64(r.p),
                    r.l,
                    fmt_f64(r.c_emp),
                    fmt_f64(r.location.0),
                    fmt_f64(r.location.1),
                    fmt_f64(r.s_at_max),
                    fmt_f64(r.richardson_defect)
                )?;
            }
            Ok(())
        })?;
        em.csv("tables/weak_identity.csv", |b| {
            writeln!(b, "R,horizon,levels,data,source,diffusion,time,lhs,rhs,residual")?;
            for w in &weak {
                writeln!(
                    b,
                    "{},{},{},{},{},{},{},{},{},{}",
                    fmt_f64(w.r),
                    fmt_f64(w.horizon),
                    w.levels,
                    fmt_f64(w.data_term),
                    fmt_f64(w.source_term),
                    fmt_f64(w.diffusion_term),
                    fmt_f64(w.time_term),
                    fmt_f64(w.lhs),
                    fmt_f64(w.rhs),
                    fmt_f64(w.residual)
                )?;
            }
            Ok(())
        })?;
        for (k, (spec, rep)) in specs.iter().zip(&xyw).enumerate() {
            let rel = format!("tables/xyw_{k:02}.csv");
            em.csv(&rel, |b| rep.write_csv(b))?;
            summaries.push(XywSummary {
                r: spec.r,
                table: rel,
                t_last: rep.t_last,
                log_lemma_holds: rep.log_lemma_holds(),
                holder_holds: rep.holder_holds(),
            });
        }
        Ok(())
    })?;
    let ok = lemma_failures.is_empty()
        && weak_skipped.is_empty()
        && summaries.iter().all(|s| s.log_lemma_holds && s.holder_holds);
    em.json(
        "reports/testfn.json",
        &TestfnReport {
            l: tf.l,
            r0: tf.r0,
            lemma,
            lemma_failures,
            weak_identity: weak,
            weak_identity_skipped: weak_skipped,
            xyw: summaries,
        },
    )?;
    Ok(if ok {
        RunStatus::Success
    } else {
        RunStatus::NotConverged
    })
}
