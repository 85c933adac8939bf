//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use fujita_core::harness::{classify_regime, fit_scaling, sweep_epsilon, DomainPolicy, FitReport};
use fujita_core::integrator::{
    duhamel_residual, estimate_blowup_time, evolve, InitialProfile, Nonlinearity, SimParams, Trajectory,
};
use fujita_core::semigroup::{decay_exponent_fit, default_probes, PropagatorSpec};
use fujita_core::spectral::{mass, Exponent, GridSpec, RealField};
use fujita_core::testfn::{lemma_ratio, weak_identity_residual, xyw_check, CutoffSpec, LemmaGrid};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ode_oracle() -> Outcome {
    let g = GridSpec::new(1, 16, 8.0).unwrap();
    let params = SimParams::new(1, 2.0, g, 0.1, InitialProfile::Constant { value: 1.0 }, 20.0);
    let traj = evolve(&params).map_err(|e| e.to_string())?;
    let est = estimate_blowup_time(&traj, 2.0).map_err(|e| e.to_string())?;
    let rel = (est.t_est - 10.0).abs() / 10.0;
    check(
        rel < 0.01,
        format!("T = {:.6} vs 10 (rel err {rel:.2e}, tol 1e-2)", est.t_est),
    )
}

fn gaussian_kernel() -> Outcome {
    let g = GridSpec::new(1, 2048, 40.0).unwrap();
    let k = PropagatorSpec::new(1, g).unwrap().kernel_field(0.25).unwrap();
    let t = 0.25;
    let exact = RealField::from_fn(g, |x| (4.0 * PI * t).powf(-0.5) * (-x[0] * x[0] / (4.0 * t)).exp()).unwrap();
    let err = k.field.max_abs_diff(&exact).unwrap();
    let mass_err = (mass(&k.field) - 1.0).abs();
    check(
        err < 1e-6 && mass_err < 1e-10,
        format!("max-abs {err:.2e} (tol 1e-6), |mass - 1| {mass_err:.2e} (tol 1e-10)"),
    )
}

fn sign_changing_kernel() -> Outcome {
    let neg = |points: usize| {
        let g = GridSpec::new(1, points, 80.0).unwrap();
        PropagatorSpec::new(2, g)
            .unwrap()
            .kernel_field(1.0)
            .unwrap()
            .negative_part()
    };
    let a = neg(4096);
    let b = neg(8192);
    let drift = (a.negative_mass - b.negative_mass).abs() / b.negative_mass;
    check(
        a.min_value < 0.0 && drift < 0.01,
        format!(
            "min {:.4e} at |x| = {:.3}, negative mass {:.6e}, N-doubling drift {drift:.2e} (tol 1e-2)",
            a.min_value, a.min_location, a.negative_mass
        ),
    )
}

fn decay_exponents() -> Outcome {
    let t = [0.5, 1.0, 2.0, 4.0, 8.0];
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, m, points, length) in [(1usize, 1u32, 4096usize, 160.0), (1, 2, 4096, 160.0), (2, 1, 512, 80.0)] {
        let g = GridSpec::new(n, points, length).unwrap();
        let prop = PropagatorSpec::new(m, g).unwrap();
        let probes = default_probes(g).unwrap();
        let rep = decay_exponent_fit(&prop, Exponent::Finite(1.0), Exponent::Infinity, &t, &probes)
            .map_err(|e| e.to_string())?;
        let err = rep.relative_slope_error();
        ok &= err < 0.02;
        parts.push(format!(
            "(n={n},m={m}) {:.4} vs {:.4}",
            rep.fitted_slope, rep.theoretical_slope
        ));
    }
    check(ok, format!("{} (tol 2%)", parts.join(", ")))
}

fn gaussian_base(m: u32, p: f64, mass: f64) -> SimParams {
    let g = GridSpec::new(1, 16, 1.0).unwrap();
    SimParams::new(m, p, g, 1.0, InitialProfile::Gaussian { mass, width: 1.0 }, 1.0)
}

fn sweep_fit(m: u32, p: f64, mass: f64, eps: &[f64]) -> Result<(FitReport, bool), String> {
    let table = sweep_epsilon(&gaussian_base(m, p, mass), eps, &DomainPolicy::default()).map_err(|e| e.to_string())?;
    let regime = classify_regime(1, m, p).unwrap();
    let fit = fit_scaling(&table.rows, &regime).map_err(|e| e.to_string())?;
    let increasing = table.rows.windows(2).all(|w| w[1].t_eps > w[0].t_eps);
    Ok((fit, table.all_converged() && increasing))
}

fn subcritical_law() -> Outcome {
    let eps = [0.4, 0.28, 0.2, 0.14, 0.1, 0.07, 0.05];
    let (heat, heat_ok) = sweep_fit(1, 2.0, 1.0, &eps)?;
    let (bih, bih_ok) = sweep_fit(2, 2.0, 1.0, &eps)?;
    let e1 = heat.relative_exponent_error().unwrap();
    let e2 = bih.relative_exponent_error().unwrap();
    check(
        heat_ok && bih_ok && e1 < 0.1 && e2 < 0.1,
        format!(
            "m=1 slope {:.4} ± {:.4} vs -2 ({:.1}%), m=2 slope {:.4} ± {:.4} vs -4/3 ({:.1}%), all rows converged: {}",
            heat.fitted_slope,
            heat.stderr,
            100.0 * e1,
            bih.fitted_slope,
            bih.stderr,
            100.0 * e2,
            heat_ok && bih_ok
        ),
    )
}

fn critical_law() -> Outcome {
    let (fit, ok) = sweep_fit(1, 3.0, 2.45, &[0.8, 0.65, 0.55, 0.45])?;
    let alt = fit.alternative_rms.unwrap();
    check(
        ok && fit.fitted_slope > 0.0 && fit.r2 >= 0.9 && alt > fit.rms,
        format!(
            "log T vs ε^-2: slope {:.4}, R² {:.6} (tol 0.9), rms {:.3e} vs power-law rms {:.3e}, increasing & converged: {ok}",
            fit.fitted_slope, fit.r2, fit.rms, alt
        ),
    )
}

fn lemma_certification() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (m, p) in [(1u32, 2.0), (2, 2.0), (2, 3.0)] {
        let mut values = Vec::new();
        for r in [16.0, 32.0, 64.0] {
            let spec = CutoffSpec::new(r, m, p).unwrap();
            let rep = lemma_ratio(&spec, 1, LemmaGrid::for_order(m)).map_err(|e| e.to_string())?;
            values.push(rep.c_emp);
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(0.0, f64::max);
        let spread = hi / lo - 1.0;
        ok &= hi.is_finite() && spread < 0.05;
        parts.push(format!("(m={m},p={p}) C≈{lo:.4e} spread {spread:.1e}"));
    }
    check(ok, format!("{} (tol 5%)", parts.join(", ")))
}

fn subcritical_run(levels: usize, t_end: f64) -> Trajectory {
    let g = GridSpec::new(1, 1024, 240.0).unwrap();
    let mut params = SimParams::new(1, 2.0, g, 0.2, InitialProfile::default(), t_end);
    params.snapshots.uniform_levels = levels;
    evolve(&params).unwrap()
}

fn weak_identity() -> Outcome {
    let spec = CutoffSpec::new(64.0, 1, 2.0).unwrap();
    let a = weak_identity_residual(&subcritical_run(64, 100.0), &spec, 100.0).map_err(|e| e.to_string())?;
    let b = weak_identity_residual(&subcritical_run(128, 100.0), &spec, 100.0).map_err(|e| e.to_string())?;
    check(
        a.residual < 1e-2 && b.residual < a.residual,
        format!(
            "residual {:.3e} at 64 levels, {:.3e} at 128 (tol 1e-2, decreasing)",
            a.residual, b.residual
        ),
    )
}

fn log_lemma() -> Outcome {
    let mut runs: Vec<(String, Trajectory, u32, f64)> = Vec::new();
    let line = |m: u32, eps: f64, t_end: f64, points: usize, length: f64| {
        let g = GridSpec::new(1, points, length).unwrap();
        let mut params = SimParams::new(m, 2.0, g, eps, InitialProfile::default(), t_end);
        params.snapshots.uniform_levels = 256;
        evolve(&params).unwrap()
    };
    runs.push((
        "m=1 ε=0.2 (stopped at t=100)".into(),
        subcritical_run(64, 100.0),
        1,
        2.0,
    ));
    runs.push(("m=1 ε=0.2".into(), line(1, 0.2, 200.0, 1024, 240.0), 1, 2.0));
    runs.push(("m=1 ε=0.5".into(), line(1, 0.5, 80.0, 512, 120.0), 1, 2.0));
    runs.push(("m=2 ε=0.3".into(), line(2, 0.3, 60.0, 256, 60.0), 2, 2.0));
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, traj, m, p) in &runs {
        let mut worst = 0.0f64;
        for r in [8.0, 16.0, 32.0, 64.0] {
            let spec = CutoffSpec::new(r, *m, *p).unwrap();
            let rep = xyw_check(traj, &spec, 16).map_err(|e| format!("{name}: {e}"))?;
            ok &= rep.log_lemma_holds();
            for rec in &rep.records {
                if rec.x > 0.0 {
                    worst = worst.max(2.0 / std::f64::consts::LN_2 * rec.w / rec.x);
                }
            }
        }
        let blew_up = if traj.outcome.is_blowup() {
            "blow-up"
        } else {
            "resolved"
        };
        parts.push(format!("{name} [{blew_up}] max (2/log2)W/X = {worst:.4}"));
    }
    check(ok, format!("{} (bound 1.02)", parts.join("; ")))
}

fn duhamel() -> Outcome {
    let g = GridSpec::new(1, 1024, 240.0).unwrap();
    let params = SimParams::new(1, 2.0, g, 0.2, InitialProfile::default(), 100.0);
    let traj = evolve(&params).unwrap();
    let nonlinear = duhamel_residual(&traj, 100.0).map_err(|e| e.to_string())?;
    let mut off = params.clone();
    off.nonlinearity = Nonlinearity::Off;
    let linear = duhamel_residual(&evolve(&off).unwrap(), 100.0).map_err(|e| e.to_string())?;
    check(
        nonlinear.residual < 1e-3 && linear.residual < 1e-10 && nonlinear.nodes >= 129,
        format!(
            "nonlinear {:.3e} with {} nodes (tol 1e-3), source off {:.3e} (tol 1e-10)",
            nonlinear.residual, nonlinear.nodes, linear.residual
        ),
    )
}

fn invariants() -> Outcome {
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    record(
        "semigroup law",
        run_property(64, (field(7), 1u32..=3, 0.0f64..2.0, 0.0f64..2.0), |(u, m, s, t)| {
            semigroup_law(&u, m, s, t)
        }),
    );
    record(
        "mass",
        run_property(64, (field(7), 1u32..=3, 0.0f64..10.0), |(u, m, t)| {
            mass_conservation(&u, m, t)
        }),
    );
    record(
        "L2 contraction",
        run_property(64, (field(7), 1u32..=3, 0.0f64..10.0), |(u, m, t)| {
            l2_contraction(&u, m, t)
        }),
    );
    record("Parseval", run_property(64, field(8), |u| parseval(&u)));
    record("round trip", run_property(64, line_field(), |u| round_trip(&u)));
    record("M monotone", run_property(12, small_run(), |p| m_monotone(&p)));
    record("T monotone", run_property(12, eps_triple(), |e| lifespan_monotone(&e)));
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "semigroup law, mass, L2 contraction, Parseval, round trip, M(t), T_eps: all green".into()
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("ODE blow-up oracle", ode_oracle),
        ("Gaussian kernel oracle", gaussian_kernel),
        ("sign-changing biharmonic kernel", sign_changing_kernel),
        ("L1 -> Linf decay exponents", decay_exponents),
        ("subcritical lifespan law", subcritical_law),
        ("critical lifespan law", critical_law),
        ("cutoff derivative bound", lemma_certification),
        ("weak identity", weak_identity),
        ("logarithmic averaging inequality", log_lemma),
        ("Duhamel residual", duhamel),
        ("invariant suite", invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
