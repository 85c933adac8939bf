//! Strategies and property bodies shared by the property tests and the
//! acceptance run.
#![allow(dead_code)]

use fujita_core::harness::{classify_regime, m_functional_check, sweep_epsilon, DomainPolicy};
use fujita_core::integrator::{evolve, InitialProfile, SimParams};
use fujita_core::semigroup::PropagatorSpec;
use fujita_core::spectral::{lp_norm, lp_norm_values, mass, Exponent, GridSpec, RealField};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub type Check = std::result::Result<(), TestCaseError>;

/// Random field on a random 1-D or 2-D grid.
pub fn field(max_points_log2: u32) -> impl Strategy<Value = RealField> {
    (1usize..=2, 4u32..=max_points_log2, 2.0f64..60.0).prop_flat_map(|(dim, k, length)| {
        let points = if dim == 2 { 1usize << k.min(6) } else { 1usize << k };
        let grid = GridSpec::new(dim, points, length).unwrap();
        prop::collection::vec(-1.0f64..1.0, grid.len()).prop_map(move |v| RealField::new(grid, v).unwrap())
    })
}

/// Random 1-D field with up to 512 points.
pub fn line_field() -> impl Strategy<Value = RealField> {
    (4u32..=9, 2.0f64..60.0).prop_flat_map(|(k, length)| {
        let grid = GridSpec::new(1, 1 << k, length).unwrap();
        prop::collection::vec(-1.0f64..1.0, grid.len()).prop_map(move |v| RealField::new(grid, v).unwrap())
    })
}

pub fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::Finite(1.0)),
        Just(Exponent::Finite(2.0)),
        (1.0f64..8.0).prop_map(Exponent::Finite),
        Just(Exponent::Infinity),
    ]
}

pub fn parseval(u: &RealField) -> Check {
    let g = u.grid();
    let physical: f64 = u.values().iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
    let spectral: f64 =
        u.forward().coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() * g.length().powi(g.dim() as i32);
    prop_assert!(
        (physical - spectral).abs() <= 1e-10 * physical.max(f64::MIN_POSITIVE),
        "{physical} vs {spectral}"
    );
    Ok(())
}

pub fn round_trip(u: &RealField) -> Check {
    let back = u.forward().inverse().unwrap();
    let err = back.max_abs_diff(u).unwrap();
    prop_assert!(err <= 1e-12, "round trip error {err}");
    Ok(())
}

pub fn homogeneity(u: &RealField, c: f64, p: Exponent) -> Check {
    let a = lp_norm(&u.scaled(c), p).unwrap();
    let b = c.abs() * lp_norm(u, p).unwrap();
    prop_assert!((a - b).abs() <= 1e-12 * b.max(f64::MIN_POSITIVE), "{a} vs {b}");
    Ok(())
}

/// `Σ|u| w^{1/p} cv ≤ (Σ|u|^p w cv)^{1/p} (Σ_{w>0} cv)^{1/p'}`.
pub fn holder(u: &RealField, w: &[f64], p: f64) -> Check {
    let cv = u.grid().cell_volume();
    let lhs: f64 = u
        .values()
        .iter()
        .zip(w)
        .map(|(v, w)| v.abs() * w.powf(1.0 / p))
        .sum::<f64>()
        * cv;
    let weighted: f64 = u.values().iter().zip(w).map(|(v, w)| v.abs().powf(p) * w).sum::<f64>() * cv;
    let support = w.iter().filter(|&&w| w > 0.0).count() as f64 * cv;
    let rhs = weighted.powf(1.0 / p) * support.powf(1.0 - 1.0 / p);
    prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300, "{lhs} > {rhs}");
    Ok(())
}

pub fn semigroup_law(u: &RealField, m: u32, s: f64, t: f64) -> Check {
    let prop = PropagatorSpec::new(m, *u.grid()).unwrap();
    let two_step = prop.propagate(&prop.propagate(u, s).unwrap(), t).unwrap();
    let one_step = prop.propagate(u, s + t).unwrap();
    let err = two_step.max_abs_diff(&one_step).unwrap();
    prop_assert!(err < 1e-12, "semigroup law defect {err}");
    Ok(())
}

pub fn l2_contraction(u: &RealField, m: u32, t: f64) -> Check {
    let prop = PropagatorSpec::new(m, *u.grid()).unwrap();
    let before = lp_norm(u, Exponent::Finite(2.0)).unwrap();
    let after = lp_norm(&prop.propagate(u, t).unwrap(), Exponent::Finite(2.0)).unwrap();
    prop_assert!(after <= before + 1e-12, "{after} > {before}");
    Ok(())
}

pub fn mass_conservation(u: &RealField, m: u32, t: f64) -> Check {
    let prop = PropagatorSpec::new(m, *u.grid()).unwrap();
    let before = mass(u);
    let after = mass(&prop.propagate(u, t).unwrap());
    // relative to the L¹ scale: random signed fields can have near-zero mass
    let scale = lp_norm_values(u.values(), u.grid().cell_volume(), Exponent::Finite(1.0));
    prop_assert!((after - before).abs() <= 1e-12 * scale, "{before} -> {after}");
    Ok(())
}

/// A short nonlinear run with random data.
pub fn small_run() -> impl Strategy<Value = SimParams> {
    (1u32..=2, 1.5f64..3.5, 0.05f64..2.0, 0.5f64..2.0, 1.0f64..10.0).prop_map(|(m, p, eps, width, t_end)| {
        let g = GridSpec::new(1, 128, 40.0).unwrap();
        let mut params = SimParams::new(m, p, g, eps, InitialProfile::Gaussian { mass: 1.0, width }, t_end);
        params.snapshots.uniform_levels = 16;
        params
    })
}

pub fn m_monotone(params: &SimParams) -> Check {
    let traj = evolve(params).unwrap();
    let regime = classify_regime(1, params.m, params.p).unwrap();
    let trace = m_functional_check(&traj, &regime).unwrap();
    prop_assert!(trace.is_monotone());
    let u0 = params.initial_field().unwrap();
    let expected = mass(&u0) + lp_norm(&u0, Exponent::Infinity).unwrap();
    prop_assert!((trace.m_values[0] - expected).abs() <= 1e-12 * expected);
    Ok(())
}

/// Three decreasing amplitudes for a quick subcritical sweep.
pub fn eps_triple() -> impl Strategy<Value = [f64; 3]> {
    (0.3f64..1.0, 0.5f64..0.9, 0.5f64..0.9).prop_map(|(a, r1, r2)| [a, a * r1, a * r1 * r2])
}

pub fn lifespan_monotone(eps: &[f64; 3]) -> Check {
    let g = GridSpec::new(1, 16, 1.0).unwrap();
    let base = SimParams::new(1, 2.0, g, 1.0, InitialProfile::default(), 1.0);
    let table = sweep_epsilon(&base, eps, &DomainPolicy::default()).unwrap();
    if table.all_converged() {
        for w in table.rows.windows(2) {
            prop_assert!(w[1].t_eps > w[0].t_eps, "{:?}", table.rows);
        }
    }
    Ok(())
}

/// Runs `check` on `cases` draws from `strategy`; `Err` carries the failure.
pub fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Check,
) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}
