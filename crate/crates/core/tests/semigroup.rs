use fujita_core::semigroup::{decay_exponent_fit, default_probes, PropagatorSpec};
use fujita_core::spectral::{mass, sup_norm, Exponent, GridSpec};

#[test]
fn kernel_is_self_similar() {
    for (dim, m, points, length) in [(1usize, 1u32, 2048usize, 80.0), (1, 2, 2048, 80.0), (2, 1, 256, 40.0)] {
        let g = GridSpec::new(dim, points, length).unwrap();
        let prop = PropagatorSpec::new(m, g).unwrap();
        let scaled: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&t| {
                let k = prop.kernel_field(t).unwrap();
                assert!(!k.under_resolved);
                sup_norm(k.field.values()) * t.powf(dim as f64 / (2.0 * m as f64))
            })
            .collect();
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 < 0.01, "n={dim} m={m}: {scaled:?}");
    }
}

#[test]
fn kernel_mass_is_one_in_every_setting() {
    for (dim, m) in [(1usize, 1u32), (1, 3), (2, 2), (3, 1)] {
        let points = if dim == 3 { 32 } else { 128 };
        let g = GridSpec::new(dim, points, 20.0).unwrap();
        let k = PropagatorSpec::new(m, g).unwrap().kernel_field(0.7).unwrap();
        assert!((mass(&k.field) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn two_dimensional_decay_rate() {
    let g = GridSpec::new(2, 512, 80.0).unwrap();
    let prop = PropagatorSpec::new(1, g).unwrap();
    let probes = default_probes(g).unwrap();
    let t = [0.5, 1.0, 2.0, 4.0, 8.0];
    let rep = decay_exponent_fit(&prop, Exponent::Finite(1.0), Exponent::Infinity, &t, &probes).unwrap();
    assert!(rep.relative_slope_error() < 0.02, "{}", rep.fitted_slope);
    assert_eq!(rep.theoretical_slope, -1.0);
}
