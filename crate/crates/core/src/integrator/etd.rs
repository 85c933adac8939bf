use num_complex::Complex64;

use super::params::{Nonlinearity, Scheme};
use super::phi::phi_functions;
use crate::error::{invalid, Result};
use crate::semigroup::PropagatorSpec;
use crate::spectral::RealField;

/// Per-mode coefficients of one step size.
struct StepCoeffs {
    h: f64,
    /// `e^{-hσ}`
    full: Vec<f64>,
    /// `e^{-hσ/2}`
    half: Vec<f64>,
    /// `(h/2) φ₁(-hσ/2)`
    half_phi1: Vec<f64>,
    /// `h φ₁(-hσ)` (ETD1 weight)
    phi1: Vec<f64>,
    /// `h (φ₁ - 3φ₂ + 4φ₃)`
    f1: Vec<f64>,
    /// `2h (φ₂ - 2φ₃)`
    f2: Vec<f64>,
    /// `h (4φ₃ - φ₂)`
    f3: Vec<f64>,
}

impl StepCoeffs {
    fn new(symbol: &[f64], h: f64) -> Self {
        let len = symbol.len();
        let mut c = StepCoeffs {
            h,
            full: Vec::with_capacity(len),
            half: Vec::with_capacity(len),
            half_phi1: Vec::with_capacity(len),
            phi1: Vec::with_capacity(len),
            f1: Vec::with_capacity(len),
            f2: Vec::with_capacity(len),
            f3: Vec::with_capacity(len),
        };
        for &s in symbol {
            let z = -h * s;
            let [p1, p2, p3] = phi_functions(z);
            let [q1, _, _] = phi_functions(0.5 * z);
            c.full.push(z.exp());
            c.half.push((0.5 * z).exp());
            c.half_phi1.push(0.5 * h * q1);
            c.phi1.push(h * p1);
            c.f1.push(h * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(2.0 * h * (p2 - 2.0 * p3));
            c.f3.push(h * (4.0 * p3 - p2));
        }
        c
    }
}

const CACHE_SLOTS: usize = 8;

/// Result of one attempted step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Finite(RealField),
    /// An intermediate or final value overflowed; the caller should treat this
    /// as candidate blow-up and retry with a smaller step.
    NonFinite,
}

/// Exponential time-differencing stepper for `u_t = -(-Δ)^m u + N(u)`.
///
/// Keeps the current state in both physical and spectral form plus a small
/// cache of per-step-size coefficient tables.
pub struct EtdStepper<'a> {
    prop: &'a PropagatorSpec,
    p: f64,
    source: Nonlinearity,
    scheme: Scheme,
    keep: Option<Vec<bool>>,
    cache: Vec<StepCoeffs>,
}

/// Current solution in both representations.
#[derive(Clone)]
pub struct State {
    pub physical: Vec<f64>,
    pub spectral: Vec<Complex64>,
}

impl<'a> EtdStepper<'a> {
    pub fn new(prop: &'a PropagatorSpec, p: f64, source: Nonlinearity, scheme: Scheme, dealias: bool) -> Self {
        let keep = dealias.then(|| {
            let grid = prop.grid();
            let cutoff = grid.points() as i64 / 3;
            (0..grid.len())
                .map(|flat| {
                    let idx = grid.unravel(flat);
                    idx[..grid.dim()].iter().all(|&j| grid.wavenumber(j).abs() <= cutoff)
                })
                .collect()
        });
        EtdStepper {
            prop,
            p,
            source,
            scheme,
            keep,
            cache: Vec::with_capacity(CACHE_SLOTS),
        }
    }

    pub fn state(&self, physical: Vec<f64>) -> State {
        let spectral = self.prop.plan().forward(&physical);
        State { physical, spectral }
    }

    fn coeffs(&mut self, h: f64) -> usize {
        if let Some(i) = self.cache.iter().position(|c| c.h == h) {
            return i;
        }
        if self.cache.len() == CACHE_SLOTS {
            self.cache.remove(0);
        }
        self.cache.push(StepCoeffs::new(self.prop.symbol().values(), h));
        self.cache.len() - 1
    }

    /// Spectral source `N̂(v)` from physical values.
    fn source_hat(&self, physical: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = match self.source {
            Nonlinearity::Off => return vec![Complex64::default(); physical.len()],
            Nonlinearity::Power => physical
                .iter()
                .map(|&v| Complex64::new(power(v, self.p), 0.0))
                .collect(),
        };
        self.prop.plan().forward_in_place(&mut buf);
        if let Some(keep) = &self.keep {
            for (c, &k) in buf.iter_mut().zip(keep) {
                if !k {
                    *c = Complex64::default();
                }
            }
        }
        buf
    }

    fn to_physical(&self, spectral: &[Complex64]) -> Vec<f64> {
        self.prop.plan().inverse(spectral)
    }

    /// Advances `state` by `h`. Returns `None` on non-finite values.
    pub fn advance(&mut self, state: &State, h: f64) -> Option<State> {
        let slot = self.coeffs(h);
        let n_u = self.source_hat(&state.physical);
        let u = &state.spectral;
        let spectral: Vec<Complex64> = match self.scheme {
            Scheme::Etd1 => {
                let c = &self.cache[slot];
                u.iter()
                    .zip(&n_u)
                    .enumerate()
                    .map(|(k, (uk, nk))| uk * c.full[k] + nk * c.phi1[k])
                    .collect()
            }
            Scheme::Etdrk4 => {
                let a: Vec<Complex64> = {
                    let c = &self.cache[slot];
                    (0..u.len())
                        .map(|k| u[k] * c.half[k] + n_u[k] * c.half_phi1[k])
                        .collect()
                };
                let a_phys = self.to_physical(&a);
                if !all_finite(&a_phys) {
                    return None;
                }
                let n_a = self.source_hat(&a_phys);
                let b: Vec<Complex64> = {
                    let c = &self.cache[slot];
                    (0..u.len())
                        .map(|k| u[k] * c.half[k] + n_a[k] * c.half_phi1[k])
                        .collect()
                };
                let b_phys = self.to_physical(&b);
                if !all_finite(&b_phys) {
                    return None;
                }
                let n_b = self.source_hat(&b_phys);
                let cc: Vec<Complex64> = {
                    let c = &self.cache[slot];
                    (0..u.len())
                        .map(|k| a[k] * c.half[k] + (n_b[k] * 2.0 - n_u[k]) * c.half_phi1[k])
                        .collect()
                };
                let c_phys = self.to_physical(&cc);
                if !all_finite(&c_phys) {
                    return None;
                }
                let n_c = self.source_hat(&c_phys);
                let c = &self.cache[slot];
                (0..u.len())
                    .map(|k| u[k] * c.full[k] + n_u[k] * c.f1[k] + (n_a[k] + n_b[k]) * c.f2[k] + n_c[k] * c.f3[k])
                    .collect()
            }
        };
        let physical = self.to_physical(&spectral);
        if !all_finite(&physical) {
            return None;
        }
        Some(State { physical, spectral })
    }
}

fn all_finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}

/// `|v|^p`, with fast paths for small integer exponents.
pub(crate) fn power(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else if p == 3.0 {
        let a = v.abs();
        a * a * a
    } else if p.fract() == 0.0 && p < 64.0 {
        v.abs().powi(p as i32)
    } else {
        v.abs().powf(p)
    }
}

/// One ETD step of `u_t + (-Δ)^m u = |u|^p` from `u`.
pub fn etd_step(
    u: &RealField,
    h: f64,
    prop: &PropagatorSpec,
    p: f64,
    scheme: Scheme,
    source: Nonlinearity,
) -> Result<StepOutcome> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("h", "step must be positive"));
    }
    if u.grid() != prop.grid() {
        return Err(crate::Error::GridMismatch);
    }
    let mut stepper = EtdStepper::new(prop, p, source, scheme, false);
    let state = stepper.state(u.values().to_vec());
    Ok(match stepper.advance(&state, h) {
        Some(next) => StepOutcome::Finite(RealField::new_unchecked(*prop.grid(), next.physical)),
        None => StepOutcome::NonFinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    fn finite(o: StepOutcome) -> RealField {
        match o {
            StepOutcome::Finite(f) => f,
            StepOutcome::NonFinite => panic!("unexpected overflow"),
        }
    }

    #[test]
    fn linear_part_only_matches_propagate() {
        let g = GridSpec::new(1, 128, 20.0).unwrap();
        let prop = PropagatorSpec::new(2, g).unwrap();
        let u = RealField::from_fn(g, |x| (-x[0] * x[0]).exp() * (1.0 + 0.5 * x[0])).unwrap();
        let exact = prop.propagate(&u, 0.3).unwrap();
        for scheme in [Scheme::Etd1, Scheme::Etdrk4] {
            let out = finite(etd_step(&u, 0.3, &prop, 2.0, scheme, Nonlinearity::Off).unwrap());
            assert!(out.max_abs_diff(&exact).unwrap() < 1e-12);
        }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = GridSpec::new(2, 16, 5.0).unwrap();
        let prop = PropagatorSpec::new(1, g).unwrap();
        let u = RealField::zeros(g);
        for scheme in [Scheme::Etd1, Scheme::Etdrk4] {
            let out = finite(etd_step(&u, 0.5, &prop, 2.0, scheme, Nonlinearity::Power).unwrap());
            assert!(out.values().iter().all(|&v| v == 0.0));
        }
    }

    /// Classical RK4 on the scalar ODE u' = u^p.
    fn rk4_scalar(u: f64, h: f64, p: f64) -> f64 {
        let f = |v: f64| v.abs().powf(p);
        let k1 = f(u);
        let k2 = f(u + 0.5 * h * k1);
        let k3 = f(u + 0.5 * h * k2);
        let k4 = f(u + h * k3);
        u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    }

    #[test]
    fn constant_field_reduces_to_rk4() {
        let g = GridSpec::new(1, 32, 10.0).unwrap();
        let prop = PropagatorSpec::new(1, g).unwrap();
        for &(c, h, p) in &[(0.3, 0.1, 2.0), (1.2, 0.05, 3.0), (0.7, 0.2, 2.5)] {
            let u = RealField::constant(g, c);
            let out = finite(etd_step(&u, h, &prop, p, Scheme::Etdrk4, Nonlinearity::Power).unwrap());
            let want = rk4_scalar(c, h, p);
            for &v in out.values() {
                assert!((v - want).abs() < 1e-13 * want, "{v} vs {want}");
            }
        }
    }

    #[test]
    fn overflow_is_reported_not_raised() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let prop = PropagatorSpec::new(1, g).unwrap();
        let u = RealField::constant(g, 1e200);
        let out = etd_step(&u, 1.0, &prop, 2.0, Scheme::Etdrk4, Nonlinearity::Power).unwrap();
        assert_eq!(out, StepOutcome::NonFinite);
    }

    #[test]
    fn rejects_nonpositive_step() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let prop = PropagatorSpec::new(1, g).unwrap();
        let u = RealField::zeros(g);
        assert!(etd_step(&u, 0.0, &prop, 2.0, Scheme::Etd1, Nonlinearity::Power).is_err());
    }
}
