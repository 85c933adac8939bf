use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Smallest admissible exponent `ceil(2m p')`.
pub fn min_exponent(m: u32, p: f64) -> u32 {
    let p_prime = p / (p - 1.0);
    // guard against 2m·p' landing a hair above an integer
    (2.0 * m as f64 * p_prime - 1e-9).ceil() as u32
}

/// Parameters of the cutoff pair `ψ_R = φ(s_R)^l`, `ψ_R* = φ*(s_R)^l` with
/// `s_R = (|x|^{2m} + t)/R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub r: f64,
    pub m: u32,
    pub p: f64,
    pub p_prime: f64,
    pub l: u32,
}

impl CutoffSpec {
    /// Spec with the smallest admissible `l`.
    pub fn new(r: f64, m: u32, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(invalid("p", "p must exceed 1"));
        }
        Self::with_exponent(r, m, p, min_exponent(m, p))
    }

    pub fn with_exponent(r: f64, m: u32, p: f64, l: u32) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("R", "scale must be positive"));
        }
        if m < 1 {
            return Err(invalid("m", "operator order must be >= 1"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(invalid("p", "p must exceed 1"));
        }
        let least = min_exponent(m, p);
        if l < least {
            return Err(invalid("l", format!("need l >= ceil(2m p') = {least}, got {l}")));
        }
        Ok(CutoffSpec {
            r,
            m,
            p,
            p_prime: p / (p - 1.0),
            l,
        })
    }

    /// Same exponents at another scale.
    pub fn at_scale(&self, r: f64) -> Result<Self> {
        Self::with_exponent(r, self.m, self.p, self.l)
    }

    /// `(|x|^{2m} + t) / R`.
    pub fn s(&self, x: &[f64], t: f64) -> f64 {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        (r2.powi(self.m as i32) + t) / self.r
    }

    /// Radius of the spatial support at `t = 0`.
    pub fn support_radius(&self) -> f64 {
        self.r.powf(0.5 / self.m as f64)
    }

    pub fn psi(&self, x: &[f64], t: f64) -> f64 {
        bump(self.s(x, t)).powi(self.l as i32)
    }

    pub fn psi_star(&self, x: &[f64], t: f64) -> f64 {
        let s = self.s(x, t);
        if s < 0.5 {
            0.0
        } else {
            bump(s).powi(self.l as i32)
        }
    }

    /// `∂_t ψ_R = l φ^{l-1}(s_R) φ'(s_R) / R`.
    pub fn dpsi_dt(&self, x: &[f64], t: f64) -> f64 {
        let s = self.s(x, t);
        if s <= 0.5 || s >= 1.0 {
            return 0.0;
        }
        let l = self.l as f64;
        l * bump(s).powi(self.l as i32 - 1) * bump_derivative(s) / self.r
    }
}

/// `σ(q) = 1/(1+e^{-q})` without overflow.
fn logistic(q: f64) -> f64 {
    if q >= 0.0 {
        1.0 / (1.0 + (-q).exp())
    } else {
        let e = q.exp();
        e / (1.0 + e)
    }
}

/// `q(θ) = 1/(1-θ) - 1/θ`, so that `g(θ) = σ(-q(θ))`.
fn bridge_arg(theta: f64) -> f64 {
    1.0 / (1.0 - theta) - 1.0 / theta
}

/// The bump `φ` without the domain check.
pub(crate) fn bump(s: f64) -> f64 {
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        logistic(-bridge_arg(2.0 * s - 1.0))
    }
}

/// `φ'(s)`, zero outside `(1/2, 1)`.
pub fn bump_derivative(s: f64) -> f64 {
    if s <= 0.5 || s >= 1.0 {
        return 0.0;
    }
    let theta = 2.0 * s - 1.0;
    let q = bridge_arg(theta);
    let dq = 1.0 / ((1.0 - theta) * (1.0 - theta)) + 1.0 / (theta * theta);
    -2.0 * logistic(q) * logistic(-q) * dq
}

/// `φ(s)`: 1 on `[0, 1/2]`, 0 on `[1, ∞)`, and in between the bridge
/// `g(θ) = h(1-θ)/(h(θ)+h(1-θ))`, `h(θ) = e^{-1/θ}`, at `θ = 2s - 1`.
pub fn bump_profile(s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid("s", format!("bump argument must be >= 0, got {s}")));
    }
    Ok(bump(s))
}

/// `ψ_R(x, t)` or, with `starred`, `ψ_R*(x, t)`.
pub fn cutoff_eval(x: &[f64], t: f64, spec: &CutoffSpec, starred: bool) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(invalid("t", "time must be >= 0"));
    }
    Ok(if starred { spec.psi_star(x, t) } else { spec.psi(x, t) })
}
