use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Tolerance on `|p - p_fuj|` for the critical case.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeInfo {
    pub n: usize,
    pub m: u32,
    pub p: f64,
    /// `1 + 2m/n`.
    pub p_fuj: f64,
    pub regime: Regime,
    /// `-(1/(p-1) - n/2m)^{-1}`, subcritical only.
    pub theoretical_exponent: Option<f64>,
    /// `p - 1` in `log T ~ ε^{-(p-1)}`, critical only.
    pub critical_rate: Option<f64>,
}

impl RegimeInfo {
    /// `p_fuj` as the reduced fraction `(n + 2m) / n`.
    pub fn p_fuj_ratio(&self) -> (u64, u64) {
        let num = self.n as u64 + 2 * self.m as u64;
        let den = self.n as u64;
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// Lifespan predicted by the regime's law with unit constant.
    ///
    /// `None` in the supercritical regime. The critical law is capped at
    /// `e^{700}` to stay finite.
    pub fn predicted_lifespan(&self, epsilon: f64) -> Option<f64> {
        match self.regime {
            Regime::Subcritical => Some(epsilon.powf(self.theoretical_exponent?)),
            Regime::Critical => Some(epsilon.powf(-(self.p - 1.0)).min(700.0).exp()),
            Regime::Supercritical => None,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn classify_regime(n: usize, m: u32, p: f64) -> Result<RegimeInfo> {
    if n < 1 {
        return Err(invalid("n", "dimension must be >= 1"));
    }
    if m < 1 {
        return Err(invalid("m", "operator order must be >= 1"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid("p", "p must exceed 1"));
    }
    let two_m = 2.0 * m as f64;
    let nf = n as f64;
    let p_fuj = (nf + two_m) / nf;
    let regime = if (p - p_fuj).abs() < CRITICAL_TOLERANCE {
        Regime::Critical
    } else if p < p_fuj {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    let theoretical_exponent = (regime == Regime::Subcritical).then(|| -two_m * (p - 1.0) / (two_m - nf * (p - 1.0)));
    let critical_rate = (regime == Regime::Critical).then_some(p - 1.0);
    Ok(RegimeInfo {
        n,
        m,
        p,
        p_fuj,
        regime,
        theoretical_exponent,
        critical_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = classify_regime(1, 1, 2.0).unwrap();
        assert_eq!(r.p_fuj, 3.0);
        assert_eq!(r.regime, Regime::Subcritical);
        assert_eq!(r.theoretical_exponent, Some(-2.0));
        assert_eq!(r.critical_rate, None);

        let r = classify_regime(2, 1, 2.0).unwrap();
        assert_eq!(r.regime, Regime::Critical);
        assert_eq!(r.critical_rate, Some(1.0));
        assert_eq!(r.theoretical_exponent, None);

        let r = classify_regime(1, 2, 6.0).unwrap();
        assert_eq!(r.p_fuj, 5.0);
        assert_eq!(r.regime, Regime::Supercritical);

        let r = classify_regime(1, 2, 2.0).unwrap();
        assert!((r.theoretical_exponent.unwrap() + 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn critical_within_tolerance() {
        let r = classify_regime(3, 1, 1.0 + 2.0 / 3.0).unwrap();
        assert_eq!(r.regime, Regime::Critical);
        assert_eq!(r.p_fuj_ratio(), (5, 3));
        assert_eq!(classify_regime(2, 2, 3.0).unwrap().p_fuj_ratio(), (3, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(classify_regime(1, 1, 1.0).is_err());
        assert!(classify_regime(0, 1, 2.0).is_err());
        assert!(classify_regime(1, 0, 2.0).is_err());
    }

    #[test]
    fn predicted_lifespans() {
        let r = classify_regime(1, 1, 2.0).unwrap();
        assert!((r.predicted_lifespan(0.1).unwrap() - 100.0).abs() < 1e-9);
        let r = classify_regime(1, 1, 3.0).unwrap();
        assert!((r.predicted_lifespan(0.5).unwrap() - 4f64.exp()).abs() < 1e-9);
        assert!(classify_regime(1, 1, 4.0).unwrap().predicted_lifespan(0.1).is_none());
    }
}
