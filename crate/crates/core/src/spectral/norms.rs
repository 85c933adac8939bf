use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::RealField;
use crate::error::{Error, Result};

/// Lebesgue exponent in `[1, ∞]`. Infinity is its own variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: format!("Lebesgue exponent must be >= 1, got {p}"),
            });
        }
        Ok(Exponent::Finite(p))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) => Self::finite(p),
            Exponent::Infinity => Ok(self),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Rectangle-rule `L^p` norm of raw lattice values.
pub fn lp_norm_values(values: &[f64], cell_volume: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => sup_norm(values),
        Exponent::Finite(1.0) => values.iter().map(|v| v.abs()).sum::<f64>() * cell_volume,
        Exponent::Finite(2.0) => (values.iter().map(|v| v * v).sum::<f64>() * cell_volume).sqrt(),
        Exponent::Finite(p) => {
            // scale by the max so that large exponents cannot overflow
            let scale = sup_norm(values);
            if scale == 0.0 {
                return 0.0;
            }
            let sum: f64 = values.iter().map(|v| (v.abs() / scale).powf(p)).sum();
            scale * (sum * cell_volume).powf(1.0 / p)
        }
    }
}

pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `L^p` norm of a field. `p` must be at least 1.
pub fn lp_norm(field: &RealField, p: Exponent) -> Result<f64> {
    let p = p.validate()?;
    Ok(lp_norm_values(field.values(), field.grid().cell_volume(), p))
}

/// Signed integral `Σ u_j · cell_volume`.
pub fn mass(field: &RealField) -> f64 {
    field.values().iter().sum::<f64>() * field.grid().cell_volume()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::GridSpec;

    #[test]
    fn constant_field_norms() {
        let g = GridSpec::new(1, 16, 3.0).unwrap();
        let u = RealField::constant(g, 2.0);
        assert!((lp_norm(&u, Exponent::Finite(1.0)).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(lp_norm(&u, Exponent::Infinity).unwrap(), 2.0);
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let g = GridSpec::new(2, 16, 3.0).unwrap();
        let u = RealField::zeros(g);
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert_eq!(lp_norm(&u, Exponent::Finite(p)).unwrap(), 0.0);
        }
        assert_eq!(lp_norm(&u, Exponent::Infinity).unwrap(), 0.0);
    }

    #[test]
    fn single_cell_spike() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let mut v = vec![0.0; 16];
        v[5] = 1.0;
        let u = RealField::new(g, v).unwrap();
        assert!((lp_norm(&u, Exponent::Finite(1.0)).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(lp_norm(&u, Exponent::Infinity).unwrap(), 1.0);
    }

    #[test]
    fn rejects_sub_unit_exponent() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let u = RealField::zeros(g);
        assert!(lp_norm(&u, Exponent::Finite(0.5)).is_err());
        assert!(Exponent::finite(0.99).is_err());
    }

    #[test]
    fn mass_examples() {
        let g = GridSpec::new(1, 16, 5.0).unwrap();
        assert!((mass(&RealField::constant(g, 1.0)) - 5.0).abs() < 1e-14);
        let l = 5.0;
        let odd = RealField::from_fn(g, |x| (2.0 * PI * x[0] / l).sin()).unwrap();
        assert!(mass(&odd).abs() < 1e-12);
        // exact area of the unit triangle is 1; nodes hit the kinks exactly
        let g = GridSpec::new(1, 1024, 10.0).unwrap();
        let tri = RealField::from_fn(g, |x| (1.0 - x[0].abs()).max(0.0)).unwrap();
        assert!((mass(&tri) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn generic_exponent_matches_direct_sum() {
        let g = GridSpec::new(1, 64, 4.0).unwrap();
        let u = RealField::from_fn(g, |x| (x[0] * 1.3).cos() + 0.2).unwrap();
        let p = 3.5;
        let direct = (u.values().iter().map(|v| v.abs().powf(p)).sum::<f64>() * g.cell_volume()).powf(1.0 / p);
        let got = lp_norm(&u, Exponent::Finite(p)).unwrap();
        assert!((got - direct).abs() < 1e-13 * direct);
    }
}
