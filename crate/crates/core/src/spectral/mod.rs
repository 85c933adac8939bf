//! Periodic-box discretization: grids, fields, FFTs, multipliers and
//! rectangle-rule Lebesgue norms.

mod field;
mod grid;
pub mod io;
mod norms;
mod transform;

pub use field::{FourierSymbol, RealField, SpectralCoeffs};
pub use grid::GridSpec;
pub use norms::{lp_norm, lp_norm_values, mass, sup_norm, Exponent};
pub use transform::SpectralPlan;

/// Transform direction for [`transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Either side of the discrete Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Physical(RealField),
    Spectral(SpectralCoeffs),
}

/// Direction-checked transform between physical and spectral space.
pub fn transform(input: &Representation, direction: Direction) -> crate::Result<Representation> {
    match (input, direction) {
        (Representation::Physical(u), Direction::Forward) => Ok(Representation::Spectral(u.forward())),
        (Representation::Spectral(c), Direction::Inverse) => Ok(Representation::Physical(c.inverse()?)),
        _ => Err(crate::Error::InvalidParameter {
            name: "direction",
            reason: "forward takes a real field, inverse takes coefficients".into(),
        }),
    }
}
