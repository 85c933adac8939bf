//! `φ`-functions of exponential integrators for real, nonpositive arguments.
//!
//! `φ₁(z) = (e^z - 1)/z`, `φ₂(z) = (e^z - 1 - z)/z²`,
//! `φ₃(z) = (e^z - 1 - z - z²/2)/z³`, continuously extended at 0.

/// Below this magnitude the Taylor series is used.
const TAYLOR_RADIUS: f64 = 0.5;
const TAYLOR_DEGREE: usize = 12;

/// Returns `[φ₁(z), φ₂(z), φ₃(z)]`.
///
/// Intended for `z <= 0`; positive arguments are evaluated with the same
/// formulas but without an accuracy guarantee for large `z`.
pub fn phi_functions(z: f64) -> [f64; 3] {
    if z.abs() <= TAYLOR_RADIUS {
        taylor(z)
    } else if z == f64::NEG_INFINITY {
        [0.0, 0.0, 0.0]
    } else {
        let em1 = z.exp_m1();
        let phi1 = em1 / z;
        let phi2 = (em1 - z) / (z * z);
        let phi3 = (em1 - z - 0.5 * z * z) / (z * z * z);
        [phi1, phi2, phi3]
    }
}

/// `φ_k(z) = Σ_j z^j / (j+k)!`, truncated at degree 12.
fn taylor(z: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let k = k + 1;
        // Horner from the highest term: coefficient of z^j is 1/(j+k)!
        let mut acc = 1.0;
        for j in (1..=TAYLOR_DEGREE).rev() {
            acc = acc * z / (j + k) as f64 + 1.0;
        }
        *slot = acc / factorial(k);
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
