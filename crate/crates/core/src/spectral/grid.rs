use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic lattice on the box `[-L/2, L/2)^n`.
///
/// Values are stored row-major with the last axis varying fastest. Frequency
/// indices follow the FFT layout: storage index `j` maps to the signed
/// wavenumber `k = j` for `j < N/2` and `k = j - N` otherwise, so the range is
/// `-N/2..N/2-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    points: usize,
    length: f64,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    pub fn new(dim: usize, points: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if points < Self::MIN_POINTS || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two >= {}, got {points}",
                Self::MIN_POINTS
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {length}")));
        }
        Ok(GridSpec { dim, points, length })
    }

    /// Spatial dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis `N`.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Box side length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Total number of lattice points, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Physical coordinate of index `j` along one axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coordinate(j)).collect()
    }

    /// Signed integer wavenumber of storage index `j` along one axis.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.points as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Angular frequency `ξ = 2πk/L` of storage index `j` along one axis.
    pub fn frequency(&self, j: usize) -> f64 {
        2.0 * PI * self.wavenumber(j) as f64 / self.length
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.frequency(j)).collect()
    }

    /// Largest frequency magnitude on one axis (the Nyquist mode).
    pub fn max_frequency(&self) -> f64 {
        PI * self.points as f64 / self.length
    }

    /// Per-axis indices of a flat storage index.
    pub fn unravel(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            idx[axis] = rem % self.points;
            rem /= self.points;
        }
        idx
    }

    /// Physical position of a flat storage index (unused axes are zero).
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = self.coordinate(idx[axis]);
        }
        x
    }

    /// Frequency vector of a flat storage index (unused axes are zero).
    pub fn frequency_vector(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let mut xi = [0.0; 3];
        for axis in 0..self.dim {
            xi[axis] = self.frequency(idx[axis]);
        }
        xi
    }

    /// Flat index of the lattice point at the origin.
    pub fn origin_index(&self) -> usize {
        let half = self.points / 2;
        (0..self.dim).fold(0, |acc, _| acc * self.points + half)
    }

    /// Flat index of the point mirrored through the origin, `x -> -x`.
    pub fn mirror_index(&self, flat: usize) -> usize {
        let idx = self.unravel(flat);
        (0..self.dim).fold(0, |acc, axis| {
            acc * self.points + (self.points - idx[axis]) % self.points
        })
    }

    /// Same box with the point count per axis doubled.
    pub fn refined(&self) -> Self {
        GridSpec {
            points: self.points * 2,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_volume_matches_definition() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        assert_eq!(g.cell_volume(), 1.0 / 16.0);
        let g = GridSpec::new(2, 32, 10.0).unwrap();
        assert_eq!(g.len(), 1024);
        assert_eq!(g.cell_volume(), (10.0f64 / 32.0).powi(2));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(GridSpec::new(1, 17, 1.0).is_err());
        assert!(GridSpec::new(1, 8, 1.0).is_err());
        assert!(GridSpec::new(1, 16, 0.0).is_err());
        assert!(GridSpec::new(1, 16, -2.0).is_err());
        assert!(GridSpec::new(4, 16, 1.0).is_err());
        assert!(GridSpec::new(0, 16, 1.0).is_err());
    }

    #[test]
    fn box_is_centered() {
        let g = GridSpec::new(1, 16, 4.0).unwrap();
        assert_eq!(g.coordinate(0), -2.0);
        assert_eq!(g.coordinate(8), 0.0);
        assert_eq!(g.position(g.origin_index())[0], 0.0);
        let g3 = GridSpec::new(3, 16, 4.0).unwrap();
        assert_eq!(g3.position(g3.origin_index()), [0.0; 3]);
    }

    #[test]
    fn frequency_layout() {
        let g = GridSpec::new(1, 16, 2.0 * PI).unwrap();
        assert_eq!(g.wavenumber(0), 0);
        assert_eq!(g.wavenumber(7), 7);
        assert_eq!(g.wavenumber(8), -8);
        assert_eq!(g.wavenumber(15), -1);
        assert!((g.frequency(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mirror_is_an_involution() {
        let g = GridSpec::new(2, 16, 3.0).unwrap();
        for flat in 0..g.len() {
            let m = g.mirror_index(flat);
            assert_eq!(g.mirror_index(m), flat);
            let (x, y) = (g.position(flat), g.position(m));
            // index 0 (x = -L/2) is its own mirror on a periodic lattice
            for a in 0..2 {
                let s = x[a] + y[a];
                assert!(s.abs() < 1e-12 || (s + 3.0).abs() < 1e-12);
            }
        }
    }
}
