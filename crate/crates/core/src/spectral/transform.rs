use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::GridSpec;

/// Reusable forward/inverse n-dimensional FFT for one grid.
///
/// Forward output is divided by `N^n`, so the zero mode is the mean and
/// `inverse(forward(u)) = u`.
#[derive(Clone)]
pub struct SpectralPlan {
    grid: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan").field("grid", &self.grid).finish()
    }
}

impl SpectralPlan {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        SpectralPlan {
            grid,
            forward: planner.plan_fft_forward(grid.points()),
            inverse: planner.plan_fft_inverse(grid.points()),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.inverse_in_place(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.run_axes(buf, &*self.forward);
        let scale = 1.0 / self.grid.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.run_axes(buf, &*self.inverse);
    }

    fn run_axes(&self, buf: &mut [Complex64], fft: &dyn Fft<f64>) {
        assert_eq!(buf.len(), self.grid.len());
        let n = self.grid.points();
        let dim = self.grid.dim();
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // last axis is contiguous
        fft.process_with_scratch(buf, &mut scratch);
        if dim == 1 {
            return;
        }
        let mut line = vec![Complex64::default(); n];
        for axis in 0..dim - 1 {
            let stride = n.pow((dim - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..buf.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = buf[start + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, value) in line.iter().enumerate() {
                        buf[start + i * stride] = *value;
                    }
                }
            }
        }
    }
}
