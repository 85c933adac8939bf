use std::collections::BTreeMap;

/// Order of accuracy of every central stencil built here.
pub const FD_ACCURACY: usize = 8;

/// Finite-difference weights for the `deriv`-th derivative at `z` on the
/// given nodes (Fornberg's recursion).
pub fn fornberg_weights(deriv: usize, z: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > deriv, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; deriv + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}

/// Central weights on offsets `-w..=w` for an even derivative, unit spacing.
pub fn central_weights(deriv: usize) -> Vec<f64> {
    if deriv == 0 {
        return vec![1.0];
    }
    let half = deriv.div_ceil(2) - 1 + FD_ACCURACY / 2;
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|k| k as f64).collect();
    fornberg_weights(deriv, 0.0, &nodes)
}

/// Multi-indices `α ∈ ℕⁿ` with `|α| = m`.
fn multi_indices(n: usize, m: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in multi_indices(n - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Sparse stencil for `Δ^m` in `n` dimensions built from
/// `Δ^m = Σ_{|α|=m} m!/α! ∏ ∂_i^{2α_i}` with 8th-order central factors.
#[derive(Debug, Clone)]
pub struct PolyharmonicStencil {
    pub n: usize,
    pub m: u32,
    entries: Vec<([i64; 3], f64)>,
}

impl PolyharmonicStencil {
    pub fn new(n: usize, m: u32) -> Self {
        assert!((1..=3).contains(&n), "dimension must be 1, 2 or 3");
        let mut acc: BTreeMap<[i64; 3], f64> = BTreeMap::new();
        for alpha in multi_indices(n, m) {
            let coef = factorial(m) / alpha.iter().map(|&a| factorial(a)).product::<f64>();
            let factors: Vec<Vec<f64>> = alpha.iter().map(|&a| central_weights(2 * a as usize)).collect();
            let mut idx = vec![0usize; n];
            loop {
                let mut w = coef;
                let mut off = [0i64; 3];
                for axis in 0..n {
                    let f = &factors[axis];
                    let half = (f.len() / 2) as i64;
                    w *= f[idx[axis]];
                    off[axis] = idx[axis] as i64 - half;
                }
                *acc.entry(off).or_insert(0.0) += w;
                // odometer over the tensor product
                let mut axis = 0;
                loop {
                    if axis == n {
                        break;
                    }
                    idx[axis] += 1;
                    if idx[axis] < factors[axis].len() {
                        break;
                    }
                    idx[axis] = 0;
                    axis += 1;
                }
                if axis == n {
                    break;
                }
            }
        }
        PolyharmonicStencil {
            n,
            m,
            entries: acc.into_iter().filter(|(_, w)| *w != 0.0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest offset along any axis, in steps.
    pub fn reach(&self) -> i64 {
        self.entries
            .iter()
            .flat_map(|(o, _)| o.iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }

    /// `Δ^m f(x)` with step `h`.
    pub fn apply(&self, f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
        let mut y = [0.0; 3];
        let mut sum = 0.0;
        for (off, w) in &self.entries {
            for axis in 0..self.n {
                y[axis] = x[axis] + h * off[axis] as f64;
            }
            sum += w * f(&y[..self.n]);
        }
        sum / h.powi(2 * self.m as i32)
    }
}
