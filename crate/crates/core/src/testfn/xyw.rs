use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use super::quad::time_nodes;
use super::weak::check_support;
use crate::error::{invalid, Error, Result};
use crate::integrator::Trajectory;
use crate::spectral::io::fmt_f64;

/// Ratio of successive radii on the `r`-grid.
pub const R_GRID_RATIO: f64 = 1.189_207_115_002_721; // 2^{1/4}
pub const MIN_R_POINTS: usize = 16;
/// Relative slack granted to `(2/log 2) W(R) ≤ X(R)` for quadrature error.
pub const LOG_LEMMA_SLACK: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XYWRecord {
    pub r: f64,
    /// `∫∫ |u|^p ψ_r`.
    pub x: f64,
    /// `∫∫ |u|^p ψ_r*`.
    pub y: f64,
    /// `∫₀^r Y(ρ) dρ/ρ`.
    pub w: f64,
    /// `∫∫ |u| (ψ_r*)^{1/p}`.
    pub holder_lhs: f64,
    /// `Y^{1/p} · |{1/2 ≤ s_r < 1}|^{1/p'}` in the lattice measure.
    pub holder_rhs: f64,
    pub log_lemma_holds: bool,
    pub holder_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XywReport {
    pub records: Vec<XYWRecord>,
    /// Last time level used by the space-time quadrature.
    pub t_last: f64,
}

impl XywReport {
    pub fn log_lemma_holds(&self) -> bool {
        self.records.iter().all(|r| r.log_lemma_holds)
    }

    pub fn holder_holds(&self) -> bool {
        self.records.iter().all(|r| r.holder_holds)
    }

    /// CSV with columns `r, X, Y, W, holder_lhs, holder_rhs, log_lemma, holder`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r,X,Y,W,holder_lhs,holder_rhs,log_lemma,holder")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_f64(r.r),
                fmt_f64(r.x),
                fmt_f64(r.y),
                fmt_f64(r.w),
                fmt_f64(r.holder_lhs),
                fmt_f64(r.holder_rhs),
                r.log_lemma_holds,
                r.holder_holds
            )?;
        }
        Ok(())
    }
}

/// Geometric grid `R·2^{-k/4}`, ascending, ending at `R`.
pub fn r_grid(r_max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| r_max * R_GRID_RATIO.powi(-((points - 1 - k) as i32)))
        .collect()
}

struct Integrals {
    x: f64,
    y: f64,
    holder_lhs: f64,
    volume: f64,
}

/// Checks the averaging inequality `(2/log 2) W(r) ≤ X(r)` and the Hölder
/// step on a geometric `r`-grid up to `spec.r`.
///
/// Integrals run over the stored uniform time levels (trapezoid) and the
/// lattice (rectangle rule). For blow-up runs the time domain is cut at the
/// last uniform level.
pub fn xyw_check(traj: &Trajectory, spec: &CutoffSpec, points: usize) -> Result<XywReport> {
    if points < MIN_R_POINTS {
        return Err(invalid("points", format!("need at least {MIN_R_POINTS} radii")));
    }
    let params = &traj.params;
    if spec.m != params.m {
        return Err(invalid("m", "cutoff order differs from the trajectory"));
    }
    check_support(traj, spec, 0.0)?;
    let nodes = time_nodes(traj, f64::INFINITY);
    if nodes.len() < 2 {
        return Err(Error::InsufficientData("need at least two time levels".into()));
    }
    let grid = params.grid;
    let n = grid.dim();
    let cv = grid.cell_volume();
    let p = params.p;
    let positions: Vec<[f64; 3]> = (0..grid.len()).map(|i| grid.position(i)).collect();
    let radii = r_grid(spec.r, points);

    let integrals: Vec<Integrals> = radii
        .par_iter()
        .map(|&r| {
            let sp = spec.at_scale(r).expect("scale is positive");
            let mut acc = Integrals {
                x: 0.0,
                y: 0.0,
                holder_lhs: 0.0,
                volume: 0.0,
            };
            for node in nodes.iter().filter(|nd| nd.t < r) {
                let mu = node.weight * cv;
                if mu == 0.0 {
                    continue;
                }
                for (x, &u) in positions.iter().zip(node.field.values()) {
                    let s = sp.s(&x[..n], node.t);
                    if s >= 1.0 {
                        continue;
                    }
                    let up = u.abs().powf(p);
                    acc.x += mu * up * sp.psi(&x[..n], node.t);
                    if s >= 0.5 {
                        let star = sp.psi_star(&x[..n], node.t);
                        acc.y += mu * up * star;
                        acc.holder_lhs += mu * u.abs() * star.powf(1.0 / p);
                        acc.volume += mu;
                    }
                }
            }
            acc
        })
        .collect();

    let tail_exponent = 1.0 + n as f64 / (2.0 * params.m as f64);
    let step = R_GRID_RATIO.ln();
    let p_prime = p / (p - 1.0);
    let mut records = Vec::with_capacity(points);
    let mut w = 0.0;
    for (k, (&r, it)) in radii.iter().zip(&integrals).enumerate() {
        w += if k == 0 {
            // Y(ρ) ~ ρ^{1+n/2m} below the grid
            it.y / tail_exponent
        } else {
            0.5 * (integrals[k - 1].y + it.y) * step
        };
        let holder_rhs = it.y.powf(1.0 / p) * it.volume.powf(1.0 / p_prime);
        records.push(XYWRecord {
            r,
            x: it.x,
            y: it.y,
            w,
            holder_lhs: it.holder_lhs,
            holder_rhs,
            log_lemma_holds: 2.0 / std::f64::consts::LN_2 * w <= it.x * (1.0 + LOG_LEMMA_SLACK),
            holder_holds: it.holder_lhs <= holder_rhs * (1.0 + 1e-12),
        });
    }
    Ok(XywReport {
        records,
        t_last: nodes[nodes.len() - 1].t,
    })
}
