use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{phase_to_winding, Sampler};
use super::localize::clear_boundary_poles;
use super::{ContourConfig, Rectangle};
use crate::error::{Error, Result};
use crate::expr::{pole_locations, ZetaExpr};
use crate::numerics::EvalConfig;

const MAX_RETRIES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityScan {
    pub sigma0: f64,
    pub sigma_cap: f64,
    pub t_values: Vec<f64>,
    pub counts: Vec<u64>,
    /// Least-squares slope through the origin of counts against T.
    pub fit_slope: f64,
    /// Slope fitted on the first i + 1 rows.
    pub slopes: Vec<f64>,
    /// False when some tile could not be counted; counts are then lower bounds.
    pub complete: bool,
}

pub(crate) fn slope_through_origin(t: &[f64], n: &[u64]) -> f64 {
    let tt: f64 = t.iter().map(|x| x * x).sum();
    if tt == 0.0 {
        return 0.0;
    }
    t.iter().zip(n).map(|(x, c)| x * *c as f64).sum::<f64>() / tt
}

/// Tile boundaries from `lo` to the largest T, containing every T that exceeds `lo`.
fn tile_lines(lo: f64, t_values: &[f64], tile_height: f64) -> Vec<f64> {
    let mut lines = vec![lo];
    for &t in t_values {
        if t <= *lines.last().expect("non-empty") {
            continue;
        }
        let start = *lines.last().expect("non-empty");
        let pieces = ((t - start) / tile_height).ceil().max(1.0) as usize;
        for k in 1..pieces {
            lines.push(start + (t - start) * k as f64 / pieces as f64);
        }
        lines.push(t);
    }
    lines
}

impl Sampler<'_> {
    /// Phase along a horizontal line, moving it upward by jitter until it is clean.
    fn horizontal(&self, sigma: (f64, f64), t: f64, step: f64) -> Result<(f64, f64)> {
        let mut last = None;
        for k in 0..=MAX_RETRIES {
            let y = t + step * k as f64;
            match self.edge_phase(Complex64::new(sigma.0, y), Complex64::new(sigma.1, y)) {
                Ok(p) => return Ok((y, p)),
                Err(e @ (Error::NearZeroOnContour { .. } | Error::DepthExceeded { .. })) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// Counts zeros in (sigma0, sigma_cap) x (0, T) for each T by winding numbers over
/// horizontal tiles.
///
/// The region starts at `t_floor` (or above any pole clearance) rather than on the
/// real axis. Each horizontal tile boundary is traversed once and shared by the two
/// tiles it separates.
pub fn density_scan(
    e: &ZetaExpr,
    sigma0: f64,
    t_values: &[f64],
    contour: &ContourConfig,
    eval: &EvalConfig,
) -> Result<DensityScan> {
    contour.validate()?;
    eval.validate()?;
    if !(sigma0 > 0.5) || !(sigma0 < contour.sigma_cap) {
        return Err(Error::InvalidConfig(format!(
            "density scans need 1/2 < sigma0 < sigma_cap = {}, got {sigma0}",
            contour.sigma_cap
        )));
    }
    if t_values.is_empty() || t_values.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidConfig("T values must be a non-empty list of non-negative numbers".into()));
    }
    if t_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("T values must be strictly increasing".into()));
    }
    let t_max = *t_values.last().expect("non-empty");
    let mut result = DensityScan {
        sigma0,
        sigma_cap: contour.sigma_cap,
        t_values: t_values.to_vec(),
        counts: vec![0; t_values.len()],
        fit_slope: 0.0,
        slopes: vec![0.0; t_values.len()],
        complete: true,
    };

    let poles = pole_locations(e);
    let region = Rectangle { sigma_lo: sigma0, sigma_hi: contour.sigma_cap, t_lo: contour.t_floor, t_hi: t_max.max(contour.t_floor + 1.0) };
    let Some(region) = clear_boundary_poles(region, &poles, contour.pole_clearance) else {
        return Ok(result);
    };
    if poles.iter().any(|p| region.contains(*p) && p.im < t_max) {
        return Err(Error::InvalidConfig("a pole candidate lies inside the density-scan region".into()));
    }
    let lo = region.t_lo;
    if t_max <= lo {
        return Ok(result);
    }

    let sampler = Sampler { expr: e, eval, contour };
    let sigma = (sigma0, contour.sigma_cap);
    let step = contour.jitter.min((sigma.1 - sigma.0) / 100.0);
    let lines = tile_lines(lo, t_values, contour.tile_height);
    let horizontal: Vec<Result<(f64, f64)>> = lines.par_iter().map(|&t| sampler.horizontal(sigma, t, step)).collect();
    let horizontal: Vec<Option<(f64, f64)>> = horizontal.into_iter().map(|r| r.ok()).collect();

    // Tile j spans lines j and j + 1; its winding is None when any edge failed.
    let tiles: Vec<Option<i64>> = (0..lines.len() - 1)
        .into_par_iter()
        .map(|j| {
            let (y0, bottom) = horizontal[j]?;
            let (y1, top) = horizontal[j + 1]?;
            let right = sampler.edge_phase(Complex64::new(sigma.1, y0), Complex64::new(sigma.1, y1)).ok()?;
            let left = sampler.edge_phase(Complex64::new(sigma.0, y1), Complex64::new(sigma.0, y0)).ok()?;
            let rect = Rectangle { sigma_lo: sigma.0, sigma_hi: sigma.1, t_lo: y0, t_hi: y1 };
            phase_to_winding(bottom + right - top + left, &rect).ok()
        })
        .collect();

    let mut running: i64 = 0;
    let mut line = 0;
    for (i, &t) in t_values.iter().enumerate() {
        while line + 1 < lines.len() && lines[line + 1] <= t {
            match tiles[line] {
                Some(w) if w >= 0 => running += w,
                _ => result.complete = false,
            }
            line += 1;
        }
        result.counts[i] = running.max(0) as u64;
        result.slopes[i] = slope_through_origin(&t_values[..=i], &result.counts[..=i]);
    }
    result.fit_slope = *result.slopes.last().expect("non-empty");
    Ok(result)
}
