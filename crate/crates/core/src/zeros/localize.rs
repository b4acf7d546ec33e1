use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::Sampler;
use super::{by_im_re, ContourConfig, Rectangle, ZeroRecord};
use crate::error::{Error, Result};
use crate::expr::{pole_locations, ZetaExpr};
use crate::numerics::{ComplexValue, EvalConfig};

const MAX_RETRIES: usize = 8;
const MAX_NEWTON: u32 = 40;
// Cells at most this large (relative to 1 + |center|) try multiplicity-aware Newton.
const MULTI_NEWTON_SIZE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnresolvedCell {
    pub rect: Rectangle,
    pub winding: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleCell {
    pub rect: Rectangle,
    /// Zeros minus poles inside the cell.
    pub winding: i64,
    pub poles: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Localization {
    pub zeros: Vec<ZeroRecord>,
    pub unresolved: Vec<UnresolvedCell>,
    pub pole_cells: Vec<PoleCell>,
    /// Rectangles actually searched after moving edges off nearby poles.
    pub searched: Vec<Rectangle>,
}

impl Localization {
    pub fn total_multiplicity(&self) -> u64 {
        self.zeros.iter().map(|z| u64::from(z.winding_mult)).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    fn merge(&mut self, other: Localization) {
        self.zeros.extend(other.zeros);
        self.unresolved.extend(other.unresolved);
        self.pole_cells.extend(other.pole_cells);
        self.searched.extend(other.searched);
    }

    fn sort(&mut self) {
        self.zeros.sort_by(|a, b| by_im_re(a.z(), b.z()));
        self.unresolved.sort_by(|a, b| by_im_re(a.rect.center(), b.rect.center()));
        self.pole_cells.sort_by(|a, b| by_im_re(a.rect.center(), b.rect.center()));
        self.searched.sort_by(|a, b| by_im_re(a.rect_key(), b.rect_key()));
    }
}

trait RectKey {
    fn rect_key(&self) -> Complex64;
}

impl RectKey for Rectangle {
    fn rect_key(&self) -> Complex64 {
        Complex64::new(self.sigma_lo, self.t_lo)
    }
}

/// Moves edges inward until every pole candidate is at least `c` outside the
/// rectangle or at least `c` inside it. Each offending pole moves the one edge that
/// needs the smallest shift. Returns `None` when nothing is left.
pub(crate) fn clear_boundary_poles(rect: Rectangle, poles: &[Complex64], c: f64) -> Option<Rectangle> {
    let mut r = rect;
    for p in poles {
        let dx = (r.sigma_lo - p.re).max(p.re - r.sigma_hi).max(0.0);
        let dy = (r.t_lo - p.im).max(p.im - r.t_hi).max(0.0);
        if dx.hypot(dy) >= c || r.contains_inner(*p, c) {
            continue;
        }
        // (edge index, shift needed)
        let moves = [
            (0, p.im + c - r.t_lo),
            (1, r.t_hi - (p.im - c)),
            (2, p.re + c - r.sigma_lo),
            (3, r.sigma_hi - (p.re - c)),
        ];
        let (edge, _) = moves
            .iter()
            .copied()
            .filter(|(_, d)| *d > 0.0)
            .fold((usize::MAX, f64::INFINITY), |best, m| if m.1 < best.1 { m } else { best });
        match edge {
            0 => r.t_lo = p.im + c,
            1 => r.t_hi = p.im - c,
            2 => r.sigma_lo = p.re + c,
            3 => r.sigma_hi = p.re - c,
            _ => {}
        }
        if r.sigma_lo >= r.sigma_hi || r.t_lo >= r.t_hi {
            return None;
        }
    }
    Some(r)
}

/// Cuts `rect` by lines at distance `c` on either side of each interior pole.
/// Returns the grid cells, each with the poles it contains.
fn split_around_poles(rect: Rectangle, poles: &[Complex64], c: f64) -> Vec<(Rectangle, Vec<Complex64>)> {
    let mut xs = vec![rect.sigma_lo, rect.sigma_hi];
    let mut ys = vec![rect.t_lo, rect.t_hi];
    for p in poles {
        for x in [p.re - c, p.re + c] {
            if x > rect.sigma_lo && x < rect.sigma_hi {
                xs.push(x);
            }
        }
        for y in [p.im - c, p.im + c] {
            if y > rect.t_lo && y < rect.t_hi {
                ys.push(y);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let mut cells = Vec::new();
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let cell = Rectangle { sigma_lo: xs[i], sigma_hi: xs[i + 1], t_lo: ys[j], t_hi: ys[j + 1] };
            let inside: Vec<Complex64> = poles.iter().copied().filter(|p| cell.contains(*p)).collect();
            cells.push((cell, inside));
        }
    }
    cells
}

/// The k-th offset in the deterministic sequence 0, +1, -1, +2, -2, ...
fn jitter_offset(k: usize) -> f64 {
    if k == 0 {
        0.0
    } else if k % 2 == 1 {
        k.div_ceil(2) as f64
    } else {
        -((k / 2) as f64)
    }
}

// Cut position as a fraction of the cell; off-centre so that symmetric lines such as
// Re = 1/2 or the real axis are not cut lines.
const CUT_FRACTION: f64 = 0.4893;
const CUT_RETRY_STEP: f64 = 0.0311;

fn split_cell(cell: &Rectangle, k: usize) -> Vec<Rectangle> {
    let frac = (CUT_FRACTION + CUT_RETRY_STEP * jitter_offset(k)).clamp(0.25, 0.75);
    let xm = cell.sigma_lo + frac * cell.width();
    let ym = cell.t_lo + frac * cell.height();
    let cut_x = cell.width() * 2.0 > cell.height();
    let cut_y = cell.height() * 2.0 > cell.width();
    let xs: Vec<f64> = if cut_x { vec![cell.sigma_lo, xm, cell.sigma_hi] } else { vec![cell.sigma_lo, cell.sigma_hi] };
    let ys: Vec<f64> = if cut_y { vec![cell.t_lo, ym, cell.t_hi] } else { vec![cell.t_lo, cell.t_hi] };
    let mut out = Vec::with_capacity(4);
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            out.push(Rectangle { sigma_lo: xs[i], sigma_hi: xs[i + 1], t_lo: ys[j], t_hi: ys[j + 1] });
        }
    }
    out
}

struct Newton {
    z: Complex64,
    last_step: f64,
    steps: u32,
}

impl Sampler<'_> {
    fn derivative(&self, z: Complex64, h: f64) -> Result<Complex64> {
        let dz = Complex64::new(h, 0.0);
        Ok((self.value(z + dz)? - self.value(z - dz)?) / (2.0 * h))
    }

    fn newton(&self, cell: &Rectangle, mult: i64) -> Option<Newton> {
        let leash = cell.inflate(cell.size());
        let mut z = cell.center();
        let mut prev_step = f64::INFINITY;
        for it in 1..=MAX_NEWTON {
            let f = self.value(z).ok()?;
            if f == Complex64::new(0.0, 0.0) {
                return Some(Newton { z, last_step: 0.0, steps: it - 1 });
            }
            let h = (1e-6 * cell.size()).max(1e-9 * (1.0 + z.norm()));
            let d = self.derivative(z, h).ok()?;
            let step = f * mult as f64 / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            z -= step;
            if !leash.contains(z) {
                return None;
            }
            let size = step.norm();
            let scale = 1.0 + z.norm();
            let tight = size <= 1e-14 * scale;
            let stalled = it >= 3 && size >= 0.5 * prev_step && size <= 1e-8 * scale;
            if tight || stalled {
                return Some(Newton { z, last_step: size, steps: it });
            }
            prev_step = size;
        }
        None
    }

    /// Winding over a small box around `z`, the re-verification of a record.
    pub(crate) fn local_winding(&self, z: Complex64, last_step: f64) -> Result<i64> {
        let r = (10.0 * last_step).max(1e-6 * (1.0 + z.norm()));
        let rect = Rectangle { sigma_lo: z.re - r, sigma_hi: z.re + r, t_lo: z.im - r, t_hi: z.im + r };
        self.winding(&rect)
    }

    fn try_refine(&self, cell: &Rectangle, w: i64) -> Option<ZeroRecord> {
        let n = self.newton(cell, w)?;
        if !cell.contains(n.z) {
            return None;
        }
        if self.local_winding(n.z, n.last_step).ok()? != w {
            return None;
        }
        let residual = self.value(n.z).ok()?.norm();
        let err = n.last_step.max(4.0 * f64::EPSILON * (1.0 + n.z.norm()));
        Some(ZeroRecord {
            location: ComplexValue::new(n.z, err),
            residual,
            winding_mult: w as u32,
            rect: *cell,
            refine_steps: n.steps,
        })
    }

    fn children_windings(&self, cell: &Rectangle, w: i64) -> std::result::Result<Vec<(Rectangle, i64)>, String> {
        let mut last = String::new();
        for k in 0..=MAX_RETRIES {
            let children = split_cell(cell, k);
            let windings: Vec<Result<i64>> = children.par_iter().map(|c| self.winding(c)).collect();
            let mut ok = Vec::with_capacity(children.len());
            let mut failed = false;
            for (c, r) in children.into_iter().zip(windings) {
                match r {
                    Ok(v) => ok.push((c, v)),
                    Err(e) => {
                        last = e.to_string();
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            let sum: i64 = ok.iter().map(|(_, v)| v).sum();
            if sum == w {
                return Ok(ok);
            }
            last = format!("children wind {sum}, parent {w}");
        }
        Err(last)
    }

    fn resolve(&self, cell: Rectangle, w: i64, depth: usize) -> Localization {
        let mut out = Localization::default();
        if w == 0 {
            return out;
        }
        let unresolved = |reason: String| Localization {
            unresolved: vec![UnresolvedCell { rect: cell, winding: w, reason }],
            ..Default::default()
        };
        if w < 0 {
            return unresolved("negative winding in a zero-search cell".into());
        }
        let small_enough = cell.size() <= MULTI_NEWTON_SIZE * (1.0 + cell.center().norm());
        if w == 1 || small_enough {
            if let Some(rec) = self.try_refine(&cell, w) {
                if rec.residual < self.contour.zero_tol {
                    out.zeros.push(rec);
                    return out;
                }
                if cell.size() < self.contour.min_cell {
                    return unresolved(format!("refined residual {:e} above zero_tol", rec.residual));
                }
            }
        }
        if cell.size() < self.contour.min_cell || depth >= self.contour.max_depth {
            if w > 1 {
                let z = cell.center();
                let residual = self.value(z).map(|v| v.norm()).unwrap_or(f64::INFINITY);
                out.zeros.push(ZeroRecord {
                    location: ComplexValue::new(z, 0.5 * cell.size()),
                    residual,
                    winding_mult: w as u32,
                    rect: cell,
                    refine_steps: 0,
                });
                return out;
            }
            return unresolved("Newton iteration did not converge in a minimal cell".into());
        }
        match self.children_windings(&cell, w) {
            Ok(children) => {
                let parts: Vec<Localization> = children
                    .into_par_iter()
                    .map(|(c, cw)| self.resolve(c, cw, depth + 1))
                    .collect();
                for p in parts {
                    out.merge(p);
                }
                out
            }
            Err(reason) => unresolved(reason),
        }
    }

    fn localize_once(&self, rect: Rectangle, poles: &[Complex64], clearance: f64) -> Result<Localization> {
        let mut out = Localization::default();
        let Some(eff) = clear_boundary_poles(rect, poles, clearance) else {
            return Ok(out);
        };
        out.searched.push(eff);
        let inner: Vec<Complex64> = poles.iter().copied().filter(|p| eff.contains(*p)).collect();
        let pieces = split_around_poles(eff, &inner, clearance);
        let windings: Vec<Result<i64>> = pieces.par_iter().map(|(r, _)| self.winding(r)).collect();
        let mut search = Vec::new();
        for ((r, ps), w) in pieces.into_iter().zip(windings) {
            let w = w?;
            if ps.is_empty() {
                search.push((r, w));
            } else {
                out.pole_cells.push(PoleCell { rect: r, winding: w, poles: ps });
            }
        }
        let parts: Vec<Localization> = search.into_par_iter().map(|(r, w)| self.resolve(r, w, 0)).collect();
        for p in parts {
            out.merge(p);
        }
        Ok(out)
    }
}

/// Finds the zeros of F in `rect`, each isolated in its own cell and polished by
/// Newton iteration.
///
/// Pole candidates near the boundary push the nearest edge inward by the pole
/// clearance; interior poles are fenced off into pole cells whose windings are
/// reported separately. Cells that cannot be resolved are listed, never dropped.
pub fn localize_zeros(e: &ZetaExpr, rect: &Rectangle, contour: &ContourConfig, eval: &EvalConfig) -> Result<Localization> {
    rect.validate()?;
    contour.validate()?;
    eval.validate()?;
    let sampler = Sampler { expr: e, eval, contour };
    let poles = pole_locations(e);
    let step = contour.jitter.min(rect.size() / 100.0);
    let mut last_err = None;
    for k in 0..=MAX_RETRIES {
        let d = step * k as f64;
        match sampler.localize_once(rect.inflate(d), &poles, contour.pole_clearance + d) {
            Ok(mut loc) => {
                loc.sort();
                return Ok(loc);
            }
            Err(err @ (Error::NearZeroOnContour { .. } | Error::DepthExceeded { .. })) => last_err = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last_err.expect("at least one attempt was made"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalLineReport {
    pub t_max: f64,
    pub tol: f64,
    pub zeros: Vec<ZeroRecord>,
    pub max_deviation: f64,
    pub unresolved: Vec<UnresolvedCell>,
    pub pass: bool,
}

/// Localizes the zeros with 0.1 < Re < 0.9, 0 < Im <= t_max and checks that they
/// all lie within `tol` of Re = 1/2.
pub fn critical_line_check(
    e: &ZetaExpr,
    t_max: f64,
    tol: f64,
    contour: &ContourConfig,
    eval: &EvalConfig,
) -> Result<CriticalLineReport> {
    if !(t_max > contour.t_floor) || !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "critical_line_check needs t_max > {} and tol > 0",
            contour.t_floor
        )));
    }
    let rect = Rectangle::new(0.1, 0.9, contour.t_floor, t_max)?;
    let loc = localize_zeros(e, &rect, contour, eval)?;
    let max_deviation = loc.zeros.iter().map(|z| (z.z().re - 0.5).abs()).fold(0.0, f64::max);
    let pass = loc.unresolved.is_empty() && max_deviation < tol;
    Ok(CriticalLineReport { t_max, tol, zeros: loc.zeros, max_deviation, unresolved: loc.unresolved, pass })
}
