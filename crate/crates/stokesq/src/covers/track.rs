//! Predictor-corrector continuation of fiber roots along a path in the
//! base, and permutation extraction from the tracked endpoints.

use super::geometry::PathPiece;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Tunables for the tracker. The defaults implement the frozen contract:
/// Newton tolerance 1e-12 with at most 25 iterations, step halving when a
/// corrector run needs more than 5 iterations or two sheets approach
/// within 10x the tolerance, and a hard residual ceiling of 1e-9 on every
/// accepted step.
#[derive(Debug, Clone, Copy)]
pub struct TrackerParams {
    pub newton_tol: f64,
    pub newton_max: usize,
    pub fast_iters: usize,
    pub residual_bound: f64,
    pub collision_factor: f64,
    pub max_step: f64,
    pub min_step: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        TrackerParams {
            newton_tol: 1e-12,
            newton_max: 25,
            fast_iters: 5,
            residual_bound: 1e-9,
            collision_factor: 10.0,
            max_step: 0.01,
            min_step: 1e-10,
        }
    }
}

impl TrackerParams {
    /// Same contract at half the step size, for stability comparisons.
    pub fn halved_step(self) -> Self {
        TrackerParams {
            max_step: self.max_step / 2.0,
            ..self
        }
    }
}

/// A chain of pieces reparametrized by arc length to t in [0, 1].
pub(crate) struct LoopPath {
    pieces: Vec<PathPiece>,
    cumulative: Vec<f64>,
    total: f64,
}

impl LoopPath {
    pub(crate) fn new(pieces: &[PathPiece]) -> Self {
        let mut cumulative = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for p in pieces {
            acc += p.len();
            cumulative.push(acc);
        }
        LoopPath {
            pieces: pieces.to_vec(),
            cumulative,
            total: acc,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let target = t.clamp(0.0, 1.0) * self.total;
        // Last piece whose start is <= target; zero-length pieces never
        // occur by construction.
        let mut idx = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&target).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if idx >= self.pieces.len() {
            idx = self.pieces.len() - 1;
        }
        let len = self.cumulative[idx + 1] - self.cumulative[idx];
        let s = if len > 0.0 {
            (target - self.cumulative[idx]) / len
        } else {
            0.0
        };
        (idx, s)
    }

    pub(crate) fn at(&self, t: f64) -> Complex64 {
        if self.pieces.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        if t >= 1.0 {
            return self.pieces[self.pieces.len() - 1].end();
        }
        let (idx, s) = self.locate(t);
        self.pieces[idx].at(s)
    }

    /// dz/dt at t (scaled by the piece's share of total arc length).
    pub(crate) fn velocity(&self, t: f64) -> Complex64 {
        if self.pieces.is_empty() || self.total == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let (idx, s) = self.locate(t.min(1.0 - 1e-12));
        let len = self.cumulative[idx + 1] - self.cumulative[idx];
        if len == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.pieces[idx].velocity(s) * (self.total / len)
    }
}

/// The map being tracked: evaluates (f(u) - z is the tracked equation)
/// f and f' at a point, with poles only where no fiber root can sit.
pub(crate) trait FiberMap: Sync {
    fn f_df(&self, u: Complex64) -> (Complex64, Complex64);
}

/// Track every start root along the path, returning the endpoints (sheet
/// order preserved) and the largest residual |f(u) - z| seen at any
/// accepted step.
pub(crate) fn track_path(
    map: &dyn FiberMap,
    pieces: &[PathPiece],
    starts: &[Complex64],
    critical_values: &[Complex64],
    params: &TrackerParams,
) -> Result<(Vec<Complex64>, f64)> {
    let path = LoopPath::new(pieces);
    let mut roots: Vec<Complex64> = starts.to_vec();
    let mut t = 0.0_f64;
    let mut dt = params.max_step;
    let mut max_residual = 0.0_f64;

    while t < 1.0 {
        let t_next = (t + dt).min(1.0);
        let z_next = path.at(t_next);
        let z_vel = path.velocity(t);

        match attempt_step(map, &roots, z_next, z_vel, t_next - t, params) {
            Some((new_roots, worst_iters, step_residual)) => {
                let collided = min_pairwise(&new_roots)
                    < params.collision_factor * params.newton_tol;
                if collided || step_residual > params.residual_bound {
                    halve(&mut dt, t, &path, &roots, critical_values, params)?;
                    continue;
                }
                roots = new_roots;
                t = t_next;
                max_residual = max_residual.max(step_residual);
                dt = if worst_iters > params.fast_iters {
                    (dt / 2.0).max(params.min_step)
                } else {
                    (dt * 1.5).min(params.max_step)
                };
            }
            None => {
                halve(&mut dt, t, &path, &roots, critical_values, params)?;
            }
        }
    }
    Ok((roots, max_residual))
}

/// Halve dt, or classify the failure once the step underflows: a sheet
/// collision near the current point means the path runs into a critical
/// value; anything else is a plain convergence failure.
fn halve(
    dt: &mut f64,
    t: f64,
    path: &LoopPath,
    roots: &[Complex64],
    critical_values: &[Complex64],
    params: &TrackerParams,
) -> Result<()> {
    *dt /= 2.0;
    if *dt >= params.min_step {
        return Ok(());
    }
    let z = path.at(t);
    let nearest = critical_values
        .iter()
        .map(|cv| (z - cv).norm())
        .fold(f64::INFINITY, f64::min);
    if min_pairwise(roots) < 1e-8 {
        Err(Error::PathThroughCriticalValue { distance: nearest })
    } else {
        Err(Error::NoConvergence { t })
    }
}

fn min_pairwise(roots: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            min = min.min((roots[i] - roots[j]).norm());
        }
    }
    min
}

/// Euler predictor plus Newton corrector for all sheets. Returns the
/// corrected roots, the worst iteration count, and the worst residual, or
/// None if any sheet failed to converge.
fn attempt_step(
    map: &dyn FiberMap,
    roots: &[Complex64],
    z_next: Complex64,
    z_vel: Complex64,
    dt: f64,
    params: &TrackerParams,
) -> Option<(Vec<Complex64>, usize, f64)> {
    let mut out = Vec::with_capacity(roots.len());
    let mut worst_iters = 0;
    let mut worst_residual = 0.0_f64;
    for &u0 in roots {
        let (_, df0) = map.f_df(u0);
        let mut u = if df0.norm() > 1e-12 {
            u0 + z_vel * dt / df0
        } else {
            u0
        };
        let mut converged = None;
        for it in 0..params.newton_max {
            let (f, df) = map.f_df(u);
            let residual = (f - z_next).norm();
            if residual < params.newton_tol {
                converged = Some((it, residual));
                break;
            }
            if df.norm() < 1e-300 || !u.is_finite() {
                return None;
            }
            u -= (f - z_next) / df;
        }
        let (iters, residual) = converged?;
        worst_iters = worst_iters.max(iters);
        worst_residual = worst_residual.max(residual);
        out.push(u);
    }
    Some((out, worst_iters, worst_residual))
}

/// Match tracked endpoints back to the start roots by nearest neighbor.
/// Every endpoint must be at least 10x closer to its match than to any
/// other start root, and the matching must be a bijection.
pub(crate) fn permutation_from_endpoints(
    starts: &[Complex64],
    ends: &[Complex64],
) -> Result<Vec<usize>> {
    let n = starts.len();
    let mut sigma = vec![usize::MAX; n];
    let mut claimed = vec![false; n];
    for (j, e) in ends.iter().enumerate() {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (k, s) in starts.iter().enumerate() {
            let d = (e - s).norm();
            if d < best.0 {
                second = best.0;
                best = (d, k);
            } else if d < second {
                second = d;
            }
        }
        let ratio = if best.0 == 0.0 {
            f64::INFINITY
        } else {
            second / best.0
        };
        if n > 1 && ratio < 10.0 {
            return Err(Error::ContinuationAmbiguous { ratio });
        }
        if claimed[best.1] {
            return Err(Error::ContinuationAmbiguous { ratio: 1.0 });
        }
        claimed[best.1] = true;
        sigma[j] = best.1;
    }
    Ok(sigma)
}
