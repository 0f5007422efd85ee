//! Quivers from branched covers of the line: exact cover data in, critical
//! values and loops numerically, permutation monodromy by root tracking,
//! and exact quiver assembly after snapping the critical values back to
//! Gaussian rationals. Floating point lives strictly between the exact
//! ends of the pipeline.

mod geometry;
mod roots;
mod sector;
mod track;

pub use geometry::{default_loops, enclosing_loop, loops_with_radius, Loop, LoopSystem, PathPiece};
pub use sector::{ramified_sector_multipliers, BuiltinExample, SectorReport};
pub use track::TrackerParams;

use crate::error::{Error, Result};
use crate::exact::{GaussRational, MatrixQi};
use crate::quiver::{Frame, LocalSystem, Quiver};
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which flavor of covering map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverKind {
    Polynomial,
    Laurent,
}

/// A branched cover of the line given by one Laurent-polynomial map
/// f(u) = Σ a_k u^k with exact Gaussian-rational coefficients. Stored as
/// sparse (power, coefficient) terms with zero coefficients dropped;
/// polynomial covers have all powers ≥ 0 and degree ≥ 2, Laurent covers a
/// genuine pole (a term of negative power).
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSpec {
    kind: CoverKind,
    terms: Vec<(i64, GaussRational)>,
}

impl CoverSpec {
    /// Polynomial cover from ascending coefficients a_0, a_1, …
    pub fn polynomial(coeffs: Vec<GaussRational>) -> Result<Self> {
        let mut terms: Vec<(i64, GaussRational)> = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| (k as i64, a))
            .collect();
        terms.sort_by_key(|(k, _)| *k);
        let degree = terms.last().map_or(0, |(k, _)| *k);
        if degree < 2 {
            return Err(Error::DegenerateCover);
        }
        Ok(CoverSpec {
            kind: CoverKind::Polynomial,
            terms,
        })
    }

    /// Laurent cover from (power, coefficient) pairs; needs at least one
    /// term of negative power.
    pub fn laurent(pairs: Vec<(i64, GaussRational)>) -> Result<Self> {
        let mut terms: Vec<(i64, GaussRational)> =
            pairs.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        terms.sort_by_key(|(k, _)| *k);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::parse(format!("duplicate power {}", w[0].0)));
            }
        }
        if terms.first().is_none_or(|(k, _)| *k >= 0) {
            return Err(Error::DegenerateCover);
        }
        Ok(CoverSpec {
            kind: CoverKind::Laurent,
            terms,
        })
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    /// Sparse terms, ascending by power.
    pub fn terms(&self) -> &[(i64, GaussRational)] {
        &self.terms
    }

    fn min_power(&self) -> i64 {
        self.terms.first().map_or(0, |(k, _)| *k).min(0)
    }

    fn max_power(&self) -> i64 {
        self.terms.last().map_or(0, |(k, _)| *k)
    }

    /// Cardinality of the fiber over a generic point: the degree of the
    /// pole-cleared fiber polynomial u^{-m} (f(u) - z), m = min power.
    pub fn generic_degree(&self) -> usize {
        (self.max_power().max(0) - self.min_power()) as usize
    }

    /// f and f' at a point (pole-free for the roots we track: fibers of a
    /// Laurent cover never contain u = 0).
    fn f_df(&self, u: Complex64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for (k, a) in &self.terms {
            let a = a.to_complex();
            f += a * u.powi(*k as i32);
            if *k != 0 {
                df += a * (*k as f64) * u.powi(*k as i32 - 1);
            }
        }
        (f, df)
    }

    /// Ascending coefficients of the pole-cleared fiber polynomial
    /// P_z(u) = u^{-m} (f(u) - z).
    fn fiber_poly(&self, z: Complex64) -> Vec<Complex64> {
        let shift = -self.min_power();
        let top = self.max_power() + shift;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (top + 1) as usize];
        for (k, a) in &self.terms {
            coeffs[(k + shift) as usize] += a.to_complex();
        }
        coeffs[shift as usize] -= z;
        coeffs
    }

    /// Ascending coefficients of the pole-cleared derivative numerator:
    /// f' itself for a polynomial, u^{1-m} f' for a Laurent cover (whose
    /// constant term m·a_m is nonzero, so no root at 0 sneaks in).
    fn derivative_numerator(&self) -> Vec<Complex64> {
        let shift = if self.kind == CoverKind::Laurent {
            -self.min_power()
        } else {
            -1
        };
        let top = self.max_power() + shift;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (top + 1).max(1) as usize];
        for (k, a) in &self.terms {
            if *k != 0 {
                coeffs[(k + shift) as usize] += a.to_complex() * (*k as f64);
            }
        }
        coeffs
    }

    /// Roots of the fiber polynomial over z, sorted by (Re, Im).
    fn fiber_roots(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let mut rs = roots::all_roots(&self.fiber_poly(z))?;
        rs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        Ok(rs)
    }

    /// Number of distinct points in the fiber over z, root clusters merged
    /// at tolerance 1e-5 (fibers over critical values have genuine
    /// collisions, so this is a count, not a high-precision solve).
    fn fiber_distinct_count(&self, z: Complex64) -> usize {
        let rs = roots::roots_relaxed(&self.fiber_poly(z));
        let mut reps: Vec<Complex64> = Vec::new();
        for r in rs {
            if !reps
                .iter()
                .any(|p| (p - r).norm() < 1e-5 * (1.0 + r.norm()))
            {
                reps.push(r);
            }
        }
        reps.len()
    }
}

impl track::FiberMap for CoverSpec {
    fn f_df(&self, u: Complex64) -> (Complex64, Complex64) {
        CoverSpec::f_df(self, u)
    }
}

/// Critical points and the distinct critical values of a cover.
#[derive(Debug, Clone)]
pub struct CriticalData {
    /// Roots of f' (pole-cleared, nonzero for Laurent covers).
    pub points: Vec<Complex64>,
    /// Distinct images f(critical point), clustered at 1e-8 and sorted by
    /// (Re, Im).
    pub values: Vec<Complex64>,
}

/// Numerical critical data of the cover.
pub fn critical_data(f: &CoverSpec) -> Result<CriticalData> {
    let numerator = f.derivative_numerator();
    if roots::trim(&numerator).is_empty() {
        return Err(Error::DegenerateCover);
    }
    let mut points = roots::all_roots(&numerator)?;
    if f.kind() == CoverKind::Laurent {
        points.retain(|p| p.norm() > 1e-9);
    }
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());

    let mut values: Vec<Complex64> = Vec::new();
    for p in &points {
        let (v, _) = f.f_df(*p);
        if !values.iter().any(|w| (w - v).norm() < 1e-8) {
            values.push(v);
        }
    }
    values.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(CriticalData { points, values })
}

/// Permutation monodromy of a cover over a loop system: critical values
/// with their exact snaps when available, one permutation per loop
/// (position j holds the sheet that sheet j flows to), the basepoint
/// sheet labels, and the worst tracking residual.
#[derive(Debug, Clone)]
pub struct CoverMonodromy {
    pub critical_values: Vec<Complex64>,
    pub snaps: Vec<Option<GaussRational>>,
    pub permutations: Vec<Vec<usize>>,
    pub sheet_labels: Vec<Complex64>,
    pub max_residual: f64,
}

impl CoverMonodromy {
    /// Permutation matrix of loop i: entry (σ(j), j) = 1.
    pub fn matrix(&self, i: usize) -> MatrixQi {
        MatrixQi::from_permutation(&self.permutations[i])
    }
}

pub(crate) fn cycle_count(sigma: &[usize]) -> usize {
    let mut seen = vec![false; sigma.len()];
    let mut cycles = 0;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = sigma[j];
        }
    }
    cycles
}

fn snap_value(v: Complex64) -> Option<GaussRational> {
    GaussRational::snap_complex(v, 1_000_000, 1e-9)
}

fn track_one_loop(
    f: &CoverSpec,
    lp: &Loop,
    starts: &[Complex64],
    critical_values: &[Complex64],
    params: &TrackerParams,
) -> Result<(Vec<usize>, f64)> {
    let (ends, max_residual) =
        track::track_path(f, &lp.pieces, starts, critical_values, params)?;
    let sigma = track::permutation_from_endpoints(starts, &ends)?;
    Ok((sigma, max_residual))
}

/// Shared pipeline behind the sequential and parallel entry points.
fn monodromy_impl(
    f: &CoverSpec,
    loops: &LoopSystem,
    params: &TrackerParams,
    parallel: bool,
) -> Result<CoverMonodromy> {
    let starts = f.fiber_roots(loops.basepoint)?;
    if starts.len() != f.generic_degree() {
        return Err(Error::internal(format!(
            "basepoint fiber has {} points, expected {}",
            starts.len(),
            f.generic_degree()
        )));
    }
    let critical_values: Vec<Complex64> = loops.loops.iter().map(|l| l.value).collect();

    let tracked: Result<Vec<(Vec<usize>, f64)>> = if parallel {
        track_all_parallel(f, loops, &starts, &critical_values, params)
    } else {
        loops
            .loops
            .iter()
            .map(|lp| track_one_loop(f, lp, &starts, &critical_values, params))
            .collect()
    };
    let tracked = tracked?;

    let mut permutations = Vec::with_capacity(tracked.len());
    let mut max_residual = 0.0_f64;
    for (sigma, res) in tracked {
        permutations.push(sigma);
        max_residual = max_residual.max(res);
    }

    for (i, sigma) in permutations.iter().enumerate() {
        let expected = f.fiber_distinct_count(critical_values[i]);
        if cycle_count(sigma) != expected {
            return Err(Error::internal(format!(
                "loop {i}: permutation has {} cycles but the fiber has {} distinct points",
                cycle_count(sigma),
                expected
            )));
        }
    }

    Ok(CoverMonodromy {
        snaps: critical_values.iter().map(|v| snap_value(*v)).collect(),
        critical_values,
        permutations,
        sheet_labels: starts,
        max_residual,
    })
}

#[cfg(feature = "parallel")]
fn track_all_parallel(
    f: &CoverSpec,
    loops: &LoopSystem,
    starts: &[Complex64],
    critical_values: &[Complex64],
    params: &TrackerParams,
) -> Result<Vec<(Vec<usize>, f64)>> {
    loops
        .loops
        .par_iter()
        .map(|lp| track_one_loop(f, lp, starts, critical_values, params))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn track_all_parallel(
    f: &CoverSpec,
    loops: &LoopSystem,
    starts: &[Complex64],
    critical_values: &[Complex64],
    params: &TrackerParams,
) -> Result<Vec<(Vec<usize>, f64)>> {
    loops
        .loops
        .iter()
        .map(|lp| track_one_loop(f, lp, starts, critical_values, params))
        .collect()
}

/// Monodromy with default tracker parameters (loops tracked concurrently
/// when the `parallel` feature is on; results are merged in critical-value
/// order either way).
pub fn monodromy_permutations(f: &CoverSpec, loops: &LoopSystem) -> Result<CoverMonodromy> {
    monodromy_permutations_with(f, loops, &TrackerParams::default())
}

/// Monodromy with explicit tracker parameters.
pub fn monodromy_permutations_with(
    f: &CoverSpec,
    loops: &LoopSystem,
    params: &TrackerParams,
) -> Result<CoverMonodromy> {
    monodromy_impl(f, loops, params, true)
}

/// Strictly sequential variant (kept callable regardless of features, for
/// determinism checks and the benchmark comparison).
pub fn monodromy_permutations_seq(
    f: &CoverSpec,
    loops: &LoopSystem,
    params: &TrackerParams,
) -> Result<CoverMonodromy> {
    monodromy_impl(f, loops, params, false)
}

/// Track a single explicit piece chain (used for the big-circle loop
/// product cross-check). Returns the permutation.
pub fn track_custom_loop(
    f: &CoverSpec,
    pieces: &[PathPiece],
    basepoint: Complex64,
    critical_values: &[Complex64],
) -> Result<Vec<usize>> {
    let starts = f.fiber_roots(basepoint)?;
    let (ends, _) = track::track_path(
        f,
        pieces,
        &starts,
        critical_values,
        &TrackerParams::default(),
    )?;
    track::permutation_from_endpoints(&starts, &ends)
}

/// Exact quiver of the (shifted) direct image with compact support: snap
/// the critical values, build the localized quiver of the permutation
/// local system, and quotient each Φ_c by the fixed space of T_c (the span
/// of its cycle indicators). Nodes whose Φ ends up zero-dimensional are
/// kept. Sheets are numbered by the basepoint fiber sorted by (Re, Im).
pub fn quiver_from_cover(f: &CoverSpec, frame: Frame) -> Result<Quiver> {
    let mono = full_monodromy(f)?;
    quiver_from_monodromy(&mono, frame, None)
}

/// Same pipeline with sheets renumbered: `order[i]` is the default sheet
/// index that becomes sheet i.
pub fn quiver_from_cover_renumbered(
    f: &CoverSpec,
    frame: Frame,
    order: &[usize],
) -> Result<Quiver> {
    let mono = full_monodromy(f)?;
    quiver_from_monodromy(&mono, frame, Some(order))
}

fn full_monodromy(f: &CoverSpec) -> Result<CoverMonodromy> {
    let data = critical_data(f)?;
    let loops = default_loops(&data.values, None)?;
    monodromy_permutations(f, &loops)
}

/// Assemble the exact quiver from tracked monodromy. Fails with SnapFailed
/// if any critical value has no exact snap.
pub fn quiver_from_monodromy(
    mono: &CoverMonodromy,
    frame: Frame,
    order: Option<&[usize]>,
) -> Result<Quiver> {
    let n_sheets = mono.sheet_labels.len();
    let mut points = Vec::with_capacity(mono.critical_values.len());
    for (v, snap) in mono.critical_values.iter().zip(&mono.snaps) {
        match snap {
            Some(c) => points.push(c.clone()),
            None => {
                return Err(Error::SnapFailed {
                    value: format!("{} + {}i", v.re, v.im),
                })
            }
        }
    }

    let relabel: Vec<usize> = match order {
        Some(o) => {
            let mut seen = vec![false; n_sheets];
            if o.len() != n_sheets {
                return Err(Error::dims(format!(
                    "sheet order has {} entries for {} sheets",
                    o.len(),
                    n_sheets
                )));
            }
            for &i in o {
                if i >= n_sheets || seen[i] {
                    return Err(Error::dims("sheet order is not a permutation"));
                }
                seen[i] = true;
            }
            o.to_vec()
        }
        None => (0..n_sheets).collect(),
    };
    // new sheet i = old sheet relabel[i]; conjugate each permutation.
    let mut inverse = vec![0usize; n_sheets];
    for (new, &old) in relabel.iter().enumerate() {
        inverse[old] = new;
    }
    let matrices: Vec<MatrixQi> = mono
        .permutations
        .iter()
        .map(|sigma| {
            let renumbered: Vec<usize> =
                (0..n_sheets).map(|i| inverse[sigma[relabel[i]]]).collect();
            MatrixQi::from_permutation(&renumbered)
        })
        .collect();

    let expected_dims: Vec<(GaussRational, usize)> = points
        .iter()
        .cloned()
        .zip(
            mono.permutations
                .iter()
                .map(|s| n_sheets - cycle_count(s)),
        )
        .collect();

    let ls = LocalSystem::new(frame, n_sheets, points, matrices)?;
    let lq = ls.localized_quiver()?;
    let subs: Vec<MatrixQi> = (0..lq.nodes().len())
        .map(|i| {
            MatrixQi::identity(n_sheets)
                .sub(&lq.monodromy(i))
                .kernel_basis()
        })
        .collect();
    let q = lq.quotient_by_phi_subspaces(&subs)?;

    for node in q.nodes() {
        let expected = expected_dims
            .iter()
            .find(|(c, _)| *c == node.point)
            .map(|(_, d)| *d)
            .ok_or_else(|| Error::internal("node point missing from cover data"))?;
        if node.phi_dim() != expected {
            return Err(Error::internal(format!(
                "vanishing space at {} has dimension {}, cycle count predicts {}",
                node.point,
                node.phi_dim(),
                expected
            )));
        }
    }
    Ok(q)
}

/// The cubic cover f(u) = u³ − 3u.
pub fn airy_cover() -> CoverSpec {
    CoverSpec::polynomial(vec![
        GaussRational::zero(),
        GaussRational::from_int(-3),
        GaussRational::zero(),
        GaussRational::from_int(1),
    ])
    .expect("builtin cover is valid")
}

/// The two-sheeted cover f(u) = u + 1/u.
pub fn elementary_cover() -> CoverSpec {
    CoverSpec::laurent(vec![
        (-1, GaussRational::from_int(1)),
        (1, GaussRational::from_int(1)),
    ])
    .expect("builtin cover is valid")
}

/// Default-numbering sheets of the cubic cover, reordered to the sheet
/// labels used in the worked example: sheet 1 is the branch through the
/// positive real root over the basepoint (the one flowing to u = 2 around
/// z = +2), sheets 2 and 3 are the branches through the complex pair,
/// numbered so that the loop around +2 exchanges sheets 2, 3 and the loop
/// around −2 exchanges sheets 1, 3.
pub const AIRY_DOCUMENTED_SHEETS: [usize; 3] = [2, 0, 1];
