//! Loop construction in the base: for each critical value, an approach
//! path from the basepoint, a full counterclockwise circle, and the
//! reversed approach. Straight legs that would pass within the loop
//! radius of some other critical value are rerouted along a
//! counterclockwise arc of that radius around it.

use crate::error::{Error, Result};
use num_complex::Complex64;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// One piece of a path: a straight segment or a circular arc. Arcs are
/// parametrized by angle running from `theta_from` to `theta_to`
/// (counterclockwise when increasing; a full circle spans 2π).
#[derive(Debug, Clone)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        theta_from: f64,
        theta_to: f64,
    },
}

impl PathPiece {
    pub fn len(&self) -> f64 {
        match self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Arc {
                radius,
                theta_from,
                theta_to,
                ..
            } => radius * (theta_to - theta_from).abs(),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0)
    }

    /// Point at local parameter s in [0, 1].
    pub fn at(&self, s: f64) -> Complex64 {
        match self {
            PathPiece::Segment { from, to } => from + (to - from) * s,
            PathPiece::Arc {
                center,
                radius,
                theta_from,
                theta_to,
            } => {
                let th = theta_from + (theta_to - theta_from) * s;
                center + Complex64::new(th.cos(), th.sin()) * *radius
            }
        }
    }

    /// d(point)/ds at local parameter s.
    pub fn velocity(&self, s: f64) -> Complex64 {
        match self {
            PathPiece::Segment { from, to } => to - from,
            PathPiece::Arc {
                center: _,
                radius,
                theta_from,
                theta_to,
            } => {
                let span = theta_to - theta_from;
                let th = theta_from + span * s;
                Complex64::new(-th.sin(), th.cos()) * (*radius * span)
            }
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match self {
            PathPiece::Segment { from, to } => PathPiece::Segment {
                from: *to,
                to: *from,
            },
            PathPiece::Arc {
                center,
                radius,
                theta_from,
                theta_to,
            } => PathPiece::Arc {
                center: *center,
                radius: *radius,
                theta_from: *theta_to,
                theta_to: *theta_from,
            },
        }
    }

    /// Exact (up to rounding) minimum distance from the piece to a point.
    pub fn min_distance_to(&self, w: Complex64) -> f64 {
        match self {
            PathPiece::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (w - from).norm();
                }
                let t = ((w - from).re * d.re + (w - from).im * d.im) / len2;
                let t = t.clamp(0.0, 1.0);
                (w - (from + d * t)).norm()
            }
            PathPiece::Arc {
                center,
                radius,
                theta_from,
                theta_to,
            } => {
                let rel = w - center;
                let (lo, hi) = if theta_from <= theta_to {
                    (*theta_from, *theta_to)
                } else {
                    (*theta_to, *theta_from)
                };
                let phi = rel.im.atan2(rel.re);
                // Shift phi by whole turns into [lo, lo + 2π) and test
                // membership in the angular span.
                let mut shifted = phi;
                while shifted < lo {
                    shifted += TAU;
                }
                while shifted >= lo + TAU {
                    shifted -= TAU;
                }
                if shifted <= hi {
                    (rel.norm() - radius).abs()
                } else {
                    let a = (w - self.at(0.0)).norm();
                    let b = (w - self.at(1.0)).norm();
                    a.min(b)
                }
            }
        }
    }
}

/// Closed loop around one critical value.
#[derive(Debug, Clone)]
pub struct Loop {
    pub value: Complex64,
    pub pieces: Vec<PathPiece>,
}

/// Loops around every critical value from a common basepoint.
#[derive(Debug, Clone)]
pub struct LoopSystem {
    pub basepoint: Complex64,
    pub delta: f64,
    pub radius: f64,
    pub loops: Vec<Loop>,
}

fn spacing(values: &[Complex64]) -> f64 {
    let mut min_dist = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            min_dist = min_dist.min((values[i] - values[j]).norm());
        }
    }
    if min_dist.is_finite() {
        min_dist / 2.0
    } else {
        1.0
    }
}

/// Default loop system: basepoint max(1, δ/2) right of the rightmost
/// critical value at height δ/4, circles of radius δ/2, where δ is half
/// the minimum pairwise distance between critical values (1 for a single
/// value).
pub fn default_loops(values: &[Complex64], basepoint: Option<Complex64>) -> Result<LoopSystem> {
    let delta = spacing(values);
    loops_with_radius(values, basepoint, delta / 2.0)
}

/// Loop system with an explicit circle radius in (0, δ/2]; smaller radii
/// are used by the stability suite. A user-supplied basepoint must keep
/// distance ≥ δ from every critical value.
pub fn loops_with_radius(
    values: &[Complex64],
    basepoint: Option<Complex64>,
    radius: f64,
) -> Result<LoopSystem> {
    if values.is_empty() {
        return Err(Error::DegenerateCover);
    }
    let delta = spacing(values);
    assert!(
        radius > 0.0 && radius <= delta / 2.0 + 1e-12,
        "loop radius {radius} outside (0, {}]",
        delta / 2.0
    );
    let b = match basepoint {
        Some(b) => {
            for v in values {
                let d = (b - v).norm();
                if d < delta {
                    return Err(Error::BasepointTooClose {
                        basepoint: format_complex(b),
                        value: format_complex(*v),
                        min_distance: format!("{delta}"),
                    });
                }
            }
            b
        }
        None => {
            let max_re = values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
            Complex64::new(max_re + (delta / 2.0).max(1.0), delta / 4.0)
        }
    };

    let loops: Vec<Loop> = values
        .iter()
        .map(|&v| build_loop(b, v, values, radius))
        .collect();

    let system = LoopSystem {
        basepoint: b,
        delta,
        radius,
        loops,
    };
    verify_clearance(&system, values)?;
    Ok(system)
}

fn format_complex(z: Complex64) -> String {
    format!("{} + {}i", z.re, z.im)
}

/// Straight run from `from` to `to`, rerouted around every value in
/// `others` (excluding index `skip`) that lies within `r` of the line:
/// the chord through the radius-r disk is replaced by the arc with
/// increasing angle, which passes above the value for the leftward
/// horizontal travel used by default loops.
fn detoured_segment(
    from: Complex64,
    to: Complex64,
    others: &[Complex64],
    skip: Complex64,
    r: f64,
) -> Vec<PathPiece> {
    let dir = to - from;
    let len2 = dir.norm_sqr();
    if len2 == 0.0 {
        return Vec::new();
    }
    // (t_enter, t_exit, center) per crossed disk, in travel order.
    let mut crossings: Vec<(f64, f64, Complex64)> = Vec::new();
    for &w in others {
        if (w - skip).norm() == 0.0 {
            continue;
        }
        let rel = w - from;
        let t_foot = (rel.re * dir.re + rel.im * dir.im) / len2;
        let foot = from + dir * t_foot;
        let d_perp = (w - foot).norm();
        if d_perp >= r * (1.0 - 1e-12) {
            continue;
        }
        let half = (r * r - d_perp * d_perp).sqrt() / len2.sqrt();
        let (t_in, t_out) = (t_foot - half, t_foot + half);
        if t_out <= 0.0 || t_in >= 1.0 {
            continue;
        }
        assert!(
            t_in > 0.0 && t_out < 1.0,
            "leg endpoint inside a detour disk; construction bug"
        );
        crossings.push((t_in, t_out, w));
    }
    crossings.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut pieces = Vec::new();
    let mut cursor = from;
    for (t_in, t_out, w) in crossings {
        let p_in = from + dir * t_in;
        let p_out = from + dir * t_out;
        if (p_in - cursor).norm() > 1e-15 {
            pieces.push(PathPiece::Segment {
                from: cursor,
                to: p_in,
            });
        }
        let th_in = (p_in - w).im.atan2((p_in - w).re);
        let mut th_out = (p_out - w).im.atan2((p_out - w).re);
        while th_out <= th_in {
            th_out += TAU;
        }
        pieces.push(PathPiece::Arc {
            center: w,
            radius: r,
            theta_from: th_in,
            theta_to: th_out,
        });
        cursor = p_out;
    }
    if (to - cursor).norm() > 1e-15 {
        pieces.push(PathPiece::Segment { from: cursor, to });
    }
    pieces
}

fn build_loop(b: Complex64, v: Complex64, all: &[Complex64], r: f64) -> Loop {
    let dy = b.im - v.im;
    let mut approach: Vec<PathPiece> = Vec::new();
    let entry_angle = if dy.abs() < r * 0.999 {
        // Horizontal leg straight into the circle at the basepoint's height.
        let entry = Complex64::new(v.re + (r * r - dy * dy).sqrt(), b.im);
        approach.extend(detoured_segment(b, entry, all, v, r));
        dy.atan2(entry.re - v.re)
    } else {
        // Stand-off column at Re(v) + 2r, then come in at height r/2 on
        // the basepoint's side of the value.
        let side = if dy >= 0.0 { 1.0 } else { -1.0 };
        let stage1 = Complex64::new(v.re + 2.0 * r, b.im);
        let stage2 = Complex64::new(v.re + 2.0 * r, v.im + side * r / 2.0);
        let entry = Complex64::new(v.re + r * (3.0_f64).sqrt() / 2.0, stage2.im);
        approach.extend(detoured_segment(b, stage1, all, v, r));
        approach.extend(detoured_segment(stage1, stage2, all, v, r));
        approach.extend(detoured_segment(stage2, entry, all, v, r));
        side * std::f64::consts::FRAC_PI_6
    };

    let mut pieces = approach.clone();
    pieces.push(PathPiece::Arc {
        center: v,
        radius: r,
        theta_from: entry_angle,
        theta_to: entry_angle + TAU,
    });
    pieces.extend(approach.iter().rev().map(PathPiece::reversed));
    Loop { value: v, pieces }
}

/// Check the construction invariants: every loop closes at the basepoint
/// and keeps distance ≥ radius·(1 − 1e−6) from every critical value.
fn verify_clearance(system: &LoopSystem, values: &[Complex64]) -> Result<()> {
    let bound = system.radius * (1.0 - 1e-6);
    for lp in &system.loops {
        let start = lp.pieces.first().map(PathPiece::start);
        let end = lp.pieces.last().map(PathPiece::end);
        if start != Some(system.basepoint) || end != Some(system.basepoint) {
            return Err(Error::internal("loop does not close at the basepoint"));
        }
        for (a, b) in lp.pieces.iter().zip(lp.pieces.iter().skip(1)) {
            if (a.end() - b.start()).norm() > 1e-9 {
                return Err(Error::internal("loop pieces do not chain"));
            }
        }
        for &w in values {
            let min_dist = lp
                .pieces
                .iter()
                .map(|p| p.min_distance_to(w))
                .fold(f64::INFINITY, f64::min);
            if min_dist < bound {
                return Err(Error::internal(format!(
                    "loop around {} passes within {} of {}",
                    format_complex(lp.value),
                    min_dist,
                    format_complex(w)
                )));
            }
        }
    }
    Ok(())
}

/// One big counterclockwise circle enclosing all critical values with
/// margin 2δ, approached radially from the basepoint: the independent
/// cross-check for loop products.
pub fn enclosing_loop(values: &[Complex64], basepoint: Complex64) -> Vec<PathPiece> {
    let n = values.len().max(1) as f64;
    let centroid = values.iter().sum::<Complex64>() / n;
    let spread = values
        .iter()
        .map(|v| (v - centroid).norm())
        .fold(0.0_f64, f64::max);
    let radius = spread + 2.0 * spacing(values).max(0.5);
    let dir = basepoint - centroid;
    let dir = if dir.norm() < 1e-12 {
        Complex64::new(1.0, 0.0)
    } else {
        dir / dir.norm()
    };
    let entry = centroid + dir * radius;
    let theta = (entry - centroid).im.atan2((entry - centroid).re);
    vec![
        PathPiece::Segment {
            from: basepoint,
            to: entry,
        },
        PathPiece::Arc {
            center: centroid,
            radius,
            theta_from: theta,
            theta_to: theta + TAU,
        },
        PathPiece::Segment {
            from: entry,
            to: basepoint,
        },
    ]
}
