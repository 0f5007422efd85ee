//! Dense complex polynomials and the simultaneous root iteration
//! (Aberth-Ehrlich) used for critical points and fiber solves. Everything
//! here is double precision; exactness re-enters downstream via snapping.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Drop trailing zero coefficients (exact zeros only: inputs come from
/// exact rational data, so spurious float dust never reaches the tail).
pub(crate) fn trim(coeffs: &[Complex64]) -> &[Complex64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    &coeffs[..end]
}

/// Horner evaluation returning (p(z), p'(z)).
pub(crate) fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of the polynomial with ascending coefficients.
///
/// Aberth-Ehrlich iteration from a symmetry-broken circle of initial
/// guesses, Newton-polished, with an absolute residual gate of
/// 1e-12 x max(1, coefficient magnitude) on the monic normalization.
/// Multiple roots converge as tight clusters and still pass the gate
/// because the residual is quadratic (or better) in the cluster radius.
pub(crate) fn all_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let (mut zs, monic) = match aberth_iterate(coeffs, 600) {
        Some(pair) => pair,
        None => return Ok(Vec::new()),
    };
    for z in zs.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *z);
            if dp.norm() > 1e-300 {
                let step = p / dp;
                if step.norm() < 1.0 {
                    *z -= step;
                }
            }
        }
    }
    let scale = monic
        .iter()
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    for z in &zs {
        let (p, _) = eval_with_derivative(&monic, *z);
        // Written so that a NaN residual also fails the gate.
        let residual_ok = p.norm() <= 1e-12 * scale;
        if !residual_ok {
            return Err(Error::NoConvergence { t: 0.0 });
        }
    }
    Ok(zs)
}

/// Best-effort variant without the residual gate, for counting distinct
/// roots of fibers over critical values (where roots genuinely collide).
pub(crate) fn roots_relaxed(coeffs: &[Complex64]) -> Vec<Complex64> {
    match aberth_iterate(coeffs, 400) {
        Some((zs, _)) => zs,
        None => Vec::new(),
    }
}

/// Shared iteration core: returns (roots, monic coefficients), or None for
/// polynomials of degree < 1.
fn aberth_iterate(coeffs: &[Complex64], max_iters: usize) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let coeffs = trim(coeffs);
    let n = coeffs.len().checked_sub(1)?;
    if n == 0 {
        return None;
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Some((vec![-monic[0]], monic));
    }

    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    for _ in 0..max_iters {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, zs[i]);
            if dp.norm() < 1e-300 {
                let nudge = Complex64::new(1e-8, 2e-8) * (1.0 + zs[i].norm());
                zs[i] += nudge;
                max_step = f64::INFINITY;
                continue;
            }
            let w = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = zs[i] - zs[j];
                    if diff.norm() < 1e-300 {
                        continue;
                    }
                    s += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            zs[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if max_step < 1e-13 {
            break;
        }
    }
    Some((zs, monic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut zs: Vec<Complex64>) -> Vec<Complex64> {
        zs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        zs
    }

    #[test]
    fn cubic_roots() {
        // u^3 - 3u = u(u - sqrt3)(u + sqrt3)
        let roots = sorted(all_roots(&[c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap());
        let s3 = 3.0_f64.sqrt();
        assert!((roots[0] - c(-s3, 0.0)).norm() < 1e-10);
        assert!(roots[1].norm() < 1e-10);
        assert!((roots[2] - c(s3, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn double_root_passes_residual_gate() {
        // (u-1)^2 (u+2) = u^3 - 3u + 2
        let roots = all_roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(roots.len(), 3);
        let near_one = roots.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-4).count();
        let near_minus_two = roots.iter().filter(|z| (*z - c(-2.0, 0.0)).norm() < 1e-8).count();
        assert_eq!((near_one, near_minus_two), (2, 1));
    }

    #[test]
    fn linear_and_constant() {
        let roots = all_roots(&[c(-4.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!(all_roots(&[c(5.0, 0.0)]).unwrap().is_empty());
        assert!(all_roots(&[]).unwrap().is_empty());
    }

    #[test]
    fn complex_coefficients() {
        // (u - i)(u - 3) = u^2 - (3+i)u + 3i
        let roots = sorted(all_roots(&[c(0.0, 3.0), c(-3.0, -1.0), c(1.0, 0.0)]).unwrap());
        assert!((roots[0] - c(0.0, 1.0)).norm() < 1e-11);
        assert!((roots[1] - c(3.0, 0.0)).norm() < 1e-11);
    }
}
