//! Sign-change scanning and bracketed root refinement.

use crate::error::{Error, Result};

/// Iteration cap for a single bracket refinement.
pub const MAX_REFINEMENT_ITERATIONS: usize = 200;

/// Refines a sign-change bracket `[a, b]` with a bisection/secant hybrid
/// (Brent's method) until the bracket is narrower than `tol`.
///
/// `fa` and `fb` are the function values at the ends and must have opposite
/// signs (or one of them is zero). The returned abscissa is the final-bracket
/// end with the smaller residual.
pub fn refine_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    tol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidInterval { a, b });
    }
    // b is the best estimate, c the opposite end of the bracket.
    let (mut a, mut b, mut c) = (a, b, a);
    let (mut fa, mut fb, mut fc) = (fa, fb, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_REFINEMENT_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if (c - b).abs() < tol.max(4.0 * f64::EPSILON * b.abs()) || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonFinite { at: b.into() });
        }
    }
    Err(Error::NoConvergence {
        a: b.min(c),
        b: b.max(c),
        iterations: MAX_REFINEMENT_ITERATIONS,
    })
}

/// Scans `[a, b]` on `n_grid` equally spaced points and refines every sign
/// change to a root with bracket width below `tol`.
///
/// Non-finite samples are skipped and both adjacent cells discarded. Roots of
/// even multiplicity produce no sign change and are not reported.
pub fn scan_roots<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n_grid: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() || n_grid < 2 {
        return Err(Error::InvalidInterval { a, b });
    }
    let h = (b - a) / (n_grid - 1) as f64;
    let xs: Vec<f64> = (0..n_grid)
        .map(|i| if i + 1 == n_grid { b } else { a + i as f64 * h })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&last| r > last) {
            roots.push(r);
        }
    };
    for i in 0..n_grid - 1 {
        let (x0, x1, y0, y1) = (xs[i], xs[i + 1], ys[i], ys[i + 1]);
        if !y0.is_finite() || !y1.is_finite() {
            continue;
        }
        if y0 == 0.0 {
            push(x0, &mut roots);
            continue;
        }
        if y1 == 0.0 {
            // Recorded when the next cell starts at it.
            if i + 2 == n_grid {
                push(x1, &mut roots);
            }
            continue;
        }
        if y0.signum() != y1.signum() {
            let r = refine_bracket(&mut f, x0, x1, y0, y1, tol)?;
            push(r, &mut roots);
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_zeros() {
        let r = scan_roots(|x| x.sin(), 0.1, 10.0, 1000, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        for (k, x) in r.iter().enumerate() {
            assert!((x - (k + 1) as f64 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn no_real_roots() {
        assert!(scan_roots(|x| x * x + 1.0, -5.0, 5.0, 100, 1e-12)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn double_root_is_missed() {
        assert!(
            scan_roots(|x| (x - 1.0).powi(2), 0.0, 3.0, 101, 1e-12)
                .unwrap()
                .len()
                <= 1
        );
        assert!(scan_roots(|x| (x - 1.3).powi(2), 0.0, 3.0, 100, 1e-12)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn nonfinite_cells_are_skipped() {
        let r = scan_roots(
            |x| {
                if (x - 2.0).abs() < 0.3 {
                    f64::NAN
                } else {
                    x.sin()
                }
            },
            0.5,
            7.0,
            200,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn invalid_interval() {
        assert!(scan_roots(|x| x, 1.0, 0.0, 10, 1e-12).is_err());
        assert!(scan_roots(|x| x, 0.0, 1.0, 1, 1e-12).is_err());
    }

    #[test]
    fn brent_on_steep_function() {
        let f = |x: f64| (x - 0.3).powi(3) * 1e6;
        let r = refine_bracket(f, 0.0, 1.0, f(0.0), f(1.0), 1e-14).unwrap();
        assert!((r - 0.3).abs() < 1e-4);
    }
}
