//! The contour identity between the imaginary-axis integral and the real-axis
//! spectral summation, and Cauchy-zero checks on rectangles away from the
//! real axis.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{i_imag, i_real};
use crate::error::{Error, Result};
use crate::media::{branch_points, PermittivityModel, Polarization};
use crate::numerics::{
    contour_integral, integrate, winding_from_log_derivative, ContourPath, QuadratureOptions,
};
use crate::openmodes::f_with_derivative;

/// Tolerance on `|contour integral of Omega d ln F|` over a rectangle.
pub const CAUCHY_TOLERANCE: f64 = 1e-8;

/// `(x0, x1, y0, y1)`: real and imaginary extents of a rectangle.
pub type Rectangle = (f64, f64, f64, f64);

/// Contour integral of `Omega F'/F` around one rectangle at fixed `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleCheck {
    pub r: f64,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub value: Complex64,
    pub magnitude: f64,
    /// Number of zeros minus poles of `F` enclosed, from `F'/F`.
    pub winding: i64,
    pub passed: bool,
}

/// Discrepancy between `I_real` and `I_imag` at matched cutoffs, with the
/// rectangle checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub polarization: Polarization,
    pub model: PermittivityModel,
    pub r0: f64,
    pub cutoff: f64,
    pub i_real: f64,
    pub i_imag: f64,
    pub absolute: f64,
    pub relative: f64,
    /// `2 int_0^{R_0} R Lambda arg F(Lambda) dR`, the endpoint term of the
    /// neglected arc at `|Omega| = Lambda`.
    pub endpoint_term: f64,
    /// Relative discrepancy after subtracting `endpoint_term` from `I_real`.
    pub relative_after_endpoint: f64,
    pub rectangles: Vec<RectangleCheck>,
    pub seed: u64,
}

impl CauchyReport {
    pub fn rectangles_passed(&self) -> bool {
        self.rectangles.iter().all(|c| c.passed)
    }
}

/// Integrates `Omega d/dOmega ln F~` counter-clockwise around
/// `[x0, x1] x [y0, y1]`. The rectangle must not touch the real axis, where
/// the cuts lie.
pub fn rectangle_cauchy_zero(
    s: Polarization,
    model: &PermittivityModel,
    r: f64,
    (x0, x1, y0, y1): Rectangle,
    rel_tol: f64,
) -> Result<RectangleCheck> {
    if !(x0 < x1 && y0 < y1) || (y0 <= 0.0 && y1 >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rectangle [{x0}, {x1}] x [{y0}, {y1}] must be proper and avoid the real axis"
        )));
    }
    let path = ContourPath::rectangle(x0, x1, y0, y1);
    let mut failure = None;
    let mut log_d = |z: Complex64| match f_with_derivative(s, z, r, model) {
        Ok((f, df)) => df / f,
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let value = contour_integral(|z| z * log_d(z), &path, rel_tol)?.value;
    let w = winding_from_log_derivative(&mut log_d, &path, 1e-8)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let magnitude = value.norm();
    Ok(RectangleCheck {
        r,
        x0,
        x1,
        y0,
        y1,
        value,
        magnitude,
        winding: w.count,
        passed: magnitude < CAUCHY_TOLERANCE && w.count == 0,
    })
}

/// `n` random rectangles off the real axis at random `R` in `(0, r_max]`,
/// reproducible from `seed`. Half lie in each half-plane.
pub fn random_rectangles(
    model: &PermittivityModel,
    r_max: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<(f64, Rectangle)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = rng.random_range(0.05..=1.0) * r_max;
        let span = branch_points(model, r)?.omega_b2 + 5.0;
        let x0 = rng.random_range(0.0..span);
        let x1 = x0 + rng.random_range(0.1..5.0);
        let y0 = rng.random_range(0.02..2.0);
        let y1 = y0 + rng.random_range(0.1..3.0);
        let rect = if i % 2 == 0 {
            (x0, x1, y0, y1)
        } else {
            (x0, x1, -y1, -y0)
        };
        out.push((r, rect));
    }
    Ok(out)
}

/// `2 int_0^{R_0} R Lambda arg F(Lambda) dR`: the boundary term of the arc
/// integral at the real end, which dominates the finite-cutoff discrepancy.
pub fn endpoint_term(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    lambda: f64,
    opts: &QuadratureOptions,
) -> Result<f64> {
    if model.is_vacuum() {
        return Ok(0.0);
    }
    let mut failure = None;
    let res = integrate(
        |r| match f_with_derivative(s, Complex64::new(lambda, 0.0), r, model) {
            Ok((f, _)) => r * lambda * f.arg(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        r0,
        opts,
    )?;
    failure.map_or(Ok(2.0 * res.value), Err)
}

/// Compares `I_real(R_0, cutoff)` with `I_imag(R_0, cutoff)` and runs
/// `n_rectangles` random rectangle checks with `R` up to `R_0`.
pub fn cauchy_identity(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    cutoff: f64,
    n_rectangles: usize,
    seed: u64,
    opts: &QuadratureOptions,
) -> Result<CauchyReport> {
    let re = i_real(s, model, r0, cutoff, opts)?;
    let im = i_imag(s, model, r0, cutoff, opts)?;
    let end = endpoint_term(s, model, r0, cutoff, opts)?;
    let absolute = (re.total - im.value).abs();
    let rel = |d: f64| {
        if im.value == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / im.value.abs()
        }
    };
    let mut rectangles = Vec::with_capacity(n_rectangles);
    for (r, rect) in random_rectangles(model, r0, n_rectangles, seed)? {
        rectangles.push(rectangle_cauchy_zero(s, model, r, rect, 1e-10)?);
    }
    Ok(CauchyReport {
        polarization: s,
        model: *model,
        r0,
        cutoff,
        i_real: re.total,
        i_imag: im.value,
        absolute,
        relative: rel(absolute),
        endpoint_term: end,
        relative_after_endpoint: rel((re.total - end - im.value).abs()),
        rectangles,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_in_upper_half_plane_vanishes() {
        let m = PermittivityModel::plasma(30.0).unwrap();
        for s in Polarization::BOTH {
            let c = rectangle_cauchy_zero(s, &m, 5.0, (1.0, 9.0, 0.1, 2.0), 1e-10).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn rectangle_on_axis_rejected() {
        let m = PermittivityModel::plasma(30.0).unwrap();
        assert!(
            rectangle_cauchy_zero(Polarization::TE, &m, 5.0, (1.0, 9.0, -0.1, 2.0), 1e-12).is_err()
        );
    }

    #[test]
    fn vacuum_both_sides_zero() {
        let v = PermittivityModel::vacuum();
        let r = cauchy_identity(
            Polarization::TM,
            &v,
            5.0,
            20.0,
            2,
            7,
            &QuadratureOptions::with_rel_tol(1e-8),
        )
        .unwrap();
        assert_eq!((r.i_real, r.i_imag, r.relative), (0.0, 0.0, 0.0));
        assert!(r.rectangles_passed());
    }
}
