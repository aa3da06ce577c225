//! Contour integrals in the complex plane and argument-principle winding
//! numbers.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, QuadratureOptions, QuadratureResult};
use crate::error::{Error, Result};

/// A closed or open path in the complex plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ContourPath {
    /// Straight segments through the vertices, in order; `closed` adds the
    /// segment back to the first vertex.
    Polyline {
        vertices: Vec<Complex64>,
        closed: bool,
    },
    /// Circle traversed once.
    Circle {
        center: Complex64,
        radius: f64,
        counter_clockwise: bool,
    },
}

impl ContourPath {
    /// Counter-clockwise rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        ContourPath::Polyline {
            vertices: vec![
                Complex64::new(x0, y0),
                Complex64::new(x1, y0),
                Complex64::new(x1, y1),
                Complex64::new(x0, y1),
            ],
            closed: true,
        }
    }

    /// Counter-clockwise circle.
    pub fn circle(center: Complex64, radius: f64) -> Self {
        ContourPath::Circle {
            center,
            radius,
            counter_clockwise: true,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ContourPath::Polyline { vertices, .. } if vertices.len() < 2 => Err(
                Error::InvalidArgument("a polyline needs at least two vertices".into()),
            ),
            ContourPath::Circle { radius, .. } if !(*radius > 0.0) => Err(Error::InvalidArgument(
                "a circle needs a positive radius".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Integrates `f` along `path`, one adaptive rule per segment (or over the
/// angle for a circle). Tolerances apply to each piece separately.
pub fn contour_integral<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    path: &ContourPath,
    rel_tol: f64,
) -> Result<QuadratureResult<Complex64>> {
    path.validate()?;
    let opts = QuadratureOptions {
        rel_tol,
        abs_tol: 1e-15,
        max_subdivisions: 4000,
    };
    let mut total = QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
    };
    let mut bad: Option<Complex64> = None;
    match path {
        ContourPath::Polyline { vertices, closed } => {
            let mut segs: Vec<(Complex64, Complex64)> =
                vertices.windows(2).map(|w| (w[0], w[1])).collect();
            if *closed {
                segs.push((*vertices.last().unwrap(), vertices[0]));
            }
            for (z0, z1) in segs {
                let dz = z1 - z0;
                let r = integrate(
                    |t: f64| {
                        let z = z0 + dz * t;
                        let v = f(z) * dz;
                        if !(v.re.is_finite() && v.im.is_finite()) && bad.is_none() {
                            bad = Some(z);
                        }
                        v
                    },
                    0.0,
                    1.0,
                    &opts,
                );
                let r = match (r, bad) {
                    (_, Some(z)) => return Err(Error::NonFinite { at: z }),
                    (r, None) => r?,
                };
                total.value += r.value;
                total.error_estimate += r.error_estimate;
                total.evaluations += r.evaluations;
            }
        }
        ContourPath::Circle {
            center,
            radius,
            counter_clockwise,
        } => {
            let sign = if *counter_clockwise { 1.0 } else { -1.0 };
            // Four quarter arcs keep the adaptive rule well conditioned.
            for q in 0..4 {
                let r = integrate(
                    |theta: f64| {
                        let e = Complex64::from_polar(1.0, sign * theta);
                        let z = center + radius * e;
                        let v = f(z) * Complex64::new(0.0, sign * radius) * e;
                        if !(v.re.is_finite() && v.im.is_finite()) && bad.is_none() {
                            bad = Some(z);
                        }
                        v
                    },
                    0.5 * PI * q as f64,
                    0.5 * PI * (q + 1) as f64,
                    &opts,
                );
                let r = match (r, bad) {
                    (_, Some(z)) => return Err(Error::NonFinite { at: z }),
                    (r, None) => r?,
                };
                total.value += r.value;
                total.error_estimate += r.error_estimate;
                total.evaluations += r.evaluations;
            }
        }
    }
    Ok(total)
}

/// Result of an argument-principle evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    /// `(1 / 2 pi i) * contour integral of f'/f`.
    pub raw: Complex64,
    /// `raw.re` rounded to the nearest integer.
    pub count: i64,
    /// Distance of `raw` from `count`.
    pub residual: f64,
    /// Set when the residual exceeds 0.1.
    pub flagged: bool,
}

/// Winding number of `f` around `path` from its logarithmic derivative
/// `f'/f`, supplied directly by the caller.
pub fn winding_from_log_derivative<F: FnMut(Complex64) -> Complex64>(
    log_derivative: F,
    path: &ContourPath,
    rel_tol: f64,
) -> Result<Winding> {
    let r = contour_integral(log_derivative, path, rel_tol)?;
    let raw = r.value / Complex64::new(0.0, 2.0 * PI);
    let count = raw.re.round();
    let residual = (raw - Complex64::new(count, 0.0)).norm();
    Ok(Winding {
        raw,
        count: count as i64,
        residual,
        flagged: residual > 0.1,
    })
}

/// Winding number of an analytic `f` with derivative `df` around `path`.
pub fn winding<F, D>(mut f: F, mut df: D, path: &ContourPath, rel_tol: f64) -> Result<Winding>
where
    F: FnMut(Complex64) -> Complex64,
    D: FnMut(Complex64) -> Complex64,
{
    winding_from_log_derivative(|z| df(z) / f(z), path, rel_tol)
}
