//! Imaginary-frequency form of the interaction integral.

use num_complex::Complex64;

use super::LifshitzResult;
use crate::error::{Error, Result};
use crate::media::{PermittivityModel, Polarization};
use crate::numerics::{integrate, integrate_2d, QuadratureOptions, QuadratureResult};
use crate::openmodes::{f_deficit, f_with_derivative};

fn check_model(model: &PermittivityModel) -> Result<()> {
    match model {
        PermittivityModel::Lorentz { .. } => Err(Error::UnsupportedModel(format!(
            "the Lifshitz integrals support const, plasma and pc, got {model}"
        ))),
        _ => Ok(()),
    }
}

/// `Omega'' d/dOmega'' ln F(i Omega'')` at transverse wavenumber `r`.
pub fn imag_axis_integrand(
    s: Polarization,
    y: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    check_model(model)?;
    if !(y >= 0.0) || !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "need Omega'' >= 0 and R >= 0, got ({y}, {r})"
        )));
    }
    if model.is_vacuum() {
        return Ok(0.0);
    }
    if let PermittivityModel::PerfectConductor = model {
        let q = r.hypot(y);
        if q == 0.0 {
            return Ok(1.0);
        }
        return Ok(2.0 * y * y / (q * (2.0 * q).exp_m1()));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let (f, df) = f_with_derivative(s, Complex64::new(0.0, y), r, model)?;
    Ok(y * (Complex64::i() * df / f).re)
}

/// `ln F(i Omega'')`, computed as `ln(1 + x)` without cancellation.
pub fn imag_axis_log_f(s: Polarization, y: f64, r: f64, model: &PermittivityModel) -> Result<f64> {
    check_model(model)?;
    if model.is_vacuum() {
        return Ok(0.0);
    }
    if let PermittivityModel::PerfectConductor = model {
        return Ok((-(-2.0 * r.hypot(y)).exp()).ln_1p());
    }
    let x = f_deficit(s, Complex64::new(0.0, y.max(1e-300)), r, model)?;
    Ok((-x.re).ln_1p())
}

/// Inner integral `int_0^rho Omega'' d ln F dOmega''` at fixed `r`.
pub fn inner_imag(
    s: Polarization,
    r: f64,
    rho: f64,
    model: &PermittivityModel,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<f64>> {
    let mut failure = None;
    let res = integrate(
        |y| match imag_axis_integrand(s, y, r, model) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        rho,
        opts,
    )?;
    failure.map_or(Ok(res), Err)
}

/// The inner integral after integration by parts:
/// `rho ln F(i rho) - int_0^rho ln F dOmega''`.
pub fn inner_imag_by_parts(
    s: Polarization,
    r: f64,
    rho: f64,
    model: &PermittivityModel,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult<f64>> {
    let mut failure = None;
    let mut res = integrate(
        |y| match imag_axis_log_f(s, y, r, model) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        rho,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let boundary = if rho.is_finite() {
        rho * imag_axis_log_f(s, rho, r, model)?
    } else {
        0.0
    };
    res.value = boundary - res.value;
    Ok(res)
}

fn finish(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    rho: f64,
    res: Result<QuadratureResult<f64>>,
    failure: Option<Error>,
) -> Result<LifshitzResult> {
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res?;
    Ok(LifshitzResult {
        value: 2.0 * res.value,
        polarization: s,
        model: *model,
        r0,
        rho,
        error_estimate: 2.0 * res.error_estimate,
    })
}

fn check_cutoffs(r0: f64, rho: f64) -> Result<()> {
    if !(r0 > 0.0) || !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoffs must be positive, got R0 = {r0}, rho = {rho}"
        )));
    }
    Ok(())
}

/// `2 int_0^{R_0} R dR int_0^rho Omega'' d ln F(i Omega'') dOmega''`.
pub fn i_imag(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    rho: f64,
    opts: &QuadratureOptions,
) -> Result<LifshitzResult> {
    check_model(model)?;
    check_cutoffs(r0, rho)?;
    let mut failure = None;
    let res = integrate_2d(
        |r, y| match imag_axis_integrand(s, y, r, model) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        r0,
        rho,
        opts,
    );
    finish(s, model, r0, rho, res, failure)
}

/// `i_imag` through the integrated-by-parts inner integral.
pub fn i_imag_by_parts(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    rho: f64,
    opts: &QuadratureOptions,
) -> Result<LifshitzResult> {
    check_model(model)?;
    check_cutoffs(r0, rho)?;
    let inner_opts = QuadratureOptions {
        rel_tol: 0.1 * opts.rel_tol,
        ..*opts
    };
    let mut failure = None;
    let res = integrate(
        |r| match inner_imag_by_parts(s, r, rho, model, &inner_opts) {
            Ok(v) => r * v.value,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        r0,
        opts,
    );
    finish(s, model, r0, rho, res, failure)
}
