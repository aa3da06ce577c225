//! The Lifshitz function `F`, its Schwarz extension and the entire
//! numerator `G = (chi_I + w chi_II)^2 F` used for zero counting.
//!
//! `w` is 1 for TE and `kappa` for TM.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::{
    chi_continued_with_derivative, chi_on_branch, Branch, PermittivityModel, Polarization, Region,
};

/// Square-root sheet used to evaluate `chi_I` and `chi_II`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// Upper-half-plane rule (`Im chi >= 0`); real frequencies are limits
    /// from above.
    Physical,
    /// Fixed branches, analytic across a real-axis window where both
    /// discriminants keep their sign.
    Local { outer: Branch, inner: Branch },
}

/// `chi_I`, `chi_II`, `w` and their frequency derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub chi1: Complex64,
    pub dchi1: Complex64,
    pub chi2: Complex64,
    pub dchi2: Complex64,
    pub w: Complex64,
    pub dw: Complex64,
}

fn region_chi(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
    r: f64,
    branch: Option<Branch>,
) -> Result<(Complex64, Complex64)> {
    match branch {
        None => chi_continued_with_derivative(model, region, omega, r),
        Some(b) => chi_on_branch(model, region, omega, r, b),
    }
}

impl Kernel {
    pub fn new(
        s: Polarization,
        omega: Complex64,
        r: f64,
        model: &PermittivityModel,
        sheet: Sheet,
    ) -> Result<Self> {
        if matches!(model, PermittivityModel::PerfectConductor) {
            return Err(Error::UnsupportedModel(
                "the perfect conductor has no finite kernel".into(),
            ));
        }
        let (b1, b2) = match sheet {
            Sheet::Physical => (None, None),
            Sheet::Local { outer, inner } => (Some(outer), Some(inner)),
        };
        let (chi1, dchi1) = region_chi(model, Region::I, omega, r, b1)?;
        let (chi2, dchi2) = region_chi(model, Region::II, omega, r, b2)?;
        let (w, dw) = match s {
            Polarization::TE => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Polarization::TM => (model.kappa(omega)?, model.kappa_derivative(omega)?),
        };
        Ok(Kernel {
            chi1,
            dchi1,
            chi2,
            dchi2,
            w,
            dw,
        })
    }

    /// `(a, b) = (chi_I - w chi_II, chi_I + w chi_II)` and derivatives.
    fn ab(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        let wc = self.w * self.chi2;
        let dwc = self.dw * self.chi2 + self.w * self.dchi2;
        (
            self.chi1 - wc,
            self.chi1 + wc,
            self.dchi1 - dwc,
            self.dchi1 + dwc,
        )
    }

    /// `F` and `dF/dOmega`.
    pub fn f(&self) -> (Complex64, Complex64) {
        let (a, b, da, db) = self.ab();
        let rho = a / b;
        let drho = (da * b - a * db) / (b * b);
        let e = (2.0 * Complex64::i() * self.chi2).exp();
        let f = 1.0 - rho * rho * e;
        let df = -(2.0 * rho * drho + 2.0 * Complex64::i() * self.dchi2 * rho * rho) * e;
        (f, df)
    }

    /// `rho^2 e^{2 i chi_II} = 1 - F`, free of the cancellation in `1 - F`.
    pub fn deficit(&self) -> Complex64 {
        let (a, b, _, _) = self.ab();
        let rho = a / b;
        rho * rho * (2.0 * Complex64::i() * self.chi2).exp()
    }

    /// `d/dOmega ln(rho^2 e^{2 i chi_II})`. Where `|rho| = 1` on the real
    /// axis, `-Im F'/F` equals minus half its imaginary part.
    pub fn log_x_derivative(&self) -> Complex64 {
        let (a, b, da, db) = self.ab();
        2.0 * (da / a - db / b) + 2.0 * Complex64::i() * self.dchi2
    }

    /// `G = b^2 - a^2 e^{2 i chi_II}` and `dG/dOmega`.
    pub fn g(&self) -> (Complex64, Complex64) {
        let (a, b, da, db) = self.ab();
        let e = (2.0 * Complex64::i() * self.chi2).exp();
        let g = b * b - a * a * e;
        let dg = 2.0 * b * db - (2.0 * a * da + 2.0 * Complex64::i() * self.dchi2 * a * a) * e;
        (g, dg)
    }
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let em = x.exp_m1();
    let s = (0.5 * y).sin();
    Complex64::new(em * y.cos() - 2.0 * s * s, (em + 1.0) * y.sin())
}

fn f_pc(omega: Complex64, r: f64) -> Result<(Complex64, Complex64)> {
    let vac = PermittivityModel::vacuum();
    let (chi2, dchi2) = chi_continued_with_derivative(&vac, Region::II, omega, r)?;
    let z = 2.0 * Complex64::i() * chi2;
    Ok((-expm1(z), -2.0 * Complex64::i() * dchi2 * z.exp()))
}

/// `F` and `F'` on a chosen sheet without reflection.
pub fn f_local(
    s: Polarization,
    omega: Complex64,
    r: f64,
    model: &PermittivityModel,
    sheet: Sheet,
) -> Result<(Complex64, Complex64)> {
    if matches!(model, PermittivityModel::PerfectConductor) {
        return f_pc(omega, r);
    }
    Ok(Kernel::new(s, omega, r, model, sheet)?.f())
}

/// The Schwarz extension `F~` and its derivative: the physical sheet in the
/// closed upper half-plane, `conj F(conj Omega)` below it.
pub fn f_with_derivative(
    s: Polarization,
    omega: Complex64,
    r: f64,
    model: &PermittivityModel,
) -> Result<(Complex64, Complex64)> {
    if omega.im < 0.0 {
        let (f, df) = f_with_derivative(s, omega.conj(), r, model)?;
        return Ok((f.conj(), df.conj()));
    }
    f_local(s, omega, r, model, Sheet::Physical)
}

/// `1 - F` on the physical sheet in the closed upper half-plane.
pub fn f_deficit(
    s: Polarization,
    omega: Complex64,
    r: f64,
    model: &PermittivityModel,
) -> Result<Complex64> {
    if omega.im < 0.0 {
        return Err(Error::Domain(format!(
            "1 - F is evaluated in the upper half-plane, got {omega}"
        )));
    }
    if matches!(model, PermittivityModel::PerfectConductor) {
        let vac = PermittivityModel::vacuum();
        let chi2 = chi_continued_with_derivative(&vac, Region::II, omega, r)?.0;
        return Ok((2.0 * Complex64::i() * chi2).exp());
    }
    Ok(Kernel::new(s, omega, r, model, Sheet::Physical)?.deficit())
}

/// `F~(Omega)`.
pub fn f_value(
    s: Polarization,
    omega: Complex64,
    r: f64,
    model: &PermittivityModel,
) -> Result<Complex64> {
    f_with_derivative(s, omega, r, model).map(|(f, _)| f)
}

/// `d/dOmega ln(G / chi_II)` on a local sheet. Its winding around a contour
/// counts the zeros of `F` that are not branch points.
pub fn g_log_derivative(
    s: Polarization,
    omega: Complex64,
    r: f64,
    model: &PermittivityModel,
    sheet: Sheet,
) -> Result<Complex64> {
    let k = Kernel::new(s, omega, r, model, sheet)?;
    let (g, dg) = k.g();
    Ok(dg / g - k.dchi2 / k.chi2)
}
