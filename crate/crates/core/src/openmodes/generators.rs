//! Real global dispersion generators of the evanescent (category E) words.

use num_complex::Complex64;

use crate::cavity::ModeWord;
use crate::error::{Error, Result};
use crate::media::{
    classify_region, ModeClass, PermittivityModel, Polarization, Region, LINEAR_TOLERANCE,
};

/// Parity of the slab mode selected by a factor of the EOE/EEE generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

struct CatE {
    zeta1: f64,
    inner: f64,
    w: f64,
}

fn kinematics(
    s: Polarization,
    word: ModeWord,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<CatE> {
    let (outer, inner) = word.letters();
    if outer != ModeClass::E {
        return Err(Error::InvalidArgument(format!(
            "{word} is not an evanescent word"
        )));
    }
    let k1 = classify_region(model, Region::I, omega, r)?;
    let k2 = classify_region(model, Region::II, omega, r)?;
    let inner_ok = match inner {
        ModeClass::L => k2.discriminant.abs() <= LINEAR_TOLERANCE * r.powi(2).max(1.0),
        c => k2.class == c,
    };
    if k1.class != ModeClass::E || !inner_ok {
        return Err(Error::KinematicMismatch(format!(
            "word {word} needs (E, {}) but Omega = {omega}, R = {r} gives ({:?}, {:?})",
            inner.letter(),
            k1.class,
            k2.class
        )));
    }
    let w = match s {
        Polarization::TE => 1.0,
        Polarization::TM => model.kappa(Complex64::new(omega, 0.0))?.re,
    };
    Ok(CatE {
        zeta1: k1.value,
        inner: if inner == ModeClass::L { 0.0 } else { k2.value },
        w,
    })
}

/// Value of the real generator `D^s_word` at `(omega, r)`:
///
/// EOE: `2 e^{-zeta_I} [(zeta_I^2 - (w chi)^2) sin chi + 2 zeta_I w chi cos chi]`,
/// EEE: `e^{-zeta_I} [(zeta_I + w zeta_II)^2 e^{zeta_II} - (zeta_I - w zeta_II)^2 e^{-zeta_II}]`,
/// ELE (at `omega = r`): `zeta_I (zeta_I + 2 w) e^{-zeta_I}`.
pub fn cat_e_generator(
    s: Polarization,
    word: ModeWord,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    let k = kinematics(s, word, omega, r, model)?;
    let (z, w) = (k.zeta1, k.w);
    let e = (-z).exp();
    Ok(match word {
        ModeWord::EOE => {
            let (c, wc) = (k.inner, w * k.inner);
            2.0 * e * ((z * z - wc * wc) * c.sin() + 2.0 * z * wc * c.cos())
        }
        ModeWord::EEE => {
            let (zz, wz) = (k.inner, w * k.inner);
            e * ((z + wz).powi(2) * zz.exp() - (z - wz).powi(2) * (-zz).exp())
        }
        ModeWord::ELE => z * (z + 2.0 * w) * e,
        _ => unreachable!("checked by kinematics"),
    })
}

/// One parity factor of the EOE or EEE generator; the generator is a
/// positive multiple of the product of the two factors.
///
/// EOE: even `zeta cos(chi/2) - w chi sin(chi/2)`, odd
/// `zeta sin(chi/2) + w chi cos(chi/2)`. EEE: even
/// `zeta_I cosh(zeta_II/2) + w zeta_II sinh(zeta_II/2)`, odd
/// `zeta_I sinh(zeta_II/2) + w zeta_II cosh(zeta_II/2)`.
pub fn parity_factor(
    s: Polarization,
    word: ModeWord,
    parity: Parity,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    let k = kinematics(s, word, omega, r, model)?;
    let (z, w, v) = (k.zeta1, k.w, k.inner);
    let h = 0.5 * v;
    match (word, parity) {
        (ModeWord::EOE, Parity::Even) => Ok(z * h.cos() - w * v * h.sin()),
        (ModeWord::EOE, Parity::Odd) => Ok(z * h.sin() + w * v * h.cos()),
        (ModeWord::EEE, Parity::Even) => Ok(z * h.cosh() + w * v * h.sinh()),
        (ModeWord::EEE, Parity::Odd) => Ok(z * h.sinh() + w * v * h.cosh()),
        _ => Err(Error::InvalidArgument(format!(
            "{word} has no parity factorization"
        ))),
    }
}

/// Single-interface surface condition `zeta_I + w zeta_II`; its zeros in the
/// EEE window are double poles of `F` (TM with negative `kappa` only).
pub fn surface_factor(
    s: Polarization,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    let k = kinematics(s, ModeWord::EEE, omega, r, model)?;
    Ok(k.zeta1 + k.w * k.inner)
}

/// Non-retarded TM EEE generator with `zeta_I = zeta_II = kL`:
/// `(1 + kappa)^2 e^{kL} - (1 - kappa)^2 e^{-kL}`. Its zeros satisfy
/// `(1 - kappa)/(1 + kappa) = +- e^{kL}`.
pub fn nonretarded_tm_eee(omega: f64, kl: f64, model: &PermittivityModel) -> Result<f64> {
    let kap = model.kappa(Complex64::new(omega, 0.0))?.re;
    Ok((1.0 + kap).powi(2) * kl.exp() - (1.0 - kap).powi(2) * (-kl).exp())
}
