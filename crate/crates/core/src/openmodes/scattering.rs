//! Reflection and transmission amplitudes of the symmetric slab for the
//! propagating (category P) words.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::ModeWord;
use crate::error::{Error, Result};
use crate::media::{classify_region, ModeClass, PermittivityModel, Polarization, Region};

/// Side from which the incident wave arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Incident from region I, travelling towards `+Z`.
    R,
    /// Incident from region III, travelling towards `-Z`.
    L,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::R => "R",
            Direction::L => "L",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "R" => Ok(Direction::R),
            "L" => Ok(Direction::L),
            _ => Err(Error::Parse(format!(
                "unknown direction '{s}' (expected R or L)"
            ))),
        }
    }
}

/// Complex amplitudes of one scattering solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringAmplitudes {
    pub reflection: Complex64,
    pub transmission: Complex64,
    pub direction: Direction,
    pub word: ModeWord,
    pub polarization: Polarization,
    pub omega: f64,
    pub r: f64,
    pub model: PermittivityModel,
}

impl ScatteringAmplitudes {
    /// `|R|^2 + |T|^2`.
    pub fn flux(&self) -> f64 {
        self.reflection.norm_sqr() + self.transmission.norm_sqr()
    }
}

/// Values and derivatives of the two basis functions of a region at `z`.
fn basis(class: ModeClass, k: f64, z: f64) -> [(Complex64, Complex64); 2] {
    let i = Complex64::i();
    match class {
        // Left- and right-moving waves `e^{-i chi Z}`, `e^{i chi Z}`.
        ModeClass::O => {
            let m = (-i * k * z).exp();
            let p = (i * k * z).exp();
            [(m, -i * k * m), (p, i * k * p)]
        }
        ModeClass::E => {
            let m = (-k * z).exp();
            let p = (k * z).exp();
            [(m.into(), (-k * m).into()), (p.into(), (k * p).into())]
        }
        ModeClass::L => [(1.0.into(), 0.0.into()), (z.into(), 1.0.into())],
    }
}

/// Solves the interface system for `word` in {OOO, OEO, OLO}.
///
/// Amplitudes are referenced so that the two directions coincide for the
/// symmetric slab: for direction L the reflected wave is referred to `Z = 1`.
pub fn scattering(
    s: Polarization,
    word: ModeWord,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
    direction: Direction,
) -> Result<ScatteringAmplitudes> {
    let (outer, inner) = word.letters();
    if outer != ModeClass::O {
        return Err(Error::InvalidArgument(format!(
            "{word} is not a propagating word"
        )));
    }
    let k1 = classify_region(model, Region::I, omega, r)?;
    let k2 = classify_region(model, Region::II, omega, r)?;
    if k1.class != ModeClass::O || k2.class != inner {
        return Err(Error::KinematicMismatch(format!(
            "word {word} needs (O, {}) but Omega = {omega}, R = {r} gives ({:?}, {:?})",
            inner.letter(),
            k1.class,
            k2.class
        )));
    }
    let kappa = model.kappa(Complex64::new(omega, 0.0))?;
    let w = if s == Polarization::TM {
        kappa
    } else {
        Complex64::new(1.0, 0.0)
    };
    let (chi1, v2) = (k1.value, k2.value);
    // Columns: [P_I, Q_I, P_II, Q_II, P_III, Q_III].
    let mut a = [[Complex64::new(0.0, 0.0); 6]; 4];
    let bi0 = basis(ModeClass::O, chi1, 0.0);
    let bii0 = basis(inner, v2, 0.0);
    let bii1 = basis(inner, v2, 1.0);
    let biii1 = basis(ModeClass::O, chi1, 1.0);
    for j in 0..2 {
        // w psi_I(0) = psi_II(0), psi_I'(0) = psi_II'(0)
        a[0][j] = w * bi0[j].0;
        a[0][2 + j] = -bii0[j].0;
        a[1][j] = bi0[j].1;
        a[1][2 + j] = -bii0[j].1;
        // psi_II(1) = w psi_III(1), psi_II'(1) = psi_III'(1)
        a[2][2 + j] = bii1[j].0;
        a[2][4 + j] = -w * biii1[j].0;
        a[3][2 + j] = bii1[j].1;
        a[3][4 + j] = -biii1[j].1;
    }
    // Known incoming/outgoing amplitudes: (Q_I, P_III).
    let (q1, p3) = match direction {
        Direction::R => (1.0, 0.0),
        Direction::L => (0.0, 1.0),
    };
    let unknown = [0usize, 2, 3, 5];
    let m = Matrix4::from_fn(|row, col| a[row][unknown[col]]);
    let rhs = Vector4::from_fn(|row, _| -(a[row][1] * q1 + a[row][4] * p3));
    let x = m.lu().solve(&rhs).ok_or_else(|| {
        Error::Singular(format!(
            "scattering system is singular at Omega = {omega}, R = {r}"
        ))
    })?;
    if !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Singular(format!(
            "scattering system is singular at Omega = {omega}, R = {r}"
        )));
    }
    let (reflection, transmission) = match direction {
        Direction::R => (x[0], x[3]),
        Direction::L => (x[3] * (2.0 * Complex64::i() * chi1).exp(), x[0]),
    };
    Ok(ScatteringAmplitudes {
        reflection,
        transmission,
        direction,
        word,
        polarization: s,
        omega,
        r,
        model: *model,
    })
}

/// Closed-form `(R, T)` for OOO and OLO, the regression oracle of the
/// linear solve.
pub fn closed_form_amplitudes(
    s: Polarization,
    word: ModeWord,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<(Complex64, Complex64)> {
    let i = Complex64::i();
    let k1 = classify_region(model, Region::I, omega, r)?;
    let k2 = classify_region(model, Region::II, omega, r)?;
    let kap = model.kappa(Complex64::new(omega, 0.0))?.re;
    let w = if s == Polarization::TM { kap } else { 1.0 };
    let c1 = k1.value;
    match word {
        ModeWord::OOO => {
            let c2 = k2.value;
            let wc2 = w * c2;
            let den = (c1 + wc2).powi(2) * (-i * c2).exp() - (c1 - wc2).powi(2) * (i * c2).exp();
            let t = 4.0 * c1 * wc2 * (-i * c1).exp() / den;
            let rr = 2.0 * i * c2.sin() * (wc2 * wc2 - c1 * c1) / den;
            Ok((rr, t))
        }
        ModeWord::OLO => {
            let d = i * c1 - 2.0 * w;
            Ok((i * c1 / d, -2.0 * w * (-i * c1).exp() / d))
        }
        _ => Err(Error::InvalidArgument(format!(
            "no closed form registered for {word}"
        ))),
    }
}
