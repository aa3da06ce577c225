//! Homogeneous boundary/interface systems of the closed cavity.
//!
//! Unknowns are ordered `[P_I, Q_I, P_II, Q_II, P_III, Q_III]`. Region II
//! spans `0 <= Z <= 1`; regions I and III extend a further `lambda` to the
//! walls at `Z = -lambda` and `Z = 1 + lambda`, with global `Z` in every
//! basis function.

use nalgebra::Matrix6;
use num_complex::Complex64;

use super::{CavityConfig, ModeWord};
use crate::error::{Error, Result};
use crate::media::{classify_region, ModeClass, Polarization, Region};

/// Discriminant tolerance, relative to `max(1, R^2)`, accepted for the
/// letter L when the frequency was fixed by construction.
pub const L_WORD_TOLERANCE: f64 = 1e-12;

/// Kinematic values entering a boundary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixKinematics {
    /// `chi_I` or `zeta_I` (zero for L).
    pub outer: f64,
    /// `chi_II` or `zeta_II` (zero for L).
    pub inner: f64,
    /// `kappa` in regions I and III.
    pub kappa: f64,
}

fn letter_value(
    letter: ModeClass,
    region: Region,
    config: &CavityConfig,
    omega: f64,
) -> Result<f64> {
    let r = config.r();
    let k = classify_region(&config.model, region, omega, r)?;
    let ok = match letter {
        ModeClass::L => k.discriminant.abs() <= L_WORD_TOLERANCE * r.powi(2).max(1.0),
        _ => k.class == letter,
    };
    if !ok {
        return Err(Error::KinematicMismatch(format!(
            "word {} needs class {} in region {:?} but Omega = {omega} gives {:?} (discriminant {:e})",
            config.word,
            letter.letter(),
            region,
            k.class,
            k.discriminant
        )));
    }
    Ok(if letter == ModeClass::L { 0.0 } else { k.value })
}

/// Validates the word against the kinematics at `omega` and returns the
/// values that enter the matrix.
pub fn matrix_kinematics(config: &CavityConfig, omega: f64) -> Result<MatrixKinematics> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Omega must be positive, got {omega}"
        )));
    }
    let (outer_letter, inner_letter) = config.word.letters();
    let outer = letter_value(outer_letter, Region::I, config, omega)?;
    let inner = letter_value(inner_letter, Region::II, config, omega)?;
    let kappa = config.model.kappa(Complex64::new(omega, 0.0))?.re;
    Ok(MatrixKinematics {
        outer,
        inner,
        kappa,
    })
}

/// Boundary matrix for `config` at real frequency `omega`.
pub fn boundary_matrix(config: &CavityConfig, omega: f64) -> Result<Matrix6<f64>> {
    let k = matrix_kinematics(config, omega)?;
    Ok(assemble(
        config.polarization,
        config.word,
        config.aspect.lambda,
        &k,
    ))
}

/// Builds the matrix from already validated kinematic values.
pub fn assemble(
    s: Polarization,
    word: ModeWord,
    lambda: f64,
    k: &MatrixKinematics,
) -> Matrix6<f64> {
    use ModeWord::*;
    use Polarization::*;
    let (x1, x2, kap, l) = (k.outer, k.inner, k.kappa, lambda);
    // Region I/III trigonometric and hyperbolic factors.
    let (c1, s1) = (x1.cos(), x1.sin());
    let (cl, sl) = ((l * x1).cos(), (l * x1).sin());
    let (ce, se) = (((1.0 + l) * x1).cos(), ((1.0 + l) * x1).sin());
    let (ch1, sh1) = (x1.cosh(), x1.sinh());
    let (chl, shl) = ((l * x1).cosh(), (l * x1).sinh());
    let (che, she) = (((1.0 + l) * x1).cosh(), ((1.0 + l) * x1).sinh());
    // Region II factors.
    let (c2, s2) = (x2.cos(), x2.sin());
    let (ch2, sh2) = (x2.cosh(), x2.sinh());
    let rows: [f64; 36] = match (s, word) {
        (TE, OOO) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -c1,
            -s1,
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            -x1 * s1,
            x1 * c1,
            cl,
            -sl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ce,
            se,
        ],
        (TM, OOO) => [
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            -x1 * s1,
            x1 * c1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -kap * c1,
            -kap * s1,
            sl,
            cl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            se,
            -ce,
        ],
        (TE, OEO) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -c1,
            -s1,
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            x1 * s1,
            -x1 * c1,
            cl,
            -sl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ce,
            se,
        ],
        (TM, OEO) => [
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            x1 * s1,
            -x1 * c1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -kap * c1,
            -kap * s1,
            sl,
            cl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            se,
            -ce,
        ],
        (TE, OLO) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0,
            -c1,
            -s1,
            0.0,
            x1,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            x1 * s1,
            -x1 * c1,
            cl,
            -sl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ce,
            se,
        ],
        (TM, OLO) => [
            0.0,
            x1,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            x1 * s1,
            -x1 * c1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0,
            -kap * c1,
            -kap * s1,
            sl,
            cl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            se,
            -ce,
        ],
        (TE, EOE) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -ch1,
            -sh1,
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            x1 * sh1,
            x1 * ch1,
            chl,
            -shl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            che,
            she,
        ],
        (TM, EOE) => [
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            x1 * sh1,
            x1 * ch1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -kap * ch1,
            -kap * sh1,
            shl,
            -chl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            she,
            che,
        ],
        (TE, EEE) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -ch1,
            -sh1,
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            -x1 * sh1,
            -x1 * ch1,
            chl,
            -shl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            che,
            she,
        ],
        (TM, EEE) => [
            0.0,
            x1,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            -x1 * sh1,
            -x1 * ch1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -kap * ch1,
            -kap * sh1,
            shl,
            -chl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            she,
            che,
        ],
        (TE, ELE) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0,
            -ch1,
            -sh1,
            0.0,
            x1,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            -x1 * sh1,
            -x1 * ch1,
            chl,
            -shl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            che,
            she,
        ],
        (TM, ELE) => [
            0.0,
            x1,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            -x1 * sh1,
            -x1 * ch1,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0,
            -kap * ch1,
            -kap * sh1,
            shl,
            -chl,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            she,
            che,
        ],
        (TE, LOL) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -1.0,
            -1.0,
            0.0,
            1.0,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            0.0,
            1.0,
            1.0,
            -l,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0 + l,
        ],
        (TM, LOL) => [
            0.0,
            1.0,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * s2,
            -x2 * c2,
            0.0,
            1.0,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            c2,
            s2,
            -kap,
            -kap,
            0.0,
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
        ],
        (TE, LEL) => [
            1.0,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -1.0,
            -1.0,
            0.0,
            1.0,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            0.0,
            -1.0,
            1.0,
            -l,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            1.0 + l,
        ],
        (TM, LEL) => [
            0.0,
            1.0,
            0.0,
            -x2,
            0.0,
            0.0,
            0.0,
            0.0,
            x2 * sh2,
            x2 * ch2,
            0.0,
            -1.0,
            kap,
            0.0,
            -1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            ch2,
            sh2,
            -kap,
            -kap,
            0.0,
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
        ],
    };
    Matrix6::from_row_slice(&rows)
}

/// Spectrum generator: the LU determinant of the boundary matrix.
pub fn generator(config: &CavityConfig, omega: f64) -> Result<f64> {
    Ok(boundary_matrix(config, omega)?.determinant())
}

/// Hadamard bound on `|det M|`: the product of the row norms.
pub fn determinant_scale(m: &Matrix6<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).product()
}
