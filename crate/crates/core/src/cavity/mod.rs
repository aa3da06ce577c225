//! Closed-cavity spectra: boundary matrices, determinant generators, root
//! enumeration, mode reconstruction, Diophantine special cases and truncated
//! energy differences.

mod diophantine;
mod energy;
mod matrix;
mod spectrum;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{ModeClass, PermittivityModel, Polarization};

pub use diophantine::{diophantine_search, DiophantineMode, XiValue};
pub use energy::{
    cavity_pressure, energy_difference, EnergyDifference, FamilyMismatch, PhysicalCavity,
    PhysicalMaterial, PressureEstimate,
};
pub use matrix::{
    assemble, boundary_matrix, determinant_scale, generator, matrix_kinematics, MatrixKinematics,
};
pub use spectrum::{
    apply_matrix, enumerate_roots, enumerate_roots_with, mode_coefficients, normalize_max,
    word_windows, CavityRoot, ModeCoefficients, ModeProfile, ScanOptions,
};

/// Allowed cavity mode words: kinematic classes of regions I, II and III.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeWord {
    OOO,
    OEO,
    OLO,
    EOE,
    EEE,
    ELE,
    LOL,
    LEL,
}

impl ModeWord {
    pub const ALL: [ModeWord; 8] = [
        ModeWord::OOO,
        ModeWord::OEO,
        ModeWord::OLO,
        ModeWord::EOE,
        ModeWord::EEE,
        ModeWord::ELE,
        ModeWord::LOL,
        ModeWord::LEL,
    ];

    /// Classes of (regions I and III, region II).
    pub fn letters(self) -> (ModeClass, ModeClass) {
        use ModeClass::*;
        match self {
            ModeWord::OOO => (O, O),
            ModeWord::OEO => (O, E),
            ModeWord::OLO => (O, L),
            ModeWord::EOE => (E, O),
            ModeWord::EEE => (E, E),
            ModeWord::ELE => (E, L),
            ModeWord::LOL => (L, O),
            ModeWord::LEL => (L, E),
        }
    }

    pub fn from_letters(outer: ModeClass, inner: ModeClass) -> Option<Self> {
        ModeWord::ALL
            .into_iter()
            .find(|w| w.letters() == (outer, inner))
    }
}

impl fmt::Display for ModeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (o, i) = self.letters();
        write!(f, "{}{}{}", o.letter(), i.letter(), o.letter())
    }
}

impl FromStr for ModeWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        ModeWord::ALL
            .into_iter()
            .find(|w| w.to_string() == up)
            .ok_or_else(|| Error::Parse(format!("unknown mode word '{s}'")))
    }
}

/// Cavity aspect ratios `(lambda1, lambda2, lambda) = (Lx/Lz, Ly/Lx, Lf/Lz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aspect {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda: f64,
}

impl Aspect {
    pub fn new(lambda1: f64, lambda2: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [
            ("lambda1", lambda1),
            ("lambda2", lambda2),
            ("lambda", lambda),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Aspect {
            lambda1,
            lambda2,
            lambda,
        })
    }

    pub fn unit() -> Self {
        Aspect {
            lambda1: 1.0,
            lambda2: 1.0,
            lambda: 1.0,
        }
    }

    /// Transverse wavenumber `R` of the `(nx, ny)` family.
    pub fn r(&self, nx: u32, ny: u32) -> f64 {
        let (nx, ny) = (nx as f64, ny as f64);
        PI / self.lambda1 * (nx * nx + self.lambda2 * self.lambda2 * ny * ny).sqrt()
    }
}

/// One cavity mode family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    pub polarization: Polarization,
    pub word: ModeWord,
    pub nx: u32,
    pub ny: u32,
    pub aspect: Aspect,
    pub model: PermittivityModel,
}

impl CavityConfig {
    pub fn new(
        polarization: Polarization,
        word: ModeWord,
        nx: u32,
        ny: u32,
        aspect: Aspect,
        model: PermittivityModel,
    ) -> Result<Self> {
        if nx == 0 && ny == 0 {
            return Err(Error::Domain("nx and ny cannot both be zero".into()));
        }
        if polarization == Polarization::TM && (nx == 0 || ny == 0) {
            return Err(Error::Domain(format!(
                "TM modes vanish for nx = {nx}, ny = {ny}"
            )));
        }
        let aspect = Aspect::new(aspect.lambda1, aspect.lambda2, aspect.lambda)?;
        match model {
            PermittivityModel::PerfectConductor => {
                return Err(Error::UnsupportedModel(
                    "a perfect conductor has no interior cavity modes".into(),
                ))
            }
            PermittivityModel::Lorentz { .. } => {
                return Err(Error::UnsupportedModel(
                    "cavity spectra support const and plasma models".into(),
                ))
            }
            _ => {}
        }
        Ok(CavityConfig {
            polarization,
            word,
            nx,
            ny,
            aspect,
            model,
        })
    }

    /// Transverse wavenumber `R`.
    pub fn r(&self) -> f64 {
        self.aspect.r(self.nx, self.ny)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Polarization::*;

    fn vac() -> PermittivityModel {
        PermittivityModel::vacuum()
    }

    #[test]
    fn words_round_trip() {
        for w in ModeWord::ALL {
            assert_eq!(w.to_string().parse::<ModeWord>().unwrap(), w);
            let (o, i) = w.letters();
            assert_eq!(ModeWord::from_letters(o, i), Some(w));
        }
        assert!("OXO".parse::<ModeWord>().is_err());
        assert_eq!(ModeWord::from_letters(ModeClass::L, ModeClass::L), None);
    }

    #[test]
    fn config_validation() {
        let a = Aspect::unit();
        assert!(CavityConfig::new(TE, ModeWord::OOO, 0, 0, a, vac()).is_err());
        assert!(CavityConfig::new(TM, ModeWord::OOO, 1, 0, a, vac()).is_err());
        assert!(CavityConfig::new(TE, ModeWord::OOO, 1, 0, a, vac()).is_ok());
        assert!(
            CavityConfig::new(TE, ModeWord::OOO, 1, 1, Aspect { lambda: 0.0, ..a }, vac()).is_err()
        );
        assert!(CavityConfig::new(
            TE,
            ModeWord::OOO,
            1,
            1,
            a,
            PermittivityModel::PerfectConductor
        )
        .is_err());
    }

    #[test]
    fn r_from_aspect() {
        let a = Aspect::new(2.0, 0.5, 1.0).unwrap();
        let expect = PI / 2.0 * (9.0f64 + 0.25 * 16.0).sqrt();
        assert!((a.r(3, 4) - expect).abs() < 1e-14);
        assert!((Aspect::unit().r(1, 1) - PI * 2f64.sqrt()).abs() < 1e-14);
    }
}
