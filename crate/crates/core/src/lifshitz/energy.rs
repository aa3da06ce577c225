//! Interaction energy per unit area and pressure of two half-spaces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::i_imag;
use crate::error::{Error, Result};
use crate::media::{PermittivityModel, Polarization};
use crate::numerics::QuadratureOptions;
use crate::units::{C, HBAR};

/// Half-space material in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Material {
    /// Frequency-independent relative permittivity.
    ConstantDielectric {
        epsilon_r: f64,
    },
    /// Collisionless plasma with plasma frequency in rad/s.
    Plasma {
        omega_p: f64,
    },
    PerfectConductor,
}

/// Gap width and material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup {
    /// Gap width in metres.
    pub lz: f64,
    pub material: Material,
}

impl Material {
    /// Material whose dimensionless model at gap `lz` is `model`; a plasma
    /// `xi` maps to `omega_p = sqrt(xi) c / lz`.
    pub fn from_model(model: &PermittivityModel, lz: f64) -> Result<Self> {
        match *model {
            PermittivityModel::ConstantDielectric { xi } => {
                Ok(Material::ConstantDielectric { epsilon_r: xi })
            }
            PermittivityModel::Plasma { xi } => Ok(Material::Plasma {
                omega_p: xi.sqrt() * C / lz,
            }),
            PermittivityModel::PerfectConductor => Ok(Material::PerfectConductor),
            PermittivityModel::Lorentz { .. } => Err(Error::UnsupportedModel(model.to_string())),
        }
    }
}

impl PhysicalSetup {
    pub fn new(lz: f64, material: Material) -> Result<Self> {
        if !(lz > 0.0 && lz.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "L_z must be positive, got {lz}"
            )));
        }
        match material {
            Material::ConstantDielectric { epsilon_r } if !(epsilon_r > 0.0) => Err(
                Error::InvalidArgument(format!("epsilon_r must be positive, got {epsilon_r}")),
            ),
            Material::Plasma { omega_p } if !(omega_p > 0.0) => Err(Error::InvalidArgument(
                format!("omega_p must be positive, got {omega_p}"),
            )),
            _ => Ok(PhysicalSetup { lz, material }),
        }
    }

    /// Dimensionless model at gap width `lz`.
    pub fn model_at(&self, lz: f64) -> Result<PermittivityModel> {
        match self.material {
            Material::ConstantDielectric { epsilon_r } => PermittivityModel::constant(epsilon_r),
            Material::Plasma { omega_p } => PermittivityModel::plasma((omega_p * lz / C).powi(2)),
            Material::PerfectConductor => Ok(PermittivityModel::PerfectConductor),
        }
    }

    pub fn model(&self) -> Result<PermittivityModel> {
        self.model_at(self.lz)
    }
}

/// Energy and pressure of one polarization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationEnergy {
    pub polarization: Polarization,
    /// Dimensionless `I_imag` at infinite cutoffs.
    pub i_imag: f64,
    /// Energy per unit area in J/m^2.
    pub energy: f64,
    /// `-dU/dL_z` in Pa; negative values attract.
    pub pressure: f64,
    /// Pressure from the halved difference step (equal to `pressure` where it
    /// is analytic).
    pub pressure_half_step: f64,
    pub error_estimate: f64,
}

/// Energies of the requested polarizations and their totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub setup: PhysicalSetup,
    pub model: PermittivityModel,
    pub parts: Vec<PolarizationEnergy>,
    pub energy: f64,
    pub pressure: f64,
}

/// Relative step of the pressure difference quotient.
pub const PRESSURE_STEP: f64 = 1e-4;

/// `U^s = -hbar c / (8 pi^2 L_z^3) I_imag(s, model, inf, inf)`.
fn energy_at(
    s: Polarization,
    setup: &PhysicalSetup,
    lz: f64,
    opts: &QuadratureOptions,
) -> Result<(f64, f64, f64)> {
    let model = setup.model_at(lz)?;
    let i = i_imag(s, &model, f64::INFINITY, f64::INFINITY, opts)?;
    let k = -HBAR * C / (8.0 * PI * PI * lz.powi(3));
    Ok((k * i.value, i.value, (k * i.error_estimate).abs()))
}

/// Interaction energy per unit area and pressure for one or both
/// polarizations. The pressure is `3U/L_z` when the model does not depend on
/// `L_z`, and a five-point difference otherwise.
pub fn interaction_energy(
    setup: &PhysicalSetup,
    polarization: Option<Polarization>,
    opts: &QuadratureOptions,
) -> Result<EnergyReport> {
    let pols: Vec<Polarization> = match polarization {
        Some(s) => vec![s],
        None => Polarization::BOTH.to_vec(),
    };
    let lz = setup.lz;
    let mut parts = Vec::new();
    for s in pols {
        let (energy, value, err) = energy_at(s, setup, lz, opts)?;
        let (pressure, pressure_half_step) = match setup.material {
            Material::Plasma { .. } => {
                let u = |l: f64| energy_at(s, setup, l, opts).map(|e| e.0);
                let fd = |h: f64| -> Result<f64> {
                    let d = (u(lz - 2.0 * h)? - 8.0 * u(lz - h)? + 8.0 * u(lz + h)?
                        - u(lz + 2.0 * h)?)
                        / (12.0 * h);
                    Ok(-d)
                };
                let h = PRESSURE_STEP * lz;
                (fd(h)?, fd(0.5 * h)?)
            }
            _ => (3.0 * energy / lz, 3.0 * energy / lz),
        };
        parts.push(PolarizationEnergy {
            polarization: s,
            i_imag: value,
            energy,
            pressure,
            pressure_half_step,
            error_estimate: err,
        });
    }
    Ok(EnergyReport {
        setup: *setup,
        model: setup.model()?,
        energy: parts.iter().map(|p| p.energy).sum(),
        pressure: parts.iter().map(|p| p.pressure).sum(),
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_conductor_energy_and_pressure() {
        let lz = 1e-6;
        let setup = PhysicalSetup::new(lz, Material::PerfectConductor).unwrap();
        let r = interaction_energy(&setup, None, &QuadratureOptions::with_rel_tol(1e-10)).unwrap();
        let each = -PI * PI * HBAR * C / (1440.0 * lz.powi(3));
        for p in &r.parts {
            assert!((p.energy / each - 1.0).abs() < 1e-8);
        }
        let p = -PI * PI * HBAR * C / (240.0 * lz.powi(4));
        assert!((r.pressure / p - 1.0).abs() < 1e-8);
    }

    #[test]
    fn vacuum_gives_zero() {
        let setup =
            PhysicalSetup::new(1e-6, Material::ConstantDielectric { epsilon_r: 1.0 }).unwrap();
        let r = interaction_energy(&setup, None, &QuadratureOptions::with_rel_tol(1e-8)).unwrap();
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.pressure, 0.0);
    }
}
