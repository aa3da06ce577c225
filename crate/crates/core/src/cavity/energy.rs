//! Truncated mode-sum energy differences and the resulting pressure.

use serde::{Deserialize, Serialize};

use super::spectrum::{enumerate_roots_with, ScanOptions};
use super::{Aspect, CavityConfig, ModeWord};
use crate::error::{Error, Result};
use crate::media::{PermittivityModel, Polarization};
use crate::units::{C, HBAR};

/// Root-count disagreement between the two configurations of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMismatch {
    pub polarization: Polarization,
    pub word: ModeWord,
    pub nx: u32,
    pub ny: u32,
    pub count: usize,
    pub count_ref: usize,
}

/// Truncated `sum (Omega - Omega_ref)` over paired roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyDifference {
    /// Dimensionless sum; multiply by `hbar c / (2 Lz)` for an energy.
    pub sum: f64,
    /// `(n, partial sum over families with max(nx, ny) <= n)` for
    /// `n = 1..=n_max`.
    pub partial_sums: Vec<(u32, f64)>,
    /// Families whose root counts differ below the cutoff; unpaired tail
    /// roots are dropped.
    pub mismatches: Vec<FamilyMismatch>,
    pub pairs: usize,
}

impl EnergyDifference {
    /// Energy in joules for a cavity of height `lz` metres.
    pub fn energy(&self, lz: f64) -> f64 {
        HBAR * C / (2.0 * lz) * self.sum
    }
}

fn family_roots(
    config: Result<CavityConfig>,
    omega_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<f64>> {
    match config {
        Ok(c) => Ok(enumerate_roots_with(&c, omega_max, opts)?
            .into_iter()
            .map(|r| r.omega)
            .collect()),
        Err(Error::Domain(_)) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Sums root differences over every polarization, word and family with
/// `nx, ny <= n_max` below the dimensionless cutoff `omega_max`, pairing the
/// j-th roots of each family in increasing order.
pub fn energy_difference(
    aspect: &Aspect,
    model: &PermittivityModel,
    model_ref: &PermittivityModel,
    n_max: u32,
    omega_max: f64,
    opts: &ScanOptions,
) -> Result<EnergyDifference> {
    if n_max < 1 || !(omega_max > 0.0) {
        return Err(Error::InvalidArgument("cutoffs must be positive".into()));
    }
    let mut shell = vec![0.0; n_max as usize + 1];
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    let same = model == model_ref;
    for nx in 0..=n_max {
        for ny in 0..=n_max {
            if nx == 0 && ny == 0 {
                continue;
            }
            for s in Polarization::BOTH {
                for word in ModeWord::ALL {
                    let a = family_roots(
                        CavityConfig::new(s, word, nx, ny, *aspect, *model),
                        omega_max,
                        opts,
                    )?;
                    let b = if same {
                        a.clone()
                    } else {
                        family_roots(
                            CavityConfig::new(s, word, nx, ny, *aspect, *model_ref),
                            omega_max,
                            opts,
                        )?
                    };
                    if a.len() != b.len() {
                        mismatches.push(FamilyMismatch {
                            polarization: s,
                            word,
                            nx,
                            ny,
                            count: a.len(),
                            count_ref: b.len(),
                        });
                    }
                    for (x, y) in a.iter().zip(&b) {
                        shell[nx.max(ny) as usize] += x - y;
                        pairs += 1;
                    }
                }
            }
        }
    }
    let mut partial_sums = Vec::with_capacity(n_max as usize);
    let mut acc = 0.0;
    for (n, v) in shell.iter().enumerate().skip(1) {
        acc += v;
        partial_sums.push((n as u32, acc));
    }
    Ok(EnergyDifference {
        sum: acc,
        partial_sums,
        mismatches,
        pairs,
    })
}

/// Material in regions I and III specified in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhysicalMaterial {
    Constant {
        xi: f64,
    },
    /// Plasma frequency in rad/s.
    Plasma {
        omega_p: f64,
    },
}

impl PhysicalMaterial {
    /// Dimensionless model for a cavity of height `lz`.
    pub fn model_at(&self, lz: f64) -> Result<PermittivityModel> {
        match *self {
            PhysicalMaterial::Constant { xi } => PermittivityModel::constant(xi),
            PhysicalMaterial::Plasma { omega_p } => {
                PermittivityModel::plasma((omega_p * lz / C).powi(2))
            }
        }
    }
}

/// Cavity with fixed transverse sizes and slab thicknesses in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCavity {
    pub lx: f64,
    pub ly: f64,
    /// Thickness of each of regions I and III.
    pub lf: f64,
    pub material: PhysicalMaterial,
    pub reference: PhysicalMaterial,
    pub n_max: u32,
    /// Angular-frequency cutoff in rad/s.
    pub omega_max: f64,
}

impl PhysicalCavity {
    pub fn aspect(&self, lz: f64) -> Result<Aspect> {
        Aspect::new(self.lx / lz, self.ly / self.lx, self.lf / lz)
    }

    /// Energy difference in joules at vacuum-gap height `lz`.
    pub fn energy(&self, lz: f64, opts: &ScanOptions) -> Result<f64> {
        let d = energy_difference(
            &self.aspect(lz)?,
            &self.material.model_at(lz)?,
            &self.reference.model_at(lz)?,
            self.n_max,
            self.omega_max * lz / C,
            opts,
        )?;
        Ok(d.energy(lz))
    }
}

/// Pressure estimates from central differences at two step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureEstimate {
    /// `-dE/dLz / (Lx Ly)` with relative step `rel_step`.
    pub pressure: f64,
    /// The same with half the step.
    pub pressure_half_step: f64,
}

impl PressureEstimate {
    pub fn sign_stable(&self) -> bool {
        self.pressure.signum() == self.pressure_half_step.signum()
            || (self.pressure == 0.0 && self.pressure_half_step == 0.0)
    }
}

/// Normal pressure difference at height `lz` by central differences of the
/// truncated energy difference, holding `Lx`, `Ly`, `Lf` and the physical
/// cutoffs fixed.
pub fn cavity_pressure(
    cavity: &PhysicalCavity,
    lz: f64,
    rel_step: f64,
    opts: &ScanOptions,
) -> Result<PressureEstimate> {
    if !(lz > 0.0) || !(rel_step > 0.0) {
        return Err(Error::InvalidArgument(
            "Lz and the step must be positive".into(),
        ));
    }
    let area = cavity.lx * cavity.ly;
    let diff = |h: f64| -> Result<f64> {
        let up = cavity.energy(lz + h, opts)?;
        let down = cavity.energy(lz - h, opts)?;
        Ok(-(up - down) / (2.0 * h) / area)
    };
    let h = rel_step * lz;
    Ok(PressureEstimate {
        pressure: diff(h)?,
        pressure_half_step: diff(0.5 * h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse() -> ScanOptions {
        ScanOptions {
            points_per_unit: 50.0,
            min_points: 50,
            tol: 1e-12,
        }
    }

    #[test]
    fn identical_models_give_zero() {
        let m = PermittivityModel::constant(1.3).unwrap();
        let d = energy_difference(&Aspect::unit(), &m, &m, 2, 15.0, &coarse()).unwrap();
        assert_eq!(d.sum, 0.0);
        assert!(d.mismatches.is_empty());
        assert!(d.pairs > 0);
        let v = PermittivityModel::vacuum();
        assert_eq!(
            energy_difference(&Aspect::unit(), &v, &v, 2, 15.0, &coarse())
                .unwrap()
                .sum,
            0.0
        );
    }

    #[test]
    fn vacuum_pressure_is_zero() {
        let cav = PhysicalCavity {
            lx: 1e-6,
            ly: 1e-6,
            lf: 1e-6,
            material: PhysicalMaterial::Constant { xi: 1.0 },
            reference: PhysicalMaterial::Constant { xi: 1.0 },
            n_max: 1,
            omega_max: 10.0 * C / 1e-6,
        };
        let p = cavity_pressure(&cav, 1e-6, 1e-4, &coarse()).unwrap();
        assert_eq!(p.pressure, 0.0);
        assert_eq!(p.pressure_half_step, 0.0);
    }
}
