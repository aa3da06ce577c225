//! Spectral density of states aggregated over the transverse wavenumber:
//! real poles as atoms plus the scattering-phase continuum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::spectral::{phase_density, RealSpectrum};
use crate::error::{Error, Result};
use crate::media::{branch_points, PermittivityModel, Polarization};
use crate::numerics::{kronrod_nodes, QuadratureOptions};
use crate::openmodes::PoleScanOptions;

/// Widest `R` panel of the fixed outer rule.
const R_PANEL: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    /// Real zero of `F`.
    Pole,
    /// Double pole of `F` (TM with negative `kappa`), weight `-2`.
    Surface,
    /// Square-root zero of `F` at `chi_II = 0`, weight `1/2`.
    Threshold,
}

/// A point mass of the density: frequency and aggregated `R dR` weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleAtom {
    pub omega: f64,
    pub weight: f64,
    pub kind: AtomKind,
}

/// Continuum mass `(1/pi) int d delta` and first moment
/// `(1/pi) int Omega' d delta` over one frequency bin, aggregated over `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DosBin {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
    pub moment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOfStates {
    pub polarization: Polarization,
    pub model: PermittivityModel,
    pub r0: f64,
    pub atoms: Vec<PoleAtom>,
    pub bins: Vec<DosBin>,
    /// `(Omega', sum_R w_R R (1/pi) d delta/dOmega')` on the grid, zero below
    /// the lower branch point of each `R`.
    pub samples: Vec<(f64, f64)>,
    /// `-2 pi` times the first moment of atoms and continuum; comparable with
    /// `I_real` at `Lambda` equal to the top of the grid.
    pub first_moment: f64,
    pub error_estimate: f64,
}

impl DensityOfStates {
    pub fn atom_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.omega * a.weight).sum()
    }

    pub fn continuum_moment(&self) -> f64 {
        self.bins.iter().map(|b| b.moment).sum()
    }
}

/// Aggregates the density of states over `R in [0, R_0]` with a fixed
/// composite 15-point rule, binned on the sorted frequency grid `grid`.
pub fn density_of_states(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    grid: &[f64],
    opts: &QuadratureOptions,
) -> Result<DensityOfStates> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "R0 must be positive and finite, got {r0}"
        )));
    }
    if grid.len() < 2
        || !(grid[0] >= 0.0)
        || grid.windows(2).any(|w| !(w[1] > w[0]))
        || !grid[grid.len() - 1].is_finite()
    {
        return Err(Error::InvalidArgument(
            "the frequency grid must be finite, non-negative and increasing".into(),
        ));
    }
    let mut bins: Vec<DosBin> = grid
        .windows(2)
        .map(|w| DosBin {
            lo: w[0],
            hi: w[1],
            weight: 0.0,
            moment: 0.0,
        })
        .collect();
    let mut samples: Vec<(f64, f64)> = grid.iter().map(|&x| (x, 0.0)).collect();
    let mut atoms = Vec::new();
    let mut error_estimate = 0.0;
    if !model.is_vacuum() {
        let top = grid[grid.len() - 1];
        let scan = PoleScanOptions {
            validate: false,
            ..Default::default()
        };
        let panels = (r0 / R_PANEL).ceil().max(1.0) as usize;
        let h = r0 / panels as f64;
        for k in 0..panels {
            for (r, w) in kronrod_nodes(k as f64 * h, (k + 1) as f64 * h) {
                let wr = w * r;
                let spec = RealSpectrum::scan(s, r, model, top, &scan)?;
                atoms.extend(spec.poles.iter().map(|&p| PoleAtom {
                    omega: p,
                    weight: wr,
                    kind: AtomKind::Pole,
                }));
                atoms.extend(spec.surface_poles.iter().map(|&p| PoleAtom {
                    omega: p,
                    weight: -2.0 * wr,
                    kind: AtomKind::Surface,
                }));
                if spec.threshold <= top {
                    atoms.push(PoleAtom {
                        omega: spec.threshold,
                        weight: 0.5 * wr,
                        kind: AtomKind::Threshold,
                    });
                }
                let (m, e) = spec.continuum_bins(s, r, model, grid, opts)?;
                for (b, m) in bins.iter_mut().zip(m) {
                    b.weight += wr * m[0];
                    b.moment += wr * m[1];
                }
                error_estimate += wr.abs() * e;
                let lo = branch_points(model, r)?.omega_b1;
                for (x, v) in samples.iter_mut() {
                    if *x > lo {
                        match phase_density(s, *x, r, model) {
                            Ok(d) => *v += wr * d,
                            // Integrable singularity exactly at a branch point.
                            Err(Error::BranchPoint { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        atoms.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    }
    let mut dos = DensityOfStates {
        polarization: s,
        model: *model,
        r0,
        atoms,
        bins,
        samples,
        first_moment: 0.0,
        error_estimate: 2.0 * PI * error_estimate,
    };
    dos.first_moment = -2.0 * PI * (dos.atom_moment() + dos.continuum_moment());
    Ok(dos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_empty() {
        let v = PermittivityModel::vacuum();
        let d = density_of_states(
            Polarization::TE,
            &v,
            5.0,
            &[0.0, 1.0, 2.0],
            &QuadratureOptions::with_rel_tol(1e-8),
        )
        .unwrap();
        assert!(d.atoms.is_empty());
        assert!(d.samples.iter().all(|s| s.1 == 0.0));
        assert_eq!(d.first_moment, 0.0);
    }

    #[test]
    fn rejects_bad_grid() {
        let m = PermittivityModel::plasma(30.0).unwrap();
        let o = QuadratureOptions::with_rel_tol(1e-8);
        assert!(density_of_states(Polarization::TE, &m, 5.0, &[1.0], &o).is_err());
        assert!(density_of_states(Polarization::TE, &m, 5.0, &[2.0, 1.0], &o).is_err());
    }
}
