//! Root enumeration and mode reconstruction.

use nalgebra::{Matrix6, Vector6};
use serde::{Deserialize, Serialize};

use super::matrix::{boundary_matrix, determinant_scale};
use super::CavityConfig;
use crate::error::{Error, Result};
use crate::media::{chi_i_zero, classify_region, ModeClass, Polarization, Region};
use crate::numerics::scan_roots;

/// Residual threshold relative to the Hadamard determinant scale.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Smallest-singular-value threshold relative to the matrix norm.
pub const SIGMA_TOLERANCE: f64 = 1e-8;
/// Relative gap of the two smallest singular values below which a root is
/// reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-6;

/// Grid controls for `enumerate_roots`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Grid density per unit of `Omega`.
    pub points_per_unit: f64,
    /// Minimum grid size per window.
    pub min_points: usize,
    /// Bracket width at which refinement stops.
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            points_per_unit: 400.0,
            min_points: 400,
            tol: 1e-13,
        }
    }
}

/// A real root of a spectrum generator with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityRoot {
    pub omega: f64,
    pub config: CavityConfig,
    /// `|det M(Omega)|`.
    pub residual: f64,
    /// Hadamard bound of `M(Omega)`, the local determinant scale.
    pub scale: f64,
    /// Smallest singular value of `M(Omega)`.
    pub sigma_min: f64,
    /// Largest singular value (spectral norm) of `M(Omega)`.
    pub matrix_norm: f64,
}

impl CavityRoot {
    /// Packages `omega` as a root of `config` with fresh diagnostics.
    pub fn at(config: &CavityConfig, omega: f64) -> Result<Self> {
        let m = boundary_matrix(config, omega)?;
        let sv = m.singular_values();
        let (sigma_min, matrix_norm) = (sv.min(), sv.max());
        Ok(CavityRoot {
            omega,
            config: config.clone(),
            residual: m.determinant().abs(),
            scale: determinant_scale(&m),
            sigma_min,
            matrix_norm,
        })
    }

    /// Both root invariants hold.
    pub fn is_verified(&self) -> bool {
        self.residual <= ROOT_RESIDUAL_TOLERANCE * self.scale
            && self.sigma_min <= SIGMA_TOLERANCE * self.matrix_norm
    }
}

/// Real-axis windows of `(0, omega_max]` on which the word's classes hold,
/// shrunk away from the branch points by a relative margin.
pub fn word_windows(config: &CavityConfig, omega_max: f64) -> Result<Vec<(f64, f64)>> {
    let r = config.r();
    let b = chi_i_zero(&config.model, r)?;
    let mut cuts: Vec<f64> = vec![0.0, r, b, omega_max];
    cuts.retain(|&x| x <= omega_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (outer, inner) = config.word.letters();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 1e-12 * hi.max(1.0) {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let k1 = classify_region(&config.model, Region::I, mid, r)?;
        let k2 = classify_region(&config.model, Region::II, mid, r)?;
        if k1.class == outer && k2.class == inner {
            let margin = 1e-9 * hi.max(1.0);
            let lo = if lo == 0.0 {
                margin.min(1e-3 * hi)
            } else {
                lo + margin
            };
            let hi = if hi == omega_max && hi != r && hi != b {
                hi
            } else {
                hi - margin
            };
            if hi > lo {
                out.push((lo, hi));
            }
        }
    }
    Ok(out)
}

/// Roots of the generator up to `omega_max` with default grid controls.
pub fn enumerate_roots(config: &CavityConfig, omega_max: f64) -> Result<Vec<CavityRoot>> {
    enumerate_roots_with(config, omega_max, &ScanOptions::default())
}

/// Roots of the generator up to `omega_max`.
///
/// Words with an L letter fix `Omega` by kinematics; a root is reported when
/// the determinant vanishes there to the residual tolerance.
pub fn enumerate_roots_with(
    config: &CavityConfig,
    omega_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<CavityRoot>> {
    if !(omega_max > 0.0) || !omega_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Omega_max must be positive, got {omega_max}"
        )));
    }
    let (outer, inner) = config.word.letters();
    if outer == ModeClass::L || inner == ModeClass::L {
        let omega = if inner == ModeClass::L {
            config.r()
        } else {
            chi_i_zero(&config.model, config.r())?
        };
        if omega > omega_max {
            return Ok(Vec::new());
        }
        let m = match boundary_matrix(config, omega) {
            Ok(m) => m,
            Err(Error::KinematicMismatch(_)) => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        if m.determinant().abs() <= ROOT_RESIDUAL_TOLERANCE * determinant_scale(&m) {
            return Ok(vec![CavityRoot::at(config, omega)?]);
        }
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    for (lo, hi) in word_windows(config, omega_max)? {
        let n = ((hi - lo) * opts.points_per_unit).ceil() as usize;
        let n = n.max(opts.min_points);
        let g = |w: f64| {
            boundary_matrix(config, w)
                .map(|m| m.determinant())
                .unwrap_or(f64::NAN)
        };
        for w in scan_roots(g, lo, hi, n, opts.tol)? {
            roots.push(CavityRoot::at(config, w)?);
        }
    }
    Ok(roots)
}

/// Null vector of the boundary matrix at a root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    /// `[P_I, Q_I, P_II, Q_II, P_III, Q_III]`, largest magnitude equal to 1.
    pub values: [f64; 6],
    /// Singular values in increasing order.
    pub singular_values: [f64; 6],
    /// Set when the two smallest singular values are within the degeneracy
    /// gap (relative to the largest).
    pub degenerate: bool,
    /// `|M v|` for the normalized vector.
    pub null_residual: f64,
}

/// Max-magnitude normalization with a positive largest entry.
pub fn normalize_max(v: &[f64; 6]) -> [f64; 6] {
    let vmax = v
        .iter()
        .fold(0.0f64, |m, &x| if x.abs() > m.abs() { x } else { m });
    if vmax == 0.0 {
        return *v;
    }
    v.map(|x| x / vmax)
}

/// Reconstructs the mode coefficients from the right singular vector of the
/// smallest singular value.
pub fn mode_coefficients(root: &CavityRoot) -> Result<ModeCoefficients> {
    if root.sigma_min > SIGMA_TOLERANCE * root.matrix_norm {
        return Err(Error::Singular(format!(
            "sigma_min = {:e} exceeds the root threshold at Omega = {}",
            root.sigma_min, root.omega
        )));
    }
    let m = boundary_matrix(&root.config, root.omega)?;
    let svd = m.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Singular("SVD did not produce right singular vectors".into()))?;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let k = order[0];
    let raw: [f64; 6] = std::array::from_fn(|j| v_t[(k, j)]);
    let values = normalize_max(&raw);
    let singular_values: [f64; 6] = std::array::from_fn(|j| svd.singular_values[order[j]]);
    let degenerate = singular_values[1] - singular_values[0] <= DEGENERACY_GAP * singular_values[5];
    let null_residual = (m * Vector6::from_row_slice(&values)).norm();
    Ok(ModeCoefficients {
        values,
        singular_values,
        degenerate,
        null_residual,
    })
}

/// Piecewise field profile `psi(Z)` built from mode coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub config: CavityConfig,
    pub omega: f64,
    pub coefficients: [f64; 6],
    outer: (ModeClass, f64),
    inner: (ModeClass, f64),
    kappa: f64,
}

fn basis(class: ModeClass, k: f64, z: f64) -> [(f64, f64); 2] {
    match class {
        ModeClass::O => [
            ((k * z).cos(), -k * (k * z).sin()),
            ((k * z).sin(), k * (k * z).cos()),
        ],
        ModeClass::E => [
            ((k * z).cosh(), k * (k * z).sinh()),
            ((k * z).sinh(), k * (k * z).cosh()),
        ],
        ModeClass::L => [(1.0, 0.0), (z, 1.0)],
    }
}

impl ModeProfile {
    pub fn new(root: &CavityRoot, coefficients: &ModeCoefficients) -> Result<Self> {
        let k = super::matrix::matrix_kinematics(&root.config, root.omega)?;
        let (o, i) = root.config.word.letters();
        Ok(ModeProfile {
            config: root.config.clone(),
            omega: root.omega,
            coefficients: coefficients.values,
            outer: (o, k.outer),
            inner: (i, k.inner),
            kappa: k.kappa,
        })
    }

    fn region_terms(&self, region: Region, z: f64) -> [(f64, f64); 2] {
        let (class, k, p, q) = match region {
            Region::I => (
                self.outer.0,
                self.outer.1,
                self.coefficients[0],
                self.coefficients[1],
            ),
            Region::II => (
                self.inner.0,
                self.inner.1,
                self.coefficients[2],
                self.coefficients[3],
            ),
            Region::III => (
                self.outer.0,
                self.outer.1,
                self.coefficients[4],
                self.coefficients[5],
            ),
        };
        let b = basis(class, k, z);
        [(p * b[0].0, p * b[0].1), (q * b[1].0, q * b[1].1)]
    }

    /// `(psi, psi')` in the given region at global `z`.
    pub fn evaluate_in(&self, region: Region, z: f64) -> (f64, f64) {
        let t = self.region_terms(region, z);
        (t[0].0 + t[1].0, t[0].1 + t[1].1)
    }

    /// `(psi, psi')` at `z`, choosing the region by position.
    pub fn evaluate(&self, z: f64) -> (f64, f64) {
        let region = if z < 0.0 {
            Region::I
        } else if z <= 1.0 {
            Region::II
        } else {
            Region::III
        };
        self.evaluate_in(region, z)
    }

    /// Normalized residuals of the four interface conditions followed by
    /// the two wall conditions: `|sum of terms| / max(1, sum of |terms|)`.
    pub fn condition_residuals(&self) -> [f64; 6] {
        let l = self.config.aspect.lambda;
        let tm = self.config.polarization == Polarization::TM;
        let kap = if tm { self.kappa } else { 1.0 };
        let residual = |terms: &[f64]| {
            let s: f64 = terms.iter().sum();
            let a: f64 = terms.iter().map(|t| t.abs()).sum();
            s.abs() / a.max(1.0)
        };
        let i0 = self.region_terms(Region::I, 0.0);
        let ii0 = self.region_terms(Region::II, 0.0);
        let ii1 = self.region_terms(Region::II, 1.0);
        let iii1 = self.region_terms(Region::III, 1.0);
        let wall_i = self.region_terms(Region::I, -l);
        let wall_iii = self.region_terms(Region::III, 1.0 + l);
        // TM: kappa psi continuous at the interfaces, psi' = 0 at the walls.
        let value_0 = residual(&[kap * i0[0].0, kap * i0[1].0, -ii0[0].0, -ii0[1].0]);
        let deriv_0 = residual(&[i0[0].1, i0[1].1, -ii0[0].1, -ii0[1].1]);
        let value_1 = residual(&[ii1[0].0, ii1[1].0, -kap * iii1[0].0, -kap * iii1[1].0]);
        let deriv_1 = residual(&[ii1[0].1, ii1[1].1, -iii1[0].1, -iii1[1].1]);
        let (wi, wiii) = if tm {
            (
                residual(&[wall_i[0].1, wall_i[1].1]),
                residual(&[wall_iii[0].1, wall_iii[1].1]),
            )
        } else {
            (
                residual(&[wall_i[0].0, wall_i[1].0]),
                residual(&[wall_iii[0].0, wall_iii[1].0]),
            )
        };
        [value_0, deriv_0, value_1, deriv_1, wi, wiii]
    }

    pub fn max_residual(&self) -> f64 {
        self.condition_residuals().into_iter().fold(0.0, f64::max)
    }
}

/// Applies the boundary matrix at a root to a coefficient vector.
pub fn apply_matrix(root: &CavityRoot, v: &[f64; 6]) -> Result<f64> {
    let m: Matrix6<f64> = boundary_matrix(&root.config, root.omega)?;
    Ok((m * Vector6::from_row_slice(v)).norm())
}

#[cfg(test)]
mod tests {
    use super::super::{Aspect, ModeWord};
    use super::*;
    use crate::media::PermittivityModel;
    use std::f64::consts::PI;

    fn cfg(
        s: Polarization,
        word: ModeWord,
        nx: u32,
        ny: u32,
        model: PermittivityModel,
    ) -> CavityConfig {
        CavityConfig::new(s, word, nx, ny, Aspect::unit(), model).unwrap()
    }

    #[test]
    fn vacuum_ooo_roots() {
        let c = cfg(
            Polarization::TE,
            ModeWord::OOO,
            1,
            1,
            PermittivityModel::vacuum(),
        );
        let r = c.r();
        let roots = enumerate_roots(&c, 12.0).unwrap();
        let expect: Vec<f64> = (1..)
            .map(|m| (r * r + (m as f64 * PI / 3.0).powi(2)).sqrt())
            .take_while(|&w| w < 12.0)
            .collect();
        assert_eq!(roots.len(), expect.len());
        for (a, b) in roots.iter().zip(&expect) {
            assert!((a.omega - b).abs() < 1e-10, "{} vs {}", a.omega, b);
            assert!(a.is_verified());
        }
    }

    #[test]
    fn vacuum_mode_is_single_sinusoid() {
        let c = cfg(
            Polarization::TE,
            ModeWord::OOO,
            1,
            1,
            PermittivityModel::vacuum(),
        );
        let root = &enumerate_roots(&c, 8.0).unwrap()[0];
        let mc = mode_coefficients(root).unwrap();
        let prof = ModeProfile::new(root, &mc).unwrap();
        assert!(prof.max_residual() < 1e-8);
        let chi = (root.omega.powi(2) - c.r().powi(2)).sqrt();
        // psi vanishes at Z = -1 so it is proportional to sin(chi (Z + 1)).
        let (p0, _) = prof.evaluate(0.5);
        let a = p0 / (chi * 1.5).sin();
        for z in [-0.7, -0.2, 0.3, 0.9, 1.4, 1.9] {
            assert!((prof.evaluate(z).0 - a * (chi * (z + 1.0)).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn eee_has_no_roots() {
        let c = cfg(
            Polarization::TE,
            ModeWord::EEE,
            1,
            1,
            PermittivityModel::constant(2.0).unwrap(),
        );
        assert!(enumerate_roots(&c, 50.0).unwrap().is_empty());
    }

    #[test]
    fn lel_has_no_roots() {
        for s in Polarization::BOTH {
            let c = cfg(
                s,
                ModeWord::LEL,
                2,
                1,
                PermittivityModel::constant(0.5).unwrap(),
            );
            assert!(enumerate_roots(&c, 50.0).unwrap().is_empty());
        }
    }

    #[test]
    fn scaling_invariance() {
        let c = cfg(
            Polarization::TM,
            ModeWord::OOO,
            1,
            2,
            PermittivityModel::constant(1.7).unwrap(),
        );
        let root = &enumerate_roots(&c, 12.0).unwrap()[0];
        let mc = mode_coefficients(root).unwrap();
        let doubled = normalize_max(&mc.values.map(|x| 2.0 * x));
        for (a, b) in doubled.iter().zip(mc.values) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(apply_matrix(root, &mc.values).unwrap() < 1e-8);
    }
}
