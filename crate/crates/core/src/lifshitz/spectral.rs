//! Real-axis spectral summation: real poles plus the scattering-phase
//! continuum above the lower branch point.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::ModeWord;
use crate::error::{Error, Result};
use crate::media::{branch_points, PermittivityModel, Polarization};
use crate::numerics::{integrate, QuadratureOptions, Tracked};
use crate::openmodes::{f_with_derivative, pole_scan, Kernel, PoleScanOptions, Sheet};

/// Spectral summation over `R in [0, R_0]` and `Omega' in (0, Lambda]`.
///
/// `total = pole_part + surface_part + threshold_part + continuum_part`, each
/// carrying the `-2 pi int R dR` prefactor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummation {
    pub polarization: Polarization,
    pub model: PermittivityModel,
    pub r0: f64,
    pub lambda: f64,
    pub total: f64,
    /// `-2 pi int R sum_p Omega_p dR` over the zeros of `F`.
    pub pole_part: f64,
    /// `-2 pi int R (-2 sum_b Omega_b) dR` over the double poles of `F`
    /// (TM with negative `kappa` only).
    pub surface_part: f64,
    /// `-2 pi int R (R/2) dR`: the square-root zero of `F` at `chi_II = 0`
    /// counts as half a pole.
    pub threshold_part: f64,
    /// `-2 pi int R (1/pi) int Omega' d delta dR`.
    pub continuum_part: f64,
    pub error_estimate: f64,
    /// `(R, N^s(R))` at the outer quadrature nodes, sorted by `R`.
    pub pole_counts: Vec<(f64, usize)>,
}

/// The bracket of the spectral summation at one `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralInner {
    pub r: f64,
    pub poles: Vec<f64>,
    pub surface_poles: Vec<f64>,
    /// `sum_p Omega_p`.
    pub pole_sum: f64,
    /// `-2 sum_b Omega_b`.
    pub surface_sum: f64,
    /// `Omega_{chi_II = 0} / 2 = R / 2` (zero for vacuum).
    pub threshold: f64,
    /// `(1/pi) int_{Omega_B1}^{Lambda} Omega' d delta/dOmega' dOmega'`.
    pub continuum: f64,
    pub continuum_error: f64,
}

impl SpectralInner {
    pub fn total(&self) -> f64 {
        self.pole_sum + self.surface_sum + self.threshold + self.continuum
    }
}

/// `(1/pi) d delta / dOmega'` on the upper lip of the real axis, with
/// `d delta / dOmega' = -Im F'/F`.
///
/// Between the branch points with region I evanescent and the gap
/// propagating, `|rho| = 1` and the phase derivative is taken from
/// `ln(rho^2 e^{2 i chi_II})` directly, which stays smooth through the poles.
pub fn phase_density(
    s: Polarization,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    if model.is_vacuum() {
        return Ok(0.0);
    }
    let bp = branch_points(model, r)?;
    let z = Complex64::new(omega, 0.0);
    if omega > bp.chi_ii_zero() && omega < bp.chi_i_zero() {
        let k = Kernel::new(s, z, r, model, Sheet::Physical)?;
        return Ok(-k.log_x_derivative().im / (2.0 * PI));
    }
    let (f, df) = f_with_derivative(s, z, r, model)?;
    Ok(-(df / f).im / PI)
}

/// `(1/pi) Omega' d delta / dOmega'`, the integrand of the continuum part.
pub fn continuum_integrand(
    s: Polarization,
    omega: f64,
    r: f64,
    model: &PermittivityModel,
) -> Result<f64> {
    Ok(omega * phase_density(s, omega, r, model)?)
}

fn check_model(model: &PermittivityModel) -> Result<()> {
    match model {
        PermittivityModel::ConstantDielectric { .. } | PermittivityModel::Plasma { .. } => Ok(()),
        _ => Err(Error::UnsupportedModel(format!(
            "the spectral summation supports const and plasma, got {model}"
        ))),
    }
}

/// Largest detour radius around a branch point, relative to `max(1, Omega_B)`.
const DETOUR_RADIUS: f64 = 1e-2;
/// Smallest detour radius, relative to `max(1, Omega_B)`.
const DETOUR_MIN: f64 = 1e-7;

/// A real singular point of `F'/F`: the residue of `Omega^k F'/F` there is
/// `weight * at^k`.
#[derive(Debug, Clone, Copy)]
struct Singular {
    at: f64,
    weight: f64,
}

/// Picks a detour radius around `b`, at most `limit`, that keeps every
/// singular point either well inside or well outside the semicircle.
fn detour_radius(b: f64, limit: f64, singular: &[Singular]) -> f64 {
    let scale = b.abs().max(1.0);
    let mut r = (DETOUR_RADIUS * scale).min(limit).min(0.5 * b);
    let floor = (DETOUR_MIN * scale).min(r);
    while r > floor {
        let crowded = singular.iter().any(|p| {
            let d = (p.at - b).abs();
            d > 0.0 && d > 0.25 * r && d < 2.0 * r
        });
        if !crowded {
            break;
        }
        r *= 0.25;
    }
    r.max(floor)
}

/// Zeroth and first moments `(1/pi) int Omega'^k d delta` over
/// `[b - radius, b + radius]` on the upper lip, from a semicircle through the
/// upper half-plane, where `F` has no zeros or poles. Passing above a real
/// singular point inside the diameter shifts the result by its residue.
fn detour_moments(
    s: Polarization,
    b: f64,
    radius: f64,
    r: f64,
    model: &PermittivityModel,
    singular: &[Singular],
    opts: &QuadratureOptions,
) -> Result<([f64; 2], f64)> {
    let mut failure = None;
    // Omega = b + radius e^{i theta}, theta from pi down to 0.
    let res = integrate(
        |theta: f64| -> Tracked<1> {
            let e = Complex64::from_polar(1.0, theta);
            let z = b + radius * e;
            match f_with_derivative(s, z, r, model) {
                Ok((f, df)) => {
                    let w = df / f * Complex64::i() * radius * e;
                    Tracked {
                        primary: -(z * w).im,
                        companions: [-w.im],
                    }
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    Tracked::default()
                }
            }
        },
        0.0,
        PI,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let inside = singular.iter().filter(|p| (p.at - b).abs() < radius);
    let (m0, m1) = inside.fold((0.0, 0.0), |(m0, m1), p| {
        (m0 + p.weight, m1 + p.weight * p.at)
    });
    Ok((
        [
            -res.value.companions[0] / PI - m0,
            -res.value.primary / PI - m1,
        ],
        res.error_estimate / PI,
    ))
}

/// Discrete real-axis content of the bracket at one `R`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RealSpectrum {
    pub poles: Vec<f64>,
    pub eoe_poles: Vec<f64>,
    pub surface_poles: Vec<f64>,
    pub threshold: f64,
    pub omega_lo: f64,
    pub omega_hi: f64,
}

impl RealSpectrum {
    pub(crate) fn scan(
        s: Polarization,
        r: f64,
        model: &PermittivityModel,
        omega_max: f64,
        scan: &PoleScanOptions,
    ) -> Result<Self> {
        check_model(model)?;
        let bp = branch_points(model, r)?;
        let found = pole_scan(s, r, model, omega_max, scan)?;
        Ok(RealSpectrum {
            poles: found.poles.iter().map(|p| p.omega).collect(),
            eoe_poles: found
                .poles
                .iter()
                .filter(|p| p.word == ModeWord::EOE)
                .map(|p| p.omega)
                .collect(),
            surface_poles: found.surface_poles,
            threshold: bp.chi_ii_zero(),
            omega_lo: bp.omega_b1,
            omega_hi: bp.omega_b2,
        })
    }

    fn singular(&self) -> Vec<Singular> {
        let mut v: Vec<Singular> = self
            .poles
            .iter()
            .map(|&p| Singular { at: p, weight: 1.0 })
            .collect();
        v.extend(self.surface_poles.iter().map(|&p| Singular {
            at: p,
            weight: -2.0,
        }));
        v.push(Singular {
            at: self.threshold,
            weight: 0.5,
        });
        v
    }

    /// Continuum moments `[(1/pi) int d delta, (1/pi) int Omega' d delta]`
    /// over each bin `[edges[i], edges[i + 1]]`, plus an error estimate. The
    /// detour around a branch point is credited to the bin containing it.
    pub(crate) fn continuum_bins(
        &self,
        s: Polarization,
        r: f64,
        model: &PermittivityModel,
        edges: &[f64],
        opts: &QuadratureOptions,
    ) -> Result<(Vec<[f64; 2]>, f64)> {
        let n = edges.len().saturating_sub(1);
        let mut bins = vec![[0.0; 2]; n];
        if n == 0 || model.is_vacuum() {
            return Ok((bins, 0.0));
        }
        let top = edges[n];
        let singular = self.singular();
        let (lo, hi) = (self.omega_lo, self.omega_hi);
        let gap = 0.25 * (hi - lo);
        let r_lo = detour_radius(lo, gap, &singular);
        let r_hi = detour_radius(hi, gap.min(0.5 * (top - hi).abs()), &singular);
        let bin_of = |x: f64| edges.windows(2).position(|w| x >= w[0] && x < w[1]);
        let mut err = 0.0;
        for (b, rad) in [(lo, r_lo), (hi, r_hi)] {
            if let Some(i) = bin_of(b) {
                let (m, e) = detour_moments(s, b, rad, r, model, &singular, opts)?;
                bins[i][0] += m[0];
                bins[i][1] += m[1];
                err += e;
            }
        }
        let mut failure = None;
        for (i, w) in edges.windows(2).enumerate() {
            let mut cuts = vec![w[0].max(lo + r_lo), w[1]];
            cuts.extend([hi - r_hi, hi + r_hi]);
            cuts.extend(self.eoe_poles.iter().copied());
            cuts.retain(|&x| x >= w[0].max(lo + r_lo) && x <= w[1]);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * y.abs().max(1.0));
            for c in cuts.windows(2) {
                if c[0] >= hi - r_hi && c[1] <= hi + r_hi {
                    continue;
                }
                let res = integrate(
                    |om| match phase_density(s, om, r, model) {
                        Ok(v) => Tracked {
                            primary: om * v,
                            companions: [v],
                        },
                        Err(e) => {
                            failure.get_or_insert(e);
                            Tracked::default()
                        }
                    },
                    c[0],
                    c[1],
                    opts,
                )?;
                bins[i][0] += res.value.companions[0];
                bins[i][1] += res.value.primary;
                err += res.error_estimate;
            }
        }
        failure.map_or(Ok((bins, err)), Err)
    }
}

/// Evaluates the spectral bracket at one transverse wavenumber.
///
/// The continuum integral runs on the real axis except within a small
/// radius of each branch point, where it is taken along a semicircle in the
/// upper half-plane; this avoids the cancellation in the discriminants near
/// the branch points.
pub fn spectral_inner(
    s: Polarization,
    r: f64,
    model: &PermittivityModel,
    lambda: f64,
    opts: &QuadratureOptions,
    scan: &PoleScanOptions,
) -> Result<SpectralInner> {
    check_model(model)?;
    let bp = branch_points(model, r)?;
    if !(lambda > bp.omega_b2) {
        return Err(Error::Domain(format!(
            "Lambda = {lambda} must exceed the upper branch point {}",
            bp.omega_b2
        )));
    }
    if model.is_vacuum() {
        return Ok(SpectralInner {
            r,
            poles: vec![],
            surface_poles: vec![],
            pole_sum: 0.0,
            surface_sum: 0.0,
            threshold: 0.0,
            continuum: 0.0,
            continuum_error: 0.0,
        });
    }
    let spec = RealSpectrum::scan(s, r, model, lambda, scan)?;
    let (bins, err) = spec.continuum_bins(s, r, model, &[0.0, lambda], opts)?;
    Ok(SpectralInner {
        r,
        pole_sum: spec.poles.iter().sum(),
        surface_sum: -2.0 * spec.surface_poles.iter().sum::<f64>(),
        threshold: 0.5 * spec.threshold,
        poles: spec.poles,
        surface_poles: spec.surface_poles,
        continuum: bins[0][1],
        continuum_error: err,
    })
}

/// `I_real = -2 pi int_0^{R_0} R dR [sum_p Omega_p - 2 sum_b Omega_b + R/2
/// + (1/pi) int Omega' d delta]`.
///
/// `opts` controls the outer `R` integral; the inner phase integral runs at
/// a hundredth of its relative tolerance.
pub fn i_real(
    s: Polarization,
    model: &PermittivityModel,
    r0: f64,
    lambda: f64,
    opts: &QuadratureOptions,
) -> Result<SpectralSummation> {
    check_model(model)?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "R0 must be positive and finite, got {r0}"
        )));
    }
    let top = branch_points(model, r0)?.omega_b2;
    if !(lambda > top) {
        return Err(Error::Domain(format!(
            "Lambda = {lambda} must exceed Omega_B2(R0) = {top}"
        )));
    }
    let inner_opts = QuadratureOptions {
        rel_tol: 0.01 * opts.rel_tol,
        abs_tol: 1e-14,
        ..*opts
    };
    let scan = PoleScanOptions {
        validate: false,
        ..Default::default()
    };
    let mut failure = None;
    let mut counts = Vec::new();
    let res = integrate(
        |r: f64| -> Tracked<3> {
            if failure.is_some() || r == 0.0 {
                return Tracked::default();
            }
            match spectral_inner(s, r, model, lambda, &inner_opts, &scan) {
                Ok(b) => {
                    counts.push((r, b.poles.len()));
                    Tracked {
                        primary: r * b.total(),
                        companions: [r * b.pole_sum, r * b.surface_sum, r * b.threshold],
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    Tracked::default()
                }
            }
        },
        0.0,
        r0,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res?;
    counts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = -2.0 * PI;
    let total = k * res.value.primary;
    let pole_part = k * res.value.companions[0];
    let surface_part = k * res.value.companions[1];
    let threshold_part = k * res.value.companions[2];
    Ok(SpectralSummation {
        polarization: s,
        model: *model,
        r0,
        lambda,
        total,
        pole_part,
        surface_part,
        threshold_part,
        continuum_part: total - pole_part - surface_part - threshold_part,
        error_estimate: 2.0 * PI * res.error_estimate,
        pole_counts: counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_vanishes() {
        let v = PermittivityModel::vacuum();
        let r = i_real(
            Polarization::TE,
            &v,
            5.0,
            20.0,
            &QuadratureOptions::with_rel_tol(1e-6),
        )
        .unwrap();
        assert_eq!(r.total, 0.0);
    }

    /// Independent oracle: the same integral along a path lifted slightly
    /// into the upper half-plane, where `F` has no zeros or poles.
    fn lifted(s: Polarization, r: f64, m: &PermittivityModel, lam: f64) -> f64 {
        let h = 0.5;
        let o = QuadratureOptions {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_subdivisions: 4000,
        };
        // Im of z F'/F dz along z(t) = z0 + t dz.
        let seg = |z0: Complex64, dz: Complex64| {
            let g = |t: f64| {
                let z = z0 + t * dz;
                let (f, df) = f_with_derivative(s, z, r, m).unwrap();
                (z * df / f * dz).im
            };
            integrate(g, 0.0, 1.0, &o).unwrap().value
        };
        let i = Complex64::i();
        seg(Complex64::new(0.0, 0.0), i * h)
            + seg(i * h, Complex64::new(lam, 0.0))
            + seg(lam + i * h, -i * h)
    }

    #[test]
    fn per_r_matches_lifted_path() {
        let o = QuadratureOptions::with_rel_tol(1e-10);
        let sc = PoleScanOptions::default();
        for (s, xi) in [
            (Polarization::TE, 30.0),
            (Polarization::TM, 30.0),
            (Polarization::TM, 0.5),
            (Polarization::TE, 3.0),
        ] {
            let m = PermittivityModel::plasma(xi).unwrap();
            for r in [0.3, 0.5, 2.0, 5.0] {
                let re = spectral_inner(s, r, &m, 60.0, &o, &sc).unwrap();
                let v = lifted(s, r, &m, 60.0);
                assert!(
                    (v + PI * re.total()).abs() < 1e-9 * v.abs().max(1.0),
                    "{s} xi={xi} R={r}: {v} vs {}",
                    -PI * re.total()
                );
            }
        }
    }

    #[test]
    fn dielectric_matches_lifted_path() {
        let o = QuadratureOptions::with_rel_tol(1e-10);
        let m = PermittivityModel::constant(4.0).unwrap();
        for s in Polarization::BOTH {
            for r in [0.5, 3.0] {
                let re = spectral_inner(s, r, &m, 40.0, &o, &PoleScanOptions::default()).unwrap();
                let v = lifted(s, r, &m, 40.0);
                assert!(
                    (v + PI * re.total()).abs() < 1e-9 * v.abs().max(1.0),
                    "{s} R={r}: {v} vs {}",
                    -PI * re.total()
                );
            }
        }
    }
}
