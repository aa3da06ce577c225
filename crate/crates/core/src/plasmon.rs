//! Non-retarded surface plasmons between two single-pole Lorentz half-spaces:
//! the two mode branches, their zero-point energy per unit area as a series
//! and by direct quadrature, and the resulting stress.

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_2d, QuadratureOptions};
use crate::units::HBAR;

/// Lorentz half-spaces across a vacuum gap of width `lz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmonSetup {
    pub kappa0: f64,
    /// Resonance frequency in rad/s.
    pub omega0: f64,
    /// Gap width in metres.
    pub lz: f64,
}

impl PlasmonSetup {
    /// `kappa0 = 1` is accepted and gives the null configuration.
    pub fn new(kappa0: f64, omega0: f64, lz: f64) -> Result<Self> {
        for (name, v) in [("kappa0", kappa0), ("omega0", omega0), ("Lz", lz)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(PlasmonSetup { kappa0, omega0, lz })
    }

    /// `(kappa0 - 1) / (kappa0 + 1)`.
    pub fn delta(&self) -> f64 {
        (self.kappa0 - 1.0) / (self.kappa0 + 1.0)
    }

    /// Large-`k` limit of both branches, `omega0 sqrt((kappa0 + 1)/2)`.
    pub fn surface_frequency(&self) -> f64 {
        self.omega0 * (0.5 * (self.kappa0 + 1.0)).sqrt()
    }

    pub fn with_lz(&self, lz: f64) -> Self {
        PlasmonSetup { lz, ..*self }
    }
}

/// `(omega_+, omega_-)` at transverse wavenumber `k` in 1/m.
pub fn omega_pm(k: f64, setup: &PlasmonSetup) -> Result<(f64, f64)> {
    if !(k >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "k must be non-negative, got {k}"
        )));
    }
    let x = setup.delta() * (-k * setup.lz).exp();
    let ws = setup.surface_frequency();
    Ok((ws * (1.0 + x).sqrt(), ws * (1.0 - x).sqrt()))
}

/// `a_n = (2n)! / (4^n (2n - 1) (n!)^2)`, exactly.
pub fn a_coeff(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("a_n is defined for n >= 1".into()));
    }
    // C(2n, n) by the multiplicative formula.
    let mut binom = BigInt::one();
    for j in 1..=n {
        binom = binom * BigInt::from(n + j) / BigInt::from(j);
    }
    let den = BigInt::from(4u8).pow(n) * BigInt::from(2 * n - 1);
    Ok(BigRational::new(binom, den))
}

fn a_f64(n: u32) -> Result<f64> {
    a_coeff(n)?
        .to_f64()
        .ok_or_else(|| Error::InvalidArgument(format!("a_{n} does not fit in f64")))
}

/// `sum_{n=1}^{n_terms} a_{2n} delta^{2n} / n^2`.
pub fn vk_series_sum(delta: f64, n_terms: u32) -> Result<f64> {
    let mut sum = 0.0;
    for n in 1..=n_terms {
        sum += a_f64(2 * n)? * delta.powi(2 * n as i32) / f64::from(n * n);
    }
    Ok(sum)
}

/// `U = -(hbar omega0 / 8 pi Lz^2) sqrt((kappa0 + 1)/2) sum a_{2n} delta^{2n} / n^2`
/// in J/m^2.
pub fn vk_series_energy(setup: &PlasmonSetup, n_terms: u32) -> Result<f64> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    let sum = vk_series_sum(setup.delta(), n_terms)?;
    Ok(-HBAR * setup.surface_frequency() / (8.0 * PI * setup.lz.powi(2)) * sum)
}

/// Magnitude of the first omitted series term, in J/m^2.
pub fn vk_series_truncation(setup: &PlasmonSetup, n_terms: u32) -> Result<f64> {
    let n = n_terms + 1;
    let term = a_f64(2 * n)? * setup.delta().powi(2 * n as i32) / f64::from(n * n);
    Ok(HBAR * setup.surface_frequency() / (8.0 * PI * setup.lz.powi(2)) * term)
}

/// `omega_+ + omega_- - 2 omega_s` at `t = k Lz`, rearranged so that the
/// `O(x)` parts cancel analytically.
pub fn mode_sum_bracket(t: f64, setup: &PlasmonSetup) -> f64 {
    let x = setup.delta() * (-t).exp();
    let (p, m) = ((1.0 + x).sqrt(), (1.0 - x).sqrt());
    -2.0 * setup.surface_frequency() * x * x / ((1.0 + (1.0 - x * x).sqrt()) * (p + m + 2.0))
}

/// `(hbar/2)(1/pi^2) int int dk_x dk_y [omega_+ + omega_- - 2 omega_s]` over
/// the positive quadrant, evaluated in polar form.
pub fn vk_quadrature_energy(setup: &PlasmonSetup, opts: &QuadratureOptions) -> Result<f64> {
    if setup.delta() == 0.0 {
        return Ok(0.0);
    }
    // int_0^inf t dt int_0^{pi/2} dtheta, with k = t / Lz.
    let res = integrate_2d(
        |t, _theta| mode_sum_bracket(t, setup),
        f64::INFINITY,
        FRAC_PI_2,
        opts,
    )?;
    Ok(HBAR / (2.0 * PI * PI) * res.value / setup.lz.powi(2))
}

/// `|dU/dLz| = 2 |U| / Lz` in Pa, from the `1/Lz^2` law of the series.
pub fn plasmon_stress(setup: &PlasmonSetup, n_terms: u32) -> Result<f64> {
    Ok(2.0 * vk_series_energy(setup, n_terms)?.abs() / setup.lz)
}

/// Record of one plasmon evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmonReport {
    pub kappa0: f64,
    pub omega0: f64,
    #[serde(rename = "Lz")]
    pub lz: f64,
    #[serde(rename = "U_series")]
    pub u_series: f64,
    #[serde(rename = "U_quadrature")]
    pub u_quadrature: f64,
    pub stress: f64,
    pub n_terms: u32,
}

pub fn plasmon_report(
    setup: &PlasmonSetup,
    n_terms: u32,
    opts: &QuadratureOptions,
) -> Result<PlasmonReport> {
    Ok(PlasmonReport {
        kappa0: setup.kappa0,
        omega0: setup.omega0,
        lz: setup.lz,
        u_series: vk_series_energy(setup, n_terms)?,
        u_quadrature: vk_quadrature_energy(setup, opts)?,
        stress: plasmon_stress(setup, n_terms)?,
        n_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> PlasmonSetup {
        PlasmonSetup::new(3.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(a_coeff(1).unwrap(), r(1, 2));
        assert_eq!(a_coeff(2).unwrap(), r(1, 8));
        assert_eq!(a_coeff(3).unwrap(), r(1, 16));
        assert!(a_coeff(0).is_err());
    }

    #[test]
    fn branch_values() {
        let s = setup();
        let (p, m) = omega_pm(0.0, &s).unwrap();
        assert!((p - 3f64.sqrt()).abs() < 1e-15 && (m - 1.0).abs() < 1e-15);
        let (p, m) = omega_pm(2f64.ln(), &s).unwrap();
        assert!((p - 2.5f64.sqrt()).abs() < 1e-15 && (m - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bracket_matches_direct_form() {
        let s = setup();
        for t in [0.0, 0.5, 2.0] {
            let (p, m) = omega_pm(t, &s).unwrap();
            assert!(
                (mode_sum_bracket(t, &s) - (p + m - 2.0 * s.surface_frequency())).abs() < 1e-14
            );
        }
    }

    #[test]
    fn null_setup() {
        let s = PlasmonSetup::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(vk_series_energy(&s, 10).unwrap(), 0.0);
        assert_eq!(
            vk_quadrature_energy(&s, &QuadratureOptions::with_rel_tol(1e-10)).unwrap(),
            0.0
        );
        assert_eq!(plasmon_stress(&s, 10).unwrap(), 0.0);
    }
}
