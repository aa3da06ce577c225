//! Permittivity models, per-region kinematics and the branch convention used
//! to continue the transverse wavenumbers into the complex frequency plane.
//!
//! Frequencies are dimensionless (`Omega = omega * Lz / c`) and so are the
//! transverse wavenumbers (`R = k * Lz`). Regions I and III share the material
//! law; region II is vacuum.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute discriminant tolerance below which a region is affine-linear.
pub const LINEAR_TOLERANCE: f64 = 1e-12;

/// Relative distance to a branch point at which continuation is refused.
pub const BRANCH_PROXIMITY: f64 = 1e-14;

/// Polarization family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::TE => write!(f, "TE"),
            Polarization::TM => write!(f, "TM"),
        }
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TE" => Ok(Polarization::TE),
            "TM" => Ok(Polarization::TM),
            other => Err(Error::Parse(format!("unknown polarization '{other}'"))),
        }
    }
}

/// Material law in regions I and III.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PermittivityModel {
    /// `kappa = xi`.
    ConstantDielectric { xi: f64 },
    /// `kappa = 1 - xi / Omega^2`.
    Plasma { xi: f64 },
    /// Single-pole law `kappa = 1 + Omega0^2 (kappa0 - 1) / (Omega0^2 - Omega^2)`.
    Lorentz { kappa0: f64, omega0: f64 },
    /// Limit of infinite permittivity; only closed-form limits apply.
    PerfectConductor,
}

impl PermittivityModel {
    pub fn constant(xi: f64) -> Result<Self> {
        check_positive("xi", xi)?;
        Ok(PermittivityModel::ConstantDielectric { xi })
    }

    pub fn plasma(xi: f64) -> Result<Self> {
        check_positive("xi", xi)?;
        Ok(PermittivityModel::Plasma { xi })
    }

    pub fn lorentz(kappa0: f64, omega0: f64) -> Result<Self> {
        check_positive("kappa0", kappa0)?;
        check_positive("omega0", omega0)?;
        if kappa0 == 1.0 {
            return Err(Error::InvalidArgument("kappa0 must differ from 1".into()));
        }
        Ok(PermittivityModel::Lorentz { kappa0, omega0 })
    }

    /// Region II vacuum, as a model.
    pub fn vacuum() -> Self {
        PermittivityModel::ConstantDielectric { xi: 1.0 }
    }

    /// True when the model is identical to vacuum at every frequency.
    pub fn is_vacuum(&self) -> bool {
        matches!(self, PermittivityModel::ConstantDielectric { xi } if *xi == 1.0)
    }

    /// The scalar material parameter, when the model has one.
    pub fn xi(&self) -> Option<f64> {
        match self {
            PermittivityModel::ConstantDielectric { xi } | PermittivityModel::Plasma { xi } => {
                Some(*xi)
            }
            _ => None,
        }
    }

    /// Relative permittivity at complex frequency `omega`.
    pub fn kappa(&self, omega: Complex64) -> Result<Complex64> {
        match *self {
            PermittivityModel::ConstantDielectric { xi } => Ok(Complex64::new(xi, 0.0)),
            PermittivityModel::Plasma { xi } => {
                if omega.norm() == 0.0 {
                    return Err(Error::Domain(
                        "plasma permittivity is singular at omega = 0".into(),
                    ));
                }
                Ok(1.0 - xi / (omega * omega))
            }
            PermittivityModel::Lorentz { kappa0, omega0 } => {
                let den = omega0 * omega0 - omega * omega;
                if den.norm() <= f64::EPSILON * omega0 * omega0 {
                    return Err(Error::Domain("omega sits on the Lorentz resonance".into()));
                }
                Ok(1.0 + omega0 * omega0 * (kappa0 - 1.0) / den)
            }
            PermittivityModel::PerfectConductor => Err(Error::UnsupportedModel(self.to_string())),
        }
    }

    /// `d kappa / d omega`.
    pub fn kappa_derivative(&self, omega: Complex64) -> Result<Complex64> {
        match *self {
            PermittivityModel::ConstantDielectric { .. } => Ok(Complex64::new(0.0, 0.0)),
            PermittivityModel::Plasma { xi } => {
                if omega.norm() == 0.0 {
                    return Err(Error::Domain(
                        "plasma permittivity is singular at omega = 0".into(),
                    ));
                }
                Ok(2.0 * xi / (omega * omega * omega))
            }
            PermittivityModel::Lorentz { kappa0, omega0 } => {
                let den = omega0 * omega0 - omega * omega;
                if den.norm() <= f64::EPSILON * omega0 * omega0 {
                    return Err(Error::Domain("omega sits on the Lorentz resonance".into()));
                }
                Ok(2.0 * omega0 * omega0 * (kappa0 - 1.0) * omega / (den * den))
            }
            PermittivityModel::PerfectConductor => Err(Error::UnsupportedModel(self.to_string())),
        }
    }

    /// `kappa * omega^2` and its derivative, evaluated without forming
    /// `kappa` separately where the model allows it.
    pub fn kappa_omega_sq(&self, omega: Complex64) -> Result<(Complex64, Complex64)> {
        match *self {
            PermittivityModel::ConstantDielectric { xi } => {
                Ok((xi * omega * omega, 2.0 * xi * omega))
            }
            PermittivityModel::Plasma { xi } => Ok((omega * omega - xi, 2.0 * omega)),
            PermittivityModel::Lorentz { .. } => {
                let k = self.kappa(omega)?;
                let dk = self.kappa_derivative(omega)?;
                Ok((k * omega * omega, dk * omega * omega + 2.0 * k * omega))
            }
            PermittivityModel::PerfectConductor => Err(Error::UnsupportedModel(self.to_string())),
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be a positive finite number, got {v}"
        )))
    }
}

impl fmt::Display for PermittivityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermittivityModel::ConstantDielectric { xi } => write!(f, "const:xi={xi}"),
            PermittivityModel::Plasma { xi } => write!(f, "plasma:xi={xi}"),
            PermittivityModel::Lorentz { kappa0, omega0 } => {
                write!(f, "lorentz:kappa0={kappa0},omega0={omega0}")
            }
            PermittivityModel::PerfectConductor => write!(f, "pc"),
        }
    }
}

/// Parses a decimal number or a fraction `p/q`.
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
            p / q
        }
        None => text
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{text}'")))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Parse(format!("non-finite number '{text}'")))
    }
}

/// Splits a model string into its kind and `key=value` parameters.
pub fn split_model_spec(spec: &str) -> Result<(String, Vec<(String, String)>)> {
    let spec = spec.trim();
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = Vec::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in '{item}'")))?;
        params.push((k.trim().to_ascii_lowercase(), v.trim().to_string()));
    }
    Ok((kind.trim().to_ascii_lowercase(), params))
}

impl FromStr for PermittivityModel {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, params) = split_model_spec(spec)?;
        let get = |key: &str| -> Result<f64> {
            let (_, v) = params
                .iter()
                .find(|(k, _)| k == key)
                .ok_or_else(|| Error::Parse(format!("model '{spec}' is missing '{key}'")))?;
            parse_number(v)
        };
        let expect_keys = |keys: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(Error::Parse(format!("unknown parameter '{k}' in '{spec}'"))),
                None => Ok(()),
            }
        };
        match kind.as_str() {
            "const" => {
                expect_keys(&["xi"])?;
                PermittivityModel::constant(get("xi")?)
            }
            "plasma" => {
                expect_keys(&["xi"])?;
                PermittivityModel::plasma(get("xi")?)
            }
            "lorentz" => {
                expect_keys(&["kappa0", "omega0"])?;
                PermittivityModel::lorentz(get("kappa0")?, get("omega0")?)
            }
            "pc" => {
                expect_keys(&[])?;
                Ok(PermittivityModel::PerfectConductor)
            }
            _ => Err(Error::Parse(format!("unknown model kind '{kind}'"))),
        }
    }
}

impl TryFrom<String> for PermittivityModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PermittivityModel> for String {
    fn from(m: PermittivityModel) -> String {
        m.to_string()
    }
}

/// One of the three regions along the normal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    I,
    II,
    III,
}

/// Kinematic class of the normal dependence in a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeClass {
    /// Oscillatory.
    O,
    /// Exponential.
    E,
    /// Affine-linear.
    L,
}

impl ModeClass {
    pub fn letter(self) -> char {
        match self {
            ModeClass::O => 'O',
            ModeClass::E => 'E',
            ModeClass::L => 'L',
        }
    }
}

/// Classification of a region at a real frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionKinematics {
    pub region: Region,
    pub class: ModeClass,
    /// `chi` for class O, `zeta` for class E, zero for class L.
    pub value: f64,
    /// The discriminant `kappa Omega^2 - R^2`.
    pub discriminant: f64,
}

impl RegionKinematics {
    pub fn chi(&self) -> Option<f64> {
        (self.class == ModeClass::O).then_some(self.value)
    }

    pub fn zeta(&self) -> Option<f64> {
        (self.class == ModeClass::E).then_some(self.value)
    }
}

/// `kappa^nu Omega^2` and its frequency derivative in a given region.
pub fn region_kappa_omega_sq(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
) -> Result<(Complex64, Complex64)> {
    match region {
        Region::II => Ok((omega * omega, 2.0 * omega)),
        Region::I | Region::III => model.kappa_omega_sq(omega),
    }
}

/// Relative permittivity in a region.
pub fn region_kappa(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
) -> Result<Complex64> {
    match region {
        Region::II => Ok(Complex64::new(1.0, 0.0)),
        Region::I | Region::III => model.kappa(omega),
    }
}

/// Classifies a region at real frequency `omega` and transverse wavenumber `r`.
pub fn classify_region(
    model: &PermittivityModel,
    region: Region,
    omega: f64,
    r: f64,
) -> Result<RegionKinematics> {
    let (kw2, _) = region_kappa_omega_sq(model, region, Complex64::new(omega, 0.0))?;
    let d = kw2.re - r * r;
    let (class, value) = if d.abs() <= LINEAR_TOLERANCE {
        (ModeClass::L, 0.0)
    } else if d > 0.0 {
        (ModeClass::O, d.sqrt())
    } else {
        (ModeClass::E, (-d).sqrt())
    };
    Ok(RegionKinematics {
        region,
        class,
        value,
        discriminant: d,
    })
}

/// Choice of square-root sheet for local analytic continuation across the
/// real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Principal root; continuous across the real axis where the
    /// discriminant is positive.
    Propagating,
    /// `i * sqrt(-w)`; continuous across the real axis where the
    /// discriminant is negative.
    Evanescent,
}

fn proximity_check(w: Complex64, kw2: Complex64, omega: Complex64) -> Result<()> {
    if w.norm() < BRANCH_PROXIMITY * kw2.norm().max(1.0) {
        Err(Error::BranchPoint { omega })
    } else {
        Ok(())
    }
}

/// Continued `chi^nu(Omega)` and its derivative.
///
/// In the upper half-plane the branch has `Im chi >= 0`; in the lower
/// half-plane the Schwarz reflection is used. Real frequencies are treated as
/// the limit from above.
pub fn chi_continued_with_derivative(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
    r: f64,
) -> Result<(Complex64, Complex64)> {
    if omega.im < 0.0 {
        let (c, dc) = chi_continued_with_derivative(model, region, omega.conj(), r)?;
        return Ok((c.conj(), dc.conj()));
    }
    let (kw2, dkw2) = region_kappa_omega_sq(model, region, omega)?;
    let w = kw2 - r * r;
    proximity_check(w, kw2, omega)?;
    let mut chi = w.sqrt();
    if chi.im < 0.0 {
        chi = -chi;
    }
    Ok((chi, dkw2 / (2.0 * chi)))
}

/// Continued `chi^nu(Omega)`.
pub fn chi_continued(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
    r: f64,
) -> Result<Complex64> {
    chi_continued_with_derivative(model, region, omega, r).map(|(c, _)| c)
}

/// `chi^nu` on an explicitly chosen sheet, analytic in a neighbourhood of a
/// real-axis window where the discriminant keeps one sign.
pub fn chi_on_branch(
    model: &PermittivityModel,
    region: Region,
    omega: Complex64,
    r: f64,
    branch: Branch,
) -> Result<(Complex64, Complex64)> {
    let (kw2, dkw2) = region_kappa_omega_sq(model, region, omega)?;
    let w = kw2 - r * r;
    proximity_check(w, kw2, omega)?;
    let chi = match branch {
        Branch::Propagating => w.sqrt(),
        Branch::Evanescent => Complex64::i() * (-w).sqrt(),
    };
    Ok((chi, dkw2 / (2.0 * chi)))
}

/// Real-axis branch points of `chi_II` and `chi_I`, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoints {
    pub omega_b1: f64,
    pub omega_b2: f64,
    /// True when the zero of `chi_I` lies below the zero of `chi_II`, so the
    /// fields were swapped to keep `omega_b1 <= omega_b2`.
    pub swapped: bool,
}

impl BranchPoints {
    /// Zero of `chi_II` (always `R`).
    pub fn chi_ii_zero(&self) -> f64 {
        if self.swapped {
            self.omega_b2
        } else {
            self.omega_b1
        }
    }

    /// Zero of `chi_I`.
    pub fn chi_i_zero(&self) -> f64 {
        if self.swapped {
            self.omega_b1
        } else {
            self.omega_b2
        }
    }
}

/// Positive real zero of `chi_I`, i.e. the root of `kappa Omega^2 = R^2`.
pub fn chi_i_zero(model: &PermittivityModel, r: f64) -> Result<f64> {
    match *model {
        PermittivityModel::ConstantDielectric { xi } => Ok(r / xi.sqrt()),
        PermittivityModel::Plasma { xi } => Ok((r * r + xi).sqrt()),
        _ => Err(Error::UnsupportedModel(model.to_string())),
    }
}

/// Branch points for the constant-dielectric and plasma models.
pub fn branch_points(model: &PermittivityModel, r: f64) -> Result<BranchPoints> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "R must be positive, got {r}"
        )));
    }
    let b2 = chi_i_zero(model, r)?;
    if b2 < r {
        Ok(BranchPoints {
            omega_b1: b2,
            omega_b2: r,
            swapped: true,
        })
    } else {
        Ok(BranchPoints {
            omega_b1: r,
            omega_b2: b2,
            swapped: false,
        })
    }
}
