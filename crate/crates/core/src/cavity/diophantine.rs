//! Integer solutions of the OLO and LOL existence conditions.

use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Aspect, ModeWord};
use crate::error::{Error, Result};
use crate::media::{parse_number, Polarization};

/// Relative-permittivity parameter, exact when given as a rational.
#[derive(Debug, Clone, PartialEq)]
pub enum XiValue {
    Exact(BigRational),
    Approx(f64),
}

impl XiValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            XiValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            XiValue::Approx(x) => *x,
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    s.trim().parse::<BigInt>().ok()
}

impl FromStr for XiValue {
    type Err = Error;
    /// Integers, `p/q` fractions and terminating decimals are exact; anything
    /// else is parsed as a float.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            if let (Some(p), Some(q)) = (parse_int(p), parse_int(q)) {
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in '{s}'")));
                }
                return Ok(XiValue::Exact(BigRational::new(p, q)));
            }
        }
        if let Some(n) = parse_int(t) {
            return Ok(XiValue::Exact(BigRational::from_integer(n)));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let digits = format!("{int}{frac}");
            if !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit()) {
                if let Some(n) = parse_int(&digits) {
                    let d = BigInt::from(10u32).pow(frac.len() as u32);
                    return Ok(XiValue::Exact(BigRational::new(n, d)));
                }
            }
        }
        Ok(XiValue::Approx(parse_number(t)?))
    }
}

impl From<f64> for XiValue {
    fn from(x: f64) -> Self {
        XiValue::Approx(x)
    }
}

/// One Diophantine solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiophantineMode {
    pub nx: u32,
    pub ny: u32,
    pub ell: u32,
    pub omega: f64,
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite parameter {x}")))
}

/// Searches `1..=n_max` (and zero where allowed) for the integer families
/// on which an OLO (TE) or LOL (TM) mode exists in a constant dielectric.
///
/// OLO: `nx^2 + lambda2^2 ny^2 = lambda1^2 (ell + 1/2)^2 / (lambda^2 (xi - 1))`
/// with `Omega = R`. LOL: `nx^2 + lambda2^2 ny^2 = lambda1^2 ell^2 / (1/xi - 1)`
/// with `Omega = ell pi / sqrt(1 - xi)`.
pub fn diophantine_search(
    s: Polarization,
    word: ModeWord,
    xi: &XiValue,
    aspect: &Aspect,
    n_max: u32,
) -> Result<Vec<DiophantineMode>> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let aspect = Aspect::new(aspect.lambda1, aspect.lambda2, aspect.lambda)?;
    let xf = xi.to_f64();
    let olo = match (s, word) {
        (Polarization::TE, ModeWord::OLO) => {
            if !(xf > 1.0) {
                return Err(Error::Domain(format!("OLO modes need xi > 1, got {xf}")));
            }
            true
        }
        (Polarization::TM, ModeWord::LOL) => {
            if !(xf > 0.0 && xf < 1.0) {
                return Err(Error::Domain(format!(
                    "TM LOL modes need 0 < xi < 1, got {xf}"
                )));
            }
            false
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no Diophantine condition for ({s}, {word})"
            )));
        }
    };
    // lhs = factor * m^2 where m = 2 ell + 1 (OLO) or ell (LOL).
    let factor_f = if olo {
        aspect.lambda1.powi(2) / (4.0 * aspect.lambda.powi(2) * (xf - 1.0))
    } else {
        aspect.lambda1.powi(2) * xf / (1.0 - xf)
    };
    let factor_q = match xi {
        XiValue::Exact(q) => {
            let l1 = exact(aspect.lambda1)?;
            let l = exact(aspect.lambda)?;
            let one = BigRational::one();
            Some(if olo {
                &l1 * &l1 / (BigRational::from_integer(4.into()) * &l * &l * (q - &one))
            } else {
                &l1 * &l1 * q / (&one - q)
            })
        }
        XiValue::Approx(_) => None,
    };
    let l2_q = exact(aspect.lambda2)?;
    let mut out = Vec::new();
    let n_min = if olo { 0 } else { 1 };
    for nx in n_min..=n_max {
        for ny in n_min..=n_max {
            if nx == 0 && ny == 0 {
                continue;
            }
            let lhs_f = (nx as f64).powi(2) + (aspect.lambda2 * ny as f64).powi(2);
            let m_est = (lhs_f / factor_f).sqrt();
            let m0 = m_est.floor().max(0.0) as u64;
            for m in m0.saturating_sub(1)..=m0 + 2 {
                let valid = if olo { m % 2 == 1 } else { m >= 1 };
                if !valid {
                    continue;
                }
                let hit = match &factor_q {
                    Some(fq) => {
                        let lhs = BigRational::from_integer((nx * nx).into())
                            + &l2_q * &l2_q * BigRational::from_integer((ny * ny).into());
                        let rhs = fq * BigRational::from_integer((m * m).into());
                        (lhs - rhs).abs().is_zero()
                    }
                    None => (lhs_f - factor_f * (m * m) as f64).abs() < 1e-9,
                };
                if hit {
                    let ell = if olo { (m - 1) / 2 } else { m } as u32;
                    let omega = if olo {
                        aspect.r(nx, ny)
                    } else {
                        ell as f64 * PI / (1.0 - xf).sqrt()
                    };
                    out.push(DiophantineMode { nx, ny, ell, omega });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_values() {
        let q = |s: &str| match s.parse::<XiValue>().unwrap() {
            XiValue::Exact(q) => q,
            XiValue::Approx(_) => panic!("expected exact"),
        };
        assert_eq!(q("9/8"), BigRational::new(9.into(), 8.into()));
        assert_eq!(q("2"), BigRational::from_integer(2.into()));
        assert_eq!(q("1.125"), BigRational::new(9.into(), 8.into()));
        assert!(matches!(
            "1e-1".parse::<XiValue>().unwrap(),
            XiValue::Approx(_)
        ));
        assert!("1/0".parse::<XiValue>().is_err());
    }

    #[test]
    fn olo_xi_two_is_empty() {
        let xi: XiValue = "2".parse().unwrap();
        assert!(
            diophantine_search(Polarization::TE, ModeWord::OLO, &xi, &Aspect::unit(), 30)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn lol_pythagorean() {
        let xi: XiValue = "1/2".parse().unwrap();
        let modes =
            diophantine_search(Polarization::TM, ModeWord::LOL, &xi, &Aspect::unit(), 10).unwrap();
        let m = modes
            .iter()
            .find(|m| (m.nx, m.ny, m.ell) == (3, 4, 5))
            .unwrap();
        assert!((m.omega - 5.0 * PI * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let xi: XiValue = "1/2".parse().unwrap();
        assert!(
            diophantine_search(Polarization::TE, ModeWord::OLO, &xi, &Aspect::unit(), 5).is_err()
        );
        let xi: XiValue = "2".parse().unwrap();
        assert!(
            diophantine_search(Polarization::TM, ModeWord::LOL, &xi, &Aspect::unit(), 5).is_err()
        );
        assert!(
            diophantine_search(Polarization::TE, ModeWord::OOO, &xi, &Aspect::unit(), 5).is_err()
        );
    }
}
