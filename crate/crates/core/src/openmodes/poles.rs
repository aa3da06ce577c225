//! Real poles of the continued transmission amplitude, scattering phases and
//! loci tables.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dispersion::{f_with_derivative, g_log_derivative, Sheet};
use super::generators::{cat_e_generator, parity_factor, surface_factor, Parity};
use crate::cavity::ModeWord;
use crate::error::{Error, Result};
use crate::media::{branch_points, Branch, PermittivityModel, Polarization};
use crate::numerics::{refine_bracket, scan_roots, winding_from_log_derivative, ContourPath};

/// Relative distance from a branch point at which scan windows stop.
pub const BRANCH_MARGIN: f64 = 1e-9;
/// Relative tolerance for the ELE generator to count as zero.
pub const ELE_TOLERANCE: f64 = 1e-9;

/// A real pole of the continued transmission amplitude (a zero of `F`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpenPole {
    pub omega: f64,
    pub r: f64,
    pub word: ModeWord,
    pub polarization: Polarization,
    /// Set for the ELE mode, which sits on the branch point `Omega = R`.
    pub on_branch_point: bool,
}

/// Controls of `pole_scan`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleScanOptions {
    /// Minimum grid size per window.
    pub min_points: usize,
    /// Additional grid points per unit of `R`.
    pub points_per_r: f64,
    /// Run the argument-principle checks.
    pub validate: bool,
    /// Displacement of on-axis poles below the axis for the circle checks.
    pub epsilon: f64,
    /// Largest circle radius for the per-pole checks.
    pub circle_radius: f64,
}

impl Default for PoleScanOptions {
    fn default() -> Self {
        PoleScanOptions {
            min_points: 2000,
            points_per_r: 50.0,
            validate: true,
            epsilon: 1e-6,
            circle_radius: 1e-3,
        }
    }
}

/// Winding checks of one scan window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub word: ModeWord,
    pub lo: f64,
    pub hi: f64,
    pub scanned: usize,
    /// Winding of `G / chi_II` around the thin rectangle over the window.
    pub winding: i64,
    /// Windings around the per-cluster circles, with the cluster sizes.
    pub circles: Vec<(i64, usize)>,
}

/// Result of a pole scan at fixed `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleScan {
    pub polarization: Polarization,
    pub r: f64,
    pub model: PermittivityModel,
    /// Poles in increasing order.
    pub poles: Vec<OpenPole>,
    /// Double poles of `F` at the single-interface surface condition.
    pub surface_poles: Vec<f64>,
    pub checks: Vec<WindowCheck>,
    /// Set when the grid had to be refined to reconcile the counts.
    pub refined: bool,
}

impl PoleScan {
    /// Total pole count `N^s(R)`.
    pub fn count(&self) -> usize {
        self.poles.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct Window {
    word: ModeWord,
    lo: f64,
    hi: f64,
}

impl Window {
    fn sheet(&self) -> Sheet {
        let inner = if self.word == ModeWord::EOE {
            Branch::Propagating
        } else {
            Branch::Evanescent
        };
        Sheet::Local {
            outer: Branch::Evanescent,
            inner,
        }
    }
}

fn scan_windows(
    r: f64,
    model: &PermittivityModel,
    omega_max: f64,
    margin: f64,
) -> Result<Vec<Window>> {
    let bp = branch_points(model, r)?;
    let (b1, b2) = (bp.chi_ii_zero(), bp.chi_i_zero());
    let lo_branch = bp.omega_b1;
    let mut out = Vec::new();
    let eee = Window {
        word: ModeWord::EEE,
        lo: 1e-3 * lo_branch,
        hi: (lo_branch * (1.0 - margin)).min(omega_max),
    };
    if eee.hi > eee.lo {
        out.push(eee);
    }
    if b2 > b1 * (1.0 + 2.0 * margin) {
        let eoe = Window {
            word: ModeWord::EOE,
            lo: b1 * (1.0 + margin),
            hi: (b2 * (1.0 - margin)).min(omega_max),
        };
        if eoe.hi > eoe.lo {
            out.push(eoe);
        }
    }
    Ok(out)
}

fn scan_window(
    s: Polarization,
    r: f64,
    model: &PermittivityModel,
    w: &Window,
    n: usize,
) -> Result<Vec<f64>> {
    let tol = 1e-14 * w.hi.max(1.0);
    let mut roots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = |om: f64| parity_factor(s, w.word, parity, om, r, model).unwrap_or(f64::NAN);
        roots.extend(scan_roots(f, w.lo, w.hi, n, tol)?);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn clusters(roots: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &x in roots {
        match out.last_mut() {
            Some((c, k)) if (x - *c).abs() <= 1e-8 * x.abs().max(1.0) => *k += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn check_window(
    s: Polarization,
    r: f64,
    model: &PermittivityModel,
    w: &Window,
    roots: &[f64],
    opts: &PoleScanOptions,
) -> Result<WindowCheck> {
    let sheet = w.sheet();
    let logd = |z: Complex64| {
        g_log_derivative(s, z, r, model, sheet).unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let h = (0.1 * (w.hi - w.lo)).min(0.1);
    let rect = ContourPath::rectangle(w.lo, w.hi, -h, h);
    let total = winding_from_log_derivative(logd, &rect, 1e-8)?;
    let cl = clusters(roots);
    let mut circles = Vec::with_capacity(cl.len());
    for (i, &(c, k)) in cl.iter().enumerate() {
        let mut gap = (c - w.lo).min(w.hi - c);
        if i > 0 {
            gap = gap.min(c - cl[i - 1].0);
        }
        if i + 1 < cl.len() {
            gap = gap.min(cl[i + 1].0 - c);
        }
        let radius = opts.circle_radius.min(0.4 * gap);
        let eps = opts.epsilon.min(0.1 * radius);
        let path = ContourPath::circle(Complex64::new(c, -eps), radius);
        let wnd = winding_from_log_derivative(logd, &path, 1e-8)?;
        circles.push((if wnd.flagged { i64::MIN } else { wnd.count }, k));
    }
    Ok(WindowCheck {
        word: w.word,
        lo: w.lo,
        hi: w.hi,
        scanned: roots.len(),
        winding: if total.flagged { i64::MIN } else { total.count },
        circles,
    })
}

fn check_passes(c: &WindowCheck) -> bool {
    c.winding == c.scanned as i64 && c.circles.iter().all(|&(w, k)| w == k as i64)
}

/// ELE mode test at `Omega = R`; `None` when region I is not evanescent
/// there.
pub fn ele_generator_at_branch(
    s: Polarization,
    r: f64,
    model: &PermittivityModel,
) -> Result<Option<(f64, f64)>> {
    let bp = branch_points(model, r)?;
    if bp.chi_i_zero() <= r {
        return Ok(None);
    }
    let d = cat_e_generator(s, ModeWord::ELE, r, r, model)?;
    let k1 = crate::media::classify_region(model, crate::media::Region::I, r, r)?;
    let z = k1.value;
    let w = match s {
        Polarization::TE => 1.0,
        Polarization::TM => model.kappa(Complex64::new(r, 0.0))?.re,
    };
    Ok(Some((d, z * (z + 2.0 * w.abs()) * (-z).exp())))
}

/// Scans for the real poles at transverse wavenumber `r`: EOE poles between
/// the branch points, EEE poles below both and the ELE mode at `Omega = R`.
///
/// With validation on, every window's count is reconciled with the winding
/// number of `G / chi_II` around a thin rectangle, and every pole cluster with
/// a small circle; a mismatch triggers one grid refinement, then an error.
pub fn pole_scan(
    s: Polarization,
    r: f64,
    model: &PermittivityModel,
    omega_max: f64,
    opts: &PoleScanOptions,
) -> Result<PoleScan> {
    if !matches!(
        model,
        PermittivityModel::ConstantDielectric { .. } | PermittivityModel::Plasma { .. }
    ) {
        return Err(Error::UnsupportedModel(format!(
            "pole scans need const or plasma, got {model}"
        )));
    }
    if !(r > 0.0) || !(omega_max > 0.0) {
        return Err(Error::InvalidArgument(
            "R and Omega_max must be positive".into(),
        ));
    }
    let base_n = opts.min_points.max((opts.points_per_r * r).ceil() as usize);
    let mut poles = Vec::new();
    let mut checks = Vec::new();
    let mut refined = false;
    for word in [ModeWord::EEE, ModeWord::EOE] {
        let mut accepted = None;
        // A zero of G sitting next to a branch point defeats the contour
        // checks; the window then retreats from the branch point.
        for widen in [1.0, 1e2, 1e4] {
            let margin = BRANCH_MARGIN * widen;
            let Some(w) = scan_windows(r, model, omega_max, margin)?
                .into_iter()
                .find(|w| w.word == word)
            else {
                break;
            };
            let mut roots = scan_window(s, r, model, &w, base_n)?;
            if !opts.validate {
                accepted = Some((w, roots));
                break;
            }
            let check = match check_window(s, r, model, &w, &roots, opts) {
                Ok(c) => c,
                Err(Error::SubdivisionLimit { .. } | Error::NonFinite { .. }) => continue,
                Err(e) => return Err(e),
            };
            let check = if check_passes(&check) {
                check
            } else {
                refined = true;
                roots = scan_window(s, r, model, &w, 8 * base_n)?;
                let again = check_window(s, r, model, &w, &roots, opts)?;
                if !check_passes(&again) {
                    return Err(Error::WindingMismatch {
                        scanned: again.scanned,
                        winding: again.winding,
                    });
                }
                again
            };
            checks.push(check);
            accepted = Some((w, roots));
            break;
        }
        let Some((w, roots)) = accepted else {
            if scan_windows(r, model, omega_max, BRANCH_MARGIN)?
                .iter()
                .any(|w| w.word == word)
            {
                return Err(Error::NoConvergence {
                    a: r,
                    b: omega_max,
                    iterations: 3,
                });
            }
            continue;
        };
        poles.extend(roots.into_iter().map(|omega| OpenPole {
            omega,
            r,
            word: w.word,
            polarization: s,
            on_branch_point: false,
        }));
    }
    if r <= omega_max {
        if let Some((d, scale)) = ele_generator_at_branch(s, r, model)? {
            if d.abs() <= ELE_TOLERANCE * scale {
                poles.push(OpenPole {
                    omega: r,
                    r,
                    word: ModeWord::ELE,
                    polarization: s,
                    on_branch_point: true,
                });
            }
        }
    }
    poles.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let mut surface_poles = Vec::new();
    if s == Polarization::TM {
        if let Some(w) = scan_windows(r, model, omega_max, BRANCH_MARGIN)?
            .into_iter()
            .find(|w| w.word == ModeWord::EEE)
        {
            let f = |om: f64| surface_factor(s, om, r, model).unwrap_or(f64::NAN);
            surface_poles = scan_roots(f, w.lo, w.hi, base_n, 1e-14 * w.hi.max(1.0))?;
        }
    }
    Ok(PoleScan {
        polarization: s,
        r,
        model: *model,
        poles,
        surface_poles,
        checks,
        refined,
    })
}

/// Scattering phase `delta = -arg F(Omega + i0)`, unwrapped continuously
/// from the lower branch point and increased by `pi` across each real pole.
pub fn phase_delta(s: Polarization, omega: f64, r: f64, model: &PermittivityModel) -> Result<f64> {
    let bp = branch_points(model, r)?;
    let start = bp.omega_b1;
    if !(omega > start) {
        return Err(Error::Domain(format!(
            "phase is defined above the branch point {start}, got {omega}"
        )));
    }
    let opts = PoleScanOptions {
        validate: false,
        ..Default::default()
    };
    let scan = pole_scan(s, r, model, omega.max(bp.omega_b2), &opts)?;
    let eta = 1e-9;
    let mut stops: Vec<f64> = Vec::new();
    for p in scan.poles.iter().filter(|p| p.word == ModeWord::EOE) {
        if (p.omega - omega).abs() <= 1e-12 * omega.max(1.0) {
            return Err(Error::Domain(format!(
                "Omega = {omega} sits on a pole; displace it by -i epsilon"
            )));
        }
        if p.omega < omega {
            stops.push(p.omega);
        }
    }
    let f = |x: f64| f_with_derivative(s, Complex64::new(x, 0.0), r, model).map(|(f, _)| f);
    let mut x = start * (1.0 + 1e-10) + 1e-12;
    let mut fx = f(x)?;
    let mut delta = -fx.arg();
    let mut targets: Vec<(f64, bool)> = stops.iter().map(|&p| (p, true)).collect();
    targets.push((omega, false));
    for (target, is_pole) in targets {
        let end = if is_pole {
            target - eta * target.max(1.0)
        } else {
            target
        };
        let mut step = ((end - x) / 64.0).max(0.0);
        while x < end {
            let next = (x + step).min(end);
            let fn_ = f(next)?;
            let d = -(fn_ / fx).arg();
            if d.abs() > 0.25 * PI && next - x > 1e-13 * x.max(1.0) {
                step *= 0.5;
                continue;
            }
            delta += d;
            x = next;
            fx = fn_;
            step *= 1.5;
        }
        if is_pole {
            x = target + eta * target.max(1.0);
            fx = f(x)?;
            delta += PI;
        }
    }
    Ok(delta)
}

/// Kind of a loci row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LociKind {
    BranchChiII,
    BranchChiI,
    EEE,
    EOE,
    ELE,
}

impl fmt::Display for LociKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LociKind::BranchChiII => "branch_chiII",
            LociKind::BranchChiI => "branch_chiI",
            LociKind::EEE => "EEE",
            LociKind::EOE => "EOE",
            LociKind::ELE => "ELE",
        })
    }
}

/// One `(R, Omega)` sample of a locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LociRow {
    pub polarization: Polarization,
    pub r: f64,
    pub omega: f64,
    pub kind: LociKind,
}

/// Branch-point and pole loci over a grid of `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LociTable {
    pub polarization: Polarization,
    pub model: PermittivityModel,
    pub rows: Vec<LociRow>,
}

/// Builds the loci table. ELE modes are isolated points in `R`; they are
/// located by refining sign changes of the ELE generator between grid
/// values, in addition to exact hits on the grid.
pub fn loci_table(
    s: Polarization,
    model: &PermittivityModel,
    r_grid: &[f64],
    omega_max: f64,
    opts: &PoleScanOptions,
) -> Result<LociTable> {
    let mut rows = Vec::new();
    for &r in r_grid {
        let bp = branch_points(model, r)?;
        for (omega, kind) in [
            (bp.chi_ii_zero(), LociKind::BranchChiII),
            (bp.chi_i_zero(), LociKind::BranchChiI),
        ] {
            if omega <= omega_max {
                rows.push(LociRow {
                    polarization: s,
                    r,
                    omega,
                    kind,
                });
            }
        }
        let scan = pole_scan(s, r, model, omega_max, opts)?;
        for p in scan.poles {
            let kind = match p.word {
                ModeWord::EEE => LociKind::EEE,
                ModeWord::EOE => LociKind::EOE,
                _ => LociKind::ELE,
            };
            rows.push(LociRow {
                polarization: s,
                r,
                omega: p.omega,
                kind,
            });
        }
    }
    let ele = |r: f64| -> f64 {
        match ele_generator_at_branch(s, r, model) {
            Ok(Some((d, _))) => d,
            _ => f64::NAN,
        }
    };
    for pair in r_grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (fa, fb) = (ele(a), ele(b));
        if !(fa.is_finite() && fb.is_finite())
            || fa == 0.0
            || fb == 0.0
            || fa.signum() == fb.signum()
        {
            continue;
        }
        let r = refine_bracket(ele, a, b, fa, fb, 1e-15 * b.max(1.0))?;
        if r <= omega_max
            && !rows
                .iter()
                .any(|row| row.kind == LociKind::ELE && (row.r - r).abs() <= 1e-9 * r)
        {
            rows.push(LociRow {
                polarization: s,
                r,
                omega: r,
                kind: LociKind::ELE,
            });
        }
    }
    rows.sort_by(|x, y| {
        x.r.total_cmp(&y.r)
            .then(x.kind.cmp(&y.kind))
            .then(x.omega.total_cmp(&y.omega))
    });
    Ok(LociTable {
        polarization: s,
        model: *model,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_has_no_poles() {
        let v = PermittivityModel::vacuum();
        for s in Polarization::BOTH {
            let p = pole_scan(s, 3.0, &v, 10.0, &PoleScanOptions::default()).unwrap();
            assert_eq!(p.count(), 0);
        }
    }

    #[test]
    fn plasma_te_poles_validated() {
        let m = PermittivityModel::plasma(30.0).unwrap();
        let p = pole_scan(Polarization::TE, 5.0, &m, 10.0, &PoleScanOptions::default()).unwrap();
        assert!(p.count() >= 1);
        let b2 = 55f64.sqrt();
        for pole in &p.poles {
            assert_eq!(pole.word, ModeWord::EOE);
            assert!(pole.omega > 5.0 && pole.omega < b2);
        }
    }

    #[test]
    fn surface_plasmon_at_large_r() {
        let m = PermittivityModel::plasma(30.0).unwrap();
        let p = pole_scan(
            Polarization::TM,
            50.0,
            &m,
            100.0,
            &PoleScanOptions::default(),
        )
        .unwrap();
        let eee: Vec<_> = p.poles.iter().filter(|q| q.word == ModeWord::EEE).collect();
        assert!(!eee.is_empty());
        for q in eee {
            assert!((q.omega / 15f64.sqrt() - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn ele_flagged() {
        let xi: f64 = 30.0;
        let r = (2.0 * xi / (2.0 + xi.sqrt())).sqrt();
        let m = PermittivityModel::plasma(xi).unwrap();
        let p = pole_scan(Polarization::TM, r, &m, 10.0, &PoleScanOptions::default()).unwrap();
        assert_eq!(p.poles.iter().filter(|q| q.on_branch_point).count(), 1);
    }

    #[test]
    fn phase_vacuum_and_continuity() {
        let v = PermittivityModel::vacuum();
        assert_eq!(phase_delta(Polarization::TE, 4.0, 2.0, &v).unwrap(), 0.0);
        let m = PermittivityModel::plasma(30.0).unwrap();
        let b2 = 55f64.sqrt();
        let mut prev = phase_delta(Polarization::TE, b2 * 1.01, 5.0, &m).unwrap();
        for i in 1..40 {
            let om = b2 * (1.01 + 1.99 * i as f64 / 40.0);
            let d = phase_delta(Polarization::TE, om, 5.0, &m).unwrap();
            assert!((d - prev).abs() < 0.5, "jump at {om}: {prev} -> {d}");
            prev = d;
        }
    }
}
