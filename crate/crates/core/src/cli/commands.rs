//! Dispatch of each subcommand to the computational modules.

use super::emit::{Cell, Table};
use super::verify::{all_passed, run_suite};
use super::{CliError, Command, Outcome, RunConfig};
use crate::cavity::{diophantine_search, enumerate_roots, Aspect, CavityConfig, ModeWord, XiValue};
use crate::error::Error;
use crate::lifshitz::{
    density_of_states, i_imag, i_real, interaction_energy, Material, PhysicalSetup,
};
use crate::media::{branch_points, PermittivityModel, Polarization};
use crate::numerics::QuadratureOptions;
use crate::openmodes::{loci_table, pole_scan, scattering, Direction, PoleScanOptions};
use crate::plasmon::{plasmon_report, PlasmonSetup};

type Run = Result<Outcome, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn done(table: Table) -> Run {
    Ok(Outcome {
        table,
        passed: None,
    })
}

fn model(config: &RunConfig) -> Result<PermittivityModel, CliError> {
    config
        .model
        .ok_or_else(|| usage(format!("{} needs --model", config.command.name())))
}

fn nan() -> Cell {
    Cell::Num(f64::NAN)
}

pub(super) fn dispatch(config: &RunConfig) -> Run {
    let opts = QuadratureOptions::with_rel_tol(config.tol);
    match &config.command {
        Command::CavitySpectrum { word, nx, ny } => {
            cavity_spectrum(config, word.as_deref(), *nx, *ny)
        }
        Command::Diophantine { word, xi } => diophantine(config, word, xi.as_deref()),
        Command::Loci { r_min, r_steps } => loci(config, *r_min, *r_steps),
        Command::Scattering {
            word,
            omega,
            r,
            direction,
        } => scatter(config, word, *omega, *r, direction),
        Command::Poles { r } => poles(config, *r),
        Command::Lifshitz => lifshitz(config, &opts),
        Command::Casimir => casimir(config, &opts),
        Command::Dos { bins } => dos(config, *bins, &opts),
        Command::Plasmon { nterms } => plasmon(config, *nterms, &opts),
        Command::Verify { suite } => {
            let checks = run_suite(*suite, config)?;
            let mut t = Table::new(&["suite", "check", "value", "tolerance", "passed"]);
            let name = serde_json::to_value(suite)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            for c in &checks {
                let passed = match c.passed {
                    Some(p) => Cell::Bool(p),
                    None => Cell::Text("info".into()),
                };
                t.push(vec![
                    name.as_str().into(),
                    c.name.clone().into(),
                    c.value.into(),
                    c.tolerance.into(),
                    passed,
                ]);
            }
            Ok(Outcome {
                table: t,
                passed: Some(all_passed(&checks)),
            })
        }
    }
}

fn cavity_spectrum(
    config: &RunConfig,
    word: Option<&str>,
    nx: Option<u32>,
    ny: Option<u32>,
) -> Run {
    let m = model(config)?;
    let words = match word {
        Some(w) => vec![w.parse::<ModeWord>()?],
        None => ModeWord::ALL.to_vec(),
    };
    let nmax = config.nmax.unwrap_or(3);
    let pairs: Vec<(u32, u32)> = match (nx, ny) {
        (Some(a), Some(b)) => vec![(a, b)],
        _ => (0..=nmax)
            .flat_map(|a| (0..=nmax).map(move |b| (a, b)))
            .filter(|&(a, b)| nx.is_none_or(|x| x == a) && ny.is_none_or(|y| y == b))
            .collect(),
    };
    let aspect = Aspect::new(config.lambda1, config.lambda2, config.lambda)?;
    let omega_max = config.omega_max.unwrap_or(20.0);
    let mut t = Table::new(&[
        "s",
        "word",
        "nx",
        "ny",
        "lambda1",
        "lambda2",
        "lambda",
        "xi",
        "omega",
        "residual",
        "sigma_min",
    ]);
    for &s in &config.polarizations {
        for &w in &words {
            for &(a, b) in &pairs {
                let c = match CavityConfig::new(s, w, a, b, aspect, m) {
                    Ok(c) => c,
                    // Families without modes of this polarization.
                    Err(Error::Domain(_)) if nx.is_none() || ny.is_none() => continue,
                    Err(e) => return Err(e.into()),
                };
                for root in enumerate_roots(&c, omega_max)? {
                    t.push(vec![
                        s.to_string().into(),
                        w.to_string().into(),
                        a.into(),
                        b.into(),
                        aspect.lambda1.into(),
                        aspect.lambda2.into(),
                        aspect.lambda.into(),
                        m.xi().unwrap_or(f64::NAN).into(),
                        root.omega.into(),
                        root.residual.into(),
                        root.sigma_min.into(),
                    ]);
                }
            }
        }
    }
    done(t)
}

fn diophantine(config: &RunConfig, word: &str, xi: Option<&str>) -> Run {
    let w: ModeWord = word.parse()?;
    let s = match w {
        ModeWord::OLO => Polarization::TE,
        ModeWord::LOL => Polarization::TM,
        _ => return Err(usage(format!("diophantine needs OLO or LOL, got {w}"))),
    };
    let xi = match (xi, config.model) {
        (Some(x), _) => x.parse::<XiValue>()?,
        (None, Some(PermittivityModel::ConstantDielectric { xi })) => XiValue::from(xi),
        _ => return Err(usage("diophantine needs --xi or a const model")),
    };
    let aspect = Aspect::new(config.lambda1, config.lambda2, config.lambda)?;
    let mut t = Table::new(&["s", "word", "nx", "ny", "ell", "omega"]);
    for d in diophantine_search(s, w, &xi, &aspect, config.nmax.unwrap_or(10))? {
        t.push(vec![
            s.to_string().into(),
            w.to_string().into(),
            d.nx.into(),
            d.ny.into(),
            d.ell.into(),
            d.omega.into(),
        ]);
    }
    done(t)
}

fn loci(config: &RunConfig, r_min: Option<f64>, r_steps: usize) -> Run {
    let m = model(config)?;
    if r_steps < 2 {
        return Err(usage("--r-steps must be at least 2"));
    }
    let r_max = config.r0.unwrap_or(10.0);
    let r_min = r_min.unwrap_or(r_max / r_steps as f64);
    if !(r_min > 0.0 && r_min < r_max) {
        return Err(usage(format!(
            "need 0 < --r-min < --R0, got {r_min} and {r_max}"
        )));
    }
    let grid: Vec<f64> = (0..r_steps)
        .map(|i| r_min + (r_max - r_min) * i as f64 / (r_steps - 1) as f64)
        .collect();
    let omega_max = match config.omega_max {
        Some(w) => w,
        None => 1.2 * branch_points(&m, r_max)?.omega_b2,
    };
    let mut t = Table::new(&["s", "model", "R", "omega", "kind"]);
    for &s in &config.polarizations {
        for row in loci_table(s, &m, &grid, omega_max, &PoleScanOptions::default())?.rows {
            t.push(vec![
                s.to_string().into(),
                m.to_string().into(),
                row.r.into(),
                row.omega.into(),
                row.kind.to_string().into(),
            ]);
        }
    }
    done(t)
}

fn scatter(config: &RunConfig, word: &str, omega: f64, r: f64, direction: &str) -> Run {
    let m = model(config)?;
    let w: ModeWord = word.parse()?;
    let dir: Direction = direction.parse()?;
    let mut t = Table::new(&[
        "s",
        "word",
        "direction",
        "omega",
        "R",
        "re_R",
        "im_R",
        "re_T",
        "im_T",
        "flux",
    ]);
    for &s in &config.polarizations {
        let a = scattering(s, w, omega, r, &m, dir)?;
        t.push(vec![
            s.to_string().into(),
            w.to_string().into(),
            dir.to_string().into(),
            omega.into(),
            r.into(),
            a.reflection.re.into(),
            a.reflection.im.into(),
            a.transmission.re.into(),
            a.transmission.im.into(),
            a.flux().into(),
        ]);
    }
    done(t)
}

fn poles(config: &RunConfig, r: f64) -> Run {
    let m = model(config)?;
    let omega_max = match config.omega_max {
        Some(w) => w,
        None => branch_points(&m, r)?.omega_b2 + 1.0,
    };
    let mut t = Table::new(&["s", "model", "R", "omega", "word", "on_branch_point"]);
    for &s in &config.polarizations {
        let scan = pole_scan(s, r, &m, omega_max, &PoleScanOptions::default())?;
        for p in &scan.poles {
            t.push(vec![
                s.to_string().into(),
                m.to_string().into(),
                r.into(),
                p.omega.into(),
                p.word.to_string().into(),
                p.on_branch_point.into(),
            ]);
        }
        for &b in &scan.surface_poles {
            t.push(vec![
                s.to_string().into(),
                m.to_string().into(),
                r.into(),
                b.into(),
                "surface".into(),
                false.into(),
            ]);
        }
    }
    done(t)
}

fn lifshitz(config: &RunConfig, opts: &QuadratureOptions) -> Run {
    let m = model(config)?;
    let r0 = config.r0.unwrap_or(f64::INFINITY);
    let rho = config.rho.unwrap_or(f64::INFINITY);
    let mut t = Table::new(&[
        "s",
        "model",
        "R0",
        "rho",
        "I_imag",
        "error_estimate",
        "Lambda",
        "I_real",
        "relative_discrepancy",
    ]);
    for &s in &config.polarizations {
        let im = i_imag(s, &m, r0, rho, opts)?;
        let (lambda, re, disc) = match config.lambda_cutoff {
            Some(l) => {
                let re = i_real(s, &m, r0, l, opts)?.total;
                (
                    l.into(),
                    re.into(),
                    (((re - im.value) / im.value).abs()).into(),
                )
            }
            None => (nan(), nan(), nan()),
        };
        t.push(vec![
            s.to_string().into(),
            m.to_string().into(),
            r0.into(),
            rho.into(),
            im.value.into(),
            im.error_estimate.into(),
            lambda,
            re,
            disc,
        ]);
    }
    done(t)
}

/// Physical material of a dimensionless model at gap `lz`; a plasma `xi` is
/// read at that gap, `xi = (omega_p lz / c)^2`.
fn casimir(config: &RunConfig, opts: &QuadratureOptions) -> Run {
    let m = model(config)?;
    let lz = config.lz.ok_or_else(|| usage("casimir needs --Lz"))?;
    let setup = PhysicalSetup::new(lz, Material::from_model(&m, lz)?)?;
    let pol = match config.polarizations.as_slice() {
        [s] => Some(*s),
        _ => None,
    };
    let rep = interaction_energy(&setup, pol, opts)?;
    let mut t = Table::new(&["s", "model", "Lz", "I_imag", "U_J_per_m2", "P_Pa"]);
    for p in &rep.parts {
        t.push(vec![
            p.polarization.to_string().into(),
            m.to_string().into(),
            lz.into(),
            p.i_imag.into(),
            p.energy.into(),
            p.pressure.into(),
        ]);
    }
    let i_total: f64 = rep.parts.iter().map(|p| p.i_imag).sum();
    t.push(vec![
        "total".into(),
        m.to_string().into(),
        lz.into(),
        i_total.into(),
        rep.energy.into(),
        rep.pressure.into(),
    ]);
    done(t)
}

fn dos(config: &RunConfig, bins: usize, opts: &QuadratureOptions) -> Run {
    let m = model(config)?;
    if bins == 0 {
        return Err(usage("--bins must be at least 1"));
    }
    let r0 = config.r0.unwrap_or(10.0);
    let top = match config.omega_max {
        Some(w) => w,
        None => 1.5 * branch_points(&m, r0)?.omega_b2,
    };
    let grid: Vec<f64> = (0..=bins).map(|i| top * i as f64 / bins as f64).collect();
    let mut t = Table::new(&["s", "kind", "omega_lo", "omega_hi", "weight", "moment"]);
    for &s in &config.polarizations {
        let d = density_of_states(s, &m, r0, &grid, opts)?;
        for a in &d.atoms {
            let kind = serde_json::to_value(a.kind)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            t.push(vec![
                s.to_string().into(),
                kind.into(),
                a.omega.into(),
                a.omega.into(),
                a.weight.into(),
                (a.omega * a.weight).into(),
            ]);
        }
        for b in &d.bins {
            t.push(vec![
                s.to_string().into(),
                "continuum".into(),
                b.lo.into(),
                b.hi.into(),
                b.weight.into(),
                b.moment.into(),
            ]);
        }
    }
    done(t)
}

fn plasmon(config: &RunConfig, nterms: u32, opts: &QuadratureOptions) -> Run {
    let (kappa0, omega0) = match model(config)? {
        PermittivityModel::Lorentz { kappa0, omega0 } => (kappa0, omega0),
        other => return Err(usage(format!("plasmon needs a lorentz model, got {other}"))),
    };
    let lz = config.lz.ok_or_else(|| usage("plasmon needs --Lz"))?;
    let rep = plasmon_report(&PlasmonSetup::new(kappa0, omega0, lz)?, nterms, opts)?;
    let mut t = Table::new(&[
        "kappa0",
        "omega0",
        "Lz",
        "U_series",
        "U_quadrature",
        "stress",
        "n_terms",
    ]);
    t.push(vec![
        rep.kappa0.into(),
        rep.omega0.into(),
        rep.lz.into(),
        rep.u_series.into(),
        rep.u_quadrature.into(),
        rep.stress.into(),
        rep.n_terms.into(),
    ]);
    done(t)
}
