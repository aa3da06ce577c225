use casimir_core::cavity::ModeWord;
use casimir_core::media::{branch_points, PermittivityModel, Polarization};
use casimir_core::openmodes::{
    f_value, loci_table, pole_scan, scattering, Direction, LociKind, PoleScanOptions,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn lossless_ooo() -> impl Strategy<Value = (PermittivityModel, f64, f64)> {
    (0.05f64..20.0, any::<bool>(), 0.0f64..20.0, 1.01f64..3.0).prop_map(|(xi, plasma, r, t)| {
        let m = if plasma {
            PermittivityModel::plasma(xi)
        } else {
            PermittivityModel::constant(xi)
        }
        .unwrap();
        let omega = branch_points(&m, r).unwrap().omega_b2 * t;
        (m, r, omega)
    })
}

/// Interface reflection `(chi_I - w chi_II) / (chi_I + w chi_II)` for real
/// propagating kinematics.
fn rho(s: Polarization, m: &PermittivityModel, omega: f64, r: f64) -> f64 {
    let kappa = m.kappa(Complex64::new(omega, 0.0)).unwrap().re;
    let c1 = (kappa * omega * omega - r * r).sqrt();
    let c2 = (omega * omega - r * r).sqrt();
    let w = if s == Polarization::TM { kappa } else { 1.0 };
    (c1 - w * c2) / (c1 + w * c2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn ooo_unitarity((m, r, omega) in lossless_ooo()) {
        for s in Polarization::BOTH {
            let a = scattering(s, ModeWord::OOO, omega, r, &m, Direction::R).unwrap();
            prop_assert!((a.flux() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn left_right_symmetry((m, r, omega) in lossless_ooo()) {
        for s in Polarization::BOTH {
            let a = scattering(s, ModeWord::OOO, omega, r, &m, Direction::R).unwrap();
            let b = scattering(s, ModeWord::OOO, omega, r, &m, Direction::L).unwrap();
            prop_assert!((a.transmission - b.transmission).norm() < 1e-12);
            prop_assert!((a.reflection - b.reflection).norm() < 1e-12);
        }
    }

    #[test]
    fn f_is_inverse_transmission((m, r, omega) in lossless_ooo()) {
        // |T| |F| = |1 - rho^2| on the real axis, independent of phase conventions.
        for s in Polarization::BOTH {
            let a = scattering(s, ModeWord::OOO, omega, r, &m, Direction::R).unwrap();
            let f = f_value(s, Complex64::new(omega, 0.0), r, &m).unwrap();
            let p = rho(s, &m, omega, r);
            prop_assert!((a.transmission.norm() * f.norm() - (1.0 - p * p).abs()).abs() < 1e-10);
        }
    }
}

#[test]
fn pole_counts_match_windings_on_grid() {
    let models = [
        PermittivityModel::plasma(30.0).unwrap(),
        PermittivityModel::plasma(3.0).unwrap(),
        PermittivityModel::constant(0.01).unwrap(),
        PermittivityModel::constant(0.25).unwrap(),
        PermittivityModel::constant(4.0).unwrap(),
    ];
    let mut n = 0;
    for m in &models {
        for r in [0.3, 1.0, 2.5, 4.0, 7.0] {
            for s in Polarization::BOTH {
                let top = branch_points(m, r).unwrap().omega_b2;
                let scan = pole_scan(s, r, m, top + 1.0, &PoleScanOptions::default()).unwrap();
                for c in &scan.checks {
                    assert_eq!(c.scanned as i64, c.winding, "{m} {s} R={r} {:?}", c.word);
                }
                let bp = branch_points(m, r).unwrap();
                for p in &scan.poles {
                    match p.word {
                        ModeWord::EOE => assert!(p.omega > bp.omega_b1 && p.omega < bp.omega_b2),
                        ModeWord::EEE => assert!(p.omega < bp.omega_b1),
                        _ => assert!(p.on_branch_point),
                    }
                }
                n += 1;
            }
        }
    }
    assert_eq!(n, 50);
}

#[test]
fn tm_plasma_ele_location() {
    let xi: f64 = 30.0;
    let m = PermittivityModel::plasma(xi).unwrap();
    let expect = (2.0 * xi / (2.0 + xi.sqrt())).sqrt();
    let grid: Vec<f64> = (1..=400).map(|i| 0.02 * i as f64).collect();
    let t = loci_table(
        Polarization::TM,
        &m,
        &grid,
        10.0,
        &PoleScanOptions {
            validate: false,
            ..Default::default()
        },
    )
    .unwrap();
    let ele: Vec<f64> = t
        .rows
        .iter()
        .filter(|r| r.kind == LociKind::ELE)
        .map(|r| r.r)
        .collect();
    assert_eq!(ele.len(), 1, "{ele:?}");
    assert!((ele[0] - expect).abs() < 1e-9);
    let te = loci_table(
        Polarization::TE,
        &m,
        &grid,
        10.0,
        &PoleScanOptions {
            validate: false,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(te.rows.iter().all(|r| r.kind != LociKind::ELE));
}

#[test]
fn enz_dielectric_has_no_eee_or_ele() {
    let m = PermittivityModel::constant(0.01).unwrap();
    let grid: Vec<f64> = (1..=100).map(|i| 0.1 * i as f64).collect();
    for s in Polarization::BOTH {
        let t = loci_table(
            s,
            &m,
            &grid,
            120.0,
            &PoleScanOptions {
                validate: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(t
            .rows
            .iter()
            .all(|r| !matches!(r.kind, LociKind::EEE | LociKind::ELE)));
        assert!(t.rows.iter().any(|r| r.kind == LociKind::EOE));
    }
}

#[test]
fn surface_plasmon_limit() {
    let scan = pole_scan(
        Polarization::TM,
        50.0,
        &PermittivityModel::plasma(30.0).unwrap(),
        60.0,
        &PoleScanOptions::default(),
    )
    .unwrap();
    let eee: Vec<f64> = scan
        .poles
        .iter()
        .filter(|p| p.word == ModeWord::EEE)
        .map(|p| p.omega)
        .collect();
    assert!(!eee.is_empty());
    for w in eee {
        assert!((w / 15f64.sqrt() - 1.0).abs() < 1e-2);
    }
}
