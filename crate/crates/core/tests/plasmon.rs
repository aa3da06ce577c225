use casimir_core::media::PermittivityModel;
use casimir_core::numerics::QuadratureOptions;
use casimir_core::openmodes::nonretarded_tm_eee;
use casimir_core::plasmon::{
    a_coeff, omega_pm, plasmon_stress, vk_quadrature_energy, vk_series_energy, vk_series_sum,
    PlasmonSetup,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn coefficients_follow_ratio_recurrence() {
    // a_1 = 1/2 and a_{n+1} / a_n = (2n - 1) / (2n + 2).
    let mut a = BigRational::new(BigInt::from(1), BigInt::from(2));
    for n in 1u32..60 {
        assert_eq!(a_coeff(n).unwrap(), a, "n={n}");
        a *= BigRational::new(BigInt::from(2 * n - 1), BigInt::from(2 * n + 2));
    }
    assert!(a_coeff(0).is_err());
}

proptest! {
    #[test]
    fn series_matches_generating_function(d in 0.0f64..0.6) {
        // sum_n a_n x^n = 1 - sqrt(1 - x), so the even part is 1 - (sqrt(1-d) + sqrt(1+d))/2.
        let even = 1.0 - 0.5 * ((1.0 - d).sqrt() + (1.0 + d).sqrt());
        let a = |n: u32| num_traits::ToPrimitive::to_f64(&a_coeff(n).unwrap()).unwrap();
        let unweighted: f64 = (1..=80).map(|n| a(2 * n) * d.powi(2 * n as i32)).sum();
        prop_assert!((unweighted - even).abs() < 1e-15);
        let weighted: f64 = (1..=80).map(|n| a(2 * n) * d.powi(2 * n as i32) / f64::from(n * n)).sum();
        prop_assert!((vk_series_sum(d, 80).unwrap() - weighted).abs() <= 1e-16 * weighted.max(1e-300));
    }

    #[test]
    fn branches_bracket_surface_frequency(k0 in 1.01f64..20.0, w0 in 1e13f64..1e16, kl in 0.0f64..30.0) {
        let setup = PlasmonSetup::new(k0, w0, 1e-7).unwrap();
        let (p, m) = omega_pm(kl / setup.lz, &setup).unwrap();
        let ws = setup.surface_frequency();
        prop_assert!(m <= ws && ws <= p);
        let (p2, m2) = omega_pm((kl + 0.5) / setup.lz, &setup).unwrap();
        prop_assert!(p2 <= p && m2 >= m);
    }

    #[test]
    fn branches_zero_the_nonretarded_generator(k0 in 1.5f64..20.0, kl in 0.05f64..8.0) {
        let setup = PlasmonSetup::new(k0, 1.0, 1.0).unwrap();
        let model = PermittivityModel::lorentz(k0, 1.0).unwrap();
        let (p, m) = omega_pm(kl, &setup).unwrap();
        for w in [p, m] {
            let g = |x: f64| nonretarded_tm_eee(x, kl, &model).unwrap();
            let (lo, hi) = (g(w * (1.0 - 1e-7)), g(w * (1.0 + 1e-7)));
            prop_assert!(lo.signum() != hi.signum(), "no sign change at {}", w);
        }
    }
}

#[test]
fn series_terms_decrease() {
    let d = 0.5f64;
    let terms: Vec<f64> = (1..=30)
        .map(|n: u32| {
            use num_traits::ToPrimitive;
            a_coeff(2 * n).unwrap().to_f64().unwrap() * d.powi(2 * n as i32) / f64::from(n * n)
        })
        .collect();
    assert!(terms.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn series_and_quadrature_agree() {
    for k0 in [1.5, 3.0, 12.0] {
        let setup = PlasmonSetup::new(k0, 1e15, 1e-6).unwrap();
        let s = vk_series_energy(&setup, 40).unwrap();
        let q = vk_quadrature_energy(&setup, &QuadratureOptions::with_rel_tol(1e-11)).unwrap();
        assert!(s < 0.0);
        assert!((s / q - 1.0).abs() < 1e-8, "kappa0={k0}: {s} vs {q}");
    }
}

#[test]
fn null_configuration_and_scaling() {
    let null = PlasmonSetup::new(1.0, 1e15, 1e-6).unwrap();
    assert_eq!(vk_series_energy(&null, 10).unwrap(), 0.0);
    assert_eq!(
        vk_quadrature_energy(&null, &QuadratureOptions::default()).unwrap(),
        0.0
    );
    let a = PlasmonSetup::new(3.0, 1e15, 1e-6).unwrap();
    let b = a.with_lz(2e-6);
    let (ua, ub) = (
        vk_series_energy(&a, 30).unwrap(),
        vk_series_energy(&b, 30).unwrap(),
    );
    assert!((ua / ub - 4.0).abs() < 1e-12);
    assert!(
        (plasmon_stress(&a, 30).unwrap() / plasmon_stress(&b, 30).unwrap() - 8.0).abs() < 1e-12
    );
}
