use hopf_core::c64;
use hopf_core::invariants::{
    derive_invariants, detect_rational, roots_of_unity_group, CaseTag, HopfParams, RationalityKind,
    RationalityMode,
};
use hopf_core::{Complex64, HopfError};
use proptest::prelude::*;

fn numeric() -> RationalityMode {
    RationalityMode::default()
}

#[test]
fn b2_example_has_exact_invariants() {
    let inv = derive_invariants(&HopfParams::real(2.0, -4.0).unwrap(), numeric()).unwrap();
    assert_eq!(inv.rho, 2.0);
    assert_eq!(inv.tau, Some(-0.5));
    assert_eq!(inv.nu, Some(2));
    assert_eq!(inv.case_tag, CaseTag::CaseB2);
    assert_eq!(inv.k_group, vec![c64(1.0, 0.0), c64(-1.0, 0.0)]);
}

#[test]
fn positive_real_pair_with_rational_rho_has_one_sheet() {
    let inv = derive_invariants(&HopfParams::real(2.0, 4.0).unwrap(), numeric()).unwrap();
    assert_eq!(inv.case_tag, CaseTag::CaseB2);
    assert_eq!(inv.tau, Some(0.0));
    assert_eq!(inv.nu, Some(1));
}

#[test]
fn equal_moduli_with_opposite_signs() {
    let inv = derive_invariants(&HopfParams::real(2.0, -2.0).unwrap(), numeric()).unwrap();
    assert_eq!(inv.rho, 1.0);
    assert_eq!(inv.tau, Some(-0.5));
    assert_eq!(inv.nu, Some(2));
}

#[test]
fn irrational_twist_is_b1() {
    let b = Complex64::from_polar(4.0, std::f64::consts::SQRT_2 * std::f64::consts::PI);
    let inv = derive_invariants(&HopfParams::new(c64(2.0, 0.0), b).unwrap(), numeric()).unwrap();
    assert_eq!(inv.case_tag, CaseTag::CaseB1);
    assert!(inv.tau.is_some() && inv.nu.is_none());
}

#[test]
fn log_ratio_of_two_and_three_is_case_a() {
    let inv = derive_invariants(&HopfParams::real(2.0, 3.0).unwrap(), numeric()).unwrap();
    assert_eq!(inv.case_tag, CaseTag::CaseA);
    assert!(matches!(
        inv.rho_rationality.kind,
        RationalityKind::HeuristicIrrational { .. }
    ));
    assert_eq!(inv.tau, None);
}

#[test]
fn declared_values_must_match_the_parameters() {
    let params = HopfParams::real(2.0, -4.0).unwrap();
    let ok = RationalityMode::Declared {
        rho: Some((1, 2)),
        tau: Some((2, -1)),
    };
    assert_eq!(derive_invariants(&params, ok).unwrap().nu, Some(2));
    let wrong = RationalityMode::Declared {
        rho: Some((1, 3)),
        tau: None,
    };
    assert!(matches!(
        derive_invariants(&params, wrong),
        Err(HopfError::Consistency(_))
    ));
}

#[test]
fn unit_modulus_parameters_are_rejected() {
    assert!(HopfParams::new(c64(1.0, 0.0), c64(2.0, 0.0)).is_err());
    assert!(HopfParams::new(c64(0.5, 0.0), c64(2.0, 0.0)).is_err());
}

#[test]
fn continued_fraction_finds_simple_rationals() {
    let r = detect_rational(0.75, 1e-12, 1000).unwrap();
    assert_eq!(r.as_fraction(), Some((3, 4)));
    let r = detect_rational(std::f64::consts::SQRT_2, 1e-12, 1000).unwrap();
    assert!(!r.is_rational());
}

#[test]
fn roots_of_unity_close_under_multiplication() {
    for nu in 1..=12 {
        let g = roots_of_unity_group(nu).unwrap();
        assert_eq!(g.len(), nu as usize);
        for x in &g {
            assert!((x.powi(nu as i32) - c64(1.0, 0.0)).norm() < 1e-12);
        }
    }
    assert!(roots_of_unity_group(0).is_err());
}

proptest! {
    #[test]
    fn detects_every_small_fraction(p in -500i64..500, q in 1i64..500) {
        let g = {
            let (mut a, mut b) = (p.abs(), q);
            while b != 0 { let t = a % b; a = b; b = t; }
            a.max(1)
        };
        let r = detect_rational(p as f64 / q as f64, 1e-12, 1_000_000).unwrap();
        prop_assert_eq!(r.as_fraction(), Some((p / g, q / g)));
    }

    #[test]
    fn tau_is_defined_exactly_when_rho_is_rational(p in 1i64..6, extra in 1i64..6, theta in 0.0f64..std::f64::consts::TAU) {
        let q = p + extra;
        let a = c64(2.0, 0.0);
        let b = c64(2f64.powf(q as f64 / p as f64), 0.0) * c64(0.0, theta).exp();
        let inv = derive_invariants(&HopfParams::new(a, b).unwrap(), numeric()).unwrap();
        prop_assert!(inv.rho_rationality.is_rational());
        prop_assert!(inv.tau.is_some());
        prop_assert!(inv.case_tag != CaseTag::CaseA);
    }
}
