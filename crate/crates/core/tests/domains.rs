mod common;

use hopf_core::domains::{
    classify_domain, distance_to_identity, evaluate_domain, modulus_surface_distance,
    nemirovskii_theta, tangency_check, translate_domain, verify_nemirovskii_quotient,
    DistanceConfig, DomainSpec, LeafRegion, SteinVerdict, Theorem1Type, TranslatedForm,
};
use hopf_core::flows::VectorField;
use hopf_core::invariants::{derive_invariants, HopfParams, InvariantSet, RationalityMode};
use hopf_core::quotient::{lift_by, LeafSpec};
use hopf_core::{c64, Complex64, HopfError, Pair};
use proptest::prelude::*;

fn b2() -> HopfParams {
    HopfParams::real(2.0, -4.0).unwrap()
}

fn inv(p: &HopfParams) -> InvariantSet {
    derive_invariants(p, RationalityMode::default()).unwrap()
}

fn times() -> Vec<Complex64> {
    (-4..=4)
        .map(|k| c64(0.25 * k as f64, 0.5 * k as f64))
        .collect()
}

#[test]
fn classification_table_matches_golden() {
    let results: Vec<_> = common::classification_table()
        .into_iter()
        .map(|(spec, p)| classify_domain(&spec, &inv(&p)).unwrap())
        .collect();
    let json = serde_json::to_string_pretty(&results).unwrap() + "\n";
    common::check_golden("classification.json", &json);
}

#[test]
fn verdicts_follow_the_theorem() {
    let rows = common::classification_table();
    let verdict = |i: usize| classify_domain(&rows[i].0, &inv(&rows[i].1)).unwrap();

    let band = verdict(0);
    assert_eq!(band.theorem1_type, Theorem1Type::A1);
    assert!(matches!(
        band.stein_verdict,
        SteinVerdict::NotStein { ref witness } if witness.leaf == LeafSpec::ModulusLeaf { c: 1.0 }
    ));
    assert_eq!(verdict(1).theorem1_type, Theorem1Type::A2prime);
    assert_eq!(verdict(2).theorem1_type, Theorem1Type::A2doubleprime);
    for i in [3, 4] {
        let r = verdict(i);
        assert!(matches!(r.theorem1_type, Theorem1Type::B2 { .. }));
        let SteinVerdict::NotStein { witness } = r.stein_verdict else {
            panic!("leaf families are not Stein");
        };
        let LeafSpec::ComplexLeaf { c } = witness.leaf else {
            panic!("leaf family witness must be a complex leaf");
        };
        // c^nu lies in delta.
        let spec = &rows[i].0;
        if let DomainSpec::LeafFamily { region, .. } = spec {
            assert!(region.residual(c * c) < 0.0);
        }
    }
    assert!(verdict(4)
        .notes
        .iter()
        .any(|n| n.contains("unable to verify")));
    assert!(matches!(
        verdict(5).stein_verdict,
        SteinVerdict::Stein { .. }
    ));
    assert!(matches!(
        verdict(6).stein_verdict,
        SteinVerdict::Undetermined { .. }
    ));
    assert!(verdict(7)
        .notes
        .iter()
        .any(|n| n.contains("unable to verify")));
}

#[test]
fn leaf_families_need_case_b2() {
    let p = HopfParams::real(2.0, 3.0).unwrap();
    let spec = DomainSpec::leaf_family(LeafRegion::Annulus {
        inner: 1.0,
        outer: 2.0,
    })
    .unwrap();
    assert!(matches!(
        classify_domain(&spec, &inv(&p)),
        Err(HopfError::Case(_))
    ));
    assert!(matches!(spec.validate(&p), Err(HopfError::Case(_))));
}

#[test]
fn nemirovskii_needs_real_b() {
    let p = HopfParams::new(c64(2.0, 0.0), c64(0.0, 4.0)).unwrap();
    let spec = DomainSpec::nemirovskii(1.0, 1.0).unwrap();
    assert!(matches!(spec.validate(&p), Err(HopfError::Validation(_))));
    assert!(DomainSpec::nemirovskii(0.0, 0.0).is_err());
    assert!(DomainSpec::level_band(2.0, 1.0).is_err());
}

#[test]
fn xu_is_tangent_to_the_witness_leaf_and_the_band() {
    let p = b2();
    let x = VectorField::x_u(&p);
    // d/dt (log|w| - rho log|z|) along X_u is log|b| - rho log|a|.
    assert!((p.log_abs_b() - p.rho() * p.log_abs_a()).abs() <= 4.0 * f64::EPSILON * p.log_abs_b());
    for spec in [
        DomainSpec::sub_level(1.0).unwrap(),
        DomainSpec::level_band(0.5, 2.0).unwrap(),
    ] {
        let rep = tangency_check(&spec, &x, 100, &times(), 1e-12, &p, 5).unwrap();
        assert!(rep.tangential, "{rep:?}");
        assert!(rep.max_drift <= 1e-12);
        assert_eq!(rep.boundary_samples, 100);
    }
}

#[test]
fn coordinate_fields_cross_the_band() {
    let p = b2();
    let spec = DomainSpec::level_band(0.5, 2.0).unwrap();
    let x = VectorField::new(c64(1.0, 0.0), c64(0.0, 0.0));
    let rep = tangency_check(&spec, &x, 50, &times(), 1e-9, &p, 5).unwrap();
    assert!(!rep.tangential);
}

#[test]
fn real_flow_is_tangent_to_nemirovskii_boundary() {
    let p = HopfParams::real(2.0, 4.0).unwrap();
    let spec = DomainSpec::nemirovskii(-1.0, 0.0).unwrap();
    let real_times: Vec<_> = (-4..=4).map(|k| c64(0.5 * k as f64, 0.0)).collect();
    // The residual -Re w scales by 4^t, so the 1e-10 bisection slack grows to 1.6e-9 at t = 2.
    let rep = tangency_check(&spec, &VectorField::x_u(&p), 50, &real_times, 1e-8, &p, 5).unwrap();
    assert!(rep.tangential, "{rep:?}");
    let w_rot = VectorField::new(c64(0.0, 0.0), c64(0.0, 1.0));
    let rep = tangency_check(&spec, &w_rot, 50, &real_times, 1e-8, &p, 5).unwrap();
    assert!(!rep.tangential);
}

#[test]
fn nemirovskii_translate_is_a_product_half_plane() {
    let p = HopfParams::real(2.0, 4.0).unwrap();
    let spec = DomainSpec::nemirovskii(-1.0, 0.0).unwrap();
    for theta in [0.0, 0.3, -1.0, 1.5] {
        let w = Complex64::from_polar(1.7, theta);
        let td = translate_domain(&spec, (c64(1.2, 0.0), w), &p).unwrap();
        let TranslatedForm::ProductHalfPlane { theta: t } = td.form else {
            panic!("expected a product half-plane");
        };
        assert!((t - theta).abs() < 1e-12);
        assert_eq!(t, nemirovskii_theta(-1.0, 0.0, w));
        let (lo, hi) = distance_to_identity(&td, &DistanceConfig::default()).unwrap();
        assert_eq!(lo, t.cos());
        assert_eq!(hi, t.cos());
    }
}

#[test]
fn modulus_distance_matches_dense_search() {
    for (k, rho, r0, s0) in [
        (2.0, 2.0, 1.0, 1.0),
        (0.5, 2.0, 1.0, 1.0),
        (1.3, 1.5, 0.7, 2.0),
        (3.0, 1.0, 1.0, 1.0),
    ] {
        let n = 2_000_000;
        let dense = (0..=n)
            .map(|i| {
                let r = 4.0 * i as f64 / n as f64;
                ((r - r0).powi(2) + (k * f64::powf(r, rho) - s0).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        let d = modulus_surface_distance(k, rho, r0, s0);
        assert!(
            d <= dense + 1e-12 && dense - d < 1e-5,
            "k = {k}: {d} vs {dense}"
        );
    }
}

#[test]
fn level_band_translate_keeps_the_identity() {
    let p = b2();
    let spec = DomainSpec::level_band(0.5, 2.0).unwrap();
    let td = translate_domain(&spec, (c64(1.2, 0.3), c64(1.1, -0.4)), &p).unwrap();
    assert!(matches!(td.form, TranslatedForm::ModulusRegion { .. }));
    assert!(td.contains_identity());
    let (lo, hi) = distance_to_identity(&td, &DistanceConfig::default()).unwrap();
    assert!(lo > 0.0 && lo <= hi);
}

#[test]
fn nemirovskii_quotient_identity_holds() {
    let p = HopfParams::real(2.0, 4.0).unwrap();
    let rep = verify_nemirovskii_quotient(&p, 10_000, 1).unwrap();
    assert_eq!(rep.failures, 0);
    assert_eq!(rep.forward_in_d, 10_000);
    assert_eq!(rep.backward_in_n, 10_000);
    assert_eq!(rep.negative_control_hits, 0);
    assert!(rep.case1 > 0 && rep.case2 > 0);
}

fn point() -> impl Strategy<Value = Pair> {
    (-2.0f64..2.0, 0.0f64..6.3, -2.0f64..2.0, 0.0f64..6.3).prop_map(|(lz, az, lw, aw)| {
        (
            Complex64::from_polar(lz.exp(), az),
            Complex64::from_polar(lw.exp(), aw),
        )
    })
}

proptest! {
    #[test]
    fn membership_is_deck_invariant(pt in point(), n in -6i64..=6) {
        let p = b2();
        for spec in [DomainSpec::level_band(0.5, 2.0).unwrap(), DomainSpec::super_level(1.0).unwrap()] {
            let a = evaluate_domain(&spec, pt, &p).unwrap();
            let b = evaluate_domain(&spec, lift_by(pt, n, &p), &p).unwrap();
            prop_assert!((a.residual - b.residual).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_is_in_the_translate_iff_the_anchor_is_in_the_domain(pt in point()) {
        let p = b2();
        let spec = DomainSpec::level_band(0.5, 2.0).unwrap();
        let ev = evaluate_domain(&spec, pt, &p).unwrap();
        prop_assume!(ev.residual.abs() > 1e-9);
        let td = translate_domain(&spec, pt, &p).unwrap();
        prop_assert_eq!(td.contains_identity(), ev.inside);
    }
}
