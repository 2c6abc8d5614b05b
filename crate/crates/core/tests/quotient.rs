use hopf_core::invariants::{derive_invariants, HopfParams, RationalityMode};
use hopf_core::quotient::{
    equivalent, in_fundamental_domain, leaf_coordinate, level_membership, lift_by, reduce, u_raw,
    u_value,
};
use hopf_core::{c64, Complex64, Pair};
use proptest::prelude::*;

fn rel_close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(f64::MIN_POSITIVE)
}

fn params() -> HopfParams {
    HopfParams::new(c64(1.5, 0.7), c64(-2.0, 2.5)).unwrap()
}

fn point() -> impl Strategy<Value = Pair> {
    (-3.0f64..3.0, 0.0f64..6.3, -3.0f64..3.0, 0.0f64..6.3).prop_map(|(lz, az, lw, aw)| {
        (
            Complex64::from_polar(lz.exp(), az),
            Complex64::from_polar(lw.exp(), aw),
        )
    })
}

#[test]
fn reduces_the_worked_example() {
    let p = HopfParams::real(2.0, 4.0).unwrap();
    let h = reduce((c64(6.0, 0.0), c64(20.0, 0.0)), &p).unwrap();
    assert_eq!(h.rep(), (c64(1.5, 0.0), c64(1.25, 0.0)));
    assert_eq!(h.lift_index, 2);
    assert!(in_fundamental_domain(h.rep(), &p));
}

#[test]
fn origin_is_not_a_point() {
    assert!(reduce((c64(0.0, 0.0), c64(0.0, 0.0)), &params()).is_err());
}

#[test]
fn tori_points_reduce_and_are_flagged() {
    let p = params();
    let h = reduce((c64(3.0, 1.0), c64(0.0, 0.0)), &p).unwrap();
    assert!(h.on_ta && !h.on_tb);
    let h = reduce((c64(0.0, 0.0), c64(-9.0, 4.0)), &p).unwrap();
    assert!(h.on_tb && !h.on_ta);
    assert!(u_value(&h, &p).is_err());
}

#[test]
fn level_membership_of_a_modulus_leaf() {
    let p = HopfParams::real(2.0, 4.0).unwrap();
    let h = reduce((c64(1.5, 0.0), c64(3.0 * 1.5f64.powi(2), 0.0)), &p).unwrap();
    let c = u_value(&h, &p).unwrap();
    let r = level_membership(&h, c, &p).unwrap();
    assert!(r.residual.abs() < 1e-12);
}

#[test]
fn leaf_coordinate_is_deck_invariant_in_case_b2() {
    let p = HopfParams::real(2.0, -4.0).unwrap();
    let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
    let pt = (c64(1.3, 0.4), c64(0.2, -1.1));
    let c0 = leaf_coordinate(pt, &inv).unwrap();
    for n in -5..=5 {
        let cn = leaf_coordinate(lift_by(pt, n, &p), &inv).unwrap();
        assert!(rel_close(c0.powi(2), cn.powi(2), 1e-12), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lifts_reduce_to_the_same_representative(pt in point(), n in -10i64..=10) {
        let p = params();
        let h0 = reduce(pt, &p).unwrap();
        let hn = reduce(lift_by(pt, n, &p), &p).unwrap();
        prop_assert!(rel_close(h0.z, hn.z, 1e-12) && rel_close(h0.w, hn.w, 1e-12));
        prop_assert_eq!(hn.lift_index, h0.lift_index + n);
        prop_assert!(in_fundamental_domain(h0.rep(), &p));
    }

    #[test]
    fn reduction_is_idempotent(pt in point()) {
        let p = params();
        let h = reduce(pt, &p).unwrap();
        let again = reduce(h.rep(), &p).unwrap();
        prop_assert_eq!(again.lift_index, 0);
        prop_assert_eq!(again.rep(), h.rep());
    }

    #[test]
    fn lift_inverts_reduce(pt in point()) {
        let p = params();
        let back = reduce(pt, &p).unwrap().lift(&p);
        prop_assert!(rel_close(back.0, pt.0, 1e-12) && rel_close(back.1, pt.1, 1e-12));
    }

    #[test]
    fn ueda_function_is_deck_invariant(pt in point(), n in -10i64..=10) {
        let p = params();
        let u0 = u_raw(pt, &p).unwrap();
        let un = u_raw(lift_by(pt, n, &p), &p).unwrap();
        prop_assert!((u0 - un).abs() <= 1e-12 * u0.abs().max(1.0));
    }

    #[test]
    fn equivalence_sees_every_lift(pt in point(), n in -10i64..=10) {
        let p = params();
        prop_assert!(equivalent(pt, lift_by(pt, n, &p), &p, 1e-9).unwrap());
    }
}
