//! Points of `H(a,b)` and their canonical representatives.
//!
//! The fundamental domain is `F = E1 u E2` with
//! `E1 = {|z| <= |a|} x {1 < |w| <= |b|}` and `E2 = {1 < |z| <= |a|} x {|w| <= |b|}`.
//! Every orbit of the deck map `(z, w) -> (az, bw)` meets `F` in exactly one
//! point, up to the outer boundary circles, which are glued to the inner ones.
//! A representative on the outer boundary is preferred (smallest lift index).

use serde::{Serialize, Serializer};

use crate::invariants::{CaseTag, HopfParams, InvariantSet};
use crate::{Complex64, HopfError, Pair, Result};

/// Relative slack on the outer bounds `|z| <= |a|`, `|w| <= |b|`.
pub const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint {
    pub z: Complex64,
    pub w: Complex64,
    /// The input equals `(a^n z, b^n w)`.
    pub lift_index: i64,
    pub on_ta: bool,
    pub on_tb: bool,
}

impl HopfPoint {
    pub fn rep(&self) -> Pair {
        (self.z, self.w)
    }

    /// Reconstructs the original input `(a^n z, b^n w)`.
    pub fn lift(&self, params: &HopfParams) -> Pair {
        lift_by(self.rep(), self.lift_index, params)
    }
}

impl Serialize for HopfPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat {
            z_re: f64,
            z_im: f64,
            w_re: f64,
            w_im: f64,
            lift_index: i64,
            #[serde(rename = "on_Ta")]
            on_ta: bool,
            #[serde(rename = "on_Tb")]
            on_tb: bool,
        }
        Flat {
            z_re: self.z.re,
            z_im: self.z.im,
            w_re: self.w.re,
            w_im: self.w.im,
            lift_index: self.lift_index,
            on_ta: self.on_ta,
            on_tb: self.on_tb,
        }
        .serialize(s)
    }
}

/// `c^n` for any integer `n`, falling back to polar form outside `i32`.
pub(crate) fn cpow_int(c: Complex64, n: i64) -> Complex64 {
    match i32::try_from(n) {
        Ok(k) => c.powi(k),
        Err(_) => Complex64::from_polar(c.norm().powf(n as f64), c.arg() * n as f64),
    }
}

/// `(a^n z, b^n w)`.
pub fn lift_by(pt: Pair, n: i64, params: &HopfParams) -> Pair {
    (
        pt.0 * cpow_int(params.a(), n),
        pt.1 * cpow_int(params.b(), n),
    )
}

/// Smallest `n` with `|x| / |c|^n <= |c| (1 + slack)`, for `|x| > 0`.
fn outer_index(abs_x: f64, log_c: f64) -> i64 {
    let lx = abs_x.ln();
    let limit = log_c + BOUNDARY_SLACK;
    let n0 = (lx / log_c - 1.0).ceil() as i64;
    (n0 - 1..=n0 + 1)
        .find(|&n| lx - n as f64 * log_c <= limit)
        .unwrap_or(n0 + 1)
}

/// Canonical representative of `[z, w]` in `F` together with its lift index.
pub fn reduce(raw: Pair, params: &HopfParams) -> Result<HopfPoint> {
    let (z, w) = raw;
    if !(z.re.is_finite() && z.im.is_finite() && w.re.is_finite() && w.im.is_finite()) {
        return Err(HopfError::invalid("point must be finite"));
    }
    let (nz, nw) = (z.norm(), w.norm());
    if nz == 0.0 && nw == 0.0 {
        return Err(HopfError::invalid(
            "(0, 0) is not a point of the Hopf surface",
        ));
    }
    let iz = (nz > 0.0).then(|| outer_index(nz, params.log_abs_a()));
    let iw = (nw > 0.0).then(|| outer_index(nw, params.log_abs_b()));
    let n = match (iz, iw) {
        (Some(p), Some(q)) => p.max(q),
        (Some(p), None) => p,
        (None, Some(q)) => q,
        (None, None) => unreachable!(),
    };
    let rep_z = if nz == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / cpow_int(params.a(), n)
    };
    let rep_w = if nw == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        w / cpow_int(params.b(), n)
    };
    Ok(HopfPoint {
        z: rep_z,
        w: rep_w,
        lift_index: n,
        on_ta: nw == 0.0,
        on_tb: nz == 0.0,
    })
}

/// Membership in `F` with the same boundary slack as [`reduce`].
pub fn in_fundamental_domain(pt: Pair, params: &HopfParams) -> bool {
    let (nz, nw) = (pt.0.norm(), pt.1.norm());
    let za = nz <= params.a().norm() * (1.0 + BOUNDARY_SLACK);
    let wb = nw <= params.b().norm() * (1.0 + BOUNDARY_SLACK);
    za && wb && (nz > 1.0 || nw > 1.0)
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

/// Whether two points of `(C^2)*` define the same point of `H`.
///
/// Representatives are compared directly and across the boundary gluing
/// `(z, w) ~ (z/a, w/b)`, which covers inputs that land on opposite sides of
/// an outer circle because of rounding.
pub fn equivalent(pt1: Pair, pt2: Pair, params: &HopfParams, tol: f64) -> Result<bool> {
    let r1 = reduce(pt1, params)?.rep();
    let r2 = reduce(pt2, params)?.rep();
    Ok([0i64, 1, -1].iter().any(|&n| {
        let s = lift_by(r2, n, params);
        close(r1.0, s.0, tol) && close(r1.1, s.1, tol)
    }))
}

/// `U[z,w] = log|z| / log|a| - log|w| / log|b|`, finite only off the tori.
pub fn u_value(pt: &HopfPoint, params: &HopfParams) -> Result<f64> {
    u_raw(pt.rep(), params)
}

/// `U` on any lift; deck-invariant.
pub fn u_raw(pt: Pair, params: &HopfParams) -> Result<f64> {
    let (nz, nw) = (pt.0.norm(), pt.1.norm());
    if nz == 0.0 || nw == 0.0 {
        return Err(HopfError::Domain(
            "U is undefined on the tori T_a (w = 0) and T_b (z = 0)".into(),
        ));
    }
    Ok(nz.ln() / params.log_abs_a() - nw.ln() / params.log_abs_b())
}

/// Extended-real `U`: `+inf` on `T_a`, `-inf` on `T_b`.
pub fn u_value_extended(pt: &HopfPoint, params: &HopfParams) -> f64 {
    match (pt.on_ta, pt.on_tb) {
        (true, _) => f64::INFINITY,
        (_, true) => f64::NEG_INFINITY,
        _ => pt.z.norm().ln() / params.log_abs_a() - pt.w.norm().ln() / params.log_abs_b(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelResidual {
    /// `U - c`.
    pub residual: f64,
    /// `k = exp(-c log|b|)`, so that `S_c = {|w| = k |z|^rho}`.
    pub k: f64,
    /// `log|w| - log k - rho log|z|`, equal to `-log|b| * residual`.
    pub modulus_residual: f64,
}

pub fn level_membership(pt: &HopfPoint, c: f64, params: &HopfParams) -> Result<LevelResidual> {
    let u = u_value(pt, params)?;
    let log_k = -c * params.log_abs_b();
    Ok(LevelResidual {
        residual: u - c,
        k: log_k.exp(),
        modulus_residual: pt.w.norm().ln() - log_k - params.rho() * pt.z.norm().ln(),
    })
}

/// A leaf of the Levi-flat foliation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum LeafSpec {
    /// `Sigma_c = {|w| = c |z|^rho}`.
    ModulusLeaf {
        c: f64,
    },
    /// `sigma_c = {w = c z^rho}` (compact torus, case B2 only).
    ComplexLeaf {
        c: Complex64,
    },
    Ta,
    Tb,
}

/// `exp(rho * Log z)` with `arg z` in `[0, 2pi)`.
pub fn principal_power(z: Complex64, rho: f64) -> Complex64 {
    Complex64::from_polar(z.norm().powf(rho), rho * crate::arg_2pi(z))
}

/// The leaf coordinate `c^nu` with `c = w / pr(z^rho)`, constant on `sigma_c` in `H`.
pub fn leaf_coordinate(pt: Pair, inv: &InvariantSet) -> Result<Complex64> {
    let nu = match (inv.case_tag, inv.nu) {
        (CaseTag::CaseB2, Some(nu)) => nu,
        _ => return Err(HopfError::Case("leaf coordinate requires case B2".into())),
    };
    if pt.0.norm() == 0.0 || pt.1.norm() == 0.0 {
        return Err(HopfError::Domain(
            "leaf coordinate undefined on T_a and T_b".into(),
        ));
    }
    let rho = match (inv.p, inv.q) {
        (Some(p), Some(q)) => q as f64 / p as f64,
        _ => inv.rho,
    };
    let c = pt.1 / principal_power(pt.0, rho);
    Ok(cpow_int(c, nu))
}

impl LeafSpec {
    pub fn validate(&self, inv: &InvariantSet) -> Result<()> {
        match self {
            LeafSpec::ModulusLeaf { c } if !(*c > 0.0 && c.is_finite()) => {
                Err(HopfError::invalid("modulus leaf needs c in (0, inf)"))
            }
            LeafSpec::ModulusLeaf { .. } if inv.case_tag == CaseTag::CaseB2 => Err(
                HopfError::Case("in case B2 the leaves are the compact tori sigma_c".into()),
            ),
            LeafSpec::ComplexLeaf { .. } if inv.case_tag != CaseTag::CaseB2 => Err(
                HopfError::Case("sigma_c leaves exist only in case B2".into()),
            ),
            LeafSpec::ComplexLeaf { c } if c.norm() == 0.0 => {
                Err(HopfError::invalid("sigma_c needs c != 0"))
            }
            _ => Ok(()),
        }
    }

    /// Signed defect of `pt` from the leaf; zero on the leaf.
    pub fn residual(&self, pt: Pair, inv: &InvariantSet) -> Result<f64> {
        self.validate(inv)?;
        let (nz, nw) = (pt.0.norm(), pt.1.norm());
        match *self {
            LeafSpec::Ta => Ok(nw),
            LeafSpec::Tb => Ok(nz),
            LeafSpec::ModulusLeaf { c } => {
                if nz == 0.0 || nw == 0.0 {
                    return Ok(f64::INFINITY);
                }
                Ok(nw.ln() - c.ln() - inv.rho * nz.ln())
            }
            LeafSpec::ComplexLeaf { c } => {
                if nz == 0.0 || nw == 0.0 {
                    return Ok(f64::INFINITY);
                }
                let nu = inv.nu.expect("case B2 has nu");
                let zeta = leaf_coordinate(pt, inv)?;
                Ok((zeta - cpow_int(c, nu)).norm())
            }
        }
    }
}

/// `c2 / c1` lies within `tol` of an element of `K`.
pub fn leaf_equivalent(c1: Complex64, c2: Complex64, inv: &InvariantSet, tol: f64) -> Result<bool> {
    if inv.case_tag != CaseTag::CaseB2 {
        return Err(HopfError::Case(format!(
            "leaf equivalence needs case B2, got {}",
            inv.case_tag.as_str()
        )));
    }
    if c1.norm() == 0.0 || c2.norm() == 0.0 {
        return Err(HopfError::invalid("leaf constants must be nonzero"));
    }
    let ratio = c2 / c1;
    Ok(inv.k_group.iter().any(|k| (ratio - k).norm() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::invariants::{derive_invariants, RationalityMode};

    fn p24() -> HopfParams {
        HopfParams::real(2.0, 4.0).unwrap()
    }

    fn real_pair(z: f64, w: f64) -> Pair {
        (c64(z, 0.0), c64(w, 0.0))
    }

    #[test]
    fn reduce_examples() {
        let p = p24();
        let r = reduce(real_pair(1.5, 2.0), &p).unwrap();
        assert_eq!((r.z, r.w, r.lift_index), (c64(1.5, 0.0), c64(2.0, 0.0), 0));
        let r = reduce(real_pair(6.0, 20.0), &p).unwrap();
        assert_eq!((r.z, r.w, r.lift_index), (c64(1.5, 0.0), c64(1.25, 0.0), 2));
        let r = reduce(real_pair(0.0, 20.0), &p).unwrap();
        assert_eq!((r.z, r.w, r.lift_index), (c64(0.0, 0.0), c64(1.25, 0.0), 2));
        assert!(r.on_tb && !r.on_ta);
        assert!(reduce(real_pair(0.0, 0.0), &p).is_err());
    }

    #[test]
    fn reduce_prefers_outer_boundary() {
        let r = reduce(real_pair(1.0, 1.0), &p24()).unwrap();
        assert_eq!((r.z, r.w, r.lift_index), (c64(2.0, 0.0), c64(4.0, 0.0), -1));
    }

    #[test]
    fn equivalence_examples() {
        let p = p24();
        assert!(equivalent(real_pair(1.5, 2.0), real_pair(3.0, 8.0), &p, 1e-12).unwrap());
        assert!(!equivalent(real_pair(1.5, 2.0), real_pair(1.5, 2.1), &p, 1e-12).unwrap());
        assert!(equivalent(real_pair(2.0, 4.0), real_pair(1.0, 1.0), &p, 1e-12).unwrap());
    }

    #[test]
    fn u_and_levels() {
        let p = p24();
        let pt = reduce(real_pair(2.0, 4.0), &p).unwrap();
        assert_eq!(u_value(&pt, &p).unwrap(), 0.0);
        let pt = reduce(real_pair(4.0, 4.0), &p).unwrap();
        assert!((u_value(&pt, &p).unwrap() - 1.0).abs() < 1e-15);
        let lv = level_membership(&pt, 1.0, &p).unwrap();
        assert!(lv.residual.abs() < 1e-15);
        assert!((lv.k - 0.25).abs() < 1e-15);
        assert!(lv.modulus_residual.abs() < 1e-14);
        let on_ta = reduce(real_pair(1.5, 0.0), &p).unwrap();
        assert!(matches!(u_value(&on_ta, &p), Err(HopfError::Domain(_))));
        assert_eq!(u_value_extended(&on_ta, &p), f64::INFINITY);
    }

    #[test]
    fn leaf_equivalence_nu2() {
        let p = HopfParams::real(2.0, -4.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        let one = c64(1.0, 0.0);
        assert!(leaf_equivalent(one, c64(-1.0, 0.0), &inv, 1e-12).unwrap());
        assert!(!leaf_equivalent(one, c64(0.0, 1.0), &inv, 1e-12).unwrap());
        let c = c64(0.3, -2.0);
        assert!(leaf_equivalent(c, c, &inv, 1e-12).unwrap());

        let inv_a = derive_invariants(
            &HopfParams::real(2.0, 3.0).unwrap(),
            RationalityMode::default(),
        )
        .unwrap();
        assert!(matches!(
            leaf_equivalent(one, one, &inv_a, 1e-12),
            Err(HopfError::Case(_))
        ));
    }

    #[test]
    fn leaf_coordinate_is_deck_invariant() {
        let p = HopfParams::real(2.0, -4.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        let pt = (c64(0.7, 0.2), c64(1.1, -0.4));
        let z1 = leaf_coordinate(pt, &inv).unwrap();
        for n in [-3, -1, 1, 2, 5] {
            let z2 = leaf_coordinate(lift_by(pt, n, &p), &inv).unwrap();
            assert!((z1 - z2).norm() < 1e-9 * z1.norm().max(1.0));
        }
        let leaf = LeafSpec::ComplexLeaf { c: c64(2.0, 1.0) };
        let on = (
            c64(0.9, 0.3),
            c64(2.0, 1.0) * principal_power(c64(0.9, 0.3), 2.0),
        );
        assert!(leaf.residual(on, &inv).unwrap() < 1e-12);
        assert!(leaf.residual(lift_by(on, 3, &p), &inv).unwrap() < 1e-9);
    }
}
