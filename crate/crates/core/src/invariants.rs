//! Arithmetic invariants of `H(a,b)`.
//!
//! `rho = log|b| / log|a|` decides whether the level sets of `U` are dense
//! Levi-flat hypersurfaces (rho irrational, or rho rational with `tau`
//! irrational) or are foliated by compact tori (both rational). In the last
//! case `nu = p*l / gcd(p, l)` counts how many sheets of `w = c z^rho` glue to a
//! single torus, and `K` is the group of `nu`-th roots of unity.
//!
//! Rationality of a float is not decidable, so every derived quantity records
//! how its rationality was established: declared by the caller, or detected by
//! a continued-fraction heuristic.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{arg_2pi, Complex64, HopfError, Result};

/// Consistency bound applied to declared `q/p` and `m/l`.
pub const DECLARED_CONSISTENCY_BOUND: f64 = 1e-9;

/// The pair `(a, b)` with `1 < |a| <= |b|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfParams {
    a: Complex64,
    b: Complex64,
    #[serde(skip)]
    arg_a: f64,
    #[serde(skip)]
    arg_b: f64,
    #[serde(skip)]
    log_abs_a: f64,
    #[serde(skip)]
    log_abs_b: f64,
}

impl HopfParams {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(HopfError::invalid("a and b must be finite"));
        }
        let (na, nb) = (a.norm(), b.norm());
        if na <= 1.0 {
            return Err(HopfError::invalid(format!("|a| = {na} must exceed 1")));
        }
        if nb < na {
            return Err(HopfError::invalid(format!(
                "|b| = {nb} must be >= |a| = {na}"
            )));
        }
        Ok(HopfParams {
            a,
            b,
            arg_a: arg_2pi(a),
            arg_b: arg_2pi(b),
            log_abs_a: na.ln(),
            log_abs_b: nb.ln(),
        })
    }

    /// Real parameters, the common case in examples.
    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    /// `arg a` in `[0, 2pi)`.
    pub fn arg_a(&self) -> f64 {
        self.arg_a
    }
    /// `arg b` in `[0, 2pi)`.
    pub fn arg_b(&self) -> f64 {
        self.arg_b
    }
    pub fn log_abs_a(&self) -> f64 {
        self.log_abs_a
    }
    pub fn log_abs_b(&self) -> f64 {
        self.log_abs_b
    }
    pub fn rho(&self) -> f64 {
        self.log_abs_b / self.log_abs_a
    }
    /// Principal logarithm of `a` with the argument taken in `[0, 2pi)`.
    pub fn log_a(&self) -> Complex64 {
        Complex64::new(self.log_abs_a, self.arg_a)
    }
    pub fn log_b(&self) -> Complex64 {
        Complex64::new(self.log_abs_b, self.arg_b)
    }
    /// `b` is real and greater than one (required by Nemirovskii-type domains).
    pub fn b_is_real_gt_one(&self) -> bool {
        self.b.im == 0.0 && self.b.re > 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RationalityKind {
    /// `numerator / denominator` in lowest terms.
    ExactRational { numerator: i64, denominator: i64 },
    /// No convergent passed the tolerance; the closest one is reported.
    HeuristicIrrational {
        best_numerator: i64,
        best_denominator: i64,
        residual: f64,
    },
    /// Asserted irrational by the caller (declared mode).
    DeclaredIrrational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalityResult {
    pub kind: RationalityKind,
    pub tolerance: f64,
    pub max_denominator: i64,
}

impl RationalityResult {
    pub fn as_fraction(&self) -> Option<(i64, i64)> {
        match self.kind {
            RationalityKind::ExactRational {
                numerator,
                denominator,
            } => Some((numerator, denominator)),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_fraction().is_some()
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            RationalityKind::ExactRational { .. } => "exact_rational",
            RationalityKind::HeuristicIrrational { .. } => "heuristic_irrational",
            RationalityKind::DeclaredIrrational => "declared_irrational",
        }
    }
}

/// Continued-fraction rationality test.
///
/// Walks the convergents `p/q` of `x` with `q <= max_den` and returns the first
/// whose integer-relation residual `|q*x - p|` is at most `tol`. The residual is
/// evaluated with a fused multiply-add so it is exact up to one rounding of the
/// (small) result.
pub fn detect_rational(x: f64, tol: f64, max_den: i64) -> Result<RationalityResult> {
    if !x.is_finite() {
        return Err(HopfError::invalid(format!("x = {x} is not finite")));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(HopfError::invalid("tolerance must be nonnegative"));
    }
    if max_den < 1 {
        return Err(HopfError::invalid("max_den must be >= 1"));
    }
    if x.abs() >= 9.0e15 {
        return Err(HopfError::invalid(format!(
            "|x| = {x} is too large for exact convergents"
        )));
    }

    let (mut h1, mut h2): (i128, i128) = (1, 0);
    let (mut k1, mut k2): (i128, i128) = (0, 1);
    let mut y = x;
    let mut best: Option<(i64, i64, f64)> = None;

    for _ in 0..96 {
        let a = y.floor();
        let ai = a as i128;
        let h = ai * h1 + h2;
        let k = ai * k1 + k2;
        if k > max_den as i128 || h.unsigned_abs() > (1u128 << 62) {
            break;
        }
        let (hn, kn) = (h as i64, k as i64);
        let residual = (kn as f64).mul_add(x, -(hn as f64)).abs();
        if residual <= tol {
            return Ok(RationalityResult {
                kind: RationalityKind::ExactRational {
                    numerator: hn,
                    denominator: kn,
                },
                tolerance: tol,
                max_denominator: max_den,
            });
        }
        if best.is_none_or(|(_, _, r)| residual < r) {
            best = Some((hn, kn, residual));
        }
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        let frac = y - a;
        if frac <= 0.0 {
            break;
        }
        y = 1.0 / frac;
        if !y.is_finite() {
            break;
        }
    }

    let (p, q, r) = best.expect("the first convergent always has denominator 1");
    Ok(RationalityResult {
        kind: RationalityKind::HeuristicIrrational {
            best_numerator: p,
            best_denominator: q,
            residual: r,
        },
        tolerance: tol,
        max_denominator: max_den,
    })
}

/// `K = { exp(2 pi i k / nu) : k = 0..nu }`; quadrantal elements are exact.
pub fn roots_of_unity_group(nu: i64) -> Result<Vec<Complex64>> {
    if nu < 1 {
        return Err(HopfError::invalid("nu must be >= 1"));
    }
    Ok((0..nu)
        .map(|k| {
            if (4 * k) % nu == 0 {
                match (4 * k) / nu {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                Complex64::from_polar(1.0, TAU * k as f64 / nu as f64)
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `rho` irrational.
    #[serde(rename = "A")]
    CaseA,
    /// `rho` rational, `tau` irrational.
    #[serde(rename = "B1")]
    CaseB1,
    /// `rho` and `tau` rational.
    #[serde(rename = "B2")]
    CaseB2,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::CaseA => "A",
            CaseTag::CaseB1 => "B1",
            CaseTag::CaseB2 => "B2",
        }
    }
}

/// How rationality of `rho` and `tau` is established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RationalityMode {
    /// Caller-asserted values as `(p, q)` with `rho = q/p` and `(l, m)` with `tau = m/l`;
    /// `None` means "irrational".
    Declared {
        rho: Option<(i64, i64)>,
        tau: Option<(i64, i64)>,
    },
    /// Continued-fraction detection with the given tolerance and denominator cap.
    Numeric { tol: f64, max_den: i64 },
}

impl Default for RationalityMode {
    fn default() -> Self {
        RationalityMode::Numeric {
            tol: 1e-12,
            max_den: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSet {
    pub rho: f64,
    pub rho_rationality: RationalityResult,
    /// Defined only when `rho` is rational.
    pub tau: Option<f64>,
    pub tau_rationality: Option<RationalityResult>,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub l: Option<i64>,
    pub m: Option<i64>,
    pub g: Option<i64>,
    pub nu: Option<i64>,
    /// Populated only in case B2.
    pub k_group: Vec<Complex64>,
    pub case_tag: CaseTag,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `tau = (q/p * arg a - arg b) / 2pi` with both arguments in `[0, 2pi)`.
pub fn tau_from(params: &HopfParams, p: i64, q: i64) -> f64 {
    (q as f64 / p as f64 * params.arg_a() - params.arg_b()) / (2.0 * PI)
}

pub fn derive_invariants(params: &HopfParams, mode: RationalityMode) -> Result<InvariantSet> {
    let rho = params.rho();

    let rho_rationality = match mode {
        RationalityMode::Numeric { tol, max_den } => detect_rational(rho, tol, max_den)?,
        RationalityMode::Declared { rho: declared, .. } => match declared {
            Some((p, q)) => {
                if p < 1 || q < 1 || gcd(p, q) != 1 {
                    return Err(HopfError::Consistency(format!(
                        "declared rho = {q}/{p} must have p >= 1, q >= 1 and gcd(p, q) = 1"
                    )));
                }
                let dev = (rho - q as f64 / p as f64).abs();
                if dev > DECLARED_CONSISTENCY_BOUND {
                    return Err(HopfError::Consistency(format!(
                        "|rho - q/p| = {dev:e} exceeds {DECLARED_CONSISTENCY_BOUND:e} (rho = {rho}, q/p = {q}/{p})"
                    )));
                }
                RationalityResult {
                    kind: RationalityKind::ExactRational {
                        numerator: q,
                        denominator: p,
                    },
                    tolerance: DECLARED_CONSISTENCY_BOUND,
                    max_denominator: p,
                }
            }
            None => RationalityResult {
                kind: RationalityKind::DeclaredIrrational,
                tolerance: DECLARED_CONSISTENCY_BOUND,
                max_denominator: 1,
            },
        },
    };

    let Some((q, p)) = rho_rationality.as_fraction() else {
        return Ok(InvariantSet {
            rho,
            rho_rationality,
            tau: None,
            tau_rationality: None,
            p: None,
            q: None,
            l: None,
            m: None,
            g: None,
            nu: None,
            k_group: Vec::new(),
            case_tag: CaseTag::CaseA,
        });
    };

    let tau = tau_from(params, p, q);
    let tau_rationality = match mode {
        RationalityMode::Numeric { tol, max_den } => detect_rational(tau, tol, max_den)?,
        RationalityMode::Declared { tau: declared, .. } => match declared {
            Some((l, m)) => {
                if l < 1 || gcd(l, m) != 1 {
                    return Err(HopfError::Consistency(format!(
                        "declared tau = {m}/{l} must have l >= 1 and gcd(l, |m|) = 1"
                    )));
                }
                let dev = (tau - m as f64 / l as f64).abs();
                if dev > DECLARED_CONSISTENCY_BOUND {
                    return Err(HopfError::Consistency(format!(
                        "|tau - m/l| = {dev:e} exceeds {DECLARED_CONSISTENCY_BOUND:e} (tau = {tau}, m/l = {m}/{l})"
                    )));
                }
                RationalityResult {
                    kind: RationalityKind::ExactRational {
                        numerator: m,
                        denominator: l,
                    },
                    tolerance: DECLARED_CONSISTENCY_BOUND,
                    max_denominator: l,
                }
            }
            None => RationalityResult {
                kind: RationalityKind::DeclaredIrrational,
                tolerance: DECLARED_CONSISTENCY_BOUND,
                max_denominator: 1,
            },
        },
    };

    let Some((m, l)) = tau_rationality.as_fraction() else {
        return Ok(InvariantSet {
            rho,
            rho_rationality,
            tau: Some(tau),
            tau_rationality: Some(tau_rationality),
            p: Some(p),
            q: Some(q),
            l: None,
            m: None,
            g: None,
            nu: None,
            k_group: Vec::new(),
            case_tag: CaseTag::CaseB1,
        });
    };

    // tau = 0 comes out of the convergents as 0/1, i.e. l = 1 as required.
    let g = gcd(p, l);
    let nu = p * l / g;
    Ok(InvariantSet {
        rho,
        rho_rationality,
        tau: Some(tau),
        tau_rationality: Some(tau_rationality),
        p: Some(p),
        q: Some(q),
        l: Some(l),
        m: Some(m),
        g: Some(g),
        nu: Some(nu),
        k_group: roots_of_unity_group(nu)?,
        case_tag: CaseTag::CaseB2,
    })
}

impl InvariantSet {
    /// Flat JSON record: scalar invariants plus prefixed rationality metadata.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let mut obj = Map::new();
        obj.insert("rho".into(), json!(self.rho));
        obj.insert("tau".into(), json!(self.tau));
        obj.insert("p".into(), json!(self.p));
        obj.insert("q".into(), json!(self.q));
        obj.insert("l".into(), json!(self.l));
        obj.insert("m".into(), json!(self.m));
        obj.insert("g".into(), json!(self.g));
        obj.insert("nu".into(), json!(self.nu));
        obj.insert("case_tag".into(), json!(self.case_tag.as_str()));
        obj.insert(
            "K".into(),
            Value::Array(self.k_group.iter().map(|k| json!([k.re, k.im])).collect()),
        );
        let mut put = |prefix: &str, r: Option<&RationalityResult>| {
            let Some(r) = r else {
                obj.insert(format!("{prefix}_kind"), Value::Null);
                return;
            };
            obj.insert(format!("{prefix}_kind"), json!(r.kind_name()));
            obj.insert(format!("{prefix}_tolerance"), json!(r.tolerance));
            obj.insert(format!("{prefix}_max_den"), json!(r.max_denominator));
            if let RationalityKind::HeuristicIrrational {
                best_numerator,
                best_denominator,
                residual,
            } = r.kind
            {
                obj.insert(
                    format!("{prefix}_best_convergent"),
                    json!([best_numerator, best_denominator]),
                );
                obj.insert(format!("{prefix}_residual"), json!(residual));
            }
        };
        put("rho", Some(&self.rho_rationality));
        put("tau", self.tau_rationality.as_ref());
        Value::Object(obj)
    }
}

impl Serialize for InvariantSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn detect_rational_examples() {
        let r = detect_rational(2.0, 1e-12, 1_000_000).unwrap();
        assert_eq!(r.as_fraction(), Some((2, 1)));
        let r = detect_rational(-0.5, 1e-12, 1_000_000).unwrap();
        assert_eq!(r.as_fraction(), Some((-1, 2)));
        let r = detect_rational(3f64.ln() / 2f64.ln(), 1e-12, 1_000_000).unwrap();
        match r.kind {
            RationalityKind::HeuristicIrrational {
                best_denominator,
                residual,
                ..
            } => {
                assert!(best_denominator <= 1_000_000);
                assert!(residual > 1e-12);
            }
            other => panic!("expected irrational, got {other:?}"),
        }
    }

    #[test]
    fn detect_rational_rejects_bad_input() {
        assert!(matches!(
            detect_rational(f64::NAN, 1e-12, 10),
            Err(HopfError::InvalidInput(_))
        ));
        assert!(matches!(
            detect_rational(f64::INFINITY, 1e-12, 10),
            Err(HopfError::InvalidInput(_))
        ));
        assert!(detect_rational(1.0, -1.0, 10).is_err());
        assert!(detect_rational(1.0, 1e-12, 0).is_err());
    }

    #[test]
    fn detect_rational_inexact_thirds() {
        let r = detect_rational(1.0 / 3.0, 1e-12, 1000).unwrap();
        assert_eq!(r.as_fraction(), Some((1, 3)));
        let r = detect_rational(-7.0 / 11.0, 1e-12, 1000).unwrap();
        assert_eq!(r.as_fraction(), Some((-7, 11)));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(roots_of_unity_group(1).unwrap(), vec![c64(1.0, 0.0)]);
        assert_eq!(
            roots_of_unity_group(2).unwrap(),
            vec![c64(1.0, 0.0), c64(-1.0, 0.0)]
        );
        assert_eq!(
            roots_of_unity_group(4).unwrap(),
            vec![c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0), c64(0.0, -1.0)]
        );
        for k in roots_of_unity_group(7).unwrap() {
            assert!((k.powi(7) - 1.0).norm() < 1e-12);
        }
        assert!(roots_of_unity_group(0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(HopfParams::real(1.0, 2.0).is_err());
        assert!(HopfParams::real(3.0, 2.0).is_err());
        assert!(HopfParams::real(2.0, -2.0).is_ok());
        let p = HopfParams::new(c64(0.0, -2.0), c64(0.0, 3.0)).unwrap();
        assert!((p.arg_a() - 1.5 * PI).abs() < 1e-15);
        assert!((p.arg_b() - 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn invariants_2_4() {
        let p = HopfParams::real(2.0, 4.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        assert_eq!(inv.rho, 2.0);
        assert_eq!((inv.p, inv.q), (Some(1), Some(2)));
        assert_eq!(inv.tau, Some(0.0));
        assert_eq!(
            (inv.l, inv.m, inv.g, inv.nu),
            (Some(1), Some(0), Some(1), Some(1))
        );
        assert_eq!(inv.k_group, vec![c64(1.0, 0.0)]);
        assert_eq!(inv.case_tag, CaseTag::CaseB2);
    }

    #[test]
    fn invariants_2_minus4() {
        let p = HopfParams::real(2.0, -4.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        assert_eq!(inv.rho, 2.0);
        assert_eq!(inv.tau, Some(-0.5));
        assert_eq!(
            (inv.l, inv.m, inv.g, inv.nu),
            (Some(2), Some(-1), Some(1), Some(2))
        );
        assert_eq!(inv.k_group, vec![c64(1.0, 0.0), c64(-1.0, 0.0)]);
        assert_eq!(inv.case_tag, CaseTag::CaseB2);
    }

    #[test]
    fn invariants_case_a_and_b1() {
        let p = HopfParams::real(2.0, 3.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        assert_eq!(inv.case_tag, CaseTag::CaseA);
        assert!(inv.k_group.is_empty() && inv.tau.is_none());

        // rho = 2 with arg b chosen so that tau = -1/sqrt(2) is irrational.
        let arg_b = std::f64::consts::SQRT_2 * PI;
        let p = HopfParams::new(c64(2.0, 0.0), Complex64::from_polar(4.0, arg_b)).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        assert_eq!(inv.case_tag, CaseTag::CaseB1);
        assert!(inv.nu.is_none());
    }

    #[test]
    fn declared_mode_gates_consistency() {
        let p = HopfParams::real(2.0, -4.0).unwrap();
        let inv = derive_invariants(
            &p,
            RationalityMode::Declared {
                rho: Some((1, 2)),
                tau: Some((2, -1)),
            },
        )
        .unwrap();
        assert_eq!(inv.nu, Some(2));
        let err = derive_invariants(
            &p,
            RationalityMode::Declared {
                rho: Some((2, 3)),
                tau: None,
            },
        )
        .unwrap_err();
        assert!(matches!(err, HopfError::Consistency(ref s) if s.contains("|rho - q/p|")));
        let err = derive_invariants(
            &p,
            RationalityMode::Declared {
                rho: Some((1, 2)),
                tau: Some((3, 1)),
            },
        )
        .unwrap_err();
        assert!(matches!(err, HopfError::Consistency(ref s) if s.contains("|tau - m/l|")));
    }

    #[test]
    fn json_is_flat() {
        let p = HopfParams::real(2.0, -4.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        let v = inv.to_json();
        assert_eq!(v["nu"], 2);
        assert_eq!(v["case_tag"], "B2");
        assert_eq!(v["tau"], -0.5);
        assert_eq!(v["rho_kind"], "exact_rational");
    }
}
