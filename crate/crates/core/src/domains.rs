//! Domain families in `H`, their translates `D[z,w]` and the Stein verdict table.
//!
//! Every domain is described by a residual that is negative inside, zero on
//! the boundary and positive outside. Residuals are evaluated on a lift in
//! `(C^2)*`; for every family below the sign is deck-invariant, so any lift
//! may be used.
//!
//! The translate `D[z,w] = {(xi, eta) : [xi z, eta w] in D}` lives in
//! `C* x C*` and contains `e = (1, 1)` exactly when `[z, w]` lies in `D`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::flows::{flow_point, VectorField};
use crate::invariants::{derive_invariants, CaseTag, HopfParams, InvariantSet, RationalityMode};
use crate::quotient::{leaf_coordinate, principal_power, reduce, HopfPoint, LeafSpec};
use crate::sampling;
use crate::{Complex64, HopfError, Pair, Result};

/// A residual on `C^2`.
#[derive(Clone)]
pub struct ResidualFn(pub Arc<dyn Fn(Pair) -> f64 + Send + Sync>);

impl fmt::Debug for ResidualFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ResidualFn(..)")
    }
}

/// A residual on the leaf coordinate `zeta`.
#[derive(Clone)]
pub struct RegionFn(pub Arc<dyn Fn(Complex64) -> f64 + Send + Sync>);

impl fmt::Debug for RegionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RegionFn(..)")
    }
}

/// Position of `0` or `infinity` relative to a region of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointStatus {
    Inside,
    Boundary,
    Outside,
}

impl PointStatus {
    fn residual(self) -> f64 {
        match self {
            PointStatus::Inside => -1.0,
            PointStatus::Boundary => 0.0,
            PointStatus::Outside => 1.0,
        }
    }
}

/// The region `delta` of a leaf family, in the coordinate `zeta = c^nu`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "shape")]
pub enum LeafRegion {
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// `inner < |zeta| < outer`; `inner = 0` and `outer = inf` are allowed.
    Annulus {
        inner: f64,
        outer: f64,
    },
    Custom {
        name: String,
        #[serde(skip)]
        residual: RegionFn,
    },
}

impl LeafRegion {
    pub fn residual(&self, zeta: Complex64) -> f64 {
        match self {
            LeafRegion::Disk { center, radius } => (zeta - center).norm() - radius,
            LeafRegion::Annulus { inner, outer } => {
                let l = zeta.norm().ln();
                (inner.ln() - l).max(l - outer.ln())
            }
            LeafRegion::Custom { residual, .. } => (residual.0)(zeta),
        }
    }

    fn status_at_zero(&self) -> Option<PointStatus> {
        match self {
            LeafRegion::Disk { center, radius } => Some(match center.norm() {
                d if d < *radius => PointStatus::Inside,
                d if d == *radius => PointStatus::Boundary,
                _ => PointStatus::Outside,
            }),
            LeafRegion::Annulus { inner, .. } => Some(if *inner == 0.0 {
                PointStatus::Boundary
            } else {
                PointStatus::Outside
            }),
            LeafRegion::Custom { .. } => None,
        }
    }

    fn status_at_infinity(&self) -> Option<PointStatus> {
        match self {
            LeafRegion::Disk { .. } => Some(PointStatus::Outside),
            LeafRegion::Annulus { outer, .. } => Some(if outer.is_infinite() {
                PointStatus::Boundary
            } else {
                PointStatus::Outside
            }),
            LeafRegion::Custom { .. } => None,
        }
    }

    /// A point of `delta \ {0}`, found on a log-polar grid.
    pub fn interior_point(&self) -> Option<Complex64> {
        let mut best: Option<(f64, Complex64)> = None;
        for i in 0..=240 {
            let r = 10f64.powf(-6.0 + 12.0 * i as f64 / 240.0);
            for j in 0..64 {
                let zeta = Complex64::from_polar(r, 2.0 * PI * j as f64 / 64.0);
                let v = self.residual(zeta);
                if v < 0.0 && best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, zeta));
                }
            }
        }
        best.map(|(_, z)| z)
    }

    fn describe(&self) -> String {
        match self {
            LeafRegion::Disk { center, radius } => {
                format!("disk |zeta - ({}, {})| < {}", center.re, center.im, radius)
            }
            LeafRegion::Annulus { inner, outer } => format!("annulus {inner} < |zeta| < {outer}"),
            LeafRegion::Custom { name, .. } => format!("custom region '{name}'"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum DomainSpec {
    /// Union of `Sigma_c` for `c` in `(k1, k2)`.
    LevelBand { k1: f64, k2: f64 },
    /// Union of `Sigma_c` for `c` in `[0, k)`, including `T_a`.
    SubLevel { k: f64 },
    /// Union of `Sigma_c` for `c` in `(k, inf]`, including `T_b`.
    SuperLevel { k: f64 },
    /// Union of the tori `sigma_c` over `c^nu` in `delta` (case B2).
    LeafFamily {
        region: LeafRegion,
        zero: PointStatus,
        infinity: PointStatus,
    },
    /// `C_z x {A u + B v < 0}` modulo the deck group, `w = u + iv`, `b > 1` real.
    Nemirovskii {
        #[serde(rename = "A")]
        a_coef: f64,
        #[serde(rename = "B")]
        b_coef: f64,
    },
    Implicit {
        name: String,
        #[serde(skip)]
        psi: ResidualFn,
        boundary_contains_ta: bool,
        boundary_contains_tb: bool,
    },
}

impl DomainSpec {
    pub fn level_band(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1 < k2 && k2.is_finite()) {
            return Err(HopfError::invalid(format!(
                "level band needs 0 < k1 < k2 < inf, got ({k1}, {k2})"
            )));
        }
        Ok(DomainSpec::LevelBand { k1, k2 })
    }

    pub fn sub_level(k: f64) -> Result<Self> {
        positive(k)?;
        Ok(DomainSpec::SubLevel { k })
    }

    pub fn super_level(k: f64) -> Result<Self> {
        positive(k)?;
        Ok(DomainSpec::SuperLevel { k })
    }

    /// Normalized to `A^2 + B^2 = 1` by a positive factor.
    pub fn nemirovskii(a: f64, b: f64) -> Result<Self> {
        let n = a.hypot(b);
        if !(n > 0.0 && n.is_finite()) {
            return Err(HopfError::invalid(
                "Nemirovskii domain needs (A, B) != (0, 0)",
            ));
        }
        Ok(DomainSpec::Nemirovskii {
            a_coef: a / n,
            b_coef: b / n,
        })
    }

    /// Leaf family over a preset region, with the status of `0` and `inf` derived.
    pub fn leaf_family(region: LeafRegion) -> Result<Self> {
        let (Some(zero), Some(infinity)) = (region.status_at_zero(), region.status_at_infinity())
        else {
            return Err(HopfError::invalid(
                "custom regions need explicit status flags; use leaf_family_custom",
            ));
        };
        Ok(DomainSpec::LeafFamily {
            region,
            zero,
            infinity,
        })
    }

    pub fn leaf_family_custom(
        name: &str,
        residual: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
        zero: PointStatus,
        infinity: PointStatus,
    ) -> Self {
        DomainSpec::LeafFamily {
            region: LeafRegion::Custom {
                name: name.into(),
                residual: RegionFn(Arc::new(residual)),
            },
            zero,
            infinity,
        }
    }

    pub fn implicit(name: &str, psi: impl Fn(Pair) -> f64 + Send + Sync + 'static) -> Self {
        DomainSpec::Implicit {
            name: name.into(),
            psi: ResidualFn(Arc::new(psi)),
            boundary_contains_ta: false,
            boundary_contains_tb: false,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainSpec::LevelBand { .. } => "LevelBand",
            DomainSpec::SubLevel { .. } => "SubLevel",
            DomainSpec::SuperLevel { .. } => "SuperLevel",
            DomainSpec::LeafFamily { .. } => "LeafFamily",
            DomainSpec::Nemirovskii { .. } => "Nemirovskii",
            DomainSpec::Implicit { .. } => "Implicit",
        }
    }

    pub fn validate(&self, params: &HopfParams) -> Result<()> {
        match self {
            DomainSpec::LevelBand { k1, k2 } => DomainSpec::level_band(*k1, *k2).map(|_| ()),
            DomainSpec::SubLevel { k } | DomainSpec::SuperLevel { k } => positive(*k),
            DomainSpec::Nemirovskii { a_coef, b_coef } => {
                if !params.b_is_real_gt_one() {
                    return Err(HopfError::Validation(format!(
                        "Nemirovskii domains need b real and > 1, got b = {}",
                        params.b()
                    )));
                }
                if a_coef.hypot(*b_coef) == 0.0 {
                    return Err(HopfError::invalid("(A, B) must not vanish"));
                }
                Ok(())
            }
            DomainSpec::LeafFamily { .. } => leaf_invariants(params).map(|_| ()),
            DomainSpec::Implicit { .. } => Ok(()),
        }
    }
}

fn positive(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(HopfError::invalid(format!(
            "level k = {k} must be positive and finite"
        )))
    }
}

fn leaf_invariants(params: &HopfParams) -> Result<InvariantSet> {
    let inv = derive_invariants(params, RationalityMode::default())?;
    if inv.case_tag != CaseTag::CaseB2 {
        return Err(HopfError::Case(format!(
            "leaf families need case B2, got {}",
            inv.case_tag.as_str()
        )));
    }
    Ok(inv)
}

/// `log(|w| / |z|^rho)`, `-inf` on `T_a` and `+inf` on `T_b`.
fn log_modulus_ratio(pt: Pair, rho: f64) -> f64 {
    let (nz, nw) = (pt.0.norm(), pt.1.norm());
    match (nz == 0.0, nw == 0.0) {
        (_, true) => f64::NEG_INFINITY,
        (true, false) => f64::INFINITY,
        _ => nw.ln() - rho * nz.ln(),
    }
}

/// Residual on a lift, without reduction. Smooth in `pt`, which makes it the
/// right input for difference stencils and flows.
pub fn local_residual(spec: &DomainSpec, pt: Pair, params: &HopfParams) -> Result<f64> {
    let rho = params.rho();
    Ok(match spec {
        DomainSpec::LevelBand { k1, k2 } => {
            let l = log_modulus_ratio(pt, rho);
            (k1.ln() - l).max(l - k2.ln())
        }
        DomainSpec::SubLevel { k } => log_modulus_ratio(pt, rho) - k.ln(),
        DomainSpec::SuperLevel { k } => k.ln() - log_modulus_ratio(pt, rho),
        DomainSpec::Nemirovskii { a_coef, b_coef } => a_coef * pt.1.re + b_coef * pt.1.im,
        DomainSpec::Implicit { psi, .. } => (psi.0)(pt),
        DomainSpec::LeafFamily {
            region,
            zero,
            infinity,
        } => {
            let inv = leaf_invariants(params)?;
            if pt.1.norm() == 0.0 {
                zero.residual()
            } else if pt.0.norm() == 0.0 {
                infinity.residual()
            } else {
                region.residual(leaf_coordinate(pt, &inv)?)
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainEval {
    pub residual: f64,
    pub inside: bool,
}

/// Residual at the canonical representative of `[pt]`.
pub fn evaluate_domain(spec: &DomainSpec, pt: Pair, params: &HopfParams) -> Result<DomainEval> {
    spec.validate(params)?;
    let rep = reduce(pt, params)?;
    let residual = local_residual(spec, rep.rep(), params)?;
    Ok(DomainEval {
        residual,
        inside: residual < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form")]
pub enum TranslatedForm {
    /// `C*_z x {cos(theta) u - sin(theta) v > 0}`.
    ProductHalfPlane { theta: f64 },
    /// `lower < |eta| / |xi|^rho < upper` (bounds may be `0` or `inf`).
    ModulusRegion { lower: f64, upper: f64, rho: f64 },
    /// Evaluated through the base residual at `(xi z, eta w)`.
    Generic,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslatedDomain {
    pub base: DomainSpec,
    pub anchor: HopfPoint,
    pub form: TranslatedForm,
    #[serde(skip)]
    params: HopfParams,
}

impl TranslatedDomain {
    pub fn params(&self) -> &HopfParams {
        &self.params
    }

    /// Negative inside `D[z,w]`.
    pub fn residual(&self, p: Pair) -> f64 {
        let (xi, eta) = p;
        match self.form {
            TranslatedForm::ProductHalfPlane { theta } => {
                -(theta.cos() * eta.re - theta.sin() * eta.im)
            }
            TranslatedForm::ModulusRegion { lower, upper, rho } => {
                let l = log_modulus_ratio(p, rho);
                (lower.ln() - l).max(l - upper.ln())
            }
            TranslatedForm::Generic => {
                let q = (xi * self.anchor.z, eta * self.anchor.w);
                local_residual(&self.base, q, &self.params).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.residual(p) < 0.0
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(IDENTITY)
    }

    /// Boundary points found by ray bisection from the box `|xi|, |eta| <= radius`.
    pub fn boundary_sample(&self, n: usize, radius: f64, seed: u64) -> (Vec<Pair>, usize) {
        let f = |p: Pair| self.residual(p);
        sampling::boundary_points(&f, radius, radius, n, seed)
    }
}

pub const IDENTITY: Pair = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));

/// Angle of the half-plane `delta(w')` for `Nemirovskii(A, B)` and anchor `w'`,
/// in `(-pi, pi]`. The anchor lies in the domain iff `|theta| < pi/2`.
pub fn nemirovskii_theta(a_coef: f64, b_coef: f64, w: Complex64) -> f64 {
    let v = -w * Complex64::new(a_coef, -b_coef);
    v.im.atan2(v.re)
}

pub fn translate_domain(
    spec: &DomainSpec,
    anchor_raw: Pair,
    params: &HopfParams,
) -> Result<TranslatedDomain> {
    spec.validate(params)?;
    let anchor = reduce(anchor_raw, params)?;
    let rho = params.rho();
    let c0 = || {
        let (nz, nw) = (anchor.z.norm(), anchor.w.norm());
        if nz == 0.0 {
            f64::INFINITY
        } else {
            nw / nz.powf(rho)
        }
    };
    let form = match spec {
        DomainSpec::Nemirovskii { a_coef, b_coef } if anchor.w.norm() > 0.0 => {
            TranslatedForm::ProductHalfPlane {
                theta: nemirovskii_theta(*a_coef, *b_coef, anchor.w),
            }
        }
        DomainSpec::LevelBand { k1, k2 } => TranslatedForm::ModulusRegion {
            lower: k1 / c0(),
            upper: k2 / c0(),
            rho,
        },
        DomainSpec::SubLevel { k } => TranslatedForm::ModulusRegion {
            lower: 0.0,
            upper: k / c0(),
            rho,
        },
        DomainSpec::SuperLevel { k } => TranslatedForm::ModulusRegion {
            lower: k / c0(),
            upper: f64::INFINITY,
            rho,
        },
        _ => TranslatedForm::Generic,
    };
    Ok(TranslatedDomain {
        base: spec.clone(),
        anchor,
        form,
        params: *params,
    })
}

/// `min over r >= 0` of `(r - r0)^2 + (k r^rho - s0)^2`, returned as a distance.
///
/// This is the distance from any point with moduli `(r0, s0)` to the surface
/// `{|eta| = k |xi|^rho}`, which is invariant under independent rotations of
/// both coordinates.
pub fn modulus_surface_distance(k: f64, rho: f64, r0: f64, s0: f64) -> f64 {
    modulus_surface_distance_grid(k, rho, r0, s0, 2048, 1e-13)
}

pub(crate) fn modulus_surface_distance_grid(
    k: f64,
    rho: f64,
    r0: f64,
    s0: f64,
    grid: usize,
    rel_tol: f64,
) -> f64 {
    let f = |r: f64| {
        let r = r.max(0.0);
        (r - r0).powi(2) + (k * r.powf(rho) - s0).powi(2)
    };
    let r_level = (s0 / k).powf(1.0 / rho);
    let reach = (r_level - r0).abs().min((k * r0.powf(rho) - s0).abs());
    let (lo, hi) = ((r0 - reach).max(0.0), r0 + reach);
    if hi <= lo {
        return f(r0).sqrt();
    }
    let h = (hi - lo) / grid as f64;
    let (mut best_i, mut best) = (0usize, f(lo));
    for i in 1..=grid {
        let v = f(lo + h * i as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        (lo + h * best_i.saturating_sub(1) as f64).max(lo),
        (lo + h * (best_i + 1) as f64).min(hi),
    );
    let g = 0.618_033_988_749_894_9;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > rel_tol * hi.max(1.0) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    best.min(f1).min(f2).min(f(a)).min(f(b)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceConfig {
    /// Rays cast from `e` for the sampled upper bound of generic domains.
    pub n_rays: usize,
    pub ray_length: f64,
    /// Lipschitz constant of the generic residual (for the lower bound).
    pub lipschitz: Option<f64>,
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            n_rays: 512,
            ray_length: 4.0,
            lipschitz: None,
            seed: 0x5eed,
        }
    }
}

/// `(lower, upper)` bounds on the distance from `e` to the boundary of `D[z,w]`.
pub fn distance_to_identity(td: &TranslatedDomain, cfg: &DistanceConfig) -> Result<(f64, f64)> {
    if !td.contains_identity() {
        return Err(HopfError::Domain(
            "the identity e = (1,1) is not in the translated domain".into(),
        ));
    }
    match td.form {
        TranslatedForm::ProductHalfPlane { theta } => {
            let d = theta.cos();
            Ok((d, d))
        }
        TranslatedForm::ModulusRegion { lower, upper, rho } => {
            let d = [lower, upper]
                .into_iter()
                .filter(|k| *k > 0.0 && k.is_finite())
                .map(|k| modulus_surface_distance(k, rho, 1.0, 1.0))
                .fold(f64::INFINITY, f64::min);
            Ok(((d - 1e-9).max(0.0), d))
        }
        TranslatedForm::Generic => {
            let mut rng = sampling::rng(cfg.seed);
            let f = |p: Pair| td.residual(p);
            let mut upper = f64::INFINITY;
            for _ in 0..cfg.n_rays {
                let d = sampling::sphere_direction(&mut rng);
                if let Some(q) = sampling::ray_root(&f, IDENTITY, d, cfg.ray_length, 400) {
                    let dist =
                        ((q.0 - IDENTITY.0).norm_sqr() + (q.1 - IDENTITY.1).norm_sqr()).sqrt();
                    upper = upper.min(dist);
                }
            }
            let lower = cfg
                .lipschitz
                .map(|l| (f(IDENTITY).abs() / l).min(upper))
                .unwrap_or(0.0);
            Ok((lower, upper))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyReport {
    pub boundary_samples: usize,
    pub skipped_rays: usize,
    /// `max |residual(exp(tX) p) - residual(p)|` over boundary samples and times.
    pub max_drift: f64,
    pub interior_samples: usize,
    /// Interior samples whose flow reached the closed complement.
    pub interior_escapes: usize,
    pub tangential: bool,
}

pub fn tangency_check(
    spec: &DomainSpec,
    x: &VectorField,
    n_samples: usize,
    t_grid: &[Complex64],
    tol: f64,
    params: &HopfParams,
    seed: u64,
) -> Result<TangencyReport> {
    spec.validate(params)?;
    let f = |p: Pair| local_residual(spec, p, params).unwrap_or(f64::NAN);
    let (rz, rw) = (params.a().norm(), params.b().norm());
    let (bdry, skipped) = sampling::boundary_points(&f, rz, rw, n_samples, seed);

    let mut drift = 0.0f64;
    for &p in &bdry {
        let f0 = f(p);
        for &t in t_grid {
            let v = f(flow_point(x, p, t));
            let d = (v - f0).abs();
            drift = if d.is_nan() {
                f64::INFINITY
            } else {
                drift.max(d)
            };
        }
    }

    let mut rng = sampling::rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (mut interior, mut escapes) = (0usize, 0usize);
    for _ in 0..50 * n_samples {
        if interior == n_samples {
            break;
        }
        let p = (
            sampling::disk_point(&mut rng, rz),
            sampling::disk_point(&mut rng, rw),
        );
        if f(p).is_nan() || f(p) >= -tol {
            continue;
        }
        interior += 1;
        if t_grid
            .iter()
            .any(|&t| f(flow_point(x, p, t)).partial_cmp(&0.0) != Some(std::cmp::Ordering::Less))
        {
            escapes += 1;
        }
    }

    Ok(TangencyReport {
        boundary_samples: bdry.len(),
        skipped_rays: skipped,
        max_drift: drift,
        interior_samples: interior,
        interior_escapes: escapes,
        tangential: !bdry.is_empty() && drift <= tol && escapes == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Theorem1Type {
    A1,
    A2prime,
    A2doubleprime,
    B2 { delta: String },
    SteinCandidate,
    NemirovskiiStein,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessLeaf {
    pub leaf: LeafSpec,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum SteinVerdict {
    NotStein { witness: WitnessLeaf },
    Stein { reference: String },
    Undetermined { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub kind: String,
    pub theorem1_type: Theorem1Type,
    pub stein_verdict: SteinVerdict,
    pub notes: Vec<String>,
}

const BOTH_TORI_REMARK: &str = "We suspect that under the hypotheses of Lemma 4.5 conclusion (2) must always hold, but we are unable to verify this.";

fn modulus_witness(c: f64) -> SteinVerdict {
    SteinVerdict::NotStein {
        witness: WitnessLeaf {
            leaf: LeafSpec::ModulusLeaf { c },
            description: format!(
                "Sigma_{c} = {{|w| = {c} |z|^rho}}: compact Levi-flat hypersurface in D"
            ),
        },
    }
}

/// Verdict table of Theorem 1 and the lemmas on Stein domains.
pub fn classify_domain(spec: &DomainSpec, inv: &InvariantSet) -> Result<ClassificationResult> {
    let mut notes = Vec::new();
    let (theorem1_type, stein_verdict) = match spec {
        DomainSpec::LevelBand { k1, k2 } => {
            DomainSpec::level_band(*k1, *k2)?;
            (Theorem1Type::A1, modulus_witness((k1 * k2).sqrt()))
        }
        DomainSpec::SubLevel { k } => {
            positive(*k)?;
            notes.push("D contains T_a".into());
            (Theorem1Type::A2prime, modulus_witness(k / 2.0))
        }
        DomainSpec::SuperLevel { k } => {
            positive(*k)?;
            notes.push("D contains T_b".into());
            (Theorem1Type::A2doubleprime, modulus_witness(2.0 * k))
        }
        DomainSpec::LeafFamily {
            region,
            zero,
            infinity,
        } => {
            if inv.case_tag != CaseTag::CaseB2 {
                return Err(HopfError::Case(format!(
                    "leaf families need case B2, got {}",
                    inv.case_tag.as_str()
                )));
            }
            let nu = inv.nu.expect("case B2 has nu");
            let zeta = region.interior_point().ok_or_else(|| {
                HopfError::Domain("region delta has no interior point on the search grid".into())
            })?;
            let c = principal_power(zeta, 1.0 / nu as f64);
            let mut delta = region.describe();
            if *zero == PointStatus::Boundary && *infinity == PointStatus::Boundary {
                delta.push_str("; 0, inf in boundary(delta)");
                notes.push("0, inf lie on the boundary of delta".into());
                notes.push(BOTH_TORI_REMARK.into());
            } else if *zero == PointStatus::Boundary {
                notes.push("0 lies on the boundary of delta: T_a is in the boundary of D".into());
            } else if *infinity == PointStatus::Boundary {
                notes.push("inf lies on the boundary of delta: T_b is in the boundary of D".into());
            }
            (
                Theorem1Type::B2 { delta },
                SteinVerdict::NotStein {
                    witness: WitnessLeaf {
                        leaf: LeafSpec::ComplexLeaf { c },
                        description: format!(
                            "sigma_c = {{w = c z^rho}} with c = ({}, {}), c^nu = ({}, {}): compact torus in D",
                            c.re, c.im, zeta.re, zeta.im
                        ),
                    },
                },
            )
        }
        DomainSpec::Nemirovskii { a_coef, b_coef } => {
            if a_coef.hypot(*b_coef) == 0.0 {
                return Err(HopfError::invalid("(A, B) must not vanish"));
            }
            notes.push("boundary is Levi-flat".into());
            (
                Theorem1Type::NemirovskiiStein,
                SteinVerdict::Stein {
                    reference: "Nemirovskii-type domains are Stein (Lemma 4.4)".into(),
                },
            )
        }
        DomainSpec::Implicit {
            boundary_contains_ta,
            boundary_contains_tb,
            ..
        } => {
            let reason = if *boundary_contains_ta && *boundary_contains_tb {
                notes.push(BOTH_TORI_REMARK.into());
                "boundary contains T_a and T_b: Stein, or a leaf family with 0, inf in boundary(delta)"
            } else {
                "no verdict from the table; see levi-scan and robin diagnostics"
            };
            (
                Theorem1Type::SteinCandidate,
                SteinVerdict::Undetermined {
                    reason: reason.into(),
                },
            )
        }
    };
    Ok(ClassificationResult {
        kind: spec.kind_name().into(),
        theorem1_type,
        stein_verdict,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NemirovskiiReport {
    pub forward_samples: usize,
    pub forward_in_d: usize,
    /// Samples whose z-index is at least the w-index (reduction lands in `E2' x K2''`).
    pub case1: usize,
    pub case2: usize,
    pub backward_samples: usize,
    pub backward_in_n: usize,
    /// Points with `Re w < 0` that reduced into `D` (must be zero).
    pub negative_control_hits: usize,
    pub failures: usize,
}

/// Membership in `D = (E1' x K1'') u (E2' x K2'')` (with the reduction's slack on outer circles).
pub fn in_nemirovskii_fundamental_piece(pt: Pair, params: &HopfParams) -> bool {
    let slack = 1.0 + crate::quotient::BOUNDARY_SLACK;
    let (nz, nw) = (pt.0.norm(), pt.1.norm());
    let (ra, b) = (params.a().norm(), params.b().re);
    let re_pos = pt.1.re > 0.0;
    let e1 = nz <= ra * slack && nw > 1.0 && nw <= b * slack && re_pos;
    let e2 = nz > 1.0 && nz <= ra * slack && nw <= b * slack && re_pos;
    e1 || e2
}

pub fn verify_nemirovskii_quotient(
    params: &HopfParams,
    n_samples: usize,
    seed: u64,
) -> Result<NemirovskiiReport> {
    if !params.b_is_real_gt_one() {
        return Err(HopfError::Validation(format!(
            "Nemirovskii quotient needs b real and > 1, got b = {}",
            params.b()
        )));
    }
    let mut rng = sampling::rng(seed);
    let (la, lb) = (params.log_abs_a(), params.log_abs_b());
    let mut rep = NemirovskiiReport {
        forward_samples: n_samples,
        forward_in_d: 0,
        case1: 0,
        case2: 0,
        backward_samples: n_samples,
        backward_in_n: 0,
        negative_control_hits: 0,
        failures: 0,
    };
    let idx = |x: f64, l: f64| (x.ln() / l - 1.0).ceil() as i64;

    for _ in 0..n_samples {
        let z = Complex64::from_polar(
            (la * rng.random_range(-8.0..8.0)).exp(),
            rng.random_range(0.0..2.0 * PI),
        );
        let w_arg = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
        let w = Complex64::from_polar((lb * rng.random_range(-8.0..8.0)).exp(), w_arg);
        if w.re <= 0.0 {
            continue;
        }
        let (n, m) = (idx(z.norm(), la), idx(w.norm(), lb));
        if n >= m {
            rep.case1 += 1;
        } else {
            rep.case2 += 1;
        }
        let r = reduce((z, w), params)?;
        if in_nemirovskii_fundamental_piece(r.rep(), params) {
            rep.forward_in_d += 1;
        } else {
            rep.failures += 1;
        }
        let r_neg = reduce((z, -w), params)?;
        if in_nemirovskii_fundamental_piece(r_neg.rep(), params) {
            rep.negative_control_hits += 1;
            rep.failures += 1;
        }
    }

    let b = params.b().re;
    for _ in 0..n_samples {
        let (z, w) = if rng.random::<bool>() {
            let z = sampling::disk_point(&mut rng, params.a().norm());
            let w = Complex64::from_polar(
                rng.random_range(1.0..b),
                rng.random_range(-FRAC_PI_2..FRAC_PI_2),
            );
            (z, w)
        } else {
            let z = Complex64::from_polar(
                rng.random_range(1.0..params.a().norm()),
                rng.random_range(0.0..2.0 * PI),
            );
            let w = Complex64::from_polar(
                b * rng.random::<f64>().sqrt(),
                rng.random_range(-FRAC_PI_2..FRAC_PI_2),
            );
            (z, w)
        };
        let n: i64 = rng.random_range(-10..=10);
        let lifted = crate::quotient::lift_by((z, w), n, params);
        if lifted.1.re > 0.0 {
            rep.backward_in_n += 1;
        } else {
            rep.failures += 1;
        }
    }
    rep.forward_samples = rep.case1 + rep.case2;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn rp(z: f64, w: f64) -> Pair {
        (c64(z, 0.0), c64(w, 0.0))
    }

    #[test]
    fn evaluate_examples() {
        let p = HopfParams::real(2.0, 3.0).unwrap();
        let band = DomainSpec::level_band(0.5, 2.0).unwrap();
        let z = c64(1.3, 0.4);
        let w = principal_power(z, p.rho());
        let ev = evaluate_domain(&band, (z, w), &p).unwrap();
        assert!((ev.residual - 0.5f64.ln().max(-(2f64.ln()))).abs() < 1e-12);
        assert!(ev.inside);

        let p = HopfParams::real(2.0, 4.0).unwrap();
        let nem = DomainSpec::nemirovskii(1.0, 0.0).unwrap();
        let ev = evaluate_domain(&nem, rp(1.0, 1.0), &p).unwrap();
        assert!(!ev.inside && ev.residual > 0.0);
        let ev = evaluate_domain(&nem, rp(1.0, -1.0), &p).unwrap();
        assert!(ev.inside && ev.residual < 0.0);

        let bad = HopfParams::new(c64(2.0, 0.0), c64(0.0, 4.0)).unwrap();
        assert!(matches!(
            evaluate_domain(&nem, rp(1.0, 1.0), &bad),
            Err(HopfError::Validation(_))
        ));
    }

    #[test]
    fn nemirovskii_translate_is_a_half_plane() {
        let p = HopfParams::real(2.0, 4.0).unwrap();
        let d = DomainSpec::nemirovskii(-1.0, 0.0).unwrap();
        let w = Complex64::from_polar(0.8, 0.4);
        let td = translate_domain(&d, (c64(1.3, 0.0), w), &p).unwrap();
        match td.form {
            TranslatedForm::ProductHalfPlane { theta } => assert!((theta - 0.4).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(td.contains_identity());
        let (lo, hi) = distance_to_identity(&td, &DistanceConfig::default()).unwrap();
        assert_eq!(lo, hi);
        assert_eq!(lo, 0.4f64.cos());
    }

    #[test]
    fn distance_examples() {
        let p = HopfParams::real(2.0, 4.0).unwrap();
        let d = DomainSpec::nemirovskii(-1.0, 0.0).unwrap();
        let td = translate_domain(&d, rp(1.5, 1.0), &p).unwrap();
        assert_eq!(
            distance_to_identity(&td, &DistanceConfig::default()).unwrap(),
            (1.0, 1.0)
        );
        let td = translate_domain(
            &d,
            (c64(1.5, 0.0), Complex64::from_polar(1.0, PI / 3.0)),
            &p,
        )
        .unwrap();
        let (lo, _) = distance_to_identity(&td, &DistanceConfig::default()).unwrap();
        assert!((lo - 0.5).abs() < 1e-15);
    }

    #[test]
    fn modulus_distance_matches_brute_force() {
        for &(k, rho) in &[
            (0.5, 1.0),
            (2.0, 1.5849625007211563),
            (0.3, 2.0),
            (4.0, 3.0),
        ] {
            let d = modulus_surface_distance(k, rho, 1.0, 1.0);
            let brute = (0..400_000)
                .map(|i| {
                    let r = i as f64 * 1e-5;
                    ((r - 1.0).powi(2) + (k * r.powf(rho) - 1.0).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(
                d <= brute + 1e-12 && brute - d < 1e-8,
                "k={k} rho={rho}: {d} vs {brute}"
            );
        }
    }

    #[test]
    fn verdict_table() {
        let p = HopfParams::real(2.0, 3.0).unwrap();
        let inv = derive_invariants(&p, RationalityMode::default()).unwrap();
        let r = classify_domain(&DomainSpec::level_band(0.5, 2.0).unwrap(), &inv).unwrap();
        assert_eq!(r.theorem1_type, Theorem1Type::A1);
        match r.stein_verdict {
            SteinVerdict::NotStein { witness } => {
                assert_eq!(witness.leaf, LeafSpec::ModulusLeaf { c: 1.0 })
            }
            other => panic!("{other:?}"),
        }
        let fam = DomainSpec::leaf_family(LeafRegion::Annulus {
            inner: 0.0,
            outer: f64::INFINITY,
        })
        .unwrap();
        assert!(matches!(
            classify_domain(&fam, &inv),
            Err(HopfError::Case(_))
        ));
        let inv_b2 = derive_invariants(
            &HopfParams::real(2.0, -4.0).unwrap(),
            RationalityMode::default(),
        )
        .unwrap();
        let r = classify_domain(&fam, &inv_b2).unwrap();
        match r.theorem1_type {
            Theorem1Type::B2 { delta } => assert!(delta.contains("0, inf in boundary(delta)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nemirovskii_reduction_examples() {
        let p = HopfParams::real(2.0, 4.0).unwrap();
        let r = reduce(rp(8.0, 2.0), &p).unwrap();
        assert_eq!(r.rep(), rp(2.0, 0.125));
        assert!(in_nemirovskii_fundamental_piece(r.rep(), &p));
        let r = reduce(rp(1.0, 8.0), &p).unwrap();
        assert_eq!(r.rep(), rp(0.5, 2.0));
        assert!(in_nemirovskii_fundamental_piece(r.rep(), &p));
        let rep = verify_nemirovskii_quotient(&p, 500, 3).unwrap();
        assert_eq!(rep.failures, 0);
        assert!(rep.case1 > 0 && rep.case2 > 0);
    }
}
