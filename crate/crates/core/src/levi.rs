//! Levi forms and pseudoconvexity.
//!
//! For a real defining function `psi` of `D = {psi < 0}` the Levi form
//!
//! `L psi = psi_zzbar |psi_w|^2 - 2 Re{psi_zwbar conj(psi_z) psi_w} + psi_wwbar |psi_z|^2`
//!
//! is nonnegative on `{psi = 0}` exactly when `D` is pseudoconvex there.
//!
//! The second half of the module works with local boundary models
//! `psi = v + p0(z) + p1(z) u + p2(z) u^2 + ...` (`w = u + iv`) whose
//! coefficients are Hermitian polynomials in `z`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::domains::{local_residual, DomainSpec};
use crate::invariants::HopfParams;
use crate::quotient::reduce;
use crate::sampling;
use crate::{Complex64, HopfError, Pair, Result};

/// Value, first and second Wirtinger derivatives of a real function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet2 {
    pub psi: f64,
    pub d_z: Complex64,
    pub d_w: Complex64,
    pub d_zzbar: f64,
    pub d_wwbar: f64,
    pub d_zwbar: Complex64,
    pub point: Pair,
}

impl Jet2 {
    pub fn scaled(&self, lambda: f64) -> Jet2 {
        Jet2 {
            psi: self.psi * lambda,
            d_z: self.d_z * lambda,
            d_w: self.d_w * lambda,
            d_zzbar: self.d_zzbar * lambda,
            d_wwbar: self.d_wwbar * lambda,
            d_zwbar: self.d_zwbar * lambda,
            point: self.point,
        }
    }
}

pub fn levi_form(j: &Jet2) -> f64 {
    j.d_zzbar * j.d_w.norm_sqr() - 2.0 * (j.d_zwbar * j.d_z.conj() * j.d_w).re
        + j.d_wwbar * j.d_z.norm_sqr()
}

/// Central differences in `(x, y, u, v)` with `z = x + iy`, `w = u + iv`;
/// errors are `O(h^2)`.
pub fn numeric_jet(psi: &dyn Fn(Pair) -> f64, point: Pair, h: f64) -> Result<Jet2> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(HopfError::invalid("step h must be positive"));
    }
    let coords = [point.0.re, point.0.im, point.1.re, point.1.im];
    let eval = |d: [f64; 4]| -> Result<f64> {
        let c: Vec<f64> = coords.iter().zip(d).map(|(x, dx)| x + dx).collect();
        let v = psi((Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3])));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HopfError::Evaluation(format!(
                "non-finite value on the stencil at {c:?}"
            )))
        }
    };
    let e = |i: usize, s: f64| {
        let mut d = [0.0; 4];
        d[i] = s;
        d
    };
    let f0 = eval([0.0; 4])?;
    let mut g = [0.0; 4];
    let mut hess_diag = [0.0; 4];
    for i in 0..4 {
        let (fp, fm) = (eval(e(i, h))?, eval(e(i, -h))?);
        g[i] = (fp - fm) / (2.0 * h);
        hess_diag[i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    let mixed = |i: usize, j: usize| -> Result<f64> {
        let d = |si: f64, sj: f64| {
            let mut d = [0.0; 4];
            d[i] = si;
            d[j] = sj;
            d
        };
        Ok((eval(d(h, h))? - eval(d(h, -h))? - eval(d(-h, h))? + eval(d(-h, -h))?) / (4.0 * h * h))
    };
    let (fxu, fxv, fyu, fyv) = (mixed(0, 2)?, mixed(0, 3)?, mixed(1, 2)?, mixed(1, 3)?);
    Ok(Jet2 {
        psi: f0,
        d_z: Complex64::new(g[0], -g[1]) * 0.5,
        d_w: Complex64::new(g[2], -g[3]) * 0.5,
        d_zzbar: 0.25 * (hess_diag[0] + hess_diag[1]),
        d_wwbar: 0.25 * (hess_diag[2] + hess_diag[3]),
        d_zwbar: Complex64::new(fxu + fyv, fxv - fyu) * 0.25,
        point,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeviPoint {
    pub z: Complex64,
    pub w: Complex64,
    pub levi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeviScanReport {
    pub samples: usize,
    pub skipped_rays: usize,
    pub min_levi: f64,
    pub max_abs_levi: f64,
    pub violating: Vec<LeviPoint>,
    pub pseudoconvex_at_samples: bool,
}

impl LeviScanReport {
    pub fn write_violations_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let io = |e: csv::Error| HopfError::Evaluation(format!("csv: {e}"));
        wtr.write_record(["z_re", "z_im", "w_re", "w_im", "levi"])
            .map_err(io)?;
        for p in &self.violating {
            wtr.serialize((p.z.re, p.z.im, p.w.re, p.w.im, p.levi))
                .map_err(io)?;
        }
        wtr.flush()
            .map_err(|e| HopfError::Evaluation(e.to_string()))
    }
}

/// Levi form of the domain residual at boundary points found along random rays.
///
/// Deck-invariant families are evaluated at the canonical representative of
/// each boundary point, with the stencil kept on that lift.
pub fn pseudoconvexity_scan(
    spec: &DomainSpec,
    n_samples: usize,
    tol: f64,
    params: &HopfParams,
    seed: u64,
) -> Result<LeviScanReport> {
    spec.validate(params)?;
    let f = |p: Pair| local_residual(spec, p, params).unwrap_or(f64::NAN);
    let (pts, mut skipped) =
        sampling::boundary_points(&f, params.a().norm(), params.b().norm(), n_samples, seed);
    let reduce_first = !matches!(spec, DomainSpec::Implicit { .. });
    let mut min_levi = f64::INFINITY;
    let mut max_abs = 0.0f64;
    let mut violating = Vec::new();
    let mut used = 0usize;
    for p in pts {
        let q = if reduce_first {
            reduce(p, params)?.rep()
        } else {
            p
        };
        let scale = q.0.norm().min(q.1.norm()).clamp(1e-3, 1.0);
        let jet = match numeric_jet(&f, q, 1e-4 * scale) {
            Ok(j) => j,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        used += 1;
        let l = levi_form(&jet);
        min_levi = min_levi.min(l);
        max_abs = max_abs.max(l.abs());
        if l < -tol {
            violating.push(LeviPoint {
                z: q.0,
                w: q.1,
                levi: l,
            });
        }
    }
    Ok(LeviScanReport {
        samples: used,
        skipped_rays: skipped,
        min_levi,
        max_abs_levi: max_abs,
        pseudoconvex_at_samples: used > 0 && violating.is_empty(),
        violating,
    })
}

/// Maximum total degree of a boundary-model coefficient.
pub const MAX_DEGREE: u32 = 16;

/// One coefficient `c_jk` (`j >= k`) of a [`HermitianPoly`]; `c_kj` is its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianTerm {
    pub j: u32,
    pub k: u32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A real polynomial `sum c_jk z^j zbar^k` with `c_kj = conj(c_jk)`.
///
/// Serialized as the list of coefficients with `j >= k`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<HermitianTerm>", try_from = "Vec<HermitianTerm>")]
pub struct HermitianPoly {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl HermitianPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    fn add(&mut self, j: u32, k: u32, c: Complex64) {
        *self
            .coeffs
            .entry((j, k))
            .or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn check_degree(j: u32, k: u32) -> Result<()> {
        if j + k > MAX_DEGREE {
            return Err(HopfError::invalid(format!(
                "term z^{j} zbar^{k} exceeds the degree limit {MAX_DEGREE}"
            )));
        }
        Ok(())
    }

    /// `sum Re(a z^j zbar^k)` over the given terms.
    pub fn from_re_terms(terms: &[(u32, u32, Complex64)]) -> Result<Self> {
        let mut p = Self::zero();
        for &(j, k, a) in terms {
            Self::check_degree(j, k)?;
            if j == k {
                p.add(j, j, Complex64::new(a.re, 0.0));
            } else {
                p.add(j, k, a * 0.5);
                p.add(k, j, a.conj() * 0.5);
            }
        }
        p.prune();
        Ok(p)
    }

    /// `sum b_mn x^m y^n` with `z = x + iy`.
    pub fn from_real_xy(terms: &[(u32, u32, f64)]) -> Result<Self> {
        // x = (z + zbar)/2, y = (z - zbar)/(2i).
        let mut p = Self::zero();
        for &(m, n, b) in terms {
            Self::check_degree(m, n)?;
            let scale = b / 2f64.powi((m + n) as i32);
            let i_pow = Complex64::new(0.0, -1.0).powi(n as i32);
            for s in 0..=m {
                for t in 0..=n {
                    let sign = if (n - t) % 2 == 0 { 1.0 } else { -1.0 };
                    let c = i_pow * (scale * binom(m, s) * binom(n, t) * sign);
                    // z^(s + t) zbar^(m - s + n - t)
                    p.add(s + t, m - s + n - t, c);
                }
            }
        }
        p.prune();
        Ok(p)
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() > 1e-300);
    }

    /// `c_jk`.
    pub fn coeff(&self, j: u32, k: u32) -> Complex64 {
        self.coeffs
            .get(&(j, k))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Coefficient `a_jk` in `p = sum_{j > k} Re(a_jk z^j zbar^k) + sum a_jj |z|^2j`.
    pub fn re_coeff(&self, j: u32, k: u32) -> Complex64 {
        if j == k {
            self.coeff(j, j)
        } else {
            self.coeff(j, k) * 2.0
        }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(j, k)| j + k).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|(j, k)| j + k).min()
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        let zb = z.conj();
        self.coeffs
            .iter()
            .map(|(&(j, k), c)| (c * z.powu(j) * zb.powu(k)).re)
            .sum()
    }

    /// `dp/dz`.
    pub fn d_z(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.coeffs
            .iter()
            .filter(|(&(j, _), _)| j > 0)
            .map(|(&(j, k), c)| c * (j as f64) * z.powu(j - 1) * zb.powu(k))
            .sum()
    }

    /// `d^2 p / dz dzbar`.
    pub fn d_zzbar(&self, z: Complex64) -> f64 {
        let zb = z.conj();
        self.coeffs
            .iter()
            .filter(|(&(j, k), _)| j > 0 && k > 0)
            .map(|(&(j, k), c)| (c * (j * k) as f64 * z.powu(j - 1) * zb.powu(k - 1)).re)
            .sum()
    }
}

impl From<HermitianPoly> for Vec<HermitianTerm> {
    fn from(p: HermitianPoly) -> Self {
        p.coeffs
            .iter()
            .filter(|(&(j, k), _)| j >= k)
            .map(|(&(j, k), c)| HermitianTerm {
                j,
                k,
                re: c.re,
                im: c.im,
            })
            .collect()
    }
}

impl TryFrom<Vec<HermitianTerm>> for HermitianPoly {
    type Error = HopfError;

    fn try_from(terms: Vec<HermitianTerm>) -> Result<Self> {
        let mut p = HermitianPoly::zero();
        for t in terms {
            HermitianPoly::check_degree(t.j, t.k)?;
            let c = Complex64::new(t.re, t.im);
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(HopfError::invalid("coefficients must be finite"));
            }
            if t.j < t.k {
                return Err(HopfError::invalid("list coefficients c_jk with j >= k"));
            }
            if t.j == t.k {
                if t.im != 0.0 {
                    return Err(HopfError::invalid(
                        "diagonal coefficients c_jj must be real",
                    ));
                }
                p.add(t.j, t.j, c);
            } else {
                p.add(t.j, t.k, c);
                p.add(t.k, t.j, c.conj());
            }
        }
        p.prune();
        Ok(p)
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `psi = v + p0(z) + p1(z) u + p2(z) u^2 + ...` with `p0(0) = p1(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryModel {
    pub p_coeffs: Vec<HermitianPoly>,
    #[serde(default)]
    pub truncation_degree: u32,
}

impl BoundaryModel {
    pub fn new(p_coeffs: Vec<HermitianPoly>) -> Result<Self> {
        if p_coeffs.is_empty() {
            return Err(HopfError::invalid("a boundary model needs at least p0"));
        }
        let truncation_degree = p_coeffs
            .iter()
            .map(HermitianPoly::degree)
            .max()
            .unwrap_or(0);
        let m = BoundaryModel {
            p_coeffs,
            truncation_degree,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation_degree > MAX_DEGREE
            || self.p_coeffs.iter().any(|p| p.degree() > MAX_DEGREE)
        {
            return Err(HopfError::invalid(format!(
                "model degree exceeds {MAX_DEGREE}"
            )));
        }
        for i in 0..2.min(self.p_coeffs.len()) {
            if self.p_coeffs[i].coeff(0, 0).norm() > 0.0 {
                return Err(HopfError::invalid(format!("p{i}(0) must vanish")));
            }
        }
        Ok(())
    }

    pub fn p(&self, i: usize) -> HermitianPoly {
        self.p_coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn p0(&self) -> &HermitianPoly {
        &self.p_coeffs[0]
    }

    /// `F(z, u) = p0(z) + p1(z) u + p2(z) u^2 + ...`, so that `S(z) = {v = -F(z, u)}`.
    pub fn arc(&self, z: Complex64, u: f64) -> f64 {
        self.p_coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, p| acc * u + p.eval(z))
    }

    /// `psi(z, w) = v + F(z, u)`.
    pub fn psi(&self, z: Complex64, w: Complex64) -> f64 {
        w.im + self.arc(z, w.re)
    }
}

/// Left-hand side of the model's Levi inequality on `{u = 0}`:
/// `(1 + p1^2) p0_zzbar - 2 Re{p1_z conj(p0_z) (-i + p1)} + 2 p2 |p0_z|^2`.
pub fn levi2_residual(model: &BoundaryModel, z: Complex64) -> f64 {
    let (p0, p1, p2) = (model.p(0), model.p(1), model.p(2));
    let p1v = p1.eval(z);
    let d0 = p0.d_z(z);
    (1.0 + p1v * p1v) * p0.d_zzbar(z) - 2.0 * (p1.d_z(z) * d0.conj() * Complex64::new(p1v, -1.0)).re
        + 2.0 * p2.eval(z) * d0.norm_sqr()
}

/// `g(Z) = sum c_m Z^m` stored as `(m, c_m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GPolynomial {
    pub terms: Vec<(u32, Complex64)>,
}

impl GPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(m, c)| c * z.powu(m)).sum()
    }
}

const CIRCLE_GRID: usize = 4096;

/// Grid-plus-golden-section maximization of a function on `[0, 2pi)`.
fn maximize_periodic(f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let h = TAU / CIRCLE_GRID as f64;
    let (mut bi, mut bv) = (0usize, f(0.0));
    for i in 1..CIRCLE_GRID {
        let v = f(h * i as f64);
        if v > bv {
            bv = v;
            bi = i;
        }
    }
    let (mut a, mut b) = (h * (bi as f64 - 1.0), h * (bi as f64 + 1.0));
    let g = 0.618_033_988_749_894_9;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 > f2 {
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
    let (xt, vt) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if vt >= bv {
        (xt.rem_euclid(TAU), vt)
    } else {
        (h * bi as f64, bv)
    }
}

/// `theta*` maximizing `Re g(e^{i theta})`, with the maximal value.
pub fn maximize_re_on_circle(g: &GPolynomial) -> (f64, f64) {
    maximize_periodic(&|t| g.eval(Complex64::from_polar(1.0, t)).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiamondCase {
    /// `dp0/dz(0) != 0`.
    Gradient,
    /// `a11 > 0`: strict subharmonicity, search on a circle.
    Subharmonic,
    /// `a11 = 0`, `a20 != 0`.
    Quadratic,
    /// Odd leading order `2n - 1`.
    CaseI { n: u32 },
    /// Even leading order `2n` with a non-radial term.
    CaseII1 { n: u32 },
    /// Even leading order `2n`, purely radial `a_nn |z|^2n`.
    CaseII2 { n: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum DiamondOutcome {
    Found {
        z_star: Complex64,
        p0_value: f64,
        case: DiamondCase,
        halvings: u32,
        trace: Vec<String>,
        warnings: Vec<String>,
    },
    NotFound {
        case: Option<DiamondCase>,
        trace: Vec<String>,
        warnings: Vec<String>,
    },
}

impl DiamondOutcome {
    pub fn z_star(&self) -> Option<(Complex64, f64)> {
        match self {
            DiamondOutcome::Found {
                z_star, p0_value, ..
            } => Some((*z_star, *p0_value)),
            _ => None,
        }
    }
}

const SHRINK_BUDGET: u32 = 60;
const ZERO_COEFF: f64 = 1e-14;

/// The g-polynomial for leading order `d` of `p0`, with the case it belongs to.
pub fn g_polynomial(p0: &HermitianPoly, d: u32) -> Result<(DiamondCase, Option<GPolynomial>)> {
    if d % 2 == 1 {
        let n = d.div_ceil(2);
        let terms = (0..n)
            .map(|k| (2 * n - 1 - 2 * k, p0.re_coeff(2 * n - 1 - k, k)))
            .filter(|(_, c)| c.norm() > ZERO_COEFF)
            .collect();
        return Ok((DiamondCase::CaseI { n }, Some(GPolynomial { terms })));
    }
    let n = d / 2;
    let upper: Vec<(u32, Complex64)> = (0..n).map(|k| (k, p0.re_coeff(2 * n - k, k))).collect();
    if upper.iter().all(|(_, c)| c.norm() <= ZERO_COEFF) {
        return Ok((DiamondCase::CaseII2 { n }, None));
    }
    let mut terms = Vec::new();
    for (k, c) in upper {
        let factor = 1.0 - ((2 * n - k) * k) as f64 / (n * n) as f64;
        if factor.abs() < 1e-12 {
            return Err(HopfError::Evaluation(format!(
                "Case II-1 factor 1 - (2n-k)k/n^2 vanishes for n = {n}, k = {k}"
            )));
        }
        if c.norm() > ZERO_COEFF {
            terms.push((2 * n - 2 * k, c * factor));
        }
    }
    Ok((DiamondCase::CaseII1 { n }, Some(GPolynomial { terms })))
}

/// Finds `z*` with `|z*| < r1` and `p0(z*) > 0` by the case ladder of the
/// covering argument.
pub fn diamond_search(model: &BoundaryModel, r1: f64) -> Result<DiamondOutcome> {
    model.validate()?;
    if !(r1 > 0.0 && r1.is_finite()) {
        return Err(HopfError::invalid("r1 must be positive"));
    }
    let p0 = model.p0().clone();
    let mut trace = Vec::new();
    let mut warnings = Vec::new();

    for i in 0..=16 {
        let z = Complex64::from_polar(
            0.5 * r1 * (i as f64 / 16.0),
            TAU * (i as f64) * 0.618_033_988_749_894_9,
        );
        let v = levi2_residual(model, z);
        if v < -1e-12 {
            warnings.push(format!(
                "levi-2 inequality fails at z = ({:.3e}, {:.3e}): {v:.3e}",
                z.re, z.im
            ));
        }
    }

    if p0.is_zero() {
        trace.push("p0 vanishes identically".into());
        return Ok(DiamondOutcome::NotFound {
            case: None,
            trace,
            warnings,
        });
    }

    let c10 = p0.coeff(1, 0);
    let a11 = p0.coeff(1, 1).re;
    let a20 = p0.re_coeff(2, 0);

    // Each case yields a direction rule: radius -> candidate point.
    let (case, pick): (DiamondCase, Box<dyn Fn(f64) -> Complex64>) = if c10.norm() > ZERO_COEFF {
        let phase = -c10.arg();
        trace.push(format!(
            "gradient case: dp0/dz(0) = ({:.6e}, {:.6e})",
            c10.re, c10.im
        ));
        (
            DiamondCase::Gradient,
            Box::new(move |r| Complex64::from_polar(r, phase)),
        )
    } else if a11 > ZERO_COEFF {
        trace.push(format!("a11 = {a11:.6e} > 0: searching circles |z| = r'/2"));
        let p = p0.clone();
        (
            DiamondCase::Subharmonic,
            Box::new(move |r| {
                let rr = 0.5 * r;
                let (t, _) = maximize_periodic(&|t| p.eval(Complex64::from_polar(rr, t)));
                Complex64::from_polar(rr, t)
            }),
        )
    } else if a20.norm() > ZERO_COEFF {
        if a11 < -ZERO_COEFF {
            warnings.push(format!("a11 = {a11:.3e} < 0 contradicts levi-2"));
        }
        let phase = -a20.arg() / 2.0;
        trace.push(format!("a11 = 0, a20 = ({:.6e}, {:.6e})", a20.re, a20.im));
        (
            DiamondCase::Quadratic,
            Box::new(move |r| Complex64::from_polar(r, phase)),
        )
    } else {
        let d = p0.order().expect("nonzero polynomial");
        let (case, g) = g_polynomial(&p0, d.max(3))?;
        match g {
            Some(g) => {
                let (theta, val) = maximize_re_on_circle(&g);
                trace.push(format!(
                    "{case:?}: max Re g(e^(i theta)) = {val:.6e} at theta* = {theta:.9}"
                ));
                if val <= 0.0 {
                    trace.push("g has no positive real part on the unit circle".into());
                    return Ok(DiamondOutcome::NotFound {
                        case: Some(case),
                        trace,
                        warnings,
                    });
                }
                (case, Box::new(move |r| Complex64::from_polar(r, theta)))
            }
            None => {
                let n = d / 2;
                let ann = p0.coeff(n, n).re;
                trace.push(format!("{case:?}: radial term a_nn = {ann:.6e}"));
                if ann <= 0.0 {
                    warnings.push("a_nn <= 0 contradicts levi-2".into());
                }
                let p = p0.clone();
                (
                    case,
                    Box::new(move |r| {
                        let (t, _) = maximize_periodic(&|t| p.eval(Complex64::from_polar(r, t)));
                        Complex64::from_polar(r, t)
                    }),
                )
            }
        }
    };

    let mut r = 0.5 * r1;
    for halvings in 0..=SHRINK_BUDGET {
        let z = pick(r);
        let v = p0.eval(z);
        if v > 0.0 && z.norm() < r1 {
            trace.push(format!(
                "accepted |z*| = {:.6e} after {halvings} halvings",
                z.norm()
            ));
            return Ok(DiamondOutcome::Found {
                z_star: z,
                p0_value: v,
                case,
                halvings,
                trace,
                warnings,
            });
        }
        r *= 0.5;
    }
    trace.push(format!(
        "shrink budget of {SHRINK_BUDGET} halvings exhausted"
    ));
    Ok(DiamondOutcome::NotFound {
        case: Some(case),
        trace,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub z_star: Complex64,
    pub p0_z_star: f64,
    /// Radius of the disk `{|w| < r'}` whose part in `D(0)` is swept by `S(z)`, `z in [0, z*]`.
    pub r_prime: f64,
    pub samples: usize,
    pub covered: usize,
    pub max_residual: f64,
    pub certified: bool,
}

/// Checks that `D(0) n {|w| < r'}` is covered by the arcs `S(z)` over the
/// segment `[0, z*]`.
pub fn sweep_cover_check(
    model: &BoundaryModel,
    r1: f64,
    n_w_samples: usize,
    seed: u64,
) -> Result<SweepReport> {
    model.validate()?;
    let p0 = model.p0();
    let nonzero = (1..=32).any(|i| {
        (0..32).any(|j| {
            let z = Complex64::from_polar(r1 * i as f64 / 33.0, TAU * j as f64 / 32.0);
            p0.eval(z).abs() > 1e-14
        })
    });
    if !nonzero {
        return Err(HopfError::Precondition(
            "p0 vanishes identically on the disk |z| < r1".into(),
        ));
    }
    let (z_star, p0v) = diamond_search(model, r1)?
        .z_star()
        .ok_or_else(|| HopfError::Evaluation("no z* with p0(z*) > 0 was found".into()))?;

    let min_arc = |r: f64| {
        (0..=256)
            .map(|i| model.arc(z_star, -r + 2.0 * r * i as f64 / 256.0))
            .fold(f64::INFINITY, f64::min)
    };
    let mut r_prime = p0v;
    let mut tries = 0;
    while min_arc(r_prime) < r_prime {
        r_prime *= 0.9;
        tries += 1;
        if tries > 400 {
            return Err(HopfError::Evaluation(
                "could not certify a covering radius".into(),
            ));
        }
    }

    let mut rng = sampling::rng(seed);
    let (mut samples, mut covered, mut max_res) = (0usize, 0usize, 0.0f64);
    let mut draws = 0;
    while samples < n_w_samples && draws < 100 * n_w_samples + 100 {
        draws += 1;
        let w = sampling::disk_point(&mut rng, r_prime);
        let h = |s: f64| w.im + model.arc(z_star * s, w.re);
        if h(0.0) >= 0.0 || h(0.0).is_nan() {
            continue;
        }
        samples += 1;
        let (mut lo, mut hi) = (0.0, 1.0);
        if h(hi) < 0.0 || h(hi).is_nan() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let res = h(hi).abs().min(h(lo).abs());
        max_res = max_res.max(res);
        if res <= 1e-12 {
            covered += 1;
        }
    }
    Ok(SweepReport {
        z_star,
        p0_z_star: p0v,
        r_prime,
        samples,
        covered,
        max_residual: max_res,
        certified: r_prime > 0.0 && samples > 0 && covered == samples,
    })
}
