//! Integral curves of `X = alpha z d/dz + beta w d/dw` on `H`.
//!
//! Flows are closed form: `exp(tX)(z0, w0) = (z0 e^{alpha t}, w0 e^{beta t})`.
//! The interesting part is what the orbit looks like after reduction to the
//! fundamental domain, which is read off from the fiber of the orbit over a
//! fixed `z'`:
//!
//! `w_{n,k}(z') = b^{-k} exp(r (Log z' + 2 pi i n + k log a))`, `r = beta / alpha`,
//!
//! where `n` runs over branches of the analytic continuation and `k` over deck
//! translates.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::io::Write;

use serde::Serialize;

use crate::invariants::{CaseTag, HopfParams, InvariantSet};
use crate::quotient::{reduce, HopfPoint};
use crate::{arg_2pi, Complex64, HopfError, Pair, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorField {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl VectorField {
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        VectorField { alpha, beta }
    }

    /// `X_u = log|a| z d/dz + log|b| w d/dw`, whose orbits are the leaves.
    pub fn x_u(params: &HopfParams) -> Self {
        VectorField::new(
            Complex64::new(params.log_abs_a(), 0.0),
            Complex64::new(params.log_abs_b(), 0.0),
        )
    }

    /// The field with `exp(1 * X) = (a, b)`: logarithms with arguments in `[0, 2pi)`.
    pub fn deck_generator(params: &HopfParams) -> Self {
        VectorField::new(params.log_a(), params.log_b())
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.norm() == 0.0 && self.beta.norm() == 0.0
    }

    /// `|alpha log|b| - beta log|a|| <= 1e-10 max(|alpha|, |beta|)`.
    pub fn is_proportional_to_xu(&self, params: &HopfParams) -> bool {
        let res = (self.alpha * params.log_abs_b() - self.beta * params.log_abs_a()).norm();
        res <= 1e-10 * self.alpha.norm().max(self.beta.norm())
    }
}

pub fn flow_point(x: &VectorField, start: Pair, t: Complex64) -> Pair {
    (start.0 * (x.alpha * t).exp(), start.1 * (x.beta * t).exp())
}

pub fn orbit_reduce_samples(
    x: &VectorField,
    start: Pair,
    t_grid: &[Complex64],
    params: &HopfParams,
) -> Result<Vec<HopfPoint>> {
    if start.0.norm() == 0.0 && start.1.norm() == 0.0 {
        return Err(HopfError::invalid("orbit start must not be (0, 0)"));
    }
    t_grid
        .iter()
        .map(|&t| reduce(flow_point(x, start, t), params))
        .collect()
}

/// `w_{n,k}(z')` on the orbit of `X` through `e = (1, 1)`.
pub fn fiber_value(
    x: &VectorField,
    z_prime: Complex64,
    params: &HopfParams,
    n: i64,
    k: i64,
) -> Result<Complex64> {
    if x.alpha.norm() == 0.0 {
        return Err(HopfError::FiberUndefined(
            "alpha = 0: the orbit is vertical and has no fiber over z'".into(),
        ));
    }
    if z_prime.norm() == 0.0 {
        return Err(HopfError::invalid("z' must be nonzero"));
    }
    let r = x.beta / x.alpha;
    let log_z = Complex64::new(z_prime.norm().ln(), arg_2pi(z_prime) + TAU * n as f64);
    Ok((r * (log_z + params.log_a() * k as f64) - params.log_b() * k as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberSample {
    pub n: i64,
    pub k: i64,
    pub w: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSet {
    pub z_prime: Complex64,
    /// Distinct values in enumeration order.
    pub samples: Vec<FiberSample>,
    pub min_abs: f64,
    pub max_abs: f64,
    /// Arguments in `[0, 2pi)`, aligned with `samples`.
    pub args: Vec<f64>,
    /// `(n, k)` pairs visited.
    pub steps: usize,
    /// Values that overflowed, underflowed to zero or were not finite.
    pub skipped: usize,
    /// The step budget ran out before `requested` distinct values were found.
    pub exhausted: bool,
    pub requested: usize,
}

impl FiberSet {
    pub fn values(&self) -> Vec<Complex64> {
        self.samples.iter().map(|s| s.w).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let io = |e: csv::Error| HopfError::Evaluation(format!("csv: {e}"));
        wtr.write_record(["n", "k", "z_re", "z_im", "w_re", "w_im", "abs_w", "arg_w"])
            .map_err(io)?;
        for (s, a) in self.samples.iter().zip(&self.args) {
            wtr.serialize((
                s.n,
                s.k,
                self.z_prime.re,
                self.z_prime.im,
                s.w.re,
                s.w.im,
                s.w.norm(),
                a,
            ))
            .map_err(io)?;
        }
        wtr.flush()
            .map_err(|e| HopfError::Evaluation(e.to_string()))
    }
}

/// Square rings `max(|n|, |k|) = r`, `r = 0, 1, 2, ...`.
fn square_spiral() -> impl Iterator<Item = (i64, i64)> {
    (0i64..).flat_map(|r| {
        (-r..=r).flat_map(move |n| {
            (-r..=r)
                .filter(move |&k| n.abs().max(k.abs()) == r)
                .map(move |k| (n, k))
        })
    })
}

/// `0, 1, -1, 2, -2, ...`.
fn line_spiral() -> impl Iterator<Item = (i64, i64)> {
    (0i64..).map(|j| {
        let n = (j + 1) / 2;
        (if j % 2 == 1 { n } else { -n }, 0)
    })
}

/// Deduplicates at relative scale `1e-12` in `(log|w|, w/|w|)` coordinates.
struct Dedup {
    seen: HashSet<(i64, i64, i64)>,
}

impl Dedup {
    const SCALE: f64 = 1e12;

    fn key(w: Complex64) -> (i64, i64, i64) {
        let m = w.norm();
        let u = w / m;
        (
            (m.ln() * Self::SCALE).round() as i64,
            (u.re * Self::SCALE).round() as i64,
            (u.im * Self::SCALE).round() as i64,
        )
    }

    fn insert(&mut self, w: Complex64) -> bool {
        let (a, b, c) = Self::key(w);
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if self.seen.contains(&(a + da, b + db, c + dc)) {
                        return false;
                    }
                }
            }
        }
        self.seen.insert((a, b, c))
    }
}

/// Fiber of the orbit of `X` through `e` over `z'`: up to `n_values` distinct
/// `w`-values, enumerating `(n, k)` in a square spiral.
///
/// When the deck index `k` only reproduces branch values (for `X` proportional
/// to `X_u` with `rho arg a - arg b` a multiple of `2pi`), only `n` is walked.
/// At most `64 n_values + 1024` pairs are visited.
pub fn fiber_set(
    x: &VectorField,
    z_prime: Complex64,
    params: &HopfParams,
    n_values: usize,
) -> Result<FiberSet> {
    fiber_value(x, z_prime, params, 0, 0)?;
    if n_values == 0 {
        return Err(HopfError::invalid("n_values must be positive"));
    }
    let k_redundant = x.is_proportional_to_xu(params) && {
        let twist = (params.rho() * params.arg_a() - params.arg_b()) / TAU;
        (twist - twist.round()).abs() < 1e-12
    };
    let budget = 64 * n_values + 1024;
    let order: Box<dyn Iterator<Item = (i64, i64)>> = if k_redundant {
        Box::new(line_spiral())
    } else {
        Box::new(square_spiral())
    };

    let mut dedup = Dedup {
        seen: HashSet::new(),
    };
    let mut samples = Vec::new();
    let (mut steps, mut skipped) = (0usize, 0usize);
    for (n, k) in order.take(budget) {
        steps += 1;
        let w = fiber_value(x, z_prime, params, n, k)?;
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() == 0.0 || !w.norm().is_finite() {
            skipped += 1;
            continue;
        }
        if dedup.insert(w) {
            samples.push(FiberSample { n, k, w });
            if samples.len() == n_values {
                break;
            }
        }
    }
    let args: Vec<f64> = samples.iter().map(|s| arg_2pi(s.w)).collect();
    let (min_abs, max_abs) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
        (lo.min(s.w.norm()), hi.max(s.w.norm()))
    });
    Ok(FiberSet {
        z_prime,
        exhausted: samples.len() < n_values,
        samples,
        min_abs,
        max_abs,
        args,
        steps,
        skipped,
        requested: n_values,
    })
}

/// Star discrepancy of angles mapped to `[0, 1)` by `theta / 2pi mod 1`.
pub fn star_discrepancy(angles: &[f64]) -> Result<f64> {
    if angles.is_empty() {
        return Err(HopfError::invalid("star discrepancy of an empty set"));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(HopfError::invalid("angles must be finite"));
    }
    let mut x: Vec<f64> = angles
        .iter()
        .map(|a| {
            let u = (a / TAU).rem_euclid(1.0);
            if u >= 1.0 {
                0.0
            } else {
                u
            }
        })
        .collect();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    Ok(x.iter().enumerate().fold(0.0f64, |d, (i, &xi)| {
        let i = i as f64;
        d.max((i + 1.0) / n - xi).max(xi - i / n)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum ClosureTag {
    LeviFlatHypersurface,
    CompactTorus { sheets: i64 },
    ContainsBothTori,
    ContainsTaOnly,
    ContainsTbOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvidenceConfig {
    pub z_prime: Complex64,
    pub n_fiber: usize,
    pub n_orbit: usize,
    pub decay_len: usize,
}

impl Default for EvidenceConfig {
    fn default() -> Self {
        EvidenceConfig {
            z_prime: Complex64::new(1.5, 0.0),
            n_fiber: 10_000,
            n_orbit: 256,
            decay_len: 40,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClosureEvidence {
    /// `max | |w| - c|z|^rho |` over reduced orbit samples.
    pub modulus_residual: Option<f64>,
    pub fiber_discrepancy: Option<f64>,
    pub fiber_samples: Option<usize>,
    pub fiber_cardinality: Option<usize>,
    /// Moduli approaching a torus (`|w|` toward `T_a`, or `|z|` toward `T_b`).
    pub decay: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureClass {
    pub tag: ClosureTag,
    pub evidence: ClosureEvidence,
}

/// Deterministic low-discrepancy times in `[-4, 4] x [-6, 6]`.
fn orbit_times(n: usize) -> Vec<Complex64> {
    let g1 = 0.618_033_988_749_894_9;
    let g2 = std::f64::consts::SQRT_2 - 1.0;
    (0..n)
        .map(|j| {
            let j = j as f64;
            Complex64::new(
                -4.0 + 8.0 * (j * g1).fract(),
                -6.0 + 12.0 * (j * g2).fract(),
            )
        })
        .collect()
}

pub fn classify_orbit_closure(
    x: &VectorField,
    params: &HopfParams,
    inv: &InvariantSet,
    cfg: &EvidenceConfig,
) -> Result<ClosureClass> {
    if x.is_zero() {
        return Err(HopfError::invalid("the zero field has no orbits"));
    }
    let mut ev = ClosureEvidence::default();

    let tag = if x.beta.norm() == 0.0 {
        ev.decay = (0..cfg.decay_len as i64)
            .map(|k| fiber_value(x, cfg.z_prime, params, 0, k).map(|w| w.norm()))
            .collect::<Result<_>>()?;
        ClosureTag::ContainsTaOnly
    } else if x.alpha.norm() == 0.0 {
        // Orbit through (z', 1); sample at w = b^k and read off the reduced |z|.
        let t: Vec<Complex64> = (0..cfg.decay_len as i64)
            .map(|k| params.log_b() * k as f64 / x.beta)
            .collect();
        ev.decay = orbit_reduce_samples(x, (cfg.z_prime, Complex64::new(1.0, 0.0)), &t, params)?
            .iter()
            .map(|p| p.z.norm())
            .collect();
        ClosureTag::ContainsTbOnly
    } else if x.is_proportional_to_xu(params) {
        let fib = fiber_set(x, cfg.z_prime, params, cfg.n_fiber)?;
        match inv.case_tag {
            CaseTag::CaseB2 => {
                ev.fiber_cardinality = Some(fib.samples.len());
                ClosureTag::CompactTorus {
                    sheets: inv.nu.expect("case B2 has nu"),
                }
            }
            _ => {
                let times = orbit_times(cfg.n_orbit);
                let rho = params.rho();
                let pts = orbit_reduce_samples(
                    x,
                    (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
                    &times,
                    params,
                )?;
                ev.modulus_residual = Some(
                    pts.iter()
                        .map(|p| (p.w.norm() - p.z.norm().powf(rho)).abs())
                        .fold(0.0, f64::max),
                );
                ev.fiber_discrepancy = Some(star_discrepancy(&fib.args)?);
                ev.fiber_samples = Some(fib.samples.len());
                ClosureTag::LeviFlatHypersurface
            }
        }
    } else {
        let r = x.beta / x.alpha;
        let (a_exp, b_exp) = (r.re, r.im);
        let len = cfg.decay_len as i64;
        let seq: Vec<(i64, i64)> = if b_exp != 0.0 {
            let s = if b_exp > 0.0 { 1 } else { -1 };
            (0..len).map(|j| (s * j, 0)).collect()
        } else {
            let s = if a_exp < params.rho() { 1 } else { -1 };
            (0..len).map(|j| (0, s * j)).collect()
        };
        ev.decay = seq
            .into_iter()
            .map(|(n, k)| fiber_value(x, cfg.z_prime, params, n, k).map(|w| w.norm()))
            .collect::<Result<_>>()?;
        ClosureTag::ContainsBothTori
    };
    Ok(ClosureClass { tag, evidence: ev })
}

/// Orbit samples as CSV rows `t_re, t_im, z_re, z_im, w_re, w_im, lift_index, on_Ta, on_Tb`.
pub fn write_orbit_csv<W: Write>(t_grid: &[Complex64], pts: &[HopfPoint], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| HopfError::Evaluation(format!("csv: {e}"));
    wtr.write_record([
        "t_re",
        "t_im",
        "z_re",
        "z_im",
        "w_re",
        "w_im",
        "lift_index",
        "on_Ta",
        "on_Tb",
    ])
    .map_err(io)?;
    for (t, p) in t_grid.iter().zip(pts) {
        wtr.serialize((
            t.re,
            t.im,
            p.z.re,
            p.z.im,
            p.w.re,
            p.w.im,
            p.lift_index,
            p.on_ta,
            p.on_tb,
        ))
        .map_err(io)?;
    }
    wtr.flush()
        .map_err(|e| HopfError::Evaluation(e.to_string()))
}
