//! Walk-on-spheres estimates of Green functions and Robin constants in `R^4`.
//!
//! Points of `C^2` are identified with `R^4` via `(z, w) -> (Re z, Im z, Re w, Im w)`.
//! The Green function is normalized as `G(x) = |x - p|^-2 + lambda + o(1)` near the
//! pole `p`, without the `1/(4 pi^2)` surface-area constant. With that choice the
//! harmonic extension of `y -> |y - p|^-2` from the boundary, evaluated at `p`,
//! equals `-lambda`, and that is what the walks estimate.
//!
//! For `c_weight = c > 0` the operator is `Delta - c`. Each jump over a sphere of
//! radius `R` multiplies the walk weight by `(kR/2) / I1(kR)` with `k = sqrt(c)`,
//! the mean-value factor of the screened equation in four dimensions.
//!
//! The removed axis `{z = 0}` of a product half-plane is a polar set and is ignored.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::domains::{
    distance_to_identity, evaluate_domain, modulus_surface_distance_grid, translate_domain,
    DistanceConfig, DomainSpec, TranslatedDomain, TranslatedForm,
};
use crate::invariants::HopfParams;
use crate::{Complex64, HopfError, Pair, Result};

pub type Point4 = [f64; 4];

pub const KERNEL_NORMALIZATION: &str = "G(x) = |x - p|^-2 + lambda + o(1)";

/// Walks per block; blocks are the unit of sharding.
pub const BLOCK: usize = 1024;

pub fn kernel(r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(HopfError::invalid("kernel radius must be positive"));
    }
    Ok(r.powi(-2))
}

pub fn to_point4(p: Pair) -> Point4 {
    [p.0.re, p.0.im, p.1.re, p.1.im]
}

pub fn from_point4(x: Point4) -> Pair {
    (Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
}

/// `e = (1, 1)` as a point of `R^4`.
pub const POLE_E: Point4 = [1.0, 0.0, 1.0, 0.0];

type DistFn = Arc<dyn Fn(Point4) -> f64 + Send + Sync>;
type InsideFn = Arc<dyn Fn(Point4) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum SolvableDomain {
    Ball {
        center: Point4,
        radius: f64,
    },
    /// `{x : <x, normal> < offset}` with a unit normal.
    HalfSpace {
        normal: Point4,
        offset: f64,
    },
    /// `C*_z x {cos(theta) u - sin(theta) v > 0}`.
    ProductHalfPlane {
        theta: f64,
    },
    /// `lower < |eta| / |xi|^rho < upper`.
    ModulusRegion {
        lower: f64,
        upper: f64,
        rho: f64,
    },
    /// `distance` must bound the distance to the boundary from below.
    Generic {
        inside: InsideFn,
        distance: DistFn,
    },
}

impl std::fmt::Debug for SolvableDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolvableDomain::Ball { center, radius } => write!(f, "Ball({center:?}, {radius})"),
            SolvableDomain::HalfSpace { normal, offset } => {
                write!(f, "HalfSpace({normal:?}, {offset})")
            }
            SolvableDomain::ProductHalfPlane { theta } => write!(f, "ProductHalfPlane({theta})"),
            SolvableDomain::ModulusRegion { lower, upper, rho } => {
                write!(f, "ModulusRegion({lower}, {upper}, {rho})")
            }
            SolvableDomain::Generic { .. } => write!(f, "Generic"),
        }
    }
}

fn dot(a: Point4, b: Point4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist4(a: Point4, b: Point4) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn php_normal(theta: f64) -> Point4 {
    [0.0, 0.0, theta.cos(), -theta.sin()]
}

impl SolvableDomain {
    pub fn ball(center: Point4, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(HopfError::invalid("ball radius must be positive"));
        }
        Ok(SolvableDomain::Ball { center, radius })
    }

    pub fn half_space(normal: Point4, offset: f64) -> Result<Self> {
        let n = dot(normal, normal).sqrt();
        if !(n > 0.0 && n.is_finite() && offset.is_finite()) {
            return Err(HopfError::invalid("half-space normal must be nonzero"));
        }
        Ok(SolvableDomain::HalfSpace {
            normal: normal.map(|x| x / n),
            offset: offset / n,
        })
    }

    pub fn generic(
        inside: impl Fn(Point4) -> bool + Send + Sync + 'static,
        distance: impl Fn(Point4) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SolvableDomain::Generic {
            inside: Arc::new(inside),
            distance: Arc::new(distance),
        }
    }

    /// The exactly solvable model of a translated domain.
    pub fn from_translated(td: &TranslatedDomain) -> Result<Self> {
        match td.form {
            TranslatedForm::ProductHalfPlane { theta } => {
                Ok(SolvableDomain::ProductHalfPlane { theta })
            }
            TranslatedForm::ModulusRegion { lower, upper, rho } => {
                Ok(SolvableDomain::ModulusRegion { lower, upper, rho })
            }
            TranslatedForm::Generic => Err(HopfError::Precondition(format!(
                "no distance bound is available for translates of {}",
                td.base.kind_name()
            ))),
        }
    }

    /// Lower bound on the distance to the boundary; nonpositive outside.
    pub fn distance(&self, x: Point4) -> f64 {
        match self {
            SolvableDomain::Ball { center, radius } => radius - dist4(x, *center),
            SolvableDomain::HalfSpace { normal, offset } => offset - dot(x, *normal),
            SolvableDomain::ProductHalfPlane { theta } => dot(x, php_normal(*theta)),
            SolvableDomain::ModulusRegion { lower, upper, rho } => {
                let r = x[0].hypot(x[1]);
                let s = x[2].hypot(x[3]);
                let inside = {
                    let l = s.ln() - rho * r.ln();
                    let (lo, hi) = (lower.ln(), upper.ln());
                    l > lo && l < hi
                        || (r == 0.0 && s > 0.0 && hi == f64::INFINITY)
                        || (s == 0.0 && r > 0.0 && lo == f64::NEG_INFINITY)
                };
                if !inside {
                    return 0.0;
                }
                let d = [*lower, *upper]
                    .into_iter()
                    .filter(|k| *k > 0.0 && k.is_finite())
                    .map(|k| modulus_surface_distance_grid(k, *rho, r, s, 64, 1e-10))
                    .fold(f64::INFINITY, f64::min);
                0.95 * d
            }
            SolvableDomain::Generic { inside, distance } => {
                if inside(x) {
                    distance(x)
                } else {
                    0.0
                }
            }
        }
    }

    /// Nearest boundary point where it has a closed form, else `x`.
    fn project(&self, x: Point4) -> Point4 {
        match self {
            SolvableDomain::Ball { center, radius } => {
                let d = dist4(x, *center);
                if d == 0.0 {
                    return x;
                }
                std::array::from_fn(|i| center[i] + radius * (x[i] - center[i]) / d)
            }
            SolvableDomain::HalfSpace { normal, offset } => {
                let d = offset - dot(x, *normal);
                std::array::from_fn(|i| x[i] + d * normal[i])
            }
            SolvableDomain::ProductHalfPlane { theta } => {
                let n = php_normal(*theta);
                let d = dot(x, n);
                std::array::from_fn(|i| x[i] - d * n[i])
            }
            _ => x,
        }
    }

    fn is_bounded(&self) -> bool {
        matches!(self, SolvableDomain::Ball { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WosConfig {
    pub eps_shell: f64,
    /// Escape radius as a multiple of the pole-to-boundary distance.
    pub r_max_factor: f64,
    pub max_steps: usize,
    pub shards: usize,
}

impl Default for WosConfig {
    fn default() -> Self {
        WosConfig {
            eps_shell: 1e-4,
            r_max_factor: 1e3,
            max_steps: 100_000,
            shards: 1,
        }
    }
}

/// Everything needed for one estimate; the JSON form of the `robin` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobinConfig {
    pub walks: usize,
    pub eps_shell: f64,
    pub r_max_factor: f64,
    pub seed: u64,
    pub shards: usize,
    pub c_weight: f64,
    pub max_steps: usize,
}

impl Default for RobinConfig {
    fn default() -> Self {
        let w = WosConfig::default();
        RobinConfig {
            walks: 100_000,
            eps_shell: w.eps_shell,
            r_max_factor: w.r_max_factor,
            seed: 7,
            shards: 1,
            c_weight: 0.0,
            max_steps: w.max_steps,
        }
    }
}

impl RobinConfig {
    pub fn wos(&self) -> WosConfig {
        WosConfig {
            eps_shell: self.eps_shell,
            r_max_factor: self.r_max_factor,
            max_steps: self.max_steps,
            shards: self.shards,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HopfError::invalid(format!("robin config: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobinEstimate {
    pub lambda_hat: f64,
    pub stderr: f64,
    pub n_walks: usize,
    pub c_weight: f64,
    pub kernel_normalization: String,
    pub seed: u64,
    pub shards: usize,
    pub eps_shell: f64,
    pub r_max: f64,
    /// Upper bound `R_max^-2` on the kernel of an escaped walk.
    pub escape_bias_bound: f64,
    pub escaped_walks: usize,
    pub truncated_walks: usize,
    pub mean_steps: f64,
    /// Screened estimates off the ball have no closed-form check.
    pub qualitative: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Stats {
    sum: f64,
    sum_sq: f64,
    count: usize,
    escaped: usize,
    truncated: usize,
    steps: usize,
}

impl Stats {
    fn merge(self, o: Stats) -> Stats {
        Stats {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            count: self.count + o.count,
            escaped: self.escaped + o.escaped,
            truncated: self.truncated + o.truncated,
            steps: self.steps + o.steps,
        }
    }
}

/// Modified Bessel function `I1` by its power series.
pub(crate) fn bessel_i1(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = h;
    for k in 1..1000 {
        term *= h2 / (k as f64 * (k + 1) as f64);
        sum += term;
        if term < 1e-17 * sum || !sum.is_finite() {
            break;
        }
    }
    sum
}

/// Mean-value factor of `Delta - c` over a sphere of radius `r` in `R^4`.
fn survival_factor(kappa: f64, r: f64) -> f64 {
    let x = kappa * r;
    if x < 1e-8 {
        return 1.0 - x * x / 8.0;
    }
    let i1 = bessel_i1(x);
    if i1.is_finite() {
        0.5 * x / i1
    } else {
        0.0
    }
}

struct Walker<'a> {
    dom: &'a SolvableDomain,
    pole: Point4,
    kappa: f64,
    eps: f64,
    r_max: f64,
    max_steps: usize,
}

enum WalkEnd {
    Exit(f64),
    Escaped,
    Truncated,
}

impl Walker<'_> {
    fn walk(&self, rng: &mut ChaCha8Rng) -> (WalkEnd, usize) {
        let mut x = self.pole;
        let mut weight = 1.0;
        for step in 0..self.max_steps {
            let d = self.dom.distance(x);
            if d < self.eps {
                let y = self.dom.project(x);
                let r = dist4(y, self.pole);
                return (WalkEnd::Exit(weight * r.powi(-2)), step);
            }
            if dist4(x, self.pole) > self.r_max {
                return (WalkEnd::Escaped, step);
            }
            let g: Point4 = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = dot(g, g).sqrt();
            if n == 0.0 {
                continue;
            }
            for i in 0..4 {
                x[i] += d * g[i] / n;
            }
            if self.kappa > 0.0 {
                weight *= survival_factor(self.kappa, d);
            }
        }
        (WalkEnd::Truncated, self.max_steps)
    }

    fn block(&self, base: &ChaCha8Rng, block: usize, n_walks: usize) -> Stats {
        let start = block * BLOCK;
        let end = (start + BLOCK).min(n_walks);
        let mut s = Stats::default();
        for i in start..end {
            let mut rng = base.clone();
            rng.set_stream(i as u64);
            let (end, steps) = self.walk(&mut rng);
            s.count += 1;
            s.steps += steps;
            match end {
                WalkEnd::Exit(v) => {
                    s.sum += v;
                    s.sum_sq += v * v;
                }
                WalkEnd::Escaped => s.escaped += 1,
                WalkEnd::Truncated => s.truncated += 1,
            }
        }
        s
    }
}

/// Walk-on-spheres estimate of the (c-)Robin constant of `dom` with pole `pole`.
///
/// Walk `i` draws from stream `i` of a ChaCha8 generator seeded with `seed`,
/// and blocks are merged in index order, so the result does not depend on
/// `wos.shards`.
pub fn robin_constant(
    dom: &SolvableDomain,
    pole: Point4,
    c_weight: f64,
    n_walks: usize,
    seed: u64,
    wos: &WosConfig,
) -> Result<RobinEstimate> {
    if !(c_weight >= 0.0 && c_weight.is_finite()) {
        return Err(HopfError::invalid("c_weight must be a nonnegative real"));
    }
    if n_walks < 2 {
        return Err(HopfError::invalid("at least two walks are needed"));
    }
    if !(wos.eps_shell > 0.0 && wos.r_max_factor > 1.0 && wos.max_steps > 0 && wos.shards > 0) {
        return Err(HopfError::invalid("invalid walk-on-spheres configuration"));
    }
    let d0 = dom.distance(pole);
    if !d0.is_finite() || d0 <= wos.eps_shell {
        return Err(HopfError::Domain(format!(
            "pole is not strictly inside the domain (distance bound {d0:.3e})"
        )));
    }
    let r_max = wos.r_max_factor * d0;
    let walker = Walker {
        dom,
        pole,
        kappa: c_weight.sqrt(),
        eps: wos.eps_shell,
        r_max: if dom.is_bounded() {
            f64::INFINITY
        } else {
            r_max
        },
        max_steps: wos.max_steps,
    };
    let base = ChaCha8Rng::seed_from_u64(seed);
    let n_blocks = n_walks.div_ceil(BLOCK);
    let shards = wos.shards.min(n_blocks);
    let mut blocks = vec![Stats::default(); n_blocks];
    if shards <= 1 {
        for (b, slot) in blocks.iter_mut().enumerate() {
            *slot = walker.block(&base, b, n_walks);
        }
    } else {
        let results: Vec<Vec<(usize, Stats)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards)
                .map(|s| {
                    let (walker, base) = (&walker, &base);
                    scope.spawn(move || {
                        (s..n_blocks)
                            .step_by(shards)
                            .map(|b| (b, walker.block(base, b, n_walks)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("walk shard panicked"))
                .collect()
        });
        for (b, st) in results.into_iter().flatten() {
            blocks[b] = st;
        }
    }
    let total = blocks.into_iter().fold(Stats::default(), Stats::merge);
    let n = total.count as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    let lambda_hat = -mean;
    if !lambda_hat.is_finite() {
        return Err(HopfError::Evaluation(
            "walk-on-spheres estimate is not finite".into(),
        ));
    }
    Ok(RobinEstimate {
        lambda_hat,
        stderr: (var / n).sqrt(),
        n_walks: total.count,
        c_weight,
        kernel_normalization: KERNEL_NORMALIZATION.into(),
        seed,
        shards: wos.shards,
        eps_shell: wos.eps_shell,
        r_max: walker.r_max,
        escape_bias_bound: walker.r_max.powi(-2),
        escaped_walks: total.escaped,
        truncated_walks: total.truncated,
        mean_steps: total.steps as f64 / n,
        qualitative: c_weight > 0.0 && !dom.is_bounded(),
    })
}

pub fn robin_with_config(
    dom: &SolvableDomain,
    pole: Point4,
    cfg: &RobinConfig,
) -> Result<RobinEstimate> {
    robin_constant(dom, pole, cfg.c_weight, cfg.walks, cfg.seed, &cfg.wos())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub z_re: f64,
    pub z_im: f64,
    pub w_re: f64,
    pub w_im: f64,
    pub theta: Option<f64>,
    pub dist: f64,
    pub lambda_hat: f64,
    pub stderr: f64,
    pub n_walks: usize,
    pub truncated_walks: usize,
}

pub fn write_experiment_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r)
            .map_err(|e| HopfError::Evaluation(format!("csv: {e}")))?;
    }
    wtr.flush()
        .map_err(|e| HopfError::Evaluation(e.to_string()))
}

/// Robin constants of `D[z,w]` along a path of anchors, in path order.
pub fn boundary_behavior_experiment(
    spec: &DomainSpec,
    anchors: &[Pair],
    params: &HopfParams,
    budget: &RobinConfig,
) -> Result<Vec<ExperimentRow>> {
    anchors
        .iter()
        .map(|&anchor| {
            if !evaluate_domain(spec, anchor, params)?.inside {
                return Err(HopfError::Precondition(format!(
                    "anchor ({}, {}) is not inside the domain",
                    anchor.0, anchor.1
                )));
            }
            let td = translate_domain(spec, anchor, params)?;
            let (_, dist) = distance_to_identity(&td, &DistanceConfig::default())?;
            let dom = SolvableDomain::from_translated(&td)?;
            let est = robin_with_config(&dom, POLE_E, budget)?;
            let theta = match td.form {
                TranslatedForm::ProductHalfPlane { theta } => Some(theta),
                _ => None,
            };
            Ok(ExperimentRow {
                z_re: anchor.0.re,
                z_im: anchor.0.im,
                w_re: anchor.1.re,
                w_im: anchor.1.im,
                theta,
                dist,
                lambda_hat: est.lambda_hat,
                stderr: est.stderr,
                n_walks: est.n_walks,
                truncated_walks: est.truncated_walks,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PshReport {
    /// `-lambda` at the center of the disk.
    pub center: f64,
    pub center_stderr: f64,
    /// `-lambda` at the ring points.
    pub ring: Vec<f64>,
    pub ring_mean: f64,
    pub ring_stderr: f64,
    /// Ring mean minus center value.
    pub residual: f64,
    pub combined_stderr: f64,
    pub consistent: bool,
}

/// Sub-mean-value test of `t -> -lambda(anchor + t direction)` on a disk,
/// with the domain at each point produced by `domain_at`.
///
/// Every estimate uses the same seed, so the noise is shared across points.
pub fn psh_spot_check_with(
    domain_at: &dyn Fn(Pair) -> Result<SolvableDomain>,
    anchor: Pair,
    direction: Pair,
    disk_radius: f64,
    grid_n: usize,
    budget: &RobinConfig,
) -> Result<PshReport> {
    if disk_radius.is_nan() || disk_radius <= 0.0 || grid_n == 0 {
        return Err(HopfError::invalid(
            "disk radius and grid size must be positive",
        ));
    }
    let at = |t: Complex64| -> Result<(f64, f64)> {
        let p = (anchor.0 + direction.0 * t, anchor.1 + direction.1 * t);
        let est = robin_with_config(&domain_at(p)?, POLE_E, budget)?;
        Ok((-est.lambda_hat, est.stderr))
    };
    let (center, center_stderr) = at(Complex64::new(0.0, 0.0))?;
    let mut ring = Vec::with_capacity(grid_n);
    let mut var_sum = 0.0;
    for j in 0..grid_n {
        let t = Complex64::from_polar(
            disk_radius,
            std::f64::consts::TAU * j as f64 / grid_n as f64,
        );
        let (v, s) = at(t)?;
        ring.push(v);
        var_sum += s * s;
    }
    let residual = ring.iter().map(|v| v - center).sum::<f64>() / grid_n as f64;
    let ring_mean = center + residual;
    let ring_stderr = var_sum.sqrt() / grid_n as f64;
    let combined = ring_stderr.hypot(center_stderr);
    Ok(PshReport {
        center,
        center_stderr,
        ring,
        ring_mean,
        ring_stderr,
        residual,
        combined_stderr: combined,
        consistent: residual >= -3.0 * combined,
    })
}

/// Plurisubharmonicity spot check of `-lambda[z,w]` on a complex disk in `spec`.
pub fn psh_spot_check(
    spec: &DomainSpec,
    anchor: Pair,
    direction: Pair,
    disk_radius: f64,
    grid_n: usize,
    budget: &RobinConfig,
    params: &HopfParams,
) -> Result<PshReport> {
    let probes = 4 * grid_n.max(8);
    for j in 0..probes {
        for frac in [0.25, 0.5, 0.75, 1.0] {
            let t = Complex64::from_polar(
                frac * disk_radius,
                std::f64::consts::TAU * j as f64 / probes as f64,
            );
            let p = (anchor.0 + direction.0 * t, anchor.1 + direction.1 * t);
            let inside = evaluate_domain(spec, p, params)
                .map(|e| e.inside)
                .unwrap_or(false);
            if !inside {
                return Err(HopfError::Precondition(format!(
                    "the disk leaves the domain at t = ({:.4}, {:.4})",
                    t.re, t.im
                )));
            }
        }
    }
    let domain_at = |p: Pair| SolvableDomain::from_translated(&translate_domain(spec, p, params)?);
    psh_spot_check_with(&domain_at, anchor, direction, disk_radius, grid_n, budget)
}
