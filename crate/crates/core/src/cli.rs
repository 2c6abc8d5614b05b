//! The `hopf` command-line front end.
//!
//! Every subcommand parses flags, calls one library function and prints the
//! result. JSON output is wrapped as `{"schema": 1, "command": ..., "result": ...}`.
//! Exit codes: `0` on success, `2` for invalid input or failed preconditions,
//! `1` for internal evaluation failures.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::domains::{
    classify_domain, tangency_check, verify_nemirovskii_quotient, DomainSpec, LeafRegion,
};
use crate::flows::{
    classify_orbit_closure, fiber_set, orbit_reduce_samples, star_discrepancy, write_orbit_csv,
    EvidenceConfig, VectorField,
};
use crate::invariants::{derive_invariants, HopfParams, InvariantSet, RationalityMode};
use crate::levi::{
    diamond_search, pseudoconvexity_scan, sweep_cover_check, BoundaryModel, HermitianPoly,
};
use crate::quotient::{in_fundamental_domain, reduce, u_value};
use crate::robin::{
    boundary_behavior_experiment, psh_spot_check, robin_with_config, write_experiment_csv,
    RobinConfig, SolvableDomain, POLE_E,
};
use crate::{c64, Complex64, HopfError, Pair, Result};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 7;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "hopf", version, about = "Computations on Hopf surfaces H(a,b)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Random seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Re a
    #[arg(long = "a")]
    a_re: f64,
    /// Im a
    #[arg(long, default_value_t = 0.0)]
    a_im: f64,
    /// Re b
    #[arg(long = "b")]
    b_re: f64,
    /// Im b
    #[arg(long, default_value_t = 0.0)]
    b_im: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<HopfParams> {
        HopfParams::new(c64(self.a_re, self.a_im), c64(self.b_re, self.b_im))
    }
}

#[derive(Debug, Args)]
struct RationalityArgs {
    /// Use declared invariants instead of numeric detection
    #[arg(long)]
    declared: bool,
    /// Declared rho = q/p: numerator q
    #[arg(long, requires = "p")]
    q: Option<i64>,
    /// Declared rho = q/p: denominator p
    #[arg(long, requires = "q")]
    p: Option<i64>,
    /// Declared tau = m/l: numerator m
    #[arg(long, requires = "l")]
    m: Option<i64>,
    /// Declared tau = m/l: denominator l
    #[arg(long, requires = "m")]
    l: Option<i64>,
    /// Tolerance of numeric rationality detection
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Denominator cap of numeric rationality detection
    #[arg(long, default_value_t = 1_000_000)]
    max_den: i64,
}

impl RationalityArgs {
    fn mode(&self) -> RationalityMode {
        if self.declared {
            RationalityMode::Declared {
                rho: self.p.zip(self.q),
                tau: self.l.zip(self.m),
            }
        } else {
            RationalityMode::Numeric {
                tol: self.tol,
                max_den: self.max_den,
            }
        }
    }
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Preset field when alpha/beta are not given
    #[arg(long, value_enum, default_value = "xu")]
    field: FieldPreset,
    /// Re alpha of X = alpha z d/dz + beta w d/dw
    #[arg(long, requires = "beta")]
    alpha: Option<f64>,
    /// Im alpha
    #[arg(long, default_value_t = 0.0)]
    alpha_im: f64,
    /// Re beta
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    /// Im beta
    #[arg(long, default_value_t = 0.0)]
    beta_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldPreset {
    /// X_u = (ln|a|, ln|b|)
    Xu,
    /// Deck generator (log a, log b)
    Deck,
}

impl FieldArgs {
    fn field(&self, params: &HopfParams) -> VectorField {
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => VectorField::new(c64(a, self.alpha_im), c64(b, self.beta_im)),
            _ => match self.field {
                FieldPreset::Xu => VectorField::x_u(params),
                FieldPreset::Deck => VectorField::deck_generator(params),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainKind {
    LevelBand,
    SubLevel,
    SuperLevel,
    Nemirovskii,
    LeafDisk,
    LeafAnnulus,
}

#[derive(Debug, Args)]
struct DomainArgs {
    /// Domain family
    #[arg(long, value_enum)]
    domain: DomainKind,
    /// Lower level of a level band
    #[arg(long)]
    k1: Option<f64>,
    /// Upper level of a level band
    #[arg(long)]
    k2: Option<f64>,
    /// Level of a sub- or super-level domain
    #[arg(long)]
    k: Option<f64>,
    /// Coefficient A of a Nemirovskii domain {A u + B v < 0}
    #[arg(long, default_value_t = -1.0)]
    coef_a: f64,
    /// Coefficient B of a Nemirovskii domain
    #[arg(long, default_value_t = 0.0)]
    coef_b: f64,
    /// Re of the center of a leaf disk
    #[arg(long, default_value_t = 0.0)]
    center: f64,
    /// Im of the center of a leaf disk
    #[arg(long, default_value_t = 0.0)]
    center_im: f64,
    /// Radius of a leaf disk
    #[arg(long)]
    radius: Option<f64>,
    /// Inner radius of a leaf annulus
    #[arg(long, default_value_t = 0.0)]
    inner: f64,
    /// Outer radius of a leaf annulus (omit for infinity)
    #[arg(long)]
    outer: Option<f64>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| HopfError::InvalidInput(format!("--{flag} is required for this domain")))
}

impl DomainArgs {
    fn spec(&self) -> Result<DomainSpec> {
        match self.domain {
            DomainKind::LevelBand => {
                DomainSpec::level_band(need(self.k1, "k1")?, need(self.k2, "k2")?)
            }
            DomainKind::SubLevel => DomainSpec::sub_level(need(self.k, "k")?),
            DomainKind::SuperLevel => DomainSpec::super_level(need(self.k, "k")?),
            DomainKind::Nemirovskii => DomainSpec::nemirovskii(self.coef_a, self.coef_b),
            DomainKind::LeafDisk => DomainSpec::leaf_family(LeafRegion::Disk {
                center: c64(self.center, self.center_im),
                radius: need(self.radius, "radius")?,
            }),
            DomainKind::LeafAnnulus => DomainSpec::leaf_family(LeafRegion::Annulus {
                inner: self.inner,
                outer: self.outer.unwrap_or(f64::INFINITY),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelPreset {
    /// p0 = Re z^2
    ReZ2,
    /// p0 = |z|^2
    AbsZ2,
    /// p0 = Re z
    Linear,
    /// p0 = 0
    Zero,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Preset boundary model
    #[arg(long, value_enum, conflicts_with = "model_file")]
    model: Option<ModelPreset>,
    /// Boundary model as JSON {"p_coeffs": [[{"j":..,"k":..,"re":..,"im":..}], ...]}
    #[arg(long)]
    model_file: Option<PathBuf>,
}

impl ModelArgs {
    fn model(&self) -> Result<BoundaryModel> {
        let p0 = match (self.model, &self.model_file) {
            (_, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HopfError::InvalidInput(format!("{}: {e}", path.display())))?;
                let m: BoundaryModel = serde_json::from_str(&text)
                    .map_err(|e| HopfError::InvalidInput(format!("{}: {e}", path.display())))?;
                return BoundaryModel::new(m.p_coeffs);
            }
            (Some(ModelPreset::ReZ2), None) => {
                HermitianPoly::from_re_terms(&[(2, 0, c64(1.0, 0.0))])?
            }
            (Some(ModelPreset::AbsZ2), None) => {
                HermitianPoly::from_re_terms(&[(1, 1, c64(1.0, 0.0))])?
            }
            (Some(ModelPreset::Linear), None) => {
                HermitianPoly::from_re_terms(&[(1, 0, c64(1.0, 0.0))])?
            }
            (Some(ModelPreset::Zero), None) => HermitianPoly::zero(),
            (None, None) => return Err(HopfError::invalid("give --model or --model-file")),
        };
        BoundaryModel::new(vec![p0])
    }
}

#[derive(Debug, Args)]
struct WalkArgs {
    /// Number of walks per estimate
    #[arg(long)]
    walks: Option<usize>,
    /// Weight c of the screened operator Delta - c
    #[arg(long)]
    c_weight: Option<f64>,
    /// Width of the absorbing boundary shell
    #[arg(long)]
    eps_shell: Option<f64>,
    /// Escape radius as a multiple of the pole-to-boundary distance
    #[arg(long)]
    r_max_factor: Option<f64>,
    /// Number of worker threads; results do not depend on it
    #[arg(long)]
    shards: Option<usize>,
    /// JSON file with walks, eps_shell, r_max_factor, seed, shards
    #[arg(long)]
    config: Option<PathBuf>,
}

impl WalkArgs {
    /// Defaults, then the config file, then explicit flags.
    fn config(&self, seed: Option<u64>, default_walks: usize) -> Result<RobinConfig> {
        let mut cfg = match &self.config {
            Some(path) => RobinConfig::from_json(
                &std::fs::read_to_string(path)
                    .map_err(|e| HopfError::InvalidInput(format!("{}: {e}", path.display())))?,
            )?,
            None => RobinConfig {
                walks: default_walks,
                ..RobinConfig::default()
            },
        };
        if let Some(v) = self.walks {
            cfg.walks = v;
        }
        if let Some(v) = self.c_weight {
            cfg.c_weight = v;
        }
        if let Some(v) = self.eps_shell {
            cfg.eps_shell = v;
        }
        if let Some(v) = self.r_max_factor {
            cfg.r_max_factor = v;
        }
        if let Some(v) = self.shards {
            cfg.shards = v;
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Re z
    #[arg(long)]
    z: f64,
    /// Im z
    #[arg(long, default_value_t = 0.0)]
    z_im: f64,
    /// Re w
    #[arg(long)]
    w: f64,
    /// Im w
    #[arg(long, default_value_t = 0.0)]
    w_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RobinDomain {
    Ball,
    HalfSpace,
    ProductHalfPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PathKind {
    /// Nemirovskii anchors with theta_k = pi/2 - 2^-k
    Theta,
    /// Nemirovskii anchors at theta = pi/3 with |w| = 2^-k
    Angular,
    /// Level-band anchors approaching the upper boundary leaf
    Level,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Arithmetic invariants rho, tau, nu, K and the case tag
    #[command(allow_negative_numbers = true)]
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        rationality: RationalityArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a point of C^2 \ {0} to the fundamental domain
    #[command(allow_negative_numbers = true)]
    Reduce {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reduced orbit samples of a vector field and its orbit-closure class
    #[command(allow_negative_numbers = true)]
    Flow {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        rationality: RationalityArgs,
        /// Re of the starting z
        #[arg(long, default_value_t = 1.0)]
        z0: f64,
        /// Im of the starting z
        #[arg(long, default_value_t = 0.0)]
        z0_im: f64,
        /// Re of the starting w
        #[arg(long, default_value_t = 1.0)]
        w0: f64,
        /// Im of the starting w
        #[arg(long, default_value_t = 0.0)]
        w0_im: f64,
        /// Largest time
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        /// Number of time steps
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Sample times on the imaginary axis
        #[arg(long)]
        imaginary: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Fiber of the orbit through e over z' and its star discrepancy
    #[command(allow_negative_numbers = true)]
    Fiber {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Re z'
        #[arg(long, default_value_t = 1.5)]
        zp: f64,
        /// Im z'
        #[arg(long, default_value_t = 0.0)]
        zp_im: f64,
        /// Number of distinct fiber values requested
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Theorem 1 type and Stein verdict of a domain
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        rationality: RationalityArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Test whether a vector field is tangential to a domain boundary
    #[command(allow_negative_numbers = true)]
    Tangency {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Boundary and interior samples
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Drift tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Largest flow time
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        /// Number of flow times in each direction
        #[arg(long, default_value_t = 8)]
        t_steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Levi form at sampled boundary points of a domain
    #[command(allow_negative_numbers = true)]
    LeviScan {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Boundary samples
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Negative Levi values below -tol are violations
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Search for z* with p0(z*) > 0 in a boundary model
    #[command(allow_negative_numbers = true)]
    Diamond {
        #[command(flatten)]
        model: ModelArgs,
        /// Radius of the disk delta_1
        #[arg(long, default_value_t = 0.5)]
        r1: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Certify that arcs S(z) over [0, z*] sweep a neighborhood in D(0)
    #[command(allow_negative_numbers = true)]
    SweepCover {
        #[command(flatten)]
        model: ModelArgs,
        /// Radius of the disk delta_1
        #[arg(long, default_value_t = 0.5)]
        r1: f64,
        /// Sampled points w
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Walk-on-spheres Robin constant of a model domain
    #[command(allow_negative_numbers = true)]
    Robin {
        /// Model domain
        #[arg(long, value_enum)]
        domain: RobinDomain,
        /// Ball radius (pole at the center)
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Half-space distance from the pole at the origin
        #[arg(long, conflicts_with = "theta")]
        distance: Option<f64>,
        /// Half-plane angle; the pole is e = (1, 1) at distance cos(theta)
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        walks: WalkArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Robin constants of D[z,w] along a path of anchors
    #[command(allow_negative_numbers = true)]
    BoundaryExp {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Anchor path
        #[arg(long, value_enum)]
        path: PathKind,
        /// Number of anchors
        #[arg(long, default_value_t = 6)]
        steps: u32,
        #[command(flatten)]
        walks: WalkArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sub-mean-value test of -lambda on a complex disk
    #[command(allow_negative_numbers = true)]
    PshCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        point: PointArgs,
        /// Re of the z-component of the direction
        #[arg(long, default_value_t = 0.0)]
        dir_z: f64,
        /// Im of the z-component of the direction
        #[arg(long, default_value_t = 0.0)]
        dir_z_im: f64,
        /// Re of the w-component of the direction
        #[arg(long, default_value_t = 1.0)]
        dir_w: f64,
        /// Im of the w-component of the direction
        #[arg(long, default_value_t = 0.0)]
        dir_w_im: f64,
        /// Radius of the disk in the line parameter
        #[arg(long, default_value_t = 0.1)]
        disk_radius: f64,
        /// Points on the ring
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[command(flatten)]
        walks: WalkArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Check the fundamental piece of the Nemirovskii quotient
    #[command(allow_negative_numbers = true)]
    NemirovskiiVerify {
        #[command(flatten)]
        params: ParamArgs,
        /// Forward and backward samples
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

enum Output {
    Json(serde_json::Value),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| HopfError::Evaluation(format!("serialization: {e}")))
}

fn csv_only(format: Format, name: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(HopfError::InvalidInput(format!("{name} has no CSV output")));
    }
    Ok(())
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Output> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(Output::Csv(buf))
}

fn time_grid(t_max: f64, steps: usize, imaginary: bool) -> Vec<Complex64> {
    let n = steps.max(1);
    (0..=n)
        .map(|i| {
            let t = t_max * i as f64 / n as f64;
            if imaginary {
                c64(0.0, t)
            } else {
                c64(t, 0.0)
            }
        })
        .collect()
}

fn invariants_for(params: &HopfParams, r: &RationalityArgs) -> Result<InvariantSet> {
    derive_invariants(params, r.mode())
}

/// A `w` with `nemirovskii_theta(A, B, w) = theta` and `|w| = modulus`.
fn nemirovskii_anchor_w(spec: &DomainSpec, theta: f64, modulus: f64) -> Result<Complex64> {
    match spec {
        DomainSpec::Nemirovskii { a_coef, b_coef } => {
            let u = -c64(*a_coef, -*b_coef);
            Ok(Complex64::from_polar(modulus, theta) / (u / u.norm()))
        }
        _ => Err(HopfError::InvalidInput(
            "this path needs --domain nemirovskii".into(),
        )),
    }
}

fn anchor_path(spec: &DomainSpec, kind: PathKind, steps: u32) -> Result<Vec<Pair>> {
    let one = c64(1.0, 0.0);
    (1..=steps)
        .map(|k| {
            let h = 2f64.powi(-(k as i32));
            Ok(match kind {
                PathKind::Theta => (one, nemirovskii_anchor_w(spec, FRAC_PI_2 - h, 1.0)?),
                PathKind::Angular => (one, nemirovskii_anchor_w(spec, FRAC_PI_3, h)?),
                PathKind::Level => match spec {
                    DomainSpec::LevelBand { k1, k2 } => {
                        let l = k2.ln() - (k2.ln() - k1.ln()) * h;
                        (one, c64(l.exp(), 0.0))
                    }
                    _ => {
                        return Err(HopfError::InvalidInput(
                            "--path level needs --domain level-band".into(),
                        ))
                    }
                },
            })
        })
        .collect()
}

fn execute(cmd: Command) -> Result<(Output, Common)> {
    let out = match cmd {
        Command::Invariants {
            params,
            rationality,
            common,
        } => {
            csv_only(common.format, "invariants")?;
            let inv = invariants_for(&params.params()?, &rationality)?;
            (Output::Json(inv.to_json()), common)
        }
        Command::Reduce {
            params,
            point,
            common,
        } => {
            csv_only(common.format, "reduce")?;
            let p = params.params()?;
            let pt = reduce((c64(point.z, point.z_im), c64(point.w, point.w_im)), &p)?;
            let mut v = json(&pt)?;
            v["U"] = json(&u_value(&pt, &p).ok())?;
            v["in_fundamental_domain"] = json(&in_fundamental_domain(pt.rep(), &p))?;
            (Output::Json(v), common)
        }
        Command::Flow {
            params,
            field,
            rationality,
            z0,
            z0_im,
            w0,
            w0_im,
            t_max,
            steps,
            imaginary,
            common,
        } => {
            let p = params.params()?;
            let x = field.field(&p);
            let grid = time_grid(t_max, steps, imaginary);
            let pts = orbit_reduce_samples(&x, (c64(z0, z0_im), c64(w0, w0_im)), &grid, &p)?;
            match common.format {
                Format::Csv => (csv_bytes(|b| write_orbit_csv(&grid, &pts, b))?, common),
                Format::Json => {
                    let inv = invariants_for(&p, &rationality)?;
                    let closure = classify_orbit_closure(&x, &p, &inv, &EvidenceConfig::default())?;
                    let v = serde_json::json!({ "field": x, "closure": closure, "orbit": pts });
                    (Output::Json(v), common)
                }
            }
        }
        Command::Fiber {
            params,
            field,
            zp,
            zp_im,
            n,
            common,
        } => {
            let p = params.params()?;
            let fs = fiber_set(&field.field(&p), c64(zp, zp_im), &p, n)?;
            match common.format {
                Format::Csv => (csv_bytes(|b| fs.write_csv(b))?, common),
                Format::Json => {
                    let d = star_discrepancy(&fs.args)?;
                    let v = serde_json::json!({ "star_discrepancy": d, "fiber": fs });
                    (Output::Json(v), common)
                }
            }
        }
        Command::Classify {
            params,
            domain,
            rationality,
            common,
        } => {
            csv_only(common.format, "classify")?;
            let p = params.params()?;
            let spec = domain.spec()?;
            spec.validate(&p)?;
            let inv = invariants_for(&p, &rationality)?;
            (Output::Json(json(&classify_domain(&spec, &inv)?)?), common)
        }
        Command::Tangency {
            params,
            domain,
            field,
            samples,
            tol,
            t_max,
            t_steps,
            common,
        } => {
            csv_only(common.format, "tangency")?;
            let p = params.params()?;
            let mut grid = time_grid(t_max, t_steps, false);
            grid.extend(time_grid(t_max, t_steps, true).into_iter().skip(1));
            let neg: Vec<Complex64> = grid.iter().skip(1).map(|t| -t).collect();
            grid.extend(neg);
            let rep = tangency_check(
                &domain.spec()?,
                &field.field(&p),
                samples,
                &grid,
                tol,
                &p,
                common.seed,
            )?;
            (Output::Json(json(&rep)?), common)
        }
        Command::LeviScan {
            params,
            domain,
            samples,
            tol,
            common,
        } => {
            let p = params.params()?;
            let rep = pseudoconvexity_scan(&domain.spec()?, samples, tol, &p, common.seed)?;
            match common.format {
                Format::Csv => (csv_bytes(|b| rep.write_violations_csv(b))?, common),
                Format::Json => (Output::Json(json(&rep)?), common),
            }
        }
        Command::Diamond { model, r1, common } => {
            csv_only(common.format, "diamond")?;
            (
                Output::Json(json(&diamond_search(&model.model()?, r1)?)?),
                common,
            )
        }
        Command::SweepCover {
            model,
            r1,
            samples,
            common,
        } => {
            csv_only(common.format, "sweep-cover")?;
            let rep = sweep_cover_check(&model.model()?, r1, samples, common.seed)?;
            (Output::Json(json(&rep)?), common)
        }
        Command::Robin {
            domain,
            radius,
            distance,
            theta,
            walks,
            common,
        } => {
            csv_only(common.format, "robin")?;
            let cfg = walks.config(Some(common.seed), 100_000)?;
            let (dom, pole) = match domain {
                RobinDomain::Ball => (SolvableDomain::ball([0.0; 4], radius)?, [0.0; 4]),
                RobinDomain::HalfSpace if theta.is_none() => (
                    SolvableDomain::half_space([1.0, 0.0, 0.0, 0.0], distance.unwrap_or(1.0))?,
                    [0.0; 4],
                ),
                RobinDomain::HalfSpace | RobinDomain::ProductHalfPlane => {
                    if distance.is_some() {
                        return Err(HopfError::InvalidInput(
                            "--distance applies to --domain half-space without --theta".into(),
                        ));
                    }
                    (
                        SolvableDomain::ProductHalfPlane {
                            theta: theta.unwrap_or(0.0),
                        },
                        POLE_E,
                    )
                }
            };
            (
                Output::Json(json(&robin_with_config(&dom, pole, &cfg)?)?),
                common,
            )
        }
        Command::BoundaryExp {
            params,
            domain,
            path,
            steps,
            walks,
            common,
        } => {
            let p = params.params()?;
            let spec = domain.spec()?;
            let cfg = walks.config(Some(common.seed), 20_000)?;
            let rows =
                boundary_behavior_experiment(&spec, &anchor_path(&spec, path, steps)?, &p, &cfg)?;
            match common.format {
                Format::Csv => (csv_bytes(|b| write_experiment_csv(&rows, b))?, common),
                Format::Json => (Output::Json(json(&rows)?), common),
            }
        }
        Command::PshCheck {
            params,
            domain,
            point,
            dir_z,
            dir_z_im,
            dir_w,
            dir_w_im,
            disk_radius,
            grid,
            walks,
            common,
        } => {
            csv_only(common.format, "psh-check")?;
            let p = params.params()?;
            let cfg = walks.config(Some(common.seed), 20_000)?;
            let rep = psh_spot_check(
                &domain.spec()?,
                (c64(point.z, point.z_im), c64(point.w, point.w_im)),
                (c64(dir_z, dir_z_im), c64(dir_w, dir_w_im)),
                disk_radius,
                grid,
                &cfg,
                &p,
            )?;
            (Output::Json(json(&rep)?), common)
        }
        Command::NemirovskiiVerify {
            params,
            samples,
            common,
        } => {
            csv_only(common.format, "nemirovskii-verify")?;
            let rep = verify_nemirovskii_quotient(&params.params()?, samples, common.seed)?;
            (Output::Json(json(&rep)?), common)
        }
    };
    Ok(out)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Invariants { .. } => "invariants",
        Command::Reduce { .. } => "reduce",
        Command::Flow { .. } => "flow",
        Command::Fiber { .. } => "fiber",
        Command::Classify { .. } => "classify",
        Command::Tangency { .. } => "tangency",
        Command::LeviScan { .. } => "levi-scan",
        Command::Diamond { .. } => "diamond",
        Command::SweepCover { .. } => "sweep-cover",
        Command::Robin { .. } => "robin",
        Command::BoundaryExp { .. } => "boundary-exp",
        Command::PshCheck { .. } => "psh-check",
        Command::NemirovskiiVerify { .. } => "nemirovskii-verify",
    }
}

fn exit_code(e: &HopfError) -> i32 {
    match e {
        HopfError::Evaluation(_) => 1,
        _ => 2,
    }
}

fn emit(
    output: Output,
    command: &str,
    common: &Common,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let bytes = match output {
        Output::Json(v) => {
            let env =
                serde_json::json!({ "schema": SCHEMA_VERSION, "command": command, "result": v });
            let mut s = serde_json::to_string_pretty(&env).map_err(std::io::Error::other)?;
            s.push('\n');
            s.into_bytes()
        }
        Output::Csv(b) => b,
    };
    match &common.output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&bytes)?;
            f.flush()
        }
        None => out.write_all(&bytes),
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
                _ => {
                    let text = e.render().to_string();
                    let line = text.lines().next().unwrap_or("error: invalid arguments");
                    let _ = writeln!(err, "{line}");
                    2
                }
            };
        }
    };
    let name = command_name(&cli.command);
    match execute(cli.command) {
        Ok((output, common)) => match emit(output, name, &common, out) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
