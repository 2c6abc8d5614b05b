//! Computational toolkit for the Hopf surface `H(a,b) = (C^2 \ {0}) / <(z,w) -> (az, bw)>`.
//!
//! The crate is organized by capability:
//!
//! - [`invariants`]: the arithmetic invariants `rho`, `tau`, `nu`, `K` and the
//!   case split (A / B1 / B2) that drives every classification.
//! - [`quotient`]: points of the surface, reduction to the fundamental domain,
//!   Ueda's function `U[z,w]` and leaf membership.
//! - [`flows`]: integral curves of `X = alpha z d/dz + beta w d/dw`, fiber sets,
//!   star discrepancy and orbit-closure classification.
//! - [`domains`]: domain families in `H`, their translates `D[z,w]`, tangency of
//!   vector fields and the Stein verdict table.
//! - [`levi`]: Levi forms, numeric jets, pseudoconvexity scans and the
//!   boundary-model machinery (`levi2_residual`, `diamond_search`,
//!   `sweep_cover_check`).
//! - [`robin`]: walk-on-spheres estimation of Robin constants in `R^4`.
//! - [`cli`]: the `hopf` command-line front end.
//!
//! Runnable walkthroughs live in `crates/core/examples/`.

pub mod cli;
pub mod domains;
pub mod error;
pub mod flows;
pub mod invariants;
pub mod levi;
pub mod quotient;
pub mod robin;
mod sampling;

pub use error::{HopfError, Result};
pub use num_complex::Complex64;

/// A point of `C^2` as `(z, w)`.
pub type Pair = (Complex64, Complex64);

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Argument normalized to `[0, 2pi)`.
#[inline]
pub(crate) fn arg_2pi(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t < 0.0 {
        let s = t + std::f64::consts::TAU;
        // t = -0 rounds up to exactly 2pi
        if s >= std::f64::consts::TAU {
            0.0
        } else {
            s
        }
    } else {
        t + 0.0
    }
}
