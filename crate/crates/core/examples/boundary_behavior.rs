// `lambda[z,w]` along paths toward the boundary of a Nemirovskii domain and a level band.
//
// `cargo run --release --example boundary_behavior`

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use hopf_core::c64;
use hopf_core::domains::DomainSpec;
use hopf_core::invariants::HopfParams;
use hopf_core::robin::{boundary_behavior_experiment, RobinConfig};

pub fn run_example() -> hopf_core::Result<()> {
    let params = HopfParams::real(2.0, 4.0)?;
    let budget = RobinConfig {
        walks: 4000,
        ..RobinConfig::default()
    };

    let nem = DomainSpec::nemirovskii(-1.0, 0.0)?;
    let toward_boundary: Vec<_> = (1..=5)
        .map(|k| (c64(1.0, 0.0), c64(0.0, FRAC_PI_2 - 0.5f64.powi(k)).exp()))
        .collect();
    let toward_ta: Vec<_> = (1..=4)
        .map(|k| (c64(1.0, 0.0), c64(0.0, FRAC_PI_3).exp() * 0.5f64.powi(k)))
        .collect();
    for (label, path) in [
        ("theta -> pi/2", toward_boundary),
        ("|w| -> 0 at pi/3", toward_ta),
    ] {
        println!("Nemirovskii, {label}");
        for row in boundary_behavior_experiment(&nem, &path, &params, &budget)? {
            let exact = -0.25 / (row.dist * row.dist);
            println!(
                "  dist = {:.5}  lambda = {:+10.4} +- {:.4}  (half-space value {exact:+.4})",
                row.dist, row.lambda_hat, row.stderr
            );
        }
    }

    let band = DomainSpec::level_band(0.5, 2.0)?;
    let path: Vec<_> = (1..=3)
        .map(|k| {
            (
                c64(1.0, 0.0),
                c64((2f64.ln() * (1.0 - 0.5f64.powi(k))).exp(), 0.0),
            )
        })
        .collect();
    let small = RobinConfig {
        walks: 1000,
        ..budget
    };
    println!("level band, approaching |w| = 2|z|^rho");
    for row in boundary_behavior_experiment(&band, &path, &params, &small)? {
        println!(
            "  dist = {:.5}  lambda = {:+10.4} +- {:.4}",
            row.dist, row.lambda_hat, row.stderr
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
