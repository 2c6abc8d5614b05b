// Walk-on-spheres Robin constants against closed forms.
//
// `cargo run --release --example robin_oracles`

use hopf_core::robin::{robin_constant, SolvableDomain, WosConfig, POLE_E};

pub fn run_example() -> hopf_core::Result<()> {
    let wos = WosConfig::default();
    let cases = [
        (
            "ball R = 1",
            SolvableDomain::ball([0.0; 4], 1.0)?,
            [0.0; 4],
            -1.0,
        ),
        (
            "ball R = 2",
            SolvableDomain::ball([0.0; 4], 2.0)?,
            [0.0; 4],
            -0.25,
        ),
        (
            "half-space d = 1",
            SolvableDomain::half_space([1.0, 0.0, 0.0, 0.0], 1.0)?,
            [0.0; 4],
            -0.25,
        ),
        (
            "half-plane theta = pi/3",
            SolvableDomain::ProductHalfPlane {
                theta: std::f64::consts::FRAC_PI_3,
            },
            POLE_E,
            -1.0,
        ),
    ];
    for (name, dom, pole, exact) in cases {
        let est = robin_constant(&dom, pole, 0.0, 10_000, 7, &wos)?;
        println!(
            "{name:<24} lambda = {:+.4} +- {:.4} (exact {exact:+.4}), escaped {}",
            est.lambda_hat, est.stderr, est.escaped_walks
        );
    }

    let screened = robin_constant(
        &SolvableDomain::ball([0.0; 4], 1.0)?,
        [0.0; 4],
        4.0,
        2000,
        7,
        &wos,
    )?;
    println!("ball R = 1, c = 4: lambda_c = {:+.6}", screened.lambda_hat);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
