// Orbit closures of holomorphic vector fields `X = alpha z d/dz + beta w d/dw`.
//
// `cargo run --example orbit_closure`

use hopf_core::c64;
use hopf_core::flows::{classify_orbit_closure, EvidenceConfig, VectorField};
use hopf_core::invariants::{derive_invariants, HopfParams, RationalityMode};

pub fn run_example() -> hopf_core::Result<()> {
    let cfg = EvidenceConfig {
        n_fiber: 2000,
        ..EvidenceConfig::default()
    };
    let cases = [
        ((2.0, 3.0), None, "X_u, irrational rho"),
        ((2.0, -4.0), None, "X_u, rational tau"),
        (
            (2.0, 4.0),
            Some((c64(1.0, 0.0), c64(1.0, 0.0))),
            "generic field",
        ),
        ((2.0, 4.0), Some((c64(1.0, 0.0), c64(0.0, 0.0))), "beta = 0"),
        (
            (2.0, 4.0),
            Some((c64(0.0, 0.0), c64(1.0, 0.0))),
            "alpha = 0",
        ),
    ];
    for ((a, b), field, label) in cases {
        let params = HopfParams::real(a, b)?;
        let inv = derive_invariants(&params, RationalityMode::default())?;
        let x = match field {
            Some((alpha, beta)) => VectorField::new(alpha, beta),
            None => VectorField::x_u(&params),
        };
        let class = classify_orbit_closure(&x, &params, &inv, &cfg)?;
        println!("(a, b) = ({a}, {b}), {label}: {:?}", class.tag);
        if let Some(d) = class.evidence.fiber_discrepancy {
            println!("    fiber star discrepancy {d:.5}");
        }
        if let Some(last) = class.evidence.decay.last() {
            println!("    torus approach: last reduced modulus {last:.3e}");
        }
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
