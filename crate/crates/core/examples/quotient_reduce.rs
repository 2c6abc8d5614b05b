// Reduction to the fundamental domain, deck invariance of `U` and leaf coordinates.
//
// `cargo run --example quotient_reduce`

use hopf_core::c64;
use hopf_core::invariants::{derive_invariants, HopfParams, RationalityMode};
use hopf_core::quotient::{equivalent, leaf_coordinate, lift_by, reduce, u_raw, u_value};

pub fn run_example() -> hopf_core::Result<()> {
    let params = HopfParams::real(2.0, 4.0)?;
    let pt = reduce((c64(6.0, 0.0), c64(20.0, 0.0)), &params)?;
    println!(
        "(6, 20) reduces to ({}, {}) with lift index {}",
        pt.z, pt.w, pt.lift_index
    );
    println!("U = {}", u_value(&pt, &params)?);

    let raw = (c64(0.7, -1.3), c64(2.2, 0.4));
    for n in [-3, 0, 5] {
        let lifted = lift_by(raw, n, &params);
        println!(
            "lift {n:>2}: U = {:.15}, equivalent to the original: {}",
            u_raw(lifted, &params)?,
            equivalent(raw, lifted, &params, 1e-12)?
        );
    }

    let params = HopfParams::real(2.0, -4.0)?;
    let inv = derive_invariants(&params, RationalityMode::default())?;
    let p = (c64(1.5, 0.5), c64(-0.3, 2.0));
    println!(
        "leaf coordinate on two lifts: {} and {}",
        leaf_coordinate(p, &inv)?,
        leaf_coordinate(lift_by(p, 2, &params), &inv)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
