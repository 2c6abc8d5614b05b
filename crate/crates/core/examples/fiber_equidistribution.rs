// Fibers of the `X_u` orbit through `e`: dense circles versus finite sets.
//
// `cargo run --example fiber_equidistribution`

use hopf_core::c64;
use hopf_core::flows::{fiber_set, star_discrepancy, VectorField};
use hopf_core::invariants::HopfParams;

pub fn run_example() -> hopf_core::Result<()> {
    let z_prime = c64(1.5, 0.0);
    for (a, b) in [(2.0, 3.0), (2.0, -4.0)] {
        let params = HopfParams::real(a, b)?;
        let x = VectorField::x_u(&params);
        for n in [100, 1000, 10_000] {
            let fs = fiber_set(&x, z_prime, &params, n)?;
            println!(
                "(a, b) = ({a}, {b}), N = {n:>5}: {} distinct values, |w| in [{:.4}, {:.4}], D* = {:.5}",
                fs.samples.len(),
                fs.min_abs,
                fs.max_abs,
                star_discrepancy(&fs.args)?
            );
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
