// Arithmetic invariants of a few Hopf surfaces.
//
// `cargo run --example invariants`

use hopf_core::invariants::{derive_invariants, HopfParams, RationalityMode};

pub fn run_example() -> hopf_core::Result<()> {
    for (a, b) in [(2.0, -4.0), (2.0, 4.0), (2.0, 3.0), (2.0, 8.0)] {
        let params = HopfParams::real(a, b)?;
        let inv = derive_invariants(&params, RationalityMode::default())?;
        println!(
            "(a, b) = ({a}, {b}): rho = {}, tau = {:?}, nu = {:?}, case = {}",
            inv.rho,
            inv.tau,
            inv.nu,
            inv.case_tag.as_str()
        );
    }

    // Declared invariants skip detection but are checked against (a, b).
    let params = HopfParams::real(2.0, -4.0)?;
    let declared = RationalityMode::Declared {
        rho: Some((1, 2)),
        tau: Some((2, -1)),
    };
    let inv = derive_invariants(&params, declared)?;
    println!("declared: {}", inv.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
