// Which vector fields are tangential to which boundaries.
//
// `cargo run --example tangency`

use hopf_core::c64;
use hopf_core::domains::{tangency_check, DomainSpec};
use hopf_core::flows::VectorField;
use hopf_core::invariants::HopfParams;

pub fn run_example() -> hopf_core::Result<()> {
    let params = HopfParams::real(2.0, 4.0)?;
    let times: Vec<_> = (-4..=4)
        .map(|k| c64(0.25 * k as f64, 0.5 * k as f64))
        .collect();
    let band = DomainSpec::level_band(0.5, 2.0)?;
    let nem = DomainSpec::nemirovskii(-1.0, 0.0)?;
    let fields = [
        ("X_u", VectorField::x_u(&params)),
        ("z d/dz", VectorField::new(c64(1.0, 0.0), c64(0.0, 0.0))),
        ("w d/dw", VectorField::new(c64(0.0, 0.0), c64(1.0, 0.0))),
    ];
    for (name, spec) in [("level band", &band), ("Nemirovskii", &nem)] {
        for (label, x) in &fields {
            let rep = tangency_check(spec, x, 50, &times, 1e-9, &params, 3)?;
            println!(
                "{name:<12} {label:<7} tangential = {:<5} drift = {:.2e}, escapes = {}",
                rep.tangential, rep.max_drift, rep.interior_escapes
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
