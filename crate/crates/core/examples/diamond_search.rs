// The case ladder that finds `z*` with `p0(z*) > 0` near the origin.
//
// `cargo run --example diamond_search`

use hopf_core::c64;
use hopf_core::levi::{
    diamond_search, levi2_residual, BoundaryModel, DiamondOutcome, HermitianPoly,
};

pub fn run_example() -> hopf_core::Result<()> {
    let models = [
        ("Re z^2", vec![(2, 0, c64(1.0, 0.0))]),
        ("|z|^2", vec![(1, 1, c64(1.0, 0.0))]),
        ("Re z", vec![(1, 0, c64(1.0, 0.0))]),
        ("Re(i z^3)", vec![(3, 0, c64(0.0, 1.0))]),
        (
            "Re z^4 + |z|^4",
            vec![(4, 0, c64(1.0, 0.0)), (2, 2, c64(1.0, 0.0))],
        ),
        ("|z|^6", vec![(3, 3, c64(1.0, 0.0))]),
    ];
    for (name, terms) in models {
        let model = BoundaryModel::new(vec![HermitianPoly::from_re_terms(&terms)?])?;
        let levi2 = levi2_residual(&model, c64(0.1, 0.05));
        match diamond_search(&model, 0.5)? {
            DiamondOutcome::Found { z_star, p0_value, case, .. } => println!(
                "{name:<15} levi-2 = {levi2:+.3e}  {case:?}: z* = {z_star:.5}, p0(z*) = {p0_value:.3e}"
            ),
            DiamondOutcome::NotFound { trace, .. } => println!("{name:<15} not found: {trace:?}"),
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
