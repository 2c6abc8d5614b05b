// Arcs `S(z)` over a segment `[0, z*]` sweeping out a neighborhood in `D(0)`.
//
// `cargo run --example sweep_cover`

use hopf_core::c64;
use hopf_core::levi::{sweep_cover_check, BoundaryModel, HermitianPoly};

pub fn run_example() -> hopf_core::Result<()> {
    let models = [
        (
            "Re z^2",
            vec![HermitianPoly::from_re_terms(&[(2, 0, c64(1.0, 0.0))])?],
        ),
        (
            "|z|^2",
            vec![HermitianPoly::from_re_terms(&[(1, 1, c64(1.0, 0.0))])?],
        ),
        (
            "|z|^2 + u^2",
            vec![
                HermitianPoly::from_re_terms(&[(1, 1, c64(1.0, 0.0))])?,
                HermitianPoly::zero(),
                HermitianPoly::from_re_terms(&[(0, 0, c64(1.0, 0.0))])?,
            ],
        ),
    ];
    for (name, p) in models {
        let rep = sweep_cover_check(&BoundaryModel::new(p)?, 0.5, 500, 5)?;
        println!(
            "{name:<12} r' = {:.4e}, covered {}/{} samples, max residual {:.1e}, certified = {}",
            rep.r_prime, rep.covered, rep.samples, rep.max_residual, rep.certified
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
