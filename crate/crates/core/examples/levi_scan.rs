// Levi forms from numeric jets and pseudoconvexity scans.
//
// `cargo run --example levi_scan`

use hopf_core::c64;
use hopf_core::domains::DomainSpec;
use hopf_core::invariants::HopfParams;
use hopf_core::levi::{levi_form, numeric_jet, pseudoconvexity_scan};

pub fn run_example() -> hopf_core::Result<()> {
    let sphere = |p: hopf_core::Pair| p.0.norm_sqr() + p.1.norm_sqr() - 1.0;
    let jet = numeric_jet(&sphere, (c64(0.6, 0.0), c64(0.0, 0.8)), 1e-4)?;
    println!("unit sphere at (0.6, 0.8i): L = {:.8}", levi_form(&jet));

    let params = HopfParams::real(2.0, 4.0)?;
    let specs = [
        DomainSpec::level_band(0.5, 2.0)?,
        DomainSpec::nemirovskii(-1.0, 0.0)?,
        DomainSpec::implicit("concave", |p| p.1.re - p.0.norm_sqr()),
    ];
    for spec in &specs {
        let rep = pseudoconvexity_scan(spec, 100, 1e-6, &params, 11)?;
        println!(
            "{:<12} samples = {:>3}, min L = {:+.3e}, violations = {:>3}, pseudoconvex = {}",
            spec.kind_name(),
            rep.samples,
            rep.min_levi,
            rep.violating.len(),
            rep.pseudoconvex_at_samples
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
