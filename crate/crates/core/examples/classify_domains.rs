// The Theorem 1 verdict table over every domain family.
//
// `cargo run --example classify_domains`

use hopf_core::domains::{classify_domain, DomainSpec, LeafRegion};
use hopf_core::invariants::{derive_invariants, HopfParams, RationalityMode};

pub fn run_example() -> hopf_core::Result<()> {
    let b2 = HopfParams::real(2.0, -4.0)?;
    let nem = HopfParams::real(2.0, 4.0)?;
    let specs = [
        (DomainSpec::level_band(0.5, 2.0)?, b2),
        (DomainSpec::sub_level(1.0)?, b2),
        (DomainSpec::super_level(1.0)?, b2),
        (
            DomainSpec::leaf_family(LeafRegion::Annulus {
                inner: 0.0,
                outer: f64::INFINITY,
            })?,
            b2,
        ),
        (DomainSpec::nemirovskii(-1.0, 0.0)?, nem),
        (
            DomainSpec::implicit("ball-like", |p| p.0.norm_sqr() + p.1.norm_sqr() - 1.0),
            b2,
        ),
    ];
    for (spec, params) in specs {
        spec.validate(&params)?;
        let inv = derive_invariants(&params, RationalityMode::default())?;
        let res = classify_domain(&spec, &inv)?;
        println!("{:<12} {:?}", res.kind, res.theorem1_type);
        println!("             {:?}", res.stein_verdict);
        for note in &res.notes {
            println!("             note: {note}");
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
