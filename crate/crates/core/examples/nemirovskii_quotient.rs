// The fundamental piece of a Nemirovskii quotient, checked in both directions.
//
// `cargo run --example nemirovskii_quotient`

use hopf_core::domains::verify_nemirovskii_quotient;
use hopf_core::invariants::HopfParams;

pub fn run_example() -> hopf_core::Result<()> {
    for (a, b) in [(2.0, 4.0), (1.5, 3.0)] {
        let params = HopfParams::real(a, b)?;
        let rep = verify_nemirovskii_quotient(&params, 2000, 1)?;
        println!(
            "(a, b) = ({a}, {b}): forward {}/{} (case 1: {}, case 2: {}), backward {}/{}, negative hits {}, failures {}",
            rep.forward_in_d,
            rep.forward_samples,
            rep.case1,
            rep.case2,
            rep.backward_in_n,
            rep.backward_samples,
            rep.negative_control_hits,
            rep.failures
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
