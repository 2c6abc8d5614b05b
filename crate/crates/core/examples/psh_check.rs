// Sub-mean-value spot checks of `-lambda` on complex disks.
//
// `cargo run --release --example psh_check`

use hopf_core::c64;
use hopf_core::domains::DomainSpec;
use hopf_core::invariants::HopfParams;
use hopf_core::robin::{psh_spot_check, RobinConfig};

pub fn run_example() -> hopf_core::Result<()> {
    let params = HopfParams::real(2.0, 4.0)?;
    let spec = DomainSpec::nemirovskii(-1.0, 0.0)?;
    let budget = RobinConfig {
        walks: 4000,
        ..RobinConfig::default()
    };
    let anchor = (c64(1.0, 0.0), c64(1.0, 0.5));
    for (label, dir) in [
        ("z-direction", (c64(1.0, 0.0), c64(0.0, 0.0))),
        ("w-direction", (c64(0.0, 0.0), c64(1.0, 0.0))),
    ] {
        let rep = psh_spot_check(&spec, anchor, dir, 0.3, 8, &budget, &params)?;
        println!(
            "{label}: center {:.4}, ring mean {:.4}, residual {:+.2e} (3 sigma = {:.2e}), consistent = {}",
            rep.center,
            rep.ring_mean,
            rep.residual,
            3.0 * rep.combined_stderr,
            rep.consistent
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
