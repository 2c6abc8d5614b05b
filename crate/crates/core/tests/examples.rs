mod boundary_behavior {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/boundary_behavior.rs"
    ));
}
mod classify_domains {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/classify_domains.rs"
    ));
}
mod cli_tour {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_tour.rs"));
}
mod diamond_search {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/diamond_search.rs"
    ));
}
mod fiber_equidistribution {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/fiber_equidistribution.rs"
    ));
}
mod invariants {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/invariants.rs"
    ));
}
mod levi_scan {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/levi_scan.rs"
    ));
}
mod nemirovskii_quotient {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/nemirovskii_quotient.rs"
    ));
}
mod orbit_closure {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/orbit_closure.rs"
    ));
}
mod psh_check {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/psh_check.rs"
    ));
}
mod quotient_reduce {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/quotient_reduce.rs"
    ));
}
mod robin_oracles {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/robin_oracles.rs"
    ));
}
mod sweep_cover {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/sweep_cover.rs"
    ));
}
mod tangency {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tangency.rs"));
}

#[test]
fn example_boundary_behavior_runs() {
    boundary_behavior::run_example().unwrap();
}

#[test]
fn example_classify_domains_runs() {
    classify_domains::run_example().unwrap();
}

#[test]
fn example_cli_tour_runs() {
    cli_tour::run_example().unwrap();
}

#[test]
fn example_diamond_search_runs() {
    diamond_search::run_example().unwrap();
}

#[test]
fn example_fiber_equidistribution_runs() {
    fiber_equidistribution::run_example().unwrap();
}

#[test]
fn example_invariants_runs() {
    invariants::run_example().unwrap();
}

#[test]
fn example_levi_scan_runs() {
    levi_scan::run_example().unwrap();
}

#[test]
fn example_nemirovskii_quotient_runs() {
    nemirovskii_quotient::run_example().unwrap();
}

#[test]
fn example_orbit_closure_runs() {
    orbit_closure::run_example().unwrap();
}

#[test]
fn example_psh_check_runs() {
    psh_check::run_example().unwrap();
}

#[test]
fn example_quotient_reduce_runs() {
    quotient_reduce::run_example().unwrap();
}

#[test]
fn example_robin_oracles_runs() {
    robin_oracles::run_example().unwrap();
}

#[test]
fn example_sweep_cover_runs() {
    sweep_cover::run_example().unwrap();
}

#[test]
fn example_tangency_runs() {
    tangency::run_example().unwrap();
}
