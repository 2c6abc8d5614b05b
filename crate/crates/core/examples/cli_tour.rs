// Driving the `hopf` front end in-process.
//
// `cargo run --example cli_tour`

use hopf_core::cli::run;

pub fn run_example() -> hopf_core::Result<()> {
    let commands: [&[&str]; 4] = [
        &["hopf", "invariants", "--a", "2", "--b", "-4"],
        &[
            "hopf", "reduce", "--a", "2", "--b", "4", "--z", "6", "--w", "20",
        ],
        &["hopf", "diamond", "--model", "abs-z2"],
        &[
            "hopf",
            "robin",
            "--domain",
            "half-space",
            "--theta",
            "0",
            "--walks",
            "2000",
        ],
    ];
    for argv in commands {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(argv.iter().copied(), &mut out, &mut err);
        println!("$ {}  -> exit {code}", argv[1..].join(" "));
        print!("{}", String::from_utf8_lossy(&out));
        if code != 0 {
            return Err(hopf_core::HopfError::Evaluation(
                String::from_utf8_lossy(&err).into(),
            ));
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
