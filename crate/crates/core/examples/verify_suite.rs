//! The built-in property suites, as run by `vpsplit verify`.

use vpsplit::cli_io::{verify, Thresholds};

fn main() {
    let report = verify(&Thresholds::default());
    for check in &report.checks {
        println!("{check}");
    }
    println!("all pass: {}", report.passed());
}
