//! Temporal convergence of Strang and Lie-Trotter splitting on Landau
//! damping, measured against a fine-step reference of the same scheme.
//!
//! cargo run --release --example convergence_study -- [alpha]

use vpsplit::cli_io::{ConvergenceStudy, RunConfig};
use vpsplit::splitting::Method;

fn main() -> vpsplit::Result<()> {
    let alpha: f64 = std::env::args().nth(1).map_or(0.01, |a| a.parse().expect("alpha"));
    let base = RunConfig::from_json(&format!(r#"{{"init.alpha": {alpha}}}"#))?;
    let taus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let study = ConvergenceStudy::new(base, &taus, 1.0 / 256.0, &[Method::Strang, Method::Lie])?;

    for report in study.evaluate()? {
        println!(
            "{} (nominal order {})",
            report.method.name(),
            report.method.nominal_order()
        );
        for row in &report.rows {
            let order = row.pairwise_order.map_or(String::new(), |p| format!("{p:.3}"));
            println!("  tau = {:<9} error = {:.4e}  {order}", row.tau, row.error);
        }
        println!("  fitted order {:.4}", report.fit.slope);
    }
    Ok(())
}
