//! Weak or strong Landau damping with Strang splitting, printing the
//! electric energy at every step.
//!
//! cargo run --release --example landau_damping -- [alpha] [t_end]

use vpsplit::cli_io::RunConfig;
use vpsplit::landau_initial_condition;
use vpsplit::splitting::integrate;

fn main() -> vpsplit::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.01, |a| a.parse().expect("alpha"));
    let t_end: f64 = args.next().map_or(10.0, |a| a.parse().expect("t_end"));

    let cfg = RunConfig::from_json(&format!(
        r#"{{"init.alpha": {alpha}, "scheme.tau": 0.0625, "scheme.t_end": {t_end}}}"#
    ))?;
    let f0 = landau_initial_condition(cfg.grid, cfg.alpha)?;
    let evolution = integrate(&f0, &cfg.scheme)?;

    println!("{:>8} {:>14} {:>18}", "t", "energy", "mass");
    for r in &evolution.records {
        println!("{:8.4} {:14.6e} {:18.12}", r.time, r.electric_energy, r.mass);
    }
    if let Some(w) = evolution.support_warning {
        println!("velocity window too small from step {}", w.step);
    }
    Ok(())
}
