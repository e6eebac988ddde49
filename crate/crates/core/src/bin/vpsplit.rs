use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vpsplit::cli_io::{self, ConvergenceStudy, RunConfig, Thresholds};
use vpsplit::splitting::Method;
use vpsplit::{Error, Result};

/// Strang and Lie-Trotter splitting for 1+1D Vlasov-Poisson.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodChoice {
    Strang,
    Lie,
    Both,
}

impl MethodChoice {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Strang => vec![Method::Strang],
            MethodChoice::Lie => vec![Method::Lie],
            MethodChoice::Both => vec![Method::Strang, Method::Lie],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write diagnostics plus snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory [default: output.dir from the config].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure errors against a fine-step reference and fit the order.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated step sizes; fractions such as 1/8 are accepted.
        #[arg(long, default_value = "1/8,1/16,1/32,1/64")]
        taus: String,
        /// Reference step; snapped to the nearest divisor of the final time.
        #[arg(long, default_value = "3.9e-3")]
        tau_ref: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodChoice,
        #[arg(long)]
        out: PathBuf,
        /// Directory of cached reference snapshots [default: <out>/cache].
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Run the built-in property suites.
    Verify {
        /// Override the phi recurrence residual threshold.
        #[arg(long)]
        phi_threshold: Option<f64>,
    },
    /// Print the header of a snapshot file.
    SnapshotInfo { path: PathBuf },
}

fn run(cfg_path: PathBuf, out: Option<PathBuf>) -> Result<ExitCode> {
    let cfg = RunConfig::load(&cfg_path)?;
    let out = out
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output.dir".into()))?;
    let outcome = cli_io::run(&cfg, &out)?;
    let last = outcome.evolution.records.last().expect("at least one step");
    println!(
        "{} steps of {} (tau = {}) to t = {}",
        cfg.scheme.steps(),
        cfg.scheme.method().name(),
        cfg.scheme.tau(),
        last.time
    );
    println!(
        "mass {:.12e}  l1 {:.12e}  energy {:.6e}",
        last.mass, last.l1_norm, last.electric_energy
    );
    if let Some(w) = outcome.evolution.support_warning {
        println!("warning: boundary mass {:.3e} at step {}", w.boundary_mass, w.step);
    }
    println!("wrote {}", outcome.diagnostics.display());
    for path in outcome.snapshots.iter().chain([&outcome.final_snapshot]) {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn convergence(
    cfg_path: PathBuf,
    taus: &str,
    tau_ref: &str,
    method: MethodChoice,
    out: PathBuf,
    cache_dir: Option<PathBuf>,
) -> Result<ExitCode> {
    let cfg = RunConfig::load(&cfg_path)?;
    let taus = cli_io::parse_step_list(taus)?;
    let tau_ref = cli_io::parse_step(tau_ref)?;
    let cache_dir = cache_dir.unwrap_or_else(|| out.join("cache"));
    let study = ConvergenceStudy::new(cfg, &taus, tau_ref, &method.methods())?.with_cache_dir(cache_dir);
    println!("reference step {}", study.tau_ref);
    for report in cli_io::convergence(&study, &out)? {
        println!(
            "{}: fitted order {:.4}{}",
            report.method.name(),
            report.fit.slope,
            if report.reference_cached {
                " (cached reference)"
            } else {
                ""
            }
        );
        for row in &report.rows {
            let order = row.pairwise_order.map(|p| format!("{p:.3}")).unwrap_or_default();
            println!("  tau {:<10} error {:.6e}  {order}", row.tau, row.error);
        }
    }
    println!("wrote tables to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(phi_threshold: Option<f64>) -> ExitCode {
    let mut thresholds = Thresholds::default();
    if let Some(t) = phi_threshold {
        thresholds.phi_recurrence = t;
    }
    let report = cli_io::verify(&thresholds);
    for check in &report.checks {
        println!("{check}");
    }
    if report.passed() {
        println!("all {} properties pass", report.checks.len());
        ExitCode::SUCCESS
    } else {
        println!("failed suites: {}", report.failed_suites().join(", "));
        ExitCode::from(1)
    }
}

fn snapshot_info(path: PathBuf) -> Result<ExitCode> {
    let h = cli_io::load_header(&path)?;
    println!("version {}", h.version);
    println!("nx      {}", h.nx);
    println!("nv      {}", h.nv);
    println!("L       {:.17e}", h.length);
    println!("vmax    {:.17e}", h.vmax);
    println!("time    {:.17e}", h.time);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => run(config, out),
        Command::Convergence {
            config,
            taus,
            tau_ref,
            method,
            out,
            cache_dir,
        } => convergence(config, &taus, &tau_ref, method, out, cache_dir),
        Command::Verify { phi_threshold } => Ok(verify(phi_threshold)),
        Command::SnapshotInfo { path } => snapshot_info(path),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
