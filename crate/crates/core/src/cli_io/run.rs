use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::{landau_initial_condition, DistributionField};
use crate::splitting::{integrate_observed, Evolution};

use super::config::RunConfig;
use super::report::write_diagnostics;
use super::snapshot::save_snapshot;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const FINAL_SNAPSHOT_FILE: &str = "final.snap";

/// Name of the intermediate snapshot written after `step`.
pub fn step_snapshot_name(step: usize) -> String {
    format!("step_{step:06}.snap")
}

#[derive(Debug)]
pub struct RunOutcome {
    pub initial: DistributionField,
    pub evolution: Evolution,
    pub diagnostics: PathBuf,
    pub final_snapshot: PathBuf,
    /// Intermediate snapshots in step order (empty for cadence 0).
    pub snapshots: Vec<PathBuf>,
}

/// The Landau initial condition of `cfg`, with setup problems reported as
/// configuration errors.
pub fn initial_state(cfg: &RunConfig) -> Result<DistributionField> {
    landau_initial_condition(cfg.grid, cfg.alpha).map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    })
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Integrate the configured Landau problem and write its artifacts into `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome> {
    let initial = initial_state(cfg)?;
    create_dir(out_dir)?;

    let cadence = cfg.snapshot_cadence;
    let mut snapshots = Vec::new();
    let evolution = integrate_observed(&initial, &cfg.scheme, |record, state| {
        if cadence > 0 && record.step % cadence == 0 {
            let path = out_dir.join(step_snapshot_name(record.step));
            save_snapshot(&path, state, record.time)?;
            snapshots.push(path);
        }
        Ok(())
    })?;

    let diagnostics = out_dir.join(DIAGNOSTICS_FILE);
    write_diagnostics(&diagnostics, &evolution.records)?;
    let final_snapshot = out_dir.join(FINAL_SNAPSHOT_FILE);
    save_snapshot(&final_snapshot, &evolution.state, cfg.scheme.t_end())?;

    Ok(RunOutcome {
        initial,
        evolution,
        diagnostics,
        final_snapshot,
        snapshots,
    })
}
