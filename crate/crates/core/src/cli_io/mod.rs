//! File formats and workflows behind the command-line front end: JSON run
//! configurations, binary snapshots, CSV reports, and the run, convergence
//! and verify drivers.

pub mod config;
pub mod convergence;
pub mod report;
pub mod run;
pub mod snapshot;
pub mod verify;

pub use config::{ConfigFile, RunConfig};
pub use convergence::{
    convergence, parse_step, parse_step_list, resolve_reference_step, ConvergenceReport, ConvergenceRow,
    ConvergenceStudy,
};
pub use run::{run, RunOutcome};
pub use snapshot::{load_header, load_snapshot, load_snapshot_on, save_snapshot, Snapshot, SnapshotHeader};
pub use verify::{verify, PropertyCheck, Thresholds, VerifyReport};
