//! CSV emission. Floats are written with 17 significant digits in scientific
//! notation, which round-trips every `f64` and keeps output byte-stable.

use std::path::Path;

use crate::error::{Error, Result};
use crate::splitting::StepRecord;

use super::convergence::ConvergenceReport;

pub const DIAGNOSTICS_HEADER: [&str; 6] = ["step", "t", "mass", "l1_norm", "electric_energy", "boundary_mass"];
pub const CONVERGENCE_HEADER: [&str; 3] = ["tau", "error", "pairwise_order"];
pub const SUMMARY_HEADER: [&str; 5] = ["method", "tau_ref", "slope", "intercept", "points"];

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Io {
            path: path.into(),
            source: std::io::Error::other(format!("{other:?}")),
        },
    }
}

fn write_rows<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<()> {
    let mut out = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    out.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        out.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn write_diagnostics(path: &Path, records: &[StepRecord]) -> Result<()> {
    write_rows(
        path,
        DIAGNOSTICS_HEADER,
        records.iter().map(|r| {
            [
                r.step.to_string(),
                sci(r.time),
                sci(r.mass),
                sci(r.l1_norm),
                sci(r.electric_energy),
                sci(r.boundary_mass),
            ]
        }),
    )
}

/// One row per step size; the pairwise order on row `i` compares it with row `i - 1`
/// and is left empty on the first row.
pub fn write_convergence(path: &Path, report: &ConvergenceReport) -> Result<()> {
    write_rows(
        path,
        CONVERGENCE_HEADER,
        report
            .rows
            .iter()
            .map(|r| [sci(r.tau), sci(r.error), r.pairwise_order.map(sci).unwrap_or_default()]),
    )
}

pub fn write_summary(path: &Path, reports: &[ConvergenceReport]) -> Result<()> {
    write_rows(
        path,
        SUMMARY_HEADER,
        reports.iter().map(|r| {
            [
                r.method.name().to_string(),
                sci(r.tau_ref),
                sci(r.fit.slope),
                sci(r.fit.intercept),
                r.rows.len().to_string(),
            ]
        }),
    )
}
