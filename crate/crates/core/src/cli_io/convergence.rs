use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{observed_order, pairwise_orders, OrderFit};
use crate::error::{Error, Result};
use crate::grid::{l1_distance, DistributionField};
use crate::splitting::{integrate, step_count, Evolution, Method, STEP_COUNT_TOLERANCE};

use super::config::RunConfig;
use super::report::{write_convergence, write_summary};
use super::run::{create_dir, initial_state};
use super::snapshot::{load_snapshot_on, save_snapshot};

/// A reference step whose step count is off by at most this fraction is
/// moved to the nearest divisor of the horizon instead of being rejected.
pub const REFERENCE_SNAP_TOLERANCE: f64 = 0.01;

/// The reference step must be at least this many times smaller than every
/// tested step. Equality is allowed so that the divisor nearest a requested
/// step just below the bound is still accepted.
pub const REFERENCE_RATIO: f64 = 4.0;

pub const SUMMARY_FILE: &str = "convergence_summary.csv";

pub fn table_file(method: Method) -> String {
    format!("convergence_{}.csv", method.name())
}

/// `tau_ref` itself when it divides `t_end`, otherwise `t_end / n` for the
/// nearest step count `n` if that is within [`REFERENCE_SNAP_TOLERANCE`].
pub fn resolve_reference_step(tau_ref: f64, t_end: f64) -> Result<f64> {
    if !(tau_ref.is_finite() && tau_ref > 0.0) {
        return Err(Error::Config(format!("reference step must be positive, got {tau_ref}")));
    }
    if step_count(tau_ref, t_end).is_some() {
        return Ok(tau_ref);
    }
    let ratio = t_end / tau_ref;
    let n = ratio.round();
    if n >= 1.0 && (ratio - n).abs() <= REFERENCE_SNAP_TOLERANCE * n {
        let snapped = t_end / n;
        log::info!("reference step {tau_ref} does not divide T = {t_end}; using T/{n} = {snapped}");
        Ok(snapped)
    } else {
        Err(Error::Config(format!(
            "reference step {tau_ref} is not close to a divisor of T = {t_end}"
        )))
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub base: RunConfig,
    /// Tested step sizes, largest first.
    pub taus: Vec<f64>,
    /// Reference step after [`resolve_reference_step`].
    pub tau_ref: f64,
    pub methods: Vec<Method>,
    /// Directory for cached reference snapshots; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl ConvergenceStudy {
    pub fn new(base: RunConfig, taus: &[f64], tau_ref: f64, methods: &[Method]) -> Result<Self> {
        let t_end = base.scheme.t_end();
        if taus.len() < 2 {
            return Err(Error::Config(format!(
                "a convergence study needs at least 2 step sizes, got {}",
                taus.len()
            )));
        }
        if methods.is_empty() {
            return Err(Error::Config("no splitting method selected".into()));
        }
        let mut sorted = taus.to_vec();
        for &tau in &sorted {
            base.scheme.with_tau(tau)?;
        }
        sorted.sort_by(|a, b| b.total_cmp(a));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("step sizes must be distinct".into()));
        }
        let tau_ref = resolve_reference_step(tau_ref, t_end)?;
        let smallest = *sorted.last().unwrap();
        if tau_ref > smallest / REFERENCE_RATIO * (1.0 + STEP_COUNT_TOLERANCE) {
            return Err(Error::Config(format!(
                "reference step {tau_ref} must not exceed {} (smallest tested step / {REFERENCE_RATIO})",
                smallest / REFERENCE_RATIO
            )));
        }
        Ok(Self {
            base,
            taus: sorted,
            tau_ref,
            methods: methods.to_vec(),
            cache_dir: None,
        })
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    fn config_for(&self, method: Method, tau: f64) -> Result<RunConfig> {
        let mut cfg = self.base.clone();
        cfg.scheme = cfg.scheme.with_method(method).with_tau(tau)?;
        Ok(cfg)
    }

    /// Where the reference for `method` is cached, if caching is enabled.
    pub fn reference_path(&self, method: Method) -> Result<Option<PathBuf>> {
        let cfg = self.config_for(method, self.tau_ref)?;
        Ok(self
            .cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("reference-{}.snap", cfg.state_hash()))))
    }

    /// Final state of the reference run, loaded from the cache when possible.
    pub fn reference(&self, method: Method) -> Result<Reference> {
        let cfg = self.config_for(method, self.tau_ref)?;
        let path = self.reference_path(method)?;
        if let Some(path) = path.as_deref().filter(|p| p.exists()) {
            match load_snapshot_on(path, &cfg.grid) {
                Ok(snap) if snap.time == cfg.scheme.t_end() => {
                    log::info!("using cached reference {}", path.display());
                    return Ok(Reference {
                        state: snap.field,
                        cached: true,
                    });
                }
                Ok(_) => log::warn!("cached reference {} has the wrong time; recomputing", path.display()),
                Err(e) => log::warn!("ignoring unreadable cached reference {}: {e}", path.display()),
            }
        }
        let state = integrate(&initial_state(&cfg)?, &cfg.scheme)?.state;
        if let Some(path) = path {
            let dir = path.parent().expect("cache path has a parent");
            create_dir(dir)?;
            let partial = path.with_extension("partial");
            save_snapshot(&partial, &state, cfg.scheme.t_end())?;
            std::fs::rename(&partial, &path).map_err(|e| Error::io(&path, e))?;
        }
        Ok(Reference { state, cached: false })
    }

    /// Run every tested step for every method and compare with the references.
    pub fn evaluate(&self) -> Result<Vec<ConvergenceReport>> {
        self.methods.par_iter().map(|&m| self.evaluate_method(m)).collect()
    }

    fn evaluate_method(&self, method: Method) -> Result<ConvergenceReport> {
        let reference = self.reference(method)?;
        let runs: Vec<(f64, Evolution, DistributionField)> = self
            .taus
            .par_iter()
            .map(|&tau| {
                let cfg = self.config_for(method, tau)?;
                let initial = initial_state(&cfg)?;
                let evolution = integrate(&initial, &cfg.scheme)?;
                Ok((tau, evolution, initial))
            })
            .collect::<Result<_>>()?;

        let mut rows = Vec::with_capacity(runs.len());
        for (tau, evolution, initial) in &runs {
            let error = l1_distance(&evolution.state, &reference.state)?;
            if !(error.is_finite() && error > 0.0) {
                return Err(Error::Accuracy(format!(
                    "{} error at tau = {tau} is {error}; cannot fit an order",
                    method.name()
                )));
            }
            let (mass_drift, l1_growth) = conservation(initial, evolution);
            rows.push(ConvergenceRow {
                tau: *tau,
                error,
                pairwise_order: None,
                mass_drift,
                l1_growth,
            });
        }
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.tau, r.error)).collect();
        for (row, order) in rows.iter_mut().skip(1).zip(pairwise_orders(&points)) {
            row.pairwise_order = Some(order);
        }
        Ok(ConvergenceReport {
            method,
            tau_ref: self.tau_ref,
            reference_cached: reference.cached,
            fit: observed_order(&points)?,
            rows,
        })
    }
}

pub struct Reference {
    pub state: DistributionField,
    pub cached: bool,
}

/// Largest relative mass deviation and relative L1-norm increase over a run.
pub fn conservation(initial: &DistributionField, evolution: &Evolution) -> (f64, f64) {
    let m0 = crate::grid::mass(initial);
    let n0 = crate::grid::l1_norm(initial);
    evolution.records.iter().fold((0.0, 0.0), |(drift, growth), r| {
        (
            f64::max(drift, (r.mass - m0).abs() / m0.abs()),
            f64::max(growth, (r.l1_norm - n0) / n0),
        )
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    /// Discrete L1 distance to the reference at the final time.
    pub error: f64,
    /// Order between this row and the previous (larger) step.
    pub pairwise_order: Option<f64>,
    pub mass_drift: f64,
    pub l1_growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub method: Method,
    pub tau_ref: f64,
    pub reference_cached: bool,
    pub rows: Vec<ConvergenceRow>,
    pub fit: OrderFit,
}

/// Evaluate `study` and write one table per method plus a summary into `out_dir`.
pub fn convergence(study: &ConvergenceStudy, out_dir: &Path) -> Result<Vec<ConvergenceReport>> {
    create_dir(out_dir)?;
    let reports = study.evaluate()?;
    for report in &reports {
        write_convergence(&out_dir.join(table_file(report.method)), report)?;
    }
    write_summary(&out_dir.join(SUMMARY_FILE), &reports)?;
    Ok(reports)
}

/// Parse a step size written as a decimal (`0.125`) or a fraction (`1/8`).
pub fn parse_step(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad step size '{text}'")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad step size '{text}'")))?;
            num / den
        }
        None => text
            .parse()
            .map_err(|_| Error::Config(format!("bad step size '{text}'")))?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Config(format!(
            "step size must be positive and finite, got '{text}'"
        )))
    }
}

pub fn parse_step_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_step).collect()
}
