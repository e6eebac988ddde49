//! Strang and Lie-Trotter splitting for Vlasov-Poisson.
//!
//! One Strang step is
//!
//! ```text
//! f_{k+1} = e^{tau/2 A} e^{tau B(f_{k+1/2})} e^{tau/2 A} f_k
//! ```
//!
//! with `A = -v d/dx` (free streaming) and `B(g) = -E(g) d/dv` (acceleration
//! in the field generated by `g`). The nonlinear operator is frozen at a
//! first-order midpoint predictor `f_{k+1/2}`, so the middle factor is an
//! exact translation in v. Two predictors are available:
//!
//! * free-stream: `f_{k+1/2} = e^{tau/2 A} f_k`, which is the first half-step
//!   of the Strang step itself and is therefore free;
//! * lie-half: `f_{k+1/2} = e^{tau/2 B(f_k)} e^{tau/2 A} f_k`.
//!
//! They produce the same field, since a velocity translation leaves the
//! charge density unchanged.

use serde::{Deserialize, Serialize};

use crate::advection::{advect_v, advect_x};
use crate::error::{Error, Result};
use crate::field::{electric_energy, solve_field, ElectricField};
use crate::grid::{boundary_mass, charge_density, l1_norm, mass, DistributionField};
use crate::interp::InterpolationScheme;

/// Relative tolerance on `t_end / tau` being an integer.
pub const STEP_COUNT_TOLERANCE: f64 = 1e-9;

/// Boundary mass above this fraction of the total mass triggers a support warning.
pub const SUPPORT_WARNING_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Strang,
    Lie,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Strang => "strang",
            Method::Lie => "lie",
        }
    }

    pub fn nominal_order(self) -> u32 {
        match self {
            Method::Strang => 2,
            Method::Lie => 1,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strang" => Ok(Method::Strang),
            "lie" => Ok(Method::Lie),
            other => Err(format!("unknown splitting method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Midpoint {
    #[default]
    FreeStream,
    LieHalf,
}

impl Midpoint {
    pub fn name(self) -> &'static str {
        match self {
            Midpoint::FreeStream => "free-stream",
            Midpoint::LieHalf => "lie-half",
        }
    }
}

impl std::str::FromStr for Midpoint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "free-stream" => Ok(Midpoint::FreeStream),
            "lie-half" => Ok(Midpoint::LieHalf),
            other => Err(format!("unknown midpoint predictor '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    method: Method,
    midpoint: Midpoint,
    interpolation: InterpolationScheme,
    tau: f64,
    t_end: f64,
    steps: usize,
}

impl SchemeConfig {
    pub fn new(
        method: Method,
        midpoint: Midpoint,
        interpolation: InterpolationScheme,
        tau: f64,
        t_end: f64,
    ) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Config(format!("step size must be positive, got {tau}")));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Config(format!("final time must be positive, got {t_end}")));
        }
        let steps = step_count(tau, t_end).ok_or_else(|| {
            Error::Config(format!(
                "final time {t_end} is not an integer multiple of the step size {tau}"
            ))
        })?;
        Ok(Self {
            method,
            midpoint,
            interpolation,
            tau,
            t_end,
            steps,
        })
    }

    /// Strang splitting with the free-stream predictor and cubic splines.
    pub fn strang(tau: f64, t_end: f64) -> Result<Self> {
        Self::new(
            Method::Strang,
            Midpoint::FreeStream,
            InterpolationScheme::CubicSpline,
            tau,
            t_end,
        )
    }

    pub fn lie(tau: f64, t_end: f64) -> Result<Self> {
        Self::new(
            Method::Lie,
            Midpoint::FreeStream,
            InterpolationScheme::CubicSpline,
            tau,
            t_end,
        )
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }

    pub fn with_midpoint(self, midpoint: Midpoint) -> Self {
        Self { midpoint, ..self }
    }

    pub fn with_interpolation(self, interpolation: InterpolationScheme) -> Self {
        Self { interpolation, ..self }
    }

    /// Same scheme with a different step size over the same horizon.
    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.method, self.midpoint, self.interpolation, tau, self.t_end)
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn midpoint(&self) -> Midpoint {
        self.midpoint
    }

    pub fn interpolation(&self) -> InterpolationScheme {
        self.interpolation
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of steps `n = t_end / tau`.
    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// `Some(n)` when `t_end = n tau` within [`STEP_COUNT_TOLERANCE`], `n >= 1`.
pub fn step_count(tau: f64, t_end: f64) -> Option<usize> {
    let ratio = t_end / tau;
    let n = ratio.round();
    if n >= 1.0 && (ratio - n).abs() <= STEP_COUNT_TOLERANCE * ratio {
        Some(n as usize)
    } else {
        None
    }
}

/// Diagnostics of the state after step `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub mass: f64,
    pub l1_norm: f64,
    pub electric_energy: f64,
    pub boundary_mass: f64,
}

impl StepRecord {
    pub fn measure(step: usize, time: f64, f: &DistributionField) -> Result<Self> {
        let field = solve_field(&charge_density(f))?;
        Ok(Self {
            step,
            time,
            mass: mass(f),
            l1_norm: l1_norm(f),
            electric_energy: electric_energy(&field),
            boundary_mass: boundary_mass(f),
        })
    }
}

/// First step at which the boundary mass exceeded the support threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportWarning {
    pub step: usize,
    pub boundary_mass: f64,
    pub mass: f64,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: DistributionField,
    pub records: Vec<StepRecord>,
    pub support_warning: Option<SupportWarning>,
}

fn field_of(f: &DistributionField) -> Result<ElectricField> {
    solve_field(&charge_density(f))
}

/// Field `E(f_{k+1/2})` from the already streamed half-step `e^{tau/2 A} f_k`.
fn predict_from_streamed(
    f_k: &DistributionField,
    streamed: &DistributionField,
    tau: f64,
    variant: Midpoint,
    scheme: InterpolationScheme,
) -> Result<ElectricField> {
    match variant {
        Midpoint::FreeStream => field_of(streamed),
        Midpoint::LieHalf => {
            let accelerated = advect_v(streamed, &field_of(f_k)?, 0.5 * tau, scheme)?;
            field_of(&accelerated)
        }
    }
}

/// Field at the midpoint predictor `f_{k+1/2}` of the chosen variant.
pub fn midpoint_predict(
    f_k: &DistributionField,
    tau: f64,
    variant: Midpoint,
    scheme: InterpolationScheme,
) -> Result<ElectricField> {
    let streamed = advect_x(f_k, 0.5 * tau, scheme);
    predict_from_streamed(f_k, &streamed, tau, variant, scheme)
}

/// One Strang step `e^{tau/2 A} e^{tau B_{k+1/2}} e^{tau/2 A} f_k`.
pub fn strang_step(f_k: &DistributionField, cfg: &SchemeConfig) -> Result<DistributionField> {
    let tau = cfg.tau;
    let scheme = cfg.interpolation;
    let streamed = advect_x(f_k, 0.5 * tau, scheme);
    let midfield = predict_from_streamed(f_k, &streamed, tau, cfg.midpoint, scheme)?;
    let accelerated = advect_v(&streamed, &midfield, tau, scheme)?;
    Ok(advect_x(&accelerated, 0.5 * tau, scheme))
}

/// One Lie-Trotter step `e^{tau B(g)} g`, `g = e^{tau A} f_k`.
pub fn lie_step(f_k: &DistributionField, cfg: &SchemeConfig) -> Result<DistributionField> {
    let streamed = advect_x(f_k, cfg.tau, cfg.interpolation);
    let field = field_of(&streamed)?;
    advect_v(&streamed, &field, cfg.tau, cfg.interpolation)
}

pub fn step(f_k: &DistributionField, cfg: &SchemeConfig) -> Result<DistributionField> {
    match cfg.method {
        Method::Strang => strang_step(f_k, cfg),
        Method::Lie => lie_step(f_k, cfg),
    }
}

/// Advance `f_0` by `n = t_end / tau` steps of the configured method.
pub fn integrate(f_0: &DistributionField, cfg: &SchemeConfig) -> Result<Evolution> {
    integrate_observed(f_0, cfg, |_, _| Ok(()))
}

/// As [`integrate`], calling `observe` with each new record and state.
pub fn integrate_observed<F>(f_0: &DistributionField, cfg: &SchemeConfig, mut observe: F) -> Result<Evolution>
where
    F: FnMut(&StepRecord, &DistributionField) -> Result<()>,
{
    let mut state = f_0.clone();
    let mut records = Vec::with_capacity(cfg.steps);
    let mut support_warning = None;

    for k in 1..=cfg.steps {
        state = step(&state, cfg).map_err(|e| match e {
            Error::Compatibility { mean, .. } => Error::NumericalFailure {
                step: k,
                reason: format!("charge density lost neutrality (mean {mean:.12e})"),
            },
            other => other,
        })?;
        if !state.is_finite() {
            return Err(Error::NumericalFailure {
                step: k,
                reason: "non-finite values in the distribution function".into(),
            });
        }
        let record = StepRecord::measure(k, k as f64 * cfg.tau, &state).map_err(|e| Error::NumericalFailure {
            step: k,
            reason: e.to_string(),
        })?;
        if support_warning.is_none() && record.boundary_mass > SUPPORT_WARNING_FRACTION * record.mass.abs() {
            log::warn!(
                "step {k}: boundary mass {:.3e} exceeds {SUPPORT_WARNING_FRACTION:e} of the total mass {:.6e}; \
                 the velocity window may be too small",
                record.boundary_mass,
                record.mass
            );
            support_warning = Some(SupportWarning {
                step: k,
                boundary_mass: record.boundary_mass,
                mass: record.mass,
            });
        }
        observe(&record, &state)?;
        records.push(record);
    }

    Ok(Evolution {
        state,
        records,
        support_warning,
    })
}
