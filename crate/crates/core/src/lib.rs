//! Operator splitting for the 1+1 dimensional Vlasov-Poisson system.
//!
//! The crate advances a phase-space density `f(t, x, v)` on a periodic x grid
//! and a truncated v grid with Strang or Lie-Trotter splitting. Both sub-flows
//! are exact translations realized by semi-Lagrangian interpolation, and the
//! electric field comes from a Green's function representation of the
//! periodic Poisson problem.
//!
//! Alongside the solver live the tools used to check it: an observed-order
//! fit for convergence studies, dense matrix exponentials and phi functions,
//! a nonlinear variation-of-constants checker for scalar ODEs, snapshot and
//! CSV output, and drivers for run / convergence / verify workflows.

pub mod advection;
pub mod analysis;
pub mod cli_io;
pub mod error;
pub mod field;
pub mod grid;
pub mod interp;
pub mod splitting;

pub use cli_io::{RunConfig, Snapshot};
pub use error::{Error, Result};
pub use field::{electric_energy, kernel_field_reference, solve_field, ElectricField};
pub use grid::{
    boundary_mass, charge_density, l1_distance, l1_norm, landau_initial_condition, mass, ChargeDensity,
    DistributionField, GridSpec,
};
pub use interp::InterpolationScheme;
pub use splitting::{integrate, Evolution, Method, Midpoint, SchemeConfig, StepRecord};
