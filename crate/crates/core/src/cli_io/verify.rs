//! Self-verification: property checks on the analysis tools, the field solver
//! and the interpolation kernels, each compared against a threshold.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    groebner_alekseev_residual, phi, phi_recurrence_residual, phi_scalar, DenseOperator, LinearForced, Logistic,
    Unperturbed,
};
use crate::error::Result;
use crate::field::{kernel_field_reference, poisson_residual, solve_field};
use crate::grid::{ChargeDensity, GridSpec};
use crate::interp::{measured_order, shift_periodic, InterpolationScheme};

pub const PHI_SUITE: &str = "phi";
pub const GROEBNER_SUITE: &str = "groebner-alekseev";
pub const FIELD_SUITE: &str = "field-oracle";
pub const INTERPOLATION_SUITE: &str = "interpolation";

/// Pass thresholds for every property. Each measured value passes when it is
/// at most its threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub phi_recurrence: f64,
    pub phi_closed_form: f64,
    pub groebner_unperturbed: f64,
    pub groebner_logistic: f64,
    pub groebner_linear: f64,
    pub logistic_exact: f64,
    pub field_oracle: f64,
    pub field_analytic: f64,
    /// Allowed deviation of the Poisson residual order from 2.
    pub field_residual_order: f64,
    pub interp_rotation: f64,
    pub interp_constant: f64,
    /// Allowed deviation of the measured interpolation order from nominal.
    pub interp_order: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            phi_recurrence: 1e-12,
            phi_closed_form: 1e-11,
            groebner_unperturbed: 1e-10,
            groebner_logistic: 1e-8,
            groebner_linear: 1e-9,
            logistic_exact: 1e-10,
            field_oracle: 1e-12,
            field_analytic: 1e-6,
            field_residual_order: 0.3,
            interp_rotation: 1e-13,
            interp_constant: 1e-14,
            interp_order: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub suite: &'static str,
    pub property: String,
    pub measured: f64,
    pub threshold: f64,
}

impl PropertyCheck {
    /// NaN measurements (failed computations) never pass.
    pub fn passed(&self) -> bool {
        self.measured <= self.threshold
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {:.3e} (threshold {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.property,
            self.measured,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<PropertyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PropertyCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Suites with at least one failing property, in report order.
    pub fn failed_suites(&self) -> Vec<&'static str> {
        let mut suites: Vec<&'static str> = Vec::new();
        for c in self.failures() {
            if !suites.contains(&c.suite) {
                suites.push(c.suite);
            }
        }
        suites
    }

    fn push(&mut self, suite: &'static str, property: impl Into<String>, measured: Result<f64>, threshold: f64) {
        let measured = measured.unwrap_or_else(|e| {
            log::error!("{suite}: computation failed: {e}");
            f64::NAN
        });
        self.checks.push(PropertyCheck {
            suite,
            property: property.into(),
            measured,
            threshold,
        });
    }
}

/// Run all suites.
pub fn verify(t: &Thresholds) -> VerifyReport {
    let mut report = VerifyReport::default();
    phi_suite(t, &mut report);
    groebner_suite(t, &mut report);
    field_suite(t, &mut report);
    interpolation_suite(t, &mut report);
    report
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0, |m, v| Ok(f64::max(m, v?)))
}

/// 100 seeded 4x4 matrices with entries in [-1, 1], rescaled to spectral radius at most 2.
pub fn random_phi_matrices(seed: u64) -> Vec<DenseOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| {
            let entries: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let m = DenseOperator::from_row_slice(4, &entries).expect("4x4 finite matrix");
            let rho = m.spectral_radius();
            if rho > 2.0 {
                m.scaled(2.0 / rho)
            } else {
                m
            }
        })
        .collect()
}

fn phi_suite(t: &Thresholds, report: &mut VerifyReport) {
    let matrices = random_phi_matrices(0x5eed_0001);
    let recurrence = max_of(
        matrices
            .iter()
            .flat_map(|m| (0..=3).map(move |k| phi_recurrence_residual(k, m))),
    );
    report.push(
        PHI_SUITE,
        "recurrence residual, 100 random 4x4, k = 0..3",
        recurrence,
        t.phi_recurrence,
    );

    let zs = [-3.0, -0.7, -1e-3, 0.0, 0.25, 1.0, 2.0];
    let closed = (|| {
        let m = DenseOperator::from_matrix(nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            &zs,
        )))?;
        let p1 = phi(1, &m)?;
        let p2 = phi(2, &m)?;
        let mut worst: f64 = 0.0;
        for (i, &z) in zs.iter().enumerate() {
            // The explicit quotients cancel badly near zero, where the series is used instead.
            let (e1, e2) = if z.abs() >= 0.25 {
                ((z.exp() - 1.0) / z, (z.exp() - 1.0 - z) / (z * z))
            } else {
                (phi_scalar(1, z), phi_scalar(2, z))
            };
            worst = worst.max((p1.matrix()[(i, i)] - e1).abs());
            worst = worst.max((p2.matrix()[(i, i)] - e2).abs());
        }
        Ok(worst)
    })();
    report.push(
        PHI_SUITE,
        "closed forms of phi_1, phi_2 on diagonals",
        closed,
        t.phi_closed_form,
    );
}

fn groebner_suite(t: &Thresholds, report: &mut VerifyReport) {
    let unperturbed =
        max_of([1.0, 5.0].map(|s| groebner_alekseev_residual(&Unperturbed::default(), s).map(|r| r.residual)));
    report.push(GROEBNER_SUITE, "R = 0 residual", unperturbed, t.groebner_unperturbed);

    let logistic = groebner_alekseev_residual(&Logistic, 1.0);
    let exact = logistic
        .as_ref()
        .map(|r| (r.direct - 1.0 / (1.0 + 1f64.exp())).abs())
        .map_err(|e| crate::Error::Accuracy(e.to_string()));
    report.push(GROEBNER_SUITE, "logistic f(1) = 1/(1+e)", exact, t.logistic_exact);
    report.push(
        GROEBNER_SUITE,
        "logistic residual",
        logistic.map(|r| r.residual),
        t.groebner_logistic,
    );

    let linear =
        max_of([0.5, 2.0, 5.0].map(|s| groebner_alekseev_residual(&LinearForced::default(), s).map(|r| r.residual)));
    report.push(GROEBNER_SUITE, "linear forced residual", linear, t.groebner_linear);
}

/// `count` seeded densities on `nx` cells with mean exactly one up to roundoff.
pub fn random_densities(seed: u64, nx: usize, count: usize) -> Vec<ChargeDensity> {
    let spec = GridSpec::landau(nx, 8).expect("valid grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut values: Vec<f64> = (0..nx).map(|_| rng.gen_range(0.5..1.5)).collect();
            let mean = values.iter().sum::<f64>() / nx as f64;
            for v in &mut values {
                *v += 1.0 - mean;
            }
            ChargeDensity::from_values(spec, values).expect("finite density")
        })
        .collect()
}

fn landau_density(nx: usize) -> ChargeDensity {
    let spec = GridSpec::landau(nx, 8).expect("valid grid");
    let values = (0..nx).map(|i| 1.0 + 0.01 * (0.5 * spec.x(i)).cos()).collect();
    ChargeDensity::from_values(spec, values).expect("finite density")
}

/// Observed order of the centered-difference Poisson residual on 40, 80, 160 cells.
pub fn poisson_residual_order() -> Result<f64> {
    let mut points = Vec::new();
    for nx in [40, 80, 160] {
        let rho = landau_density(nx);
        let field = solve_field(&rho)?;
        points.push((rho.spec().dx(), poisson_residual(&field, &rho)));
    }
    Ok(crate::analysis::observed_order(&points)?.slope)
}

fn field_suite(t: &Thresholds, report: &mut VerifyReport) {
    let oracle = max_of(random_densities(0x5eed_0002, 80, 50).iter().map(|rho| {
        let fast = solve_field(rho)?;
        let slow = kernel_field_reference(rho)?;
        Ok(fast
            .values()
            .iter()
            .zip(slow.values())
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs())))
    }));
    report.push(
        FIELD_SUITE,
        "fast solve vs kernel quadrature, 50 random densities",
        oracle,
        t.field_oracle,
    );

    let analytic = (|| {
        let rho = landau_density(80);
        let field = solve_field(&rho)?;
        Ok((0..80).fold(0.0, |m: f64, i| {
            let x = rho.spec().x(i);
            m.max((field.values()[i] - 0.02 * (0.5 * x).sin()).abs())
        }))
    })();
    report.push(
        FIELD_SUITE,
        "weak Landau field 0.02 sin(x/2) at nx = 80",
        analytic,
        t.field_analytic,
    );

    report.push(
        FIELD_SUITE,
        "Poisson residual order deviation from 2",
        poisson_residual_order().map(|p| (p - 2.0).abs()),
        t.field_residual_order,
    );
}

fn interpolation_suite(t: &Thresholds, report: &mut VerifyReport) {
    let n = 48;
    let h = 0.2;
    let data: Vec<f64> = (0..n)
        .map(|i| (0.3 * i as f64).sin() + 0.5 * (1.7 * i as f64).cos() + 2.0)
        .collect();
    let scale = data.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    for scheme in [InterpolationScheme::Linear, InterpolationScheme::CubicSpline] {
        let mut rotation: f64 = 0.0;
        for k in [-61i64, -7, -1, 1, 3, 47, 48, 100] {
            let out = shift_periodic(&data, k as f64 * h, h, scheme);
            for i in 0..n as i64 {
                let expected = data[(i - k).rem_euclid(n as i64) as usize];
                rotation = rotation.max((out[i as usize] - expected).abs() / scale);
            }
        }
        report.push(
            INTERPOLATION_SUITE,
            format!("{} integer shift vs rotation (relative)", scheme.name()),
            Ok(rotation),
            t.interp_rotation,
        );

        let mut constant: f64 = 0.0;
        for (c, delta) in [(1.0, 0.37), (-3.5, 5.2), (1e3, -2.9), (0.25, 0.01)] {
            for v in shift_periodic(&vec![c; n], delta, h, scheme) {
                constant = constant.max((v - c).abs() / c.abs());
            }
        }
        report.push(
            INTERPOLATION_SUITE,
            format!("{} constant preservation (relative)", scheme.name()),
            Ok(constant),
            t.interp_constant,
        );

        let order = measured_order(scheme);
        report.push(
            INTERPOLATION_SUITE,
            format!("{} order deviation from {}", scheme.name(), scheme.order()),
            Ok((order - scheme.order() as f64).abs()),
            t.interp_order,
        );
    }
}
