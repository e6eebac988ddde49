//! Self-consistent electrostatic field.
//!
//! The field is the periodic, zero-mean solution of `dE/dx = rho - 1`, which
//! the Green's function representation
//!
//! ```text
//! E(x) = int_0^L K(x, y) (rho(y) - 1) dy,   K(x, y) = y/L - 1  (x < y)
//!                                            K(x, y) = y/L      (y < x)
//! ```
//!
//! writes as a double integral. [`solve_field`] evaluates it in O(nx) as a
//! running integral; [`kernel_field_reference`] evaluates the kernel sum
//! directly in O(nx^2) and serves as the test oracle. Both use the
//! end-corrected trapezoidal rule `T - h^2/12 (g'(b) - g'(a))` so that the
//! field is fourth-order accurate in dx, and both measure the source against
//! the discrete mean of rho so a homogeneous plasma has exactly no field.

use crate::error::{Error, Result};
use crate::grid::{ChargeDensity, GridSpec};

/// Accepted deviation of the mean charge density from the unit background.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-6;

/// `E(x_i)` on the periodic x nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectricField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl ElectricField {
    /// Wrap externally supplied field values (e.g. a prescribed frozen field).
    /// No mean condition is imposed here; fields returned by the solvers
    /// always satisfy [`ElectricField::has_zero_mean`].
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.nx() {
            return Err(Error::Dimension(format!(
                "expected {} field values, got {}",
                spec.nx(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite electric field".into()));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            spec,
            values: vec![0.0; spec.nx()],
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Electrostatic condition `|dx sum E_i| <= 1e-12 (L max|E| + 1e-300)`.
    pub fn has_zero_mean(&self) -> bool {
        let dx = self.spec.dx();
        let integral = dx * self.values.iter().sum::<f64>();
        let max = self.values.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        integral.abs() <= 1e-12 * (self.spec.length() * max + 1e-300)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

fn check_compatible(rho: &ChargeDensity) -> Result<f64> {
    let mean = rho.mean();
    if (mean - 1.0).abs() > COMPATIBILITY_TOLERANCE {
        return Err(Error::Compatibility {
            mean,
            tolerance: COMPATIBILITY_TOLERANCE,
        });
    }
    Ok(mean)
}

/// Source `rho - <rho>` and its centered-difference derivative.
fn source_and_slope(rho: &ChargeDensity, mean: f64) -> (Vec<f64>, Vec<f64>) {
    let n = rho.values().len();
    let h = rho.spec().dx();
    let s: Vec<f64> = rho.values().iter().map(|r| r - mean).collect();
    let ds = (0..n)
        .map(|i| (s[(i + 1) % n] - s[(i + n - 1) % n]) / (2.0 * h))
        .collect();
    (s, ds)
}

fn subtract_mean(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
}

/// Zero-mean periodic field with `dE/dx = rho - 1`, computed as a running integral.
pub fn solve_field(rho: &ChargeDensity) -> Result<ElectricField> {
    let mean = check_compatible(rho)?;
    let spec = *rho.spec();
    let h = spec.dx();
    let (s, ds) = source_and_slope(rho, mean);
    let n = s.len();

    let mut values = vec![0.0; n];
    let mut running = 0.0;
    for i in 1..n {
        running += 0.5 * h * (s[i - 1] + s[i]);
        values[i] = running - h * h / 12.0 * (ds[i] - ds[0]);
    }
    subtract_mean(&mut values);
    Ok(ElectricField { spec, values })
}

/// Kernel of the field representation with the one-sided limits at `y = x`:
/// `below` selects the segment `y < x`.
fn kernel(y: f64, length: f64, below: bool) -> f64 {
    if below {
        y / length
    } else {
        y / length - 1.0
    }
}

/// Direct O(nx^2) quadrature of the Green's function representation.
pub fn kernel_field_reference(rho: &ChargeDensity) -> Result<ElectricField> {
    let mean = check_compatible(rho)?;
    let spec = *rho.spec();
    let h = spec.dx();
    let length = spec.length();
    let (s, ds) = source_and_slope(rho, mean);
    let n = s.len();

    // Node k in 0..=n, with node n the periodic image of node 0 at y = L.
    let y = |k: usize| if k == n { length } else { spec.x(k) };
    let src = |k: usize| s[k % n];
    let dsrc = |k: usize| ds[k % n];

    // End-corrected trapezoid of g(y) = K(x, y) s(y) over nodes a..=b on one
    // side of the kernel jump; g' = s / L + K s'.
    let segment = |a: usize, b: usize, below: bool| -> f64 {
        if a == b {
            return 0.0;
        }
        let g = |k: usize| kernel(y(k), length, below) * src(k);
        let dg = |k: usize| src(k) / length + kernel(y(k), length, below) * dsrc(k);
        let mut sum = 0.5 * (g(a) + g(b));
        for k in a + 1..b {
            sum += g(k);
        }
        h * sum - h * h / 12.0 * (dg(b) - dg(a))
    };

    let mut values: Vec<f64> = (0..n).map(|i| segment(0, i, true) + segment(i, n, false)).collect();
    subtract_mean(&mut values);
    Ok(ElectricField { spec, values })
}

/// `1/2 dx sum E_i^2`.
pub fn electric_energy(field: &ElectricField) -> f64 {
    0.5 * field.spec.dx() * field.values.iter().map(|e| e * e).sum::<f64>()
}

/// `max_i |(E_{i+1} - E_{i-1}) / (2 dx) - (rho_i - 1)|`.
pub fn poisson_residual(field: &ElectricField, rho: &ChargeDensity) -> f64 {
    let e = field.values();
    let n = e.len();
    let h = field.spec.dx();
    (0..n)
        .map(|i| {
            let de = (e[(i + 1) % n] - e[(i + n - 1) % n]) / (2.0 * h);
            (de - (rho.values()[i] - 1.0)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn landau_rho(nx: usize, alpha: f64) -> ChargeDensity {
        let spec = GridSpec::landau(nx, 16).unwrap();
        let values = (0..nx).map(|i| 1.0 + alpha * (0.5 * spec.x(i)).cos()).collect();
        ChargeDensity::from_values(spec, values).unwrap()
    }

    fn random_rho(rng: &mut ChaCha8Rng, nx: usize) -> ChargeDensity {
        let spec = GridSpec::landau(nx, 16).unwrap();
        let mut values: Vec<f64> = (0..nx).map(|_| rng.gen_range(0.5..1.5)).collect();
        let mean = values.iter().sum::<f64>() / nx as f64;
        for v in values.iter_mut() {
            *v += 1.0 - mean;
        }
        ChargeDensity::from_values(spec, values).unwrap()
    }

    #[test]
    fn uniform_density_has_no_field() {
        let rho = landau_rho(80, 0.0);
        assert!(solve_field(&rho).unwrap().values().iter().all(|&e| e == 0.0));
        assert!(kernel_field_reference(&rho).unwrap().max_abs() <= 1e-16);
    }

    #[test]
    fn weak_landau_field_matches_antiderivative() {
        let rho = landau_rho(80, 0.01);
        let spec = *rho.spec();
        for (name, e) in [
            ("fast", solve_field(&rho).unwrap()),
            ("kernel", kernel_field_reference(&rho).unwrap()),
        ] {
            let err = (0..80)
                .map(|i| (e.values()[i] - 0.02 * (0.5 * spec.x(i)).sin()).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-6, "{name}: {err:e}");
            assert!(e.has_zero_mean());
        }
    }

    #[test]
    fn fast_solve_agrees_with_kernel_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for nx in [4, 5, 16, 80, 129] {
            let rho = random_rho(&mut rng, nx);
            let fast = solve_field(&rho).unwrap();
            let slow = kernel_field_reference(&rho).unwrap();
            let scale = slow.max_abs().max(1e-300);
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).abs() <= 1e-12 * scale, "nx={nx}");
            }
        }
    }

    #[test]
    fn incompatible_density_rejected() {
        let spec = GridSpec::landau(16, 16).unwrap();
        let rho = ChargeDensity::from_values(spec, vec![1.01; 16]).unwrap();
        assert!(matches!(solve_field(&rho), Err(Error::Compatibility { .. })));
        assert!(matches!(kernel_field_reference(&rho), Err(Error::Compatibility { .. })));
    }

    #[test]
    fn energy_of_sine_field() {
        let spec = GridSpec::landau(80, 16).unwrap();
        let e = ElectricField::from_values(spec, (0..80).map(|i| 0.02 * (0.5 * spec.x(i)).sin()).collect()).unwrap();
        // 1/2 * 0.02^2 * (L / 2) with L = 4 pi
        let expected = 0.5 * 0.02f64.powi(2) * (2.0 * PI);
        assert!(((electric_energy(&e) - expected) / expected).abs() <= 1e-6);
        assert_eq!(electric_energy(&ElectricField::zeros(spec)), 0.0);
        let scaled = ElectricField::from_values(spec, e.values().iter().map(|v| 3.0 * v).collect()).unwrap();
        assert!((electric_energy(&scaled) - 9.0 * electric_energy(&e)).abs() <= 1e-14 * electric_energy(&scaled));
    }

    #[test]
    fn poisson_residual_is_second_order() {
        let residual = |nx: usize| {
            let spec = GridSpec::landau(nx, 16).unwrap();
            let values = (0..nx)
                .map(|i| {
                    let x = spec.x(i);
                    1.0 + 0.1 * (0.5 * x).cos() + 0.05 * (1.5 * x).sin()
                })
                .collect();
            let rho = ChargeDensity::from_values(spec, values).unwrap();
            poisson_residual(&solve_field(&rho).unwrap(), &rho)
        };
        let (r1, r2, r3) = (residual(40), residual(80), residual(160));
        for order in [(r1 / r2).log2(), (r2 / r3).log2()] {
            assert!((1.7..=2.3).contains(&order), "order {order}");
        }
    }

    #[test]
    fn field_is_lipschitz_in_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_rho(&mut rng, 64);
            let b = random_rho(&mut rng, 64);
            let ea = solve_field(&a).unwrap();
            let eb = solve_field(&b).unwrap();
            let spec = a.spec();
            let lhs = ea
                .values()
                .iter()
                .zip(eb.values())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            let drho: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum();
            assert!(lhs <= spec.length() * spec.dx() * drho);
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let spec = GridSpec::landau(8, 8).unwrap();
        assert!(ElectricField::from_values(spec, vec![0.0; 7]).is_err());
    }
}
