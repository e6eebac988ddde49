//! Phase-space grid, the discrete distribution function and its quadratures.
//!
//! The x direction is periodic with nodes `x_i = i * dx`, `dx = L / nx` (no
//! duplicated endpoint). The v direction is truncated to `[-vmax, vmax]` and
//! includes both endpoints, `v_j = -vmax + j * dv`, `dv = 2 vmax / (nv - 1)`.
//!
//! Field values are stored row-major with x as the slow index, so the
//! velocity profile at a fixed `x_i` is one contiguous slice.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Wavenumber of the Landau perturbation `cos(0.5 x)`.
pub const LANDAU_WAVENUMBER: f64 = 0.5;

/// Maximum deviation of `(1/L) * mass` from one accepted for an initial condition.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

const COMMENSURABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    length: f64,
    vmax: f64,
    nx: usize,
    nv: usize,
}

impl GridSpec {
    pub fn new(length: f64, vmax: f64, nx: usize, nv: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Config(format!("spatial period must be positive, got {length}")));
        }
        if !(vmax.is_finite() && vmax > 0.0) {
            return Err(Error::Config(format!("velocity bound must be positive, got {vmax}")));
        }
        if nx < 4 || nv < 4 {
            return Err(Error::Config(format!(
                "grid needs at least 4 nodes per direction, got nx={nx}, nv={nv}"
            )));
        }
        Ok(Self { length, vmax, nx, nv })
    }

    /// The weak/strong Landau damping domain: `[0, 4 pi) x [-6, 6]`.
    pub fn landau(nx: usize, nv: usize) -> Result<Self> {
        Self::new(4.0 * PI, 6.0, nx, nv)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn vmax(&self) -> f64 {
        self.vmax
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.vmax / (self.nv - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn v(&self, j: usize) -> f64 {
        -self.vmax + j as f64 * self.dv()
    }

    /// Number of phase-space nodes, `nx * nv`.
    pub fn node_count(&self) -> usize {
        self.nx * self.nv
    }

    /// Trapezoidal weight of velocity node `j` (1/2 at both ends, else 1).
    pub fn v_weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.nv {
            0.5
        } else {
            1.0
        }
    }
}

/// Grid samples `f(x_i, v_j)` of the particle density.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl DistributionField {
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.node_count() {
            return Err(Error::Dimension(format!(
                "expected {}x{} = {} values, got {}",
                spec.nx,
                spec.nv,
                spec.node_count(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value at (i={}, j={})",
                pos / spec.nv,
                pos % spec.nv
            )));
        }
        Ok(Self { spec, values })
    }

    /// Unchecked construction for values produced by the solver itself; the
    /// time loop checks finiteness once per step.
    pub(crate) fn from_raw(spec: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), spec.node_count());
        Self { spec, values }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(spec.node_count());
        for i in 0..spec.nx {
            let x = spec.x(i);
            for j in 0..spec.nv {
                values.push(f(x, spec.v(j)));
            }
        }
        Self::from_values(spec, values)
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            spec,
            values: vec![0.0; spec.node_count()],
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.nv + j]
    }

    /// Velocity profile at the spatial node `x_i`.
    pub fn at_x(&self, i: usize) -> &[f64] {
        let nv = self.spec.nv;
        &self.values[i * nv..(i + 1) * nv]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_raw(self.spec, self.values.iter().map(|v| v * factor).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// `rho(x_i) = dv * sum_j w_j f(x_i, v_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity {
    spec: GridSpec,
    values: Vec<f64>,
}

impl ChargeDensity {
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.nx {
            return Err(Error::Dimension(format!(
                "expected {} density values, got {}",
                spec.nx,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite charge density".into()));
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(1/L) * dx * sum_i rho_i`, the background density seen by the field solve.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.spec.nx as f64
    }
}

/// Landau damping initial datum `(2 pi)^{-1/2} exp(-v^2/2) (1 + alpha cos(0.5 x))`.
pub fn landau_initial_condition(spec: GridSpec, alpha: f64) -> Result<DistributionField> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!(
            "perturbation amplitude must lie in [0, 1] for a nonnegative density, got {alpha}"
        )));
    }
    let periods = LANDAU_WAVENUMBER * spec.length / (2.0 * PI);
    if (periods - periods.round()).abs() > COMMENSURABILITY_TOLERANCE * periods.max(1.0) || periods.round() < 1.0 {
        return Err(Error::Config(format!(
            "spatial period {} is not a multiple of 2 pi / {LANDAU_WAVENUMBER}",
            spec.length
        )));
    }
    let norm = 1.0 / (2.0 * PI).sqrt();
    let f = DistributionField::from_fn(spec, |x, v| {
        norm * (-0.5 * v * v).exp() * (1.0 + alpha * (LANDAU_WAVENUMBER * x).cos())
    })?;
    let mean = mass(&f) / spec.length;
    if (mean - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Config(format!(
            "initial density has mean {mean:.9}, not 1; increase vmax or nv"
        )));
    }
    Ok(f)
}

pub fn charge_density(f: &DistributionField) -> ChargeDensity {
    let spec = *f.spec();
    let dv = spec.dv();
    let values = (0..spec.nx).map(|i| dv * trapezoid_sum(f.at_x(i))).collect();
    ChargeDensity { spec, values }
}

/// `dx * sum_i [dv * sum_j w_j f_ij]`, summed in ascending i then ascending j.
pub fn mass(f: &DistributionField) -> f64 {
    let spec = f.spec();
    let dv = spec.dv();
    let mut total = 0.0;
    for i in 0..spec.nx {
        total += dv * trapezoid_sum(f.at_x(i));
    }
    spec.dx() * total
}

/// Uniform-weight discrete L1 norm `dx dv sum |f_ij|`.
pub fn l1_norm(f: &DistributionField) -> f64 {
    let spec = f.spec();
    spec.dx() * spec.dv() * f.values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Uniform-weight discrete L1 distance `dx dv sum |f_ij - g_ij|`.
pub fn l1_distance(f: &DistributionField, g: &DistributionField) -> Result<f64> {
    if f.spec != g.spec {
        return Err(Error::Dimension(format!("grids differ: {:?} vs {:?}", f.spec, g.spec)));
    }
    let spec = f.spec();
    let sum: f64 = f.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).sum();
    Ok(spec.dx() * spec.dv() * sum)
}

/// Mass carried by the two outermost velocity rows (`v = -vmax` and `v = vmax`).
pub fn boundary_mass(f: &DistributionField) -> f64 {
    let spec = f.spec();
    let last = spec.nv - 1;
    let mut total = 0.0;
    for i in 0..spec.nx {
        total += 0.5 * (f.get(i, 0).abs() + f.get(i, last).abs());
    }
    spec.dx() * spec.dv() * total
}

fn trapezoid_sum(profile: &[f64]) -> f64 {
    let n = profile.len();
    let mut s = 0.5 * profile[0];
    for &p in &profile[1..n - 1] {
        s += p;
    }
    s + 0.5 * profile[n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn landau_grid() -> GridSpec {
        GridSpec::landau(80, 80).unwrap()
    }

    #[test]
    fn grid_nodes() {
        let g = landau_grid();
        assert_eq!(g.x(0), 0.0);
        assert!((g.dx() - 4.0 * PI / 80.0).abs() < 1e-15);
        assert_eq!(g.v(0), -6.0);
        assert!((g.v(79) - 6.0).abs() < 1e-13);
        assert!((g.dv() - 12.0 / 79.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(GridSpec::new(0.0, 6.0, 80, 80).is_err());
        assert!(GridSpec::new(1.0, -1.0, 80, 80).is_err());
        assert!(GridSpec::new(1.0, 6.0, 3, 80).is_err());
        assert!(GridSpec::new(1.0, 6.0, 80, 3).is_err());
        assert!(GridSpec::new(f64::NAN, 6.0, 80, 80).is_err());
    }

    #[test]
    fn landau_value_at_origin() {
        let f = landau_initial_condition(landau_grid(), 0.01).unwrap();
        let expected = 1.01 / (2.0 * PI).sqrt();
        assert!((f.get(0, 0) - expected * (-18.0f64).exp()).abs() < 1e-22);
        // v = 0 is not a node when nv is even.
        let odd = GridSpec::landau(80, 81).unwrap();
        let f = landau_initial_condition(odd, 0.01).unwrap();
        assert!((odd.v(40)).abs() < 1e-15);
        assert!((f.get(0, 40) - expected).abs() < 1e-15);
        assert!((expected - 0.402931).abs() < 1e-6);
    }

    #[test]
    fn landau_unperturbed_rows_identical() {
        let f = landau_initial_condition(landau_grid(), 0.0).unwrap();
        for i in 1..80 {
            assert_eq!(f.at_x(i), f.at_x(0));
        }
    }

    #[test]
    fn landau_even_in_velocity() {
        let g = landau_grid();
        let f = landau_initial_condition(g, 0.5).unwrap();
        for i in 0..g.nx() {
            for j in 0..g.nv() {
                let a = f.get(i, j);
                let b = f.get(i, g.nv() - 1 - j);
                assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn landau_rejections() {
        let bad_length = GridSpec::new(5.0, 6.0, 80, 80).unwrap();
        assert!(matches!(
            landau_initial_condition(bad_length, 0.01),
            Err(Error::Config(_))
        ));
        assert!(landau_initial_condition(landau_grid(), 1.5).is_err());
        assert!(landau_initial_condition(landau_grid(), -0.1).is_err());
        // Truncating at v = 2 loses ~5% of the Maxwellian.
        let narrow = GridSpec::new(4.0 * PI, 2.0, 80, 80).unwrap();
        assert!(landau_initial_condition(narrow, 0.01).is_err());
    }

    #[test]
    fn landau_nonnegative() {
        for alpha in [0.0, 0.01, 0.5, 1.0] {
            let f = landau_initial_condition(landau_grid(), alpha).unwrap();
            assert!(f.values().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn charge_density_of_weak_landau() {
        let g = landau_grid();
        let f = landau_initial_condition(g, 0.01).unwrap();
        let rho = charge_density(&f);
        let worst = (0..g.nx())
            .map(|i| (rho.values()[i] - (1.0 + 0.01 * (0.5 * g.x(i)).cos())).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "worst deviation {worst:e}");
    }

    #[test]
    fn charge_density_trivial_cases() {
        let g = landau_grid();
        let rho = charge_density(&DistributionField::zeros(g));
        assert!(rho.values().iter().all(|&r| r == 0.0));
        let f = landau_initial_condition(g, 0.0).unwrap();
        let rho = charge_density(&f);
        assert!(rho.values().iter().all(|&r| r == rho.values()[0]));
    }

    #[test]
    fn mass_of_weak_landau() {
        let f = landau_initial_condition(landau_grid(), 0.01).unwrap();
        let m = mass(&f);
        assert!(((m - 4.0 * PI) / (4.0 * PI)).abs() <= 1e-8);
        assert_eq!(mass(&DistributionField::zeros(landau_grid())), 0.0);
        assert_eq!(mass(&f.scaled(2.0)), 2.0 * m);
    }

    #[test]
    fn l1_distance_cases() {
        let g = landau_grid();
        let f = landau_initial_condition(g, 0.01).unwrap();
        assert_eq!(l1_distance(&f, &f).unwrap(), 0.0);
        let zero = DistributionField::zeros(g);
        assert_eq!(l1_distance(&f, &zero).unwrap(), l1_norm(&f));

        let mut values = zero.values().to_vec();
        values[17 * 80 + 33] = 1.0;
        let bump = DistributionField::from_values(g, values).unwrap();
        assert_eq!(l1_distance(&bump, &zero).unwrap(), g.dx() * g.dv());

        let other = DistributionField::zeros(GridSpec::landau(40, 80).unwrap());
        assert!(matches!(l1_distance(&f, &other), Err(Error::Dimension(_))));
    }

    #[test]
    fn from_values_validates() {
        let g = GridSpec::new(1.0, 1.0, 4, 4).unwrap();
        assert!(matches!(
            DistributionField::from_values(g, vec![0.0; 15]),
            Err(Error::Dimension(_))
        ));
        let mut v = vec![0.0; 16];
        v[3] = f64::NAN;
        assert!(DistributionField::from_values(g, v).is_err());
    }

    #[test]
    fn boundary_mass_counts_outer_rows_only() {
        let g = GridSpec::new(1.0, 1.0, 4, 5).unwrap();
        let f = DistributionField::from_fn(g, |_, v| if v.abs() > 0.99 { 2.0 } else { 7.0 }).unwrap();
        let expected = g.dx() * g.dv() * 4.0 * (0.5 * 2.0 + 0.5 * 2.0);
        assert!((boundary_mass(&f) - expected).abs() < 1e-15);
    }
}
