//! The two exact sub-flows of the splitting, realized semi-Lagrangian.
//!
//! Free streaming `f(x, v) -> f(x - tau v, v)` shifts every velocity row in
//! x; acceleration with a frozen field `f(x, v) -> f(x, v - tau E(x))` shifts
//! every spatial column in v. Each row or column is independent and is
//! processed in parallel; the per-row arithmetic does not depend on the
//! thread count, so results are bitwise reproducible.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ElectricField;
use crate::grid::DistributionField;
use crate::interp::{shift_bounded, shift_periodic, InterpolationScheme};

/// Free streaming over a time `tau`: `f(x, v_j) -> f(x - v_j tau, v_j)`.
pub fn advect_x(f: &DistributionField, tau: f64, scheme: InterpolationScheme) -> DistributionField {
    let spec = *f.spec();
    if tau == 0.0 {
        return f.clone();
    }
    let (nx, nv) = (spec.nx(), spec.nv());
    let dx = spec.dx();
    let values = f.values();

    let rows: Vec<Vec<f64>> = (0..nv)
        .into_par_iter()
        .map(|j| {
            let row: Vec<f64> = (0..nx).map(|i| values[i * nv + j]).collect();
            shift_periodic(&row, spec.v(j) * tau, dx, scheme)
        })
        .collect();

    let mut out = vec![0.0; spec.node_count()];
    for (j, row) in rows.iter().enumerate() {
        for (i, &value) in row.iter().enumerate() {
            out[i * nv + j] = value;
        }
    }
    DistributionField::from_raw(spec, out)
}

/// Acceleration by a frozen field over a time `tau`: `f(x_i, v) -> f(x_i, v - E(x_i) tau)`.
///
/// Data is treated as zero beyond `[-vmax, vmax]`; anything transported out
/// of the velocity window is lost and shows up in the boundary-mass monitor.
pub fn advect_v(
    f: &DistributionField,
    field: &ElectricField,
    tau: f64,
    scheme: InterpolationScheme,
) -> Result<DistributionField> {
    let spec = *f.spec();
    if field.spec() != f.spec() {
        return Err(Error::Dimension(
            "electric field and distribution live on different grids".into(),
        ));
    }
    if tau == 0.0 {
        return Ok(f.clone());
    }
    let nv = spec.nv();
    let dv = spec.dv();
    let e = field.values();

    let mut out = vec![0.0; spec.node_count()];
    out.par_chunks_mut(nv).enumerate().for_each(|(i, column)| {
        column.copy_from_slice(&shift_bounded(f.at_x(i), e[i] * tau, dv, scheme));
    });
    Ok(DistributionField::from_raw(spec, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{l1_distance, l1_norm, landau_initial_condition, mass, GridSpec};

    const CUBIC: InterpolationScheme = InterpolationScheme::CubicSpline;

    fn grid() -> GridSpec {
        GridSpec::landau(80, 80).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let f = landau_initial_condition(grid(), 0.01).unwrap();
        assert_eq!(advect_x(&f, 0.0, CUBIC), f);
        let e = ElectricField::zeros(grid());
        assert_eq!(advect_v(&f, &e, 0.0, CUBIC).unwrap(), f);
        assert_eq!(advect_v(&f, &e, 0.7, CUBIC).unwrap(), f);
    }

    #[test]
    fn homogeneous_state_is_invariant_under_streaming() {
        let f = landau_initial_condition(grid(), 0.0).unwrap();
        let g = advect_x(&f, 0.37, CUBIC);
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn row_rotates_by_one_cell() {
        let spec = grid();
        let f = landau_initial_condition(spec, 0.3).unwrap();
        let j = 63;
        let tau = spec.dx() / spec.v(j);
        let g = advect_x(&f, tau, CUBIC);
        let scale = (0..spec.nx()).map(|i| f.get(i, j)).fold(0.0, f64::max);
        for i in 0..spec.nx() {
            let src = (i + spec.nx() - 1) % spec.nx();
            assert!((g.get(i, j) - f.get(src, j)).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn constant_field_moves_bump() {
        let spec = GridSpec::new(1.0, 6.0, 4, 241).unwrap();
        let f = DistributionField::from_fn(spec, |_, v| (-8.0 * v * v).exp()).unwrap();
        let c = 0.8;
        let tau = 0.55;
        let e = ElectricField::from_values(spec, vec![c; 4]).unwrap();
        let g = advect_v(&f, &e, tau, CUBIC).unwrap();
        for i in 0..4 {
            let profile = g.at_x(i);
            let m0: f64 = profile.iter().sum();
            let m1: f64 = profile.iter().enumerate().map(|(j, p)| p * spec.v(j)).sum();
            assert!((m1 / m0 - c * tau).abs() <= 1e-6, "center {}", m1 / m0);
        }
    }

    #[test]
    fn streaming_conserves_mass() {
        let f = landau_initial_condition(grid(), 0.5).unwrap();
        let m0 = mass(&f);
        let g = advect_x(&f, 0.1234, CUBIC);
        assert!(((mass(&g) - m0) / m0).abs() <= 1e-12);
        assert!(l1_norm(&g) <= l1_norm(&f) * (1.0 + 1e-10));
    }

    #[test]
    fn streaming_is_reversible() {
        let f = landau_initial_condition(grid(), 0.01).unwrap();
        let back = advect_x(&advect_x(&f, 0.1, CUBIC), -0.1, CUBIC);
        let err = l1_distance(&back, &f).unwrap();
        assert!(err <= 1e-4, "L1 discrepancy {err:e}");
    }

    #[test]
    fn streaming_commutes_with_velocity_reflection() {
        let spec = grid();
        let f = landau_initial_condition(spec, 0.4).unwrap();
        let g = advect_x(&f, 0.6, CUBIC);
        let back = advect_x(&f, -0.6, CUBIC);
        // reflecting v turns streaming forward into streaming backward
        for i in 0..spec.nx() {
            for j in 0..spec.nv() {
                let a = g.get(i, j);
                let b = back.get(i, spec.nv() - 1 - j);
                assert!((a - b).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn mismatched_field_rejected() {
        let f = landau_initial_condition(grid(), 0.01).unwrap();
        let e = ElectricField::zeros(GridSpec::landau(40, 80).unwrap());
        assert!(matches!(advect_v(&f, &e, 0.1, CUBIC), Err(Error::Dimension(_))));
    }
}
