//! Semi-Lagrangian shift kernels: measured orders, exact integer shifts and
//! the zero inflow of the bounded variant.

use vpsplit::interp::{measured_order, shift_bounded, shift_periodic};
use vpsplit::InterpolationScheme;

fn main() {
    for scheme in [InterpolationScheme::Linear, InterpolationScheme::CubicSpline] {
        println!(
            "{:<13} nominal order {}  measured {:.3}",
            scheme.name(),
            scheme.order(),
            measured_order(scheme)
        );
    }

    let data: Vec<f64> = (0..8).map(|i| i as f64).collect();
    let rotated = shift_periodic(&data, 2.0, 1.0, InterpolationScheme::CubicSpline);
    println!("periodic shift by 2 cells: {rotated:.3?}");
    let bounded = shift_bounded(&data, 2.5, 1.0, InterpolationScheme::CubicSpline);
    println!("bounded shift by 2.5 cells: {bounded:.3?}");
}
