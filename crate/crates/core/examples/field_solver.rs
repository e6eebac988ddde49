//! The periodic field solve against its O(nx^2) kernel quadrature and the
//! analytic weak Landau field.

use vpsplit::field::poisson_residual;
use vpsplit::{electric_energy, kernel_field_reference, solve_field, ChargeDensity, GridSpec};

fn main() -> vpsplit::Result<()> {
    for nx in [20, 40, 80, 160] {
        let spec = GridSpec::landau(nx, 8)?;
        let rho = ChargeDensity::from_values(spec, (0..nx).map(|i| 1.0 + 0.01 * (0.5 * spec.x(i)).cos()).collect())?;
        let fast = solve_field(&rho)?;
        let slow = kernel_field_reference(&rho)?;
        let mut oracle: f64 = 0.0;
        let mut analytic: f64 = 0.0;
        for i in 0..nx {
            oracle = oracle.max((fast.values()[i] - slow.values()[i]).abs());
            analytic = analytic.max((fast.values()[i] - 0.02 * (0.5 * spec.x(i)).sin()).abs());
        }
        println!(
            "nx = {nx:<4} |fast - kernel| = {oracle:.2e}  |E - 0.02 sin(x/2)| = {analytic:.2e}  \
             residual = {:.2e}  energy = {:.6e}",
            poisson_residual(&fast, &rho),
            electric_energy(&fast)
        );
    }
    Ok(())
}
