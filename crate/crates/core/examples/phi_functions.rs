//! Matrix exponential and phi functions of a small dense operator, with the
//! recurrence phi_k(M) = I/k! + M phi_{k+1}(M) checked for each k.

use vpsplit::analysis::{matrix_exponential, phi, phi_recurrence_residual, DenseOperator, MAX_PHI_INDEX};

fn main() -> vpsplit::Result<()> {
    // Damped oscillator generator.
    let m = DenseOperator::from_row_slice(2, &[0.0, 1.0, -4.0, -0.4])?;
    println!("spectral radius {:.4}", m.spectral_radius());
    println!("exp(M) = {:.6}", matrix_exponential(&m).matrix());
    println!("phi_1(M) = {:.6}", phi(1, &m)?.matrix());
    for k in 0..=MAX_PHI_INDEX {
        println!("k = {k}: recurrence residual {:.2e}", phi_recurrence_residual(k, &m)?);
    }
    Ok(())
}
