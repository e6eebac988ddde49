//! The phi functions `phi_0(z) = e^z`, `phi_k(z) = int_0^1 e^{(1-t) z} t^{k-1}/(k-1)! dt`.
//!
//! For a dense `M` all of `phi_0(M) .. phi_k(M)` are read off the first block
//! row of one exponential of the block matrix
//!
//! ```text
//! W = [ M  I  0 .. 0 ]
//!     [ 0  0  I .. 0 ]
//!     [ ..        I  ]
//!     [ 0  0  0 .. 0 ]      e^W = [ phi_0(M) phi_1(M) .. phi_k(M) ]
//!                                 [   ...                         ]
//! ```

use nalgebra::DMatrix;

use super::expm::expm_matrix;
use super::DenseOperator;
use crate::error::{Error, Result};

pub const MAX_PHI_INDEX: usize = 8;

fn check_index(k: usize) -> Result<()> {
    if k > MAX_PHI_INDEX {
        return Err(Error::Domain(format!(
            "phi index {k} exceeds the supported maximum {MAX_PHI_INDEX}"
        )));
    }
    Ok(())
}

/// `phi_k(M)` via the augmented-matrix exponential.
pub fn phi(k: usize, m: &DenseOperator) -> Result<DenseOperator> {
    check_index(k)?;
    let n = m.dim();
    if k == 0 {
        return Ok(DenseOperator::from_matrix_unchecked(expm_matrix(m.matrix())));
    }
    let size = n * (k + 1);
    let mut w = DMatrix::<f64>::zeros(size, size);
    w.view_mut((0, 0), (n, n)).copy_from(m.matrix());
    for block in 0..k {
        let (r, c) = (block * n, (block + 1) * n);
        for d in 0..n {
            w[(r + d, c + d)] = 1.0;
        }
    }
    let e = expm_matrix(&w);
    Ok(DenseOperator::from_matrix_unchecked(
        e.view((0, k * n), (n, n)).into_owned(),
    ))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `max |phi_k(M) - I/k! - M phi_{k+1}(M)|` with both phi values computed
/// from separate exponentials.
pub fn phi_recurrence_residual(k: usize, m: &DenseOperator) -> Result<f64> {
    check_index(k)?;
    let n = m.dim();
    let lhs = phi(k, m)?;
    let next = if k < MAX_PHI_INDEX {
        phi(k + 1, m)?
    } else {
        // one past the public range, still well within the exponential's reach
        let size = n * (k + 2);
        let mut w = DMatrix::<f64>::zeros(size, size);
        w.view_mut((0, 0), (n, n)).copy_from(m.matrix());
        for block in 0..=k {
            for d in 0..n {
                w[(block * n + d, (block + 1) * n + d)] = 1.0;
            }
        }
        DenseOperator::from_matrix_unchecked(expm_matrix(&w).view((0, (k + 1) * n), (n, n)).into_owned())
    };
    let rhs = DMatrix::<f64>::identity(n, n) / factorial(k) + m.matrix() * next.matrix();
    Ok((lhs.matrix() - rhs).iter().fold(0.0, |acc, v| acc.max(v.abs())))
}

/// Scalar `phi_k(z)`, by the closed form `(e^z - sum_{j<k} z^j/j!) / z^k`
/// away from zero and by its Taylor series near zero.
pub fn phi_scalar(k: usize, z: f64) -> f64 {
    if k == 0 {
        return z.exp();
    }
    if z.abs() < 0.5 {
        // phi_k(z) = sum_j z^j / (j + k)!
        let mut term = 1.0 / factorial(k);
        let mut sum = term;
        for j in 1..40 {
            term *= z / (j + k) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let mut partial = 0.0;
    let mut term = 1.0;
    for j in 0..k {
        if j > 0 {
            term *= z / j as f64;
        }
        partial += term;
    }
    (z.exp() - partial) / z.powi(k as i32)
}
