//! Small-scale checks of the analytical tools behind the splitting analysis:
//! matrix exponentials and phi functions of dense operators, the nonlinear
//! variation-of-constants (Gröbner-Alekseev) identity for scalar ODEs, and the
//! observed-order fit used by convergence studies.

mod expm;
mod groebner;
mod order;
mod phi;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use expm::matrix_exponential;
pub use groebner::{
    groebner_alekseev_residual, integrate_scalar, AlekseevReport, LinearForced, Logistic, ScalarProblem, Unperturbed,
};
pub use order::{observed_order, pairwise_orders, OrderFit};
pub use phi::{phi, phi_recurrence_residual, phi_scalar, MAX_PHI_INDEX};

/// Largest dimension accepted for a [`DenseOperator`].
pub const MAX_DIM: usize = 32;

/// A square matrix of finite entries with dimension at most [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 || matrix.nrows() > MAX_DIM {
            return Err(Error::Dimension(format!(
                "operator dimension must be in 1..={MAX_DIM}, got {}",
                matrix.nrows()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("operator has non-finite entries".into()));
        }
        Ok(Self { matrix })
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {n}x{n} operator, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::zeros(n, n))
    }

    /// Results of exponentials of admissible operators are admissible but
    /// may be larger than `MAX_DIM` internally (augmented blocks).
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.matrix
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_validation() {
        assert!(DenseOperator::from_matrix(DMatrix::zeros(2, 3)).is_err());
        assert!(DenseOperator::zeros(0).is_err());
        assert!(DenseOperator::zeros(33).is_err());
        assert!(DenseOperator::zeros(32).is_ok());
        assert!(DenseOperator::from_row_slice(2, &[1.0, f64::INFINITY, 0.0, 0.0]).is_err());
        assert!(DenseOperator::from_row_slice(2, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn spectral_radius_of_rotation() {
        let m = DenseOperator::from_row_slice(2, &[0.0, -2.0, 2.0, 0.0]).unwrap();
        assert!((m.spectral_radius() - 2.0).abs() < 1e-14);
    }
}
