//! Dense complex linear algebra used by the frame layers.
//!
//! Everything here works on small dense matrices (n up to a few dozen), so the
//! algorithms favour accuracy over speed: cyclic Jacobi for Hermitian
//! eigenproblems and one-sided Jacobi for singular values.

mod eigen;
mod matrix;
mod svd;

use thiserror::Error;

pub use eigen::{hermitian_eigendecomposition, psd_function, EigenDecomposition, PsdFn};
pub use matrix::{inner, norm2, Matrix, C64, ONE, ZERO};
pub use svd::{pseudo_inverse, svd, Svd};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {limit:.3e}")]
    NotHermitian { defect: f64, limit: f64 },
    #[error("eigenvalue {eigenvalue:.3e} below required floor {floor:.3e}")]
    NotPositive { eigenvalue: f64, floor: f64 },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    svd(m).sigma.first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a square matrix (zero for singular input).
pub fn min_singular_value(m: &Matrix) -> f64 {
    svd(m).sigma.last().copied().unwrap_or(0.0)
}

/// `‖AB − BA‖` in the operator norm.
pub fn commutator_norm(a: &Matrix, b: &Matrix) -> Result<f64, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows(), a.cols()));
    }
    if a.shape() != b.shape() {
        return Err(LinalgError::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(operator_norm(&(&(a * b) - &(b * a))))
}

/// `‖M − M*‖` in the operator norm.
pub fn hermitian_defect(m: &Matrix) -> f64 {
    operator_norm(&(m - &m.adjoint()))
}

/// Extremal eigenvalues of `½(M + M*)` together with the defect `‖M − M*‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianBounds {
    pub lower: f64,
    pub upper: f64,
    pub defect: f64,
}

pub fn hermitian_part_bounds(m: &Matrix) -> Result<HermitianBounds, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let eig = hermitian_eigendecomposition(&m.hermitian_part())?;
    Ok(HermitianBounds {
        lower: eig.min(),
        upper: eig.max(),
        defect: hermitian_defect(m),
    })
}
