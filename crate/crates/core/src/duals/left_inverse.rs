//! Duals as left-inverses of the controlled analysis operator.
//!
//! Maps out of `ℓ²` act on isometric (`√μ_w`-weighted) coordinates, so a
//! left-inverse `U` is an `n × Σd_w` matrix with `U Λ̃ P = I`, where `Λ̃` is the
//! weighted stack of the blocks.

use serde::Serialize;

use super::{check_duality, DualConstruction, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::controlled::Controller;
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::linops::{norm2, operator_norm, pseudo_inverse, Matrix, C64};
use crate::measure::delta_embedding;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeftInverse {
    pub u: Matrix,
    /// `‖U T*_PΛP − I‖`.
    pub left_inverse_residual: f64,
    /// `max_{w,v} ‖QΓ_w* e_v − U(e_v δ_w)‖`.
    pub basis_residual: f64,
}

/// `T*_PΛP = Λ̃ P`.
fn analysis_pp(lambda: &GFrameFamily, p: &Controller) -> Matrix {
    &lambda.weighted_stack() * p.matrix()
}

fn left_residual(u: &Matrix, lambda: &GFrameFamily, p: &Controller) -> Result<f64> {
    let product = u.try_mul(&analysis_pp(lambda, p))?;
    Ok(operator_norm(&(&product - &Matrix::identity(lambda.ambient_dim()))))
}

/// `U(v δ_w)` for a vector `v` in the block space of node `w`.
fn apply_to_delta(u: &Matrix, lambda: &GFrameFamily, w: usize, v: &[C64]) -> Result<Vec<C64>> {
    let delta = delta_embedding(lambda.space(), w, v)?;
    Ok(u.mul_vec(&delta.to_weighted_stacked()))
}

/// `U = T_QΓQ` for a certified `(P, Q)`-dual `Γ`.
pub fn dual_to_left_inverse(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<LeftInverse> {
    let cert = check_duality(lambda, gamma, p, q, DEFAULT_SAMPLES, DEFAULT_SEED, tol)?;
    if !cert.is_dual {
        return Err(Error::NotDual {
            residual: cert.residual,
            limit: tol.dual_tol,
        });
    }
    let u = q.matrix() * &gamma.weighted_stack().adjoint();
    let left_inverse_residual = left_residual(&u, lambda, p)?;
    if left_inverse_residual > tol.dual_tol {
        return Err(Error::NotLeftInverse {
            residual: left_inverse_residual,
            limit: tol.dual_tol,
        });
    }
    let mut basis_residual = 0.0f64;
    for w in 0..lambda.space().len() {
        let qg = q.matrix() * &gamma.block(w).adjoint();
        let e = Matrix::identity(lambda.space().block_dim(w));
        for v in 0..e.cols() {
            let lhs = qg.col(v);
            let rhs = apply_to_delta(&u, lambda, w, &e.col(v))?;
            let diff: Vec<C64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            basis_residual = basis_residual.max(norm2(&diff));
        }
    }
    Ok(LeftInverse {
        u,
        left_inverse_residual,
        basis_residual,
    })
}

/// `Γ_w* e_v = Q⁻¹ U(e_v δ_w)`, certified as a `(P, Q)`-dual.
pub fn left_inverse_to_dual(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    u: &Matrix,
    tol: &Tolerances,
) -> Result<DualConstruction> {
    let n = lambda.ambient_dim();
    if u.shape() != (n, lambda.space().total_dim()) {
        return Err(Error::DimensionMismatch(format!(
            "left-inverse of shape {:?}, expected ({n}, {})",
            u.shape(),
            lambda.space().total_dim()
        )));
    }
    let residual = left_residual(u, lambda, p)?;
    if residual > tol.dual_tol {
        return Err(Error::NotLeftInverse {
            residual,
            limit: tol.dual_tol,
        });
    }
    let mut blocks = Vec::with_capacity(lambda.space().len());
    for w in 0..lambda.space().len() {
        let d = lambda.space().block_dim(w);
        let e = Matrix::identity(d);
        let mut adjoint = Matrix::zeros(n, d);
        for v in 0..d {
            adjoint.set_col(v, &q.inv().mul_vec(&apply_to_delta(u, lambda, w, &e.col(v))?));
        }
        blocks.push(adjoint.adjoint());
    }
    let gamma = GFrameFamily::new(lambda.space().clone(), n, blocks)?;
    let certificate = check_duality(lambda, &gamma, p, q, DEFAULT_SAMPLES, DEFAULT_SEED, tol)?;
    if !certificate.is_dual {
        return Err(Error::NotDual {
            residual: certificate.residual,
            limit: tol.dual_tol,
        });
    }
    Ok(DualConstruction { gamma, certificate })
}

/// `(T*_PΛP)⁺`, a left-inverse whenever `Λ` is a frame.
pub fn pseudo_inverse_left_inverse(lambda: &GFrameFamily, p: &Controller) -> Matrix {
    pseudo_inverse(&analysis_pp(lambda, p))
}
