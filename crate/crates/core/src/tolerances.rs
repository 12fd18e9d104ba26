//! Numerical thresholds shared by every verdict in the crate.

use serde::{Deserialize, Serialize};

/// Relative Hermitian defect accepted by the eigen-solver and functional calculus.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Reconstruction tolerance for eigendecompositions.
pub const EIG_TOL: f64 = 1e-10;
/// Tolerance on each Moore-Penrose condition.
pub const PINV_TOL: f64 = 1e-9;
/// Smallest eigenvalue treated as strictly positive.
pub const PSD_FLOOR: f64 = 1e-12;

/// Thresholds used when turning measured quantities into verdicts.
///
/// Every report records the effective values so a verdict can be traced back
/// to the threshold that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Lower frame bound above which a family counts as a frame.
    pub frame_floor: f64,
    /// Relative Hermitian defect of `QS_ΛP`, scaled by `‖S_Λ‖‖P‖‖Q‖`.
    pub defect_tol: f64,
    /// Relative commutator `‖PQ − QP‖ / (‖P‖‖Q‖)` under which `(PQ)^{1/2}` is formed.
    pub commute_tol: f64,
    /// Duality residual `‖S_{PΛΓQ} − I‖`.
    pub dual_tol: f64,
    /// Kernel constraint `‖T_{PΛP} T‖`.
    pub kernel_tol: f64,
    /// Orthonormality defect `‖E*E − I‖` of per-node bases.
    pub orth_tol: f64,
    /// Relative discrepancy allowed for operator identities in audits.
    pub identity_tol: f64,
    /// Relative discrepancy allowed for pointwise quadratic-form identities.
    pub form_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frame_floor: 1e-10,
            defect_tol: 1e-10,
            commute_tol: 1e-8,
            dual_tol: 1e-8,
            kernel_tol: 1e-10,
            orth_tol: 1e-10,
            identity_tol: 1e-10,
            form_tol: 1e-12,
        }
    }
}
