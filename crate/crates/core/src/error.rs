use thiserror::Error;

use crate::linops::LinalgError;
use crate::measure::MeasureError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("families live on different measure spaces or ambient spaces")]
    SpaceMismatch,
    #[error("basis at node {node} is not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { node: usize, defect: f64 },
    #[error("controllers do not commute: ‖PQ − QP‖ = {commutator:.3e} exceeds {limit:.3e}")]
    NonCommutingControllers { commutator: f64, limit: f64 },
    #[error("controller is not in GL⁺(H): {0}")]
    BadController(String),
    #[error("frame operator is singular (smallest eigenvalue {0:.3e})")]
    SingularFrameOperator(f64),
    #[error("kernel constraint violated: ‖T_PΛP T‖ = {residual:.3e} exceeds {limit:.3e}")]
    KernelViolation { residual: f64, limit: f64 },
    #[error("Bessel precondition failed: {0}")]
    BesselPreconditionFailed(String),
    #[error("U is not a left inverse of the analysis operator: residual {residual:.3e} exceeds {limit:.3e}")]
    NotLeftInverse { residual: f64, limit: f64 },
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed scenario file: {0}")]
    Format(String),
    #[error("family is not a controlled dual: residual {residual:.3e} exceeds {limit:.3e}")]
    NotDual { residual: f64, limit: f64 },
}
