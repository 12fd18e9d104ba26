//! Numerical laboratory for `(P, Q)`-controlled continuous g-frames on
//! finite-dimensional Hilbert spaces.
//!
//! The measure space is discretized into weighted nodes, every operator is
//! materialized as a dense complex matrix, and each structural identity of
//! the theory is exposed as a measurable residual.

pub mod controlled;
pub mod duals;
pub mod error;
pub mod gframe;
pub mod linops;
pub mod measure;
pub mod sampling;
pub mod scenarios;
pub mod tolerances;

pub use controlled::{ControlledReport, ControlledVerdict, Controller};
pub use duals::{CanonicalMode, DualCertificate, DualConstruction, KernelOperator};
pub use error::{Error, Result};
pub use gframe::{FrameReport, FrameVerdict, GFrameFamily, OrthonormalBasis};
pub use linops::{Matrix, C64};
pub use measure::{CoefficientFamily, DiscretizedMeasureSpace};
pub use scenarios::Scenario;
pub use tolerances::Tolerances;
