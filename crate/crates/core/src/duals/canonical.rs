//! Canonical duals and the kernel parametrization of all `P`-controlled duals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_duality, DualCertificate, DualConstruction, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::controlled::Controller;
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::linops::{hermitian_eigendecomposition, operator_norm, pseudo_inverse, svd, Matrix, C64};
use crate::measure::{same_space, CoefficientFamily, DiscretizedMeasureSpace};
use crate::sampling::{random_gaussian_matrix, seeded_rng};
use crate::tolerances::Tolerances;

/// How the canonical part of a dual is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalMode {
    /// `Λ_w S_PΛP^{-1} P`. Reconstructs only when `P` commutes with `S_Λ`.
    #[serde(rename = "paper")]
    Symmetric,
    /// `Λ_w S_Λ^{-1} P^{-1}`. Reconstructs for every frame.
    General,
}

impl CanonicalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CanonicalMode::Symmetric => "paper",
            CanonicalMode::General => "general",
        }
    }
}

fn inverse_checked(m: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let eig = hermitian_eigendecomposition(m)?;
    if eig.min() <= tol.frame_floor {
        return Err(Error::SingularFrameOperator(eig.min()));
    }
    Ok(eig.map(|x| 1.0 / x))
}

/// The operator `C` with canonical part `Λ_w C`.
pub fn canonical_operator(
    lambda: &GFrameFamily,
    p: &Controller,
    mode: CanonicalMode,
    tol: &Tolerances,
) -> Result<Matrix> {
    if p.dim() != lambda.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "controller of size {} on ambient dimension {}",
            p.dim(),
            lambda.ambient_dim()
        )));
    }
    let s = lambda.frame_operator();
    match mode {
        CanonicalMode::Symmetric => {
            let psp = (&(p.matrix() * &s) * p.matrix()).hermitian_part();
            Ok(&inverse_checked(&psp, tol)? * p.matrix())
        }
        CanonicalMode::General => Ok(&inverse_checked(&s, tol)? * p.inv()),
    }
}

/// Canonical `P`-controlled dual, certified with `Q = I`.
pub fn canonical_dual(
    lambda: &GFrameFamily,
    p: &Controller,
    mode: CanonicalMode,
    tol: &Tolerances,
) -> Result<DualConstruction> {
    let c = canonical_operator(lambda, p, mode, tol)?;
    let gamma = lambda.map_blocks(|_, b| b * &c)?;
    let id = Controller::identity(lambda.ambient_dim());
    let certificate = check_duality(lambda, &gamma, p, &id, DEFAULT_SAMPLES, DEFAULT_SEED, tol)?;
    Ok(DualConstruction { gamma, certificate })
}

/// `Γ_w = Λ_w S_Λ^{-1} P^{-1} Q^{-1}`, a `(P, Q)`-controlled dual of any frame.
pub fn controlled_canonical_dual(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<DualConstruction> {
    let c = &canonical_operator(lambda, p, CanonicalMode::General, tol)? * q.inv();
    let gamma = lambda.map_blocks(|_, b| b * &c)?;
    let certificate = check_duality(lambda, &gamma, p, q, DEFAULT_SAMPLES, DEFAULT_SEED, tol)?;
    Ok(DualConstruction { gamma, certificate })
}

/// A map `T: H → ℓ²`, stored in isometric coordinates (`√μ_w`-weighted rows)
/// so that operator norms are plain matrix norms.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    space: Arc<DiscretizedMeasureSpace>,
    ambient_dim: usize,
    weighted: Matrix,
}

impl KernelOperator {
    pub fn zero(space: Arc<DiscretizedMeasureSpace>, ambient_dim: usize) -> Self {
        let rows = space.total_dim();
        KernelOperator {
            space,
            ambient_dim,
            weighted: Matrix::zeros(rows, ambient_dim),
        }
    }

    pub fn from_weighted(space: Arc<DiscretizedMeasureSpace>, ambient_dim: usize, weighted: Matrix) -> Result<Self> {
        if weighted.shape() != (space.total_dim(), ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "kernel operator of shape {:?}, expected ({}, {ambient_dim})",
                weighted.shape(),
                space.total_dim()
            )));
        }
        Ok(KernelOperator {
            space,
            ambient_dim,
            weighted,
        })
    }

    /// From raw per-node blocks `f ↦ (Tf)_w`.
    pub fn from_blocks(space: Arc<DiscretizedMeasureSpace>, ambient_dim: usize, blocks: &[Matrix]) -> Result<Self> {
        let family = GFrameFamily::new(space.clone(), ambient_dim, blocks.to_vec())?;
        KernelOperator::from_weighted(space, ambient_dim, family.weighted_stack())
    }

    pub fn space(&self) -> &Arc<DiscretizedMeasureSpace> {
        &self.space
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn weighted(&self) -> &Matrix {
        &self.weighted
    }

    /// Raw block of node `w`.
    pub fn block(&self, w: usize) -> Matrix {
        let offset = self.space.offsets()[w];
        self.weighted
            .row_block(offset, self.space.block_dim(w))
            .scale_real(1.0 / self.space.weight(w).sqrt())
    }

    pub fn blocks(&self) -> Vec<Matrix> {
        (0..self.space.len()).map(|w| self.block(w)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.weighted.max_abs() == 0.0
    }

    /// `‖T‖` as a map into `ℓ²`.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.weighted)
    }

    pub fn apply(&self, f: &[C64]) -> Result<CoefficientFamily> {
        if f.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                f.len(),
                self.ambient_dim
            )));
        }
        Ok(CoefficientFamily::from_weighted_stacked(
            self.space.clone(),
            &self.weighted.mul_vec(f),
        )?)
    }

    /// `‖T_PΛP T‖`.
    pub fn constraint_residual(&self, lambda: &GFrameFamily, p: &Controller) -> Result<f64> {
        self.check_against(lambda)?;
        Ok(operator_norm(&(&synthesis_pp(lambda, p) * &self.weighted)))
    }

    /// Largest entry-wise difference between raw blocks.
    pub fn max_block_difference(&self, other: &KernelOperator) -> f64 {
        self.blocks()
            .iter()
            .zip(other.blocks())
            .map(|(a, b)| (a - &b).max_abs())
            .fold(0.0, f64::max)
    }

    fn check_against(&self, lambda: &GFrameFamily) -> Result<()> {
        if !same_space(&self.space, lambda.space()) || self.ambient_dim != lambda.ambient_dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

/// `T_PΛP = P Λ*` in isometric coordinates.
fn synthesis_pp(lambda: &GFrameFamily, p: &Controller) -> Matrix {
    p.matrix() * &lambda.weighted_stack().adjoint()
}

/// `T − T_PΛP⁺ T_PΛP T`: the orthogonal projection of `T` onto maps with
/// range in `ker T_PΛP`.
pub fn project_onto_kernel(lambda: &GFrameFamily, p: &Controller, t: &KernelOperator) -> Result<KernelOperator> {
    t.check_against(lambda)?;
    let syn = synthesis_pp(lambda, p);
    let correction = &pseudo_inverse(&syn) * &(&syn * &t.weighted);
    KernelOperator::from_weighted(t.space.clone(), t.ambient_dim, &t.weighted - &correction)
}

/// Random `T` with `T_PΛP T = 0`, drawn from a seeded complex Gaussian and
/// projected. Returns exactly zero when `T_PΛP` is injective.
pub fn kernel_sampler(lambda: &GFrameFamily, p: &Controller, seed: u64, tol: &Tolerances) -> Result<KernelOperator> {
    if p.dim() != lambda.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "controller of size {} on ambient dimension {}",
            p.dim(),
            lambda.ambient_dim()
        )));
    }
    let space = lambda.space().clone();
    let n = lambda.ambient_dim();
    let syn = synthesis_pp(lambda, p);
    if svd(&syn).rank() == space.total_dim() {
        return Ok(KernelOperator::zero(space, n));
    }
    let mut rng = seeded_rng(seed);
    let k = KernelOperator::from_weighted(space.clone(), n, random_gaussian_matrix(&mut rng, space.total_dim(), n))?;
    let mut t = project_onto_kernel(lambda, p, &k)?;
    if t.constraint_residual(lambda, p)? > tol.kernel_tol {
        t = project_onto_kernel(lambda, p, &t)?;
    }
    Ok(t)
}

/// `Γ_w = (Tf)_w + Λ_w C f` with `C` the canonical operator of `mode`.
pub fn dual_parametrization(
    lambda: &GFrameFamily,
    p: &Controller,
    t: &KernelOperator,
    mode: CanonicalMode,
    tol: &Tolerances,
) -> Result<DualConstruction> {
    let residual = t.constraint_residual(lambda, p)?;
    if residual > tol.kernel_tol {
        return Err(Error::KernelViolation {
            residual,
            limit: tol.kernel_tol,
        });
    }
    let c = canonical_operator(lambda, p, mode, tol)?;
    let gamma = lambda.map_blocks(|w, b| &t.block(w) + &(b * &c))?;
    let id = Controller::identity(lambda.ambient_dim());
    let certificate = check_duality(lambda, &gamma, p, &id, DEFAULT_SAMPLES, DEFAULT_SEED, tol)?;
    Ok(DualConstruction { gamma, certificate })
}

/// `(Tf)_w = Γ_w f − Λ_w C f`.
pub fn extract_kernel(
    lambda: &GFrameFamily,
    p: &Controller,
    gamma: &GFrameFamily,
    mode: CanonicalMode,
    tol: &Tolerances,
) -> Result<KernelOperator> {
    lambda.check_compatible(gamma)?;
    let c = canonical_operator(lambda, p, mode, tol)?;
    let blocks: Vec<Matrix> = lambda
        .blocks()
        .iter()
        .zip(gamma.blocks())
        .map(|(l, g)| g - &(l * &c))
        .collect();
    KernelOperator::from_blocks(lambda.space().clone(), lambda.ambient_dim(), &blocks)
}

/// The two norm estimates attached to a parametrized dual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParametrizationBounds {
    pub kernel_norm_sq: f64,
    /// `B₁ + A⁻¹ + 2√(B₁A⁻¹)`, with `B₁` the upper bound of `Γ` and `A` the
    /// `(P, P)` lower bound of `Λ`.
    pub kernel_bound: f64,
    /// Optimal upper bound of `Γ`.
    pub gamma_bessel: f64,
    /// `2(B‖C‖² + ‖T‖²)`, with `B` the upper bound of `Λ`.
    pub bessel_estimate: f64,
}

impl ParametrizationBounds {
    pub fn kernel_slack(&self) -> f64 {
        self.kernel_bound - self.kernel_norm_sq
    }

    pub fn bessel_slack(&self) -> f64 {
        self.bessel_estimate - self.gamma_bessel
    }
}

pub fn parametrization_bounds(
    lambda: &GFrameFamily,
    p: &Controller,
    gamma: &GFrameFamily,
    t: &KernelOperator,
    mode: CanonicalMode,
    tol: &Tolerances,
) -> Result<ParametrizationBounds> {
    let c = canonical_operator(lambda, p, mode, tol)?;
    let s = lambda.frame_operator();
    let b = hermitian_eigendecomposition(&s)?.max();
    let psp = (&(p.matrix() * &s) * p.matrix()).hermitian_part();
    let a = hermitian_eigendecomposition(&psp)?.min();
    let b1 = hermitian_eigendecomposition(&gamma.frame_operator())?.max();
    let t_norm = t.norm();
    let c_norm = operator_norm(&c);
    Ok(ParametrizationBounds {
        kernel_norm_sq: t_norm * t_norm,
        kernel_bound: b1 + 1.0 / a + 2.0 * (b1 / a).sqrt(),
        gamma_bessel: b1,
        bessel_estimate: 2.0 * (b * c_norm * c_norm + t_norm * t_norm),
    })
}

/// Full check of one parametrized dual: construction, kernel constraint,
/// extraction round trip and both norm estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParametrizationAudit {
    pub mode: CanonicalMode,
    pub kernel_seed: u64,
    pub certificate: DualCertificate,
    pub kernel_residual: f64,
    /// Largest entry-wise difference between `T` and the kernel extracted
    /// back from `Γ`.
    pub round_trip: f64,
    /// Residual of the extracted kernel against the constraint.
    pub extracted_residual: f64,
    pub bounds: ParametrizationBounds,
    pub holds: bool,
}

/// Slack allowed on the norm estimates.
pub const ESTIMATE_SLACK: f64 = 1e-8;

/// Builds `Γ` from a sampled kernel (`kernel_seed = 0` means `T = 0`) and
/// audits it.
pub fn parametrization_audit(
    lambda: &GFrameFamily,
    p: &Controller,
    mode: CanonicalMode,
    kernel_seed: u64,
    tol: &Tolerances,
) -> Result<ParametrizationAudit> {
    let t = if kernel_seed == 0 {
        KernelOperator::zero(lambda.space().clone(), lambda.ambient_dim())
    } else {
        kernel_sampler(lambda, p, kernel_seed, tol)?
    };
    let built = dual_parametrization(lambda, p, &t, mode, tol)?;
    let extracted = extract_kernel(lambda, p, &built.gamma, mode, tol)?;
    let round_trip = t.max_block_difference(&extracted);
    let kernel_residual = t.constraint_residual(lambda, p)?;
    let extracted_residual = extracted.constraint_residual(lambda, p)?;
    let bounds = parametrization_bounds(lambda, p, &built.gamma, &t, mode, tol)?;
    let scale = built.gamma.stacked_blocks().max_abs().max(1.0);
    let holds = built.certificate.is_dual
        && kernel_residual <= tol.kernel_tol
        && extracted_residual <= tol.kernel_tol
        && round_trip <= tol.identity_tol * scale
        && bounds.kernel_slack() >= -ESTIMATE_SLACK
        && bounds.bessel_slack() >= -ESTIMATE_SLACK;
    Ok(ParametrizationAudit {
        mode,
        kernel_seed,
        certificate: built.certificate,
        kernel_residual,
        round_trip,
        extracted_residual,
        bounds,
        holds,
    })
}
