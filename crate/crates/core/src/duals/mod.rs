//! Controlled dual g-frames.
//!
//! `{Γ_w}` is a `(P, Q)`-controlled dual of `{Λ_w}` when
//! `S_PΛΓQ = Σ_w μ_w P Λ_w* Γ_w Q` is the identity. Certificates carry the raw
//! residuals so callers can judge them against tighter thresholds.

mod canonical;
mod left_inverse;

use serde::Serialize;

use crate::controlled::{controlled_bounds, ControlledVerdict, Controller};
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::linops::{hermitian_eigendecomposition, inner, min_singular_value, operator_norm, Matrix, C64, ONE};
use crate::sampling::{random_unit_vector, seeded_rng};
use crate::tolerances::Tolerances;

pub use canonical::{
    canonical_dual, canonical_operator, controlled_canonical_dual, dual_parametrization, extract_kernel,
    kernel_sampler, parametrization_audit, parametrization_bounds, project_onto_kernel, CanonicalMode, KernelOperator,
    ParametrizationAudit, ParametrizationBounds, ESTIMATE_SLACK,
};
pub use left_inverse::{dual_to_left_inverse, left_inverse_to_dual, pseudo_inverse_left_inverse, LeftInverse};

/// Sample count for the pointwise reconstruction conditions.
pub const DEFAULT_SAMPLES: usize = 64;
/// Seed used when a certificate is produced without an explicit one.
pub const DEFAULT_SEED: u64 = 0;

fn check_pair(lambda: &GFrameFamily, gamma: &GFrameFamily, p: &Controller, q: &Controller) -> Result<()> {
    lambda.check_compatible(gamma)?;
    for c in [p, q] {
        if c.dim() != lambda.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "controller of size {} on ambient dimension {}",
                c.dim(),
                lambda.ambient_dim()
            )));
        }
    }
    Ok(())
}

/// `S_PΛΓQ = P S_ΛΓ Q`.
pub fn dual_frame_operator(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
) -> Result<Matrix> {
    check_pair(lambda, gamma, p, q)?;
    Ok(&(p.matrix() * &lambda.mixed_frame_operator(gamma)?) * q.matrix())
}

/// `Σ_w μ_w ⟨Λ_w x, Γ_w y⟩`.
fn cross_form(lambda: &GFrameFamily, gamma: &GFrameFamily, x: &[C64], y: &[C64]) -> C64 {
    lambda
        .blocks()
        .iter()
        .zip(gamma.blocks())
        .zip(lambda.space().weights())
        .map(|((l, g), &mu)| inner(&l.mul_vec(x), &g.mul_vec(y)) * mu)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCertificate {
    /// `‖S_PΛΓQ − I‖`.
    pub residual: f64,
    pub is_dual: bool,
    /// Residuals of the four reconstruction conditions, in order: operator
    /// identity, swapped operator identity, sampled sesquilinear identity,
    /// sampled quadratic identity.
    pub condition_checks: [f64; 4],
    /// `‖S_QΓΛP − (S_PΛΓQ)*‖`.
    pub adjoint_residual: f64,
    /// `σ_min(S_PΛΓQ)`.
    pub lambda_min: f64,
    /// `(λ²/B_Λ, λ²/B_Γ)`: lower bounds inferred for `Γ` and for `Λ`.
    pub inferred_lower_bounds: (f64, f64),
    pub dual_tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl DualCertificate {
    pub fn max_condition(&self) -> f64 {
        self.condition_checks.iter().copied().fold(0.0, f64::max)
    }
}

fn controlled_upper(family: &GFrameFamily, c: &Controller) -> Result<f64> {
    let op = &(c.matrix() * &family.frame_operator()) * c.matrix();
    Ok(hermitian_eigendecomposition(&op)?.max())
}

fn controlled_lower(family: &GFrameFamily, c: &Controller) -> Result<f64> {
    let op = &(c.matrix() * &family.frame_operator()) * c.matrix();
    Ok(hermitian_eigendecomposition(&op)?.min())
}

fn inferred(lambda_min: f64, bessel: f64, floor: f64) -> f64 {
    if bessel <= floor {
        0.0
    } else {
        lambda_min * lambda_min / bessel
    }
}

pub fn check_duality(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DualCertificate> {
    let s = dual_frame_operator(lambda, gamma, p, q)?;
    let swapped = dual_frame_operator(gamma, lambda, q, p)?;
    let id = Matrix::identity(lambda.ambient_dim());
    let residual = operator_norm(&(&s - &id));
    let swapped_residual = operator_norm(&(&swapped - &id));

    let mut rng = seeded_rng(seed);
    let (mut sesquilinear, mut quadratic) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random_unit_vector(&mut rng, lambda.ambient_dim());
        let g = random_unit_vector(&mut rng, lambda.ambient_dim());
        let (pf, qf) = (p.matrix().mul_vec(&f), q.matrix().mul_vec(&f));
        let (pg, qg) = (p.matrix().mul_vec(&g), q.matrix().mul_vec(&g));
        let fg = inner(&f, &g);
        sesquilinear = sesquilinear
            .max((fg - cross_form(lambda, gamma, &pf, &qg)).norm())
            .max((fg - cross_form(gamma, lambda, &qf, &pg)).norm());
        quadratic = quadratic
            .max((ONE - cross_form(lambda, gamma, &pf, &qf)).norm())
            .max((ONE - cross_form(gamma, lambda, &qf, &pf)).norm());
    }

    let lambda_min = min_singular_value(&s);
    let b_lambda = controlled_upper(lambda, p)?;
    let b_gamma = controlled_upper(gamma, q)?;
    Ok(DualCertificate {
        residual,
        is_dual: residual <= tol.dual_tol,
        condition_checks: [residual, swapped_residual, sesquilinear, quadratic],
        adjoint_residual: operator_norm(&(&swapped - &s.adjoint())),
        lambda_min,
        inferred_lower_bounds: (
            inferred(lambda_min, b_lambda, tol.frame_floor),
            inferred(lambda_min, b_gamma, tol.frame_floor),
        ),
        dual_tol: tol.dual_tol,
        samples,
        seed,
    })
}

/// A constructed family together with its duality certificate.
#[derive(Debug, Clone)]
pub struct DualConstruction {
    pub gamma: GFrameFamily,
    pub certificate: DualCertificate,
}

fn require_bessel(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<()> {
    for (name, family, c) in [("Λ", lambda, p), ("Γ", gamma, q)] {
        if controlled_bounds(family, c, c, tol)?.verdict == ControlledVerdict::Fail {
            return Err(Error::BesselPreconditionFailed(format!(
                "{name} is not a controlled Bessel family for its controller"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionAudit {
    pub certificate: DualCertificate,
    /// Polarization of the quadratic data against the sesquilinear form it
    /// should reproduce.
    pub polarization_form: f64,
    /// Polarization of the quadratic data against `⟨f, g⟩`.
    pub polarization_inner: f64,
    pub all_pass: bool,
    pub all_fail: bool,
}

impl ReconstructionAudit {
    pub fn unanimous(&self) -> bool {
        self.all_pass || self.all_fail
    }
}

/// Checks that the four reconstruction conditions stand or fall together.
pub fn reconstruction_equivalence_audit(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ReconstructionAudit> {
    check_pair(lambda, gamma, p, q)?;
    require_bessel(lambda, gamma, p, q, tol)?;
    let certificate = check_duality(lambda, gamma, p, q, samples, seed, tol)?;

    let quad = |h: &[C64]| cross_form(lambda, gamma, &p.matrix().mul_vec(h), &q.matrix().mul_vec(h));
    let mut rng = seeded_rng(seed ^ 0x706f_6c61);
    let (mut vs_form, mut vs_inner) = (0.0f64, 0.0f64);
    let i = C64::i();
    for _ in 0..samples {
        let f = random_unit_vector(&mut rng, lambda.ambient_dim());
        let g = random_unit_vector(&mut rng, lambda.ambient_dim());
        let comb = |a: C64| -> Vec<C64> { f.iter().zip(&g).map(|(x, y)| x + a * y).collect() };
        let polar = (quad(&comb(ONE)) - quad(&comb(-ONE)) + i * quad(&comb(i)) - i * quad(&comb(-i))) * 0.25;
        let form = cross_form(lambda, gamma, &p.matrix().mul_vec(&f), &q.matrix().mul_vec(&g));
        vs_form = vs_form.max((polar - form).norm());
        vs_inner = vs_inner.max((polar - inner(&f, &g)).norm());
    }

    let all_pass = certificate.condition_checks.iter().all(|&r| r <= tol.dual_tol);
    let all_fail = certificate.condition_checks.iter().all(|&r| r > tol.dual_tol);
    Ok(ReconstructionAudit {
        certificate,
        polarization_form: vs_form,
        polarization_inner: vs_inner,
        all_pass,
        all_fail,
    })
}

/// Lower bounds inferred from `S_PΛΓQ` being bounded below, next to the
/// optimal ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundInference {
    /// `σ_min(S_PΛΓQ)`.
    pub lambda: f64,
    /// Upper bound of the `(P, P)` form of `Λ`.
    pub bessel_lambda: f64,
    /// Upper bound of the `(Q, Q)` form of `Γ`.
    pub bessel_gamma: f64,
    pub inferred_gamma_lower: f64,
    pub actual_gamma_lower: f64,
    pub inferred_lambda_lower: f64,
    pub actual_lambda_lower: f64,
    /// Set when `λ` is below the frame floor and nothing is inferred.
    pub vacuous: bool,
    pub holds: bool,
}

pub fn lower_bound_inference(
    lambda: &GFrameFamily,
    gamma: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<LowerBoundInference> {
    check_pair(lambda, gamma, p, q)?;
    require_bessel(lambda, gamma, p, q, tol)?;
    let s = dual_frame_operator(lambda, gamma, p, q)?;
    let lam = min_singular_value(&s);
    let bessel_lambda = controlled_upper(lambda, p)?;
    let bessel_gamma = controlled_upper(gamma, q)?;
    let vacuous = lam <= tol.frame_floor;
    let (inferred_gamma_lower, inferred_lambda_lower) = if vacuous {
        (0.0, 0.0)
    } else {
        (lam * lam / bessel_lambda, lam * lam / bessel_gamma)
    };
    let actual_gamma_lower = controlled_lower(gamma, q)?;
    let actual_lambda_lower = controlled_lower(lambda, p)?;
    let slack = tol.identity_tol;
    Ok(LowerBoundInference {
        lambda: lam,
        bessel_lambda,
        bessel_gamma,
        inferred_gamma_lower,
        actual_gamma_lower,
        inferred_lambda_lower,
        actual_lambda_lower,
        vacuous,
        holds: actual_gamma_lower >= inferred_gamma_lower - slack
            && actual_lambda_lower >= inferred_lambda_lower - slack,
    })
}
