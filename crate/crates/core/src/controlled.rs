//! The `(P, Q)`-controlled layer.
//!
//! Controllers are positive invertible operators. The controlled frame
//! operator is `S_PΛQ = Q S_Λ P`; its quadratic form is only real when the
//! operator is Hermitian, which in general needs `P`, `Q` and `S_Λ` to
//! commute. Bounds are therefore taken from the Hermitian part and the
//! defect is reported next to them.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gframe::{FrameReport, FrameVerdict, GFrameFamily, OrthonormalBasis};
use crate::linops::{
    commutator_norm, hermitian_eigendecomposition, hermitian_part_bounds, inner, operator_norm, psd_function,
    LinalgError, Matrix, PsdFn, C64, ZERO,
};
use crate::measure::{same_space, CoefficientFamily};
use crate::sampling::{random_unit_vector, seeded_rng};
use crate::tolerances::{Tolerances, HERMITIAN_TOL, PSD_FLOOR};

/// A positive, boundedly invertible operator with cached square root and inverse.
#[derive(Debug, Clone)]
pub struct Controller {
    matrix: Matrix,
    sqrt: Matrix,
    inv: Matrix,
    spectral_bounds: (f64, f64),
}

impl Controller {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let eig = hermitian_eigendecomposition(&matrix).map_err(|e| match e {
            LinalgError::NotHermitian { defect, limit } => {
                Error::BadController(format!("Hermitian defect {defect:.3e} exceeds {limit:.3e}"))
            }
            other => Error::BadController(other.to_string()),
        })?;
        if eig.min() < PSD_FLOOR {
            return Err(Error::BadController(format!(
                "smallest eigenvalue {:.3e} below {PSD_FLOOR:.0e}",
                eig.min()
            )));
        }
        Ok(Controller {
            sqrt: eig.map(f64::sqrt),
            inv: eig.map(|x| 1.0 / x),
            spectral_bounds: (eig.min(), eig.max()),
            matrix,
        })
    }

    pub fn identity(n: usize) -> Self {
        Controller::new(Matrix::identity(n)).expect("identity is positive")
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Controller::new(Matrix::from_real_diagonal(diag))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn sqrt(&self) -> &Matrix {
        &self.sqrt
    }

    pub fn inv(&self) -> &Matrix {
        &self.inv
    }

    /// `(α, β)` with `αI ≤ P ≤ βI`, both optimal.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        self.spectral_bounds
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Operator norm, equal to the largest eigenvalue.
    pub fn norm(&self) -> f64 {
        self.spectral_bounds.1
    }
}

impl PartialEq for Controller {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Serialize for Controller {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Controller {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::deserialize(d)?;
        Controller::new(m).map_err(serde::de::Error::custom)
    }
}

fn check_controllers(lambda: &GFrameFamily, controllers: &[&Controller]) -> Result<()> {
    for c in controllers {
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

/// `S_PΛQ = Q S_Λ P`.
pub fn controlled_frame_operator(lambda: &GFrameFamily, p: &Controller, q: &Controller) -> Result<Matrix> {
    check_controllers(lambda, &[p, q])?;
    Ok(&(q.matrix() * &lambda.frame_operator()) * p.matrix())
}

/// `Σ_w μ_w ⟨Λ_w P f, Λ_w Q f⟩`, evaluated node by node.
pub fn controlled_quadratic_form(lambda: &GFrameFamily, p: &Controller, q: &Controller, f: &[C64]) -> Result<C64> {
    check_controllers(lambda, &[p, q])?;
    lambda.check_vector(f)?;
    let pf = p.matrix().mul_vec(f);
    let qf = q.matrix().mul_vec(f);
    Ok(lambda
        .blocks()
        .iter()
        .zip(lambda.space().weights())
        .map(|(b, &mu)| inner(&b.mul_vec(&pf), &b.mul_vec(&qf)) * mu)
        .sum())
}

/// Commutator norms; when all three vanish the rewritten quadratic forms
/// agree exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Commutation {
    /// `‖PQ − QP‖`
    pub pq: f64,
    /// `‖P S_Λ − S_Λ P‖`
    pub ps: f64,
    /// `‖Q S_Λ − S_Λ Q‖`
    pub qs: f64,
}

impl Commutation {
    pub fn measure(s: &Matrix, p: &Controller, q: &Controller) -> Result<Self> {
        Ok(Commutation {
            pq: commutator_norm(p.matrix(), q.matrix())?,
            ps: commutator_norm(p.matrix(), s)?,
            qs: commutator_norm(q.matrix(), s)?,
        })
    }

    pub fn max(&self) -> f64 {
        self.pq.max(self.ps).max(self.qs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlledVerdict {
    ControlledFrame,
    ControlledBessel,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlledReport {
    pub controlled_lower: f64,
    pub controlled_upper: f64,
    /// `‖QS_ΛP − (QS_ΛP)*‖`
    pub hermitian_defect: f64,
    /// `‖S_Λ‖‖P‖‖Q‖`, the scale the defect is judged against.
    pub defect_scale: f64,
    pub commutation: Commutation,
    pub verdict: ControlledVerdict,
    pub plain: FrameReport,
}

impl ControlledReport {
    pub fn defect_within(&self, tol: &Tolerances) -> bool {
        self.hermitian_defect <= tol.defect_tol * self.defect_scale
    }

    pub fn is_frame(&self) -> bool {
        self.verdict == ControlledVerdict::ControlledFrame
    }
}

/// Controlled bounds from the Hermitian part of `QS_ΛP`, with the Bessel
/// precondition checked on the plain family.
pub fn controlled_bounds(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<ControlledReport> {
    check_controllers(lambda, &[p, q])?;
    let s = lambda.frame_operator();
    let plain = FrameReport::from_operator(&s, tol);
    let op = &(q.matrix() * &s) * p.matrix();
    let hb = hermitian_part_bounds(&op)?;
    let defect_scale = operator_norm(&s) * p.norm() * q.norm();
    let real_form = hb.defect <= tol.defect_tol * defect_scale;
    let verdict = if plain.verdict == FrameVerdict::NotBesselDegenerate || hb.lower < -tol.frame_floor {
        ControlledVerdict::Fail
    } else if real_form && hb.lower > tol.frame_floor {
        ControlledVerdict::ControlledFrame
    } else {
        ControlledVerdict::ControlledBessel
    };
    Ok(ControlledReport {
        controlled_lower: hb.lower,
        controlled_upper: hb.upper,
        hermitian_defect: hb.defect,
        defect_scale,
        commutation: Commutation::measure(&s, p, q)?,
        verdict,
        plain,
    })
}

/// `(PQ)^{1/2}`, formed only when `P` and `Q` commute.
///
/// For `P = Q` this is `P` itself. Otherwise the root is taken of the
/// Hermitian part of `PQ`, which equals `PQ` in the commuting case.
pub fn product_root(p: &Controller, q: &Controller, tol: &Tolerances) -> Result<Matrix> {
    if p == q {
        return Ok(p.matrix().clone());
    }
    let commutator = commutator_norm(p.matrix(), q.matrix())?;
    let limit = tol.commute_tol * p.norm() * q.norm();
    if commutator > limit {
        return Err(Error::NonCommutingControllers { commutator, limit });
    }
    Ok(psd_function(&(p.matrix() * q.matrix()).hermitian_part(), PsdFn::Sqrt)?)
}

/// `T_PΛQ {c_w} = Σ_w μ_w (PQ)^{1/2} Λ_w* c_w`.
pub fn controlled_synthesis(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    c: &CoefficientFamily,
    tol: &Tolerances,
) -> Result<Vec<C64>> {
    check_controllers(lambda, &[p, q])?;
    if !same_space(lambda.space(), c.space()) {
        return Err(Error::SpaceMismatch);
    }
    let root = product_root(p, q, tol)?;
    Ok(root.mul_vec(&lambda.synthesis(c)?))
}

/// `T*_PΛQ f = {Λ_w (QP)^{1/2} f}_w`.
pub fn controlled_analysis(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    f: &[C64],
    tol: &Tolerances,
) -> Result<CoefficientFamily> {
    check_controllers(lambda, &[p, q])?;
    lambda.check_vector(f)?;
    let root = product_root(q, p, tol)?;
    lambda.analysis(&root.mul_vec(f))
}

/// Synthesis operator `T_PΛQ` as an `n × Σd_w` matrix acting on isometric
/// (`√μ`-weighted) coordinates of `ℓ²`.
pub fn synthesis_matrix(lambda: &GFrameFamily, p: &Controller, q: &Controller, tol: &Tolerances) -> Result<Matrix> {
    check_controllers(lambda, &[p, q])?;
    let root = product_root(p, q, tol)?;
    Ok(&root * &lambda.weighted_stack().adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConversionDirection {
    ControlledToPlain,
    PlainToControlled,
}

/// Candidate bounds from the equivalence between plain and controlled frames.
///
/// `ControlledToPlain` maps `(A, B)` to `(A/‖(PQ)^{1/2}‖², B‖(PQ)^{-1/2}‖²)`
/// and needs commuting controllers. `PlainToControlled` maps `(A, B)` to
/// `(α₁α₂A, β₁β₂B)` from the spectral bounds of `P` and `Q`.
pub fn bound_conversion(
    bounds: (f64, f64),
    p: &Controller,
    q: &Controller,
    direction: ConversionDirection,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let (a, b) = bounds;
    match direction {
        ConversionDirection::ControlledToPlain => {
            let root = product_root(p, q, tol)?;
            let root_norm = operator_norm(&root);
            let inv_root_norm = operator_norm(&psd_function(&root, PsdFn::Inv)?);
            Ok((a / (root_norm * root_norm), b * inv_root_norm * inv_root_norm))
        }
        ConversionDirection::PlainToControlled => {
            let (a1, b1) = p.spectral_bounds();
            let (a2, b2) = q.spectral_bounds();
            Ok((a1 * a2 * a, b1 * b2 * b))
        }
    }
}

/// Plain and controlled verdicts side by side, with the converted bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameEquivalence {
    pub plain: FrameReport,
    pub controlled: ControlledReport,
    /// The controlled form is real (defect within `defect_tol`), so the
    /// comparison is meaningful.
    pub applicable: bool,
    pub verdicts_agree: bool,
    /// Plain bounds inferred from the controlled ones; needs `(PQ)^{1/2}`.
    pub to_plain: Option<(f64, f64)>,
    /// Controlled bounds inferred from the plain ones.
    pub to_controlled: (f64, f64),
    /// Smallest relative slack of the four bracketing inequalities.
    pub min_slack: f64,
    pub holds: bool,
}

/// Slack allowed on the bound-bracketing inequalities.
pub const BRACKET_SLACK: f64 = 1e-10;

fn relative_slack(larger: f64, smaller: f64) -> f64 {
    (larger - smaller) / larger.abs().max(smaller.abs()).max(1.0)
}

pub fn frame_equivalence(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<FrameEquivalence> {
    let controlled = controlled_bounds(lambda, p, q, tol)?;
    let plain = controlled.plain.clone();
    let applicable = controlled.defect_within(tol);
    let verdicts_agree = controlled.is_frame() == plain.is_frame();
    let to_controlled = bound_conversion(
        (plain.lower_bound, plain.upper_bound),
        p,
        q,
        ConversionDirection::PlainToControlled,
        tol,
    )?;
    let to_plain = match bound_conversion(
        (controlled.controlled_lower, controlled.controlled_upper),
        p,
        q,
        ConversionDirection::ControlledToPlain,
        tol,
    ) {
        Ok(b) => Some(b),
        Err(Error::NonCommutingControllers { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut slacks = vec![
        relative_slack(controlled.controlled_lower, to_controlled.0),
        relative_slack(to_controlled.1, controlled.controlled_upper),
    ];
    if let Some((a, b)) = to_plain {
        slacks.push(relative_slack(plain.lower_bound, a));
        slacks.push(relative_slack(b, plain.upper_bound));
    }
    let min_slack = slacks.into_iter().fold(f64::INFINITY, f64::min);
    let holds = applicable && verdicts_agree && min_slack >= -BRACKET_SLACK;
    Ok(FrameEquivalence {
        plain,
        controlled,
        applicable,
        verdicts_agree,
        to_plain,
        to_controlled,
        min_slack,
        holds,
    })
}

/// Verdicts of the equivalent statements, each computed from its own operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalentStatements {
    /// `(P, Q)`-controlled frame.
    pub pq_controlled: bool,
    /// `((PQ)^{1/2}, (PQ)^{1/2})`-controlled frame; `None` without a root.
    pub root_controlled: Option<bool>,
    /// `PQ`-controlled frame (single controller, operator `S_Λ PQ`).
    pub product_pq_controlled: bool,
    /// `QP`-controlled frame (operator `S_Λ QP`).
    pub product_qp_controlled: bool,
    /// Plain continuous g-frame.
    pub plain: bool,
}

impl EquivalentStatements {
    pub fn unanimous(&self) -> bool {
        let v = self.pq_controlled;
        self.root_controlled.is_none_or(|r| r == v)
            && self.product_pq_controlled == v
            && self.product_qp_controlled == v
            && self.plain == v
    }
}

/// Sampled comparison of the quadratic forms the equivalence chain equates.
///
/// Every discrepancy is `max_f |form(f) − ⟨QS_ΛPf, f⟩| / (‖S_Λ‖‖P‖‖Q‖)` over
/// random unit vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceAudit {
    pub samples: usize,
    pub seed: u64,
    pub scale: f64,
    pub commutation: Commutation,
    /// `⟨QPS_Λ f, f⟩`, the form with both controllers moved to the left.
    pub qps_form: f64,
    /// `⟨(PQ)^{1/2} S_Λ (PQ)^{1/2} f, f⟩`; absent when `P`, `Q` do not commute.
    pub root_form: Option<f64>,
    /// `⟨S_Λ PQ f, f⟩`.
    pub product_pq_form: f64,
    /// `⟨S_Λ QP f, f⟩`.
    pub product_qp_form: f64,
    /// `max |Im ⟨QS_ΛPf, f⟩| / scale`.
    pub imaginary_part: f64,
    pub statements: EquivalentStatements,
    pub holds: bool,
}

impl EquivalenceAudit {
    pub fn max_discrepancy(&self) -> f64 {
        [
            self.qps_form,
            self.product_pq_form,
            self.product_qp_form,
            self.imaginary_part,
        ]
        .into_iter()
        .chain(self.root_form)
        .fold(0.0, f64::max)
    }
}

fn form_is_frame(op: &Matrix, scale: f64, tol: &Tolerances) -> Result<bool> {
    let hb = hermitian_part_bounds(op)?;
    Ok(hb.lower > tol.frame_floor && hb.defect <= tol.defect_tol * scale)
}

pub fn equivalence_audit(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<EquivalenceAudit> {
    check_controllers(lambda, &[p, q])?;
    let s = lambda.frame_operator();
    let (pm, qm) = (p.matrix(), q.matrix());
    let scale = (operator_norm(&s) * p.norm() * q.norm()).max(f64::MIN_POSITIVE);
    let controlled = &(qm * &s) * pm;
    let qps_op = &(qm * pm) * &s;
    let pq_op = &s * &(pm * qm);
    let qp_op = &s * &(qm * pm);
    let root_op = match product_root(p, q, tol) {
        Ok(r) => Some(&(&r * &s) * &r),
        Err(Error::NonCommutingControllers { .. }) => None,
        Err(e) => return Err(e),
    };

    let mut rng = seeded_rng(seed);
    let form = |m: &Matrix, f: &[C64]| inner(&m.mul_vec(f), f);
    let (mut qps_form, mut pq_form, mut qp_form, mut imag) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut root_form = root_op.as_ref().map(|_| 0.0f64);
    for _ in 0..samples {
        let f = random_unit_vector(&mut rng, lambda.ambient_dim());
        let base = form(&controlled, &f);
        imag = imag.max(base.im.abs() / scale);
        qps_form = qps_form.max((form(&qps_op, &f) - base).norm() / scale);
        pq_form = pq_form.max((form(&pq_op, &f) - base).norm() / scale);
        qp_form = qp_form.max((form(&qp_op, &f) - base).norm() / scale);
        if let (Some(op), Some(d)) = (&root_op, root_form.as_mut()) {
            *d = d.max((form(op, &f) - base).norm() / scale);
        }
    }

    let plain = FrameReport::from_operator(&s, tol);
    let statements = EquivalentStatements {
        pq_controlled: form_is_frame(&controlled, scale, tol)? && plain.verdict != FrameVerdict::NotBesselDegenerate,
        root_controlled: root_op.as_ref().map(|op| form_is_frame(op, scale, tol)).transpose()?,
        product_pq_controlled: form_is_frame(&pq_op, scale, tol)?,
        product_qp_controlled: form_is_frame(&qp_op, scale, tol)?,
        plain: plain.is_frame(),
    };
    let mut audit = EquivalenceAudit {
        samples,
        seed,
        scale,
        commutation: Commutation::measure(&s, p, q)?,
        qps_form,
        root_form,
        product_pq_form: pq_form,
        product_qp_form: qp_form,
        imaginary_part: imag,
        holds: false,
        statements,
    };
    audit.holds = audit.max_discrepancy() <= tol.identity_tol && audit.statements.unanimous();
    Ok(audit)
}

/// Comparison of the controlled form of `{Λ_w}` with the forms of its induced
/// vector sequences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedCheck {
    pub samples: usize,
    pub seed: u64,
    /// `Σ μ_w ⟨f, Pu⟩⟨Qu, f⟩` against the controlled form, relative to scale.
    pub vector_form: f64,
    /// `Σ μ_w ⟨f, x⟩⟨QP⁻¹x, f⟩` with `x = Pu`, against the controlled form.
    pub reweighted_form: f64,
    /// Bounds of `Σ μ_w Q u u* P`.
    pub vector_report: FrameReport,
    /// Bounds of `Σ μ_w QP⁻¹ x x*`.
    pub reweighted_report: FrameReport,
    pub holds: bool,
}

pub fn induced_controlled_check(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    bases: &[OrthonormalBasis],
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<InducedCheck> {
    check_controllers(lambda, &[p, q])?;
    for (w, basis) in bases.iter().enumerate() {
        OrthonormalBasis::new(basis.matrix().clone(), w, tol)?;
    }
    let seq = lambda.induced_sequence(bases)?;
    let (pm, qm) = (p.matrix(), q.matrix());
    let reweight = qm * p.inv();
    let pu: Vec<Vec<C64>> = seq.vectors.iter().map(|u| pm.mul_vec(u)).collect();
    let qu: Vec<Vec<C64>> = seq.vectors.iter().map(|u| qm.mul_vec(u)).collect();
    let cx: Vec<Vec<C64>> = pu.iter().map(|x| reweight.mul_vec(x)).collect();

    let n = lambda.ambient_dim();
    let mut vector_op = Matrix::zeros(n, n);
    let mut reweighted_op = Matrix::zeros(n, n);
    for k in 0..seq.len() {
        let mu = seq.weights[k];
        let outer = |a: &[C64], b: &[C64]| &Matrix::column(a) * &Matrix::column(b).adjoint();
        vector_op = &vector_op + &outer(&qu[k], &pu[k]).scale_real(mu);
        reweighted_op = &reweighted_op + &outer(&cx[k], &pu[k]).scale_real(mu);
    }

    let scale = (operator_norm(&lambda.frame_operator()) * p.norm() * q.norm()).max(f64::MIN_POSITIVE);
    let mut rng = seeded_rng(seed);
    let (mut vector_form, mut reweighted_form) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random_unit_vector(&mut rng, n);
        let target = controlled_quadratic_form(lambda, p, q, &f)?;
        let mut a = ZERO;
        let mut b = ZERO;
        for k in 0..seq.len() {
            let mu = seq.weights[k];
            a += inner(&f, &pu[k]) * inner(&qu[k], &f) * mu;
            b += inner(&f, &pu[k]) * inner(&cx[k], &f) * mu;
        }
        vector_form = vector_form.max((a - target).norm() / scale);
        reweighted_form = reweighted_form.max((b - target).norm() / scale);
    }
    let vector_report = FrameReport::from_operator(&vector_op, tol);
    let reweighted_report = FrameReport::from_operator(&reweighted_op, tol);
    let holds = vector_form <= tol.form_tol && reweighted_form <= tol.form_tol;
    Ok(InducedCheck {
        samples,
        seed,
        vector_form,
        reweighted_form,
        vector_report,
        reweighted_report,
        holds,
    })
}

/// Optimal controlled Bessel bound against `‖T_PΛQ‖²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisNormAudit {
    pub bessel_bound: f64,
    pub synthesis_norm_sq: f64,
    /// `|bessel_bound − ‖T‖²| / max(‖T‖², floor)`.
    pub relative_gap: f64,
    pub holds: bool,
}

/// Compares the optimal upper bound of the controlled form with the squared
/// norm of the controlled synthesis operator. Needs `(PQ)^{1/2}`.
pub fn synthesis_norm_audit(
    lambda: &GFrameFamily,
    p: &Controller,
    q: &Controller,
    tol: &Tolerances,
) -> Result<SynthesisNormAudit> {
    let report = controlled_bounds(lambda, p, q, tol)?;
    let t = synthesis_matrix(lambda, p, q, tol)?;
    let norm = operator_norm(&t);
    let synthesis_norm_sq = norm * norm;
    let relative_gap = (report.controlled_upper - synthesis_norm_sq).abs() / synthesis_norm_sq.max(tol.frame_floor);
    Ok(SynthesisNormAudit {
        bessel_bound: report.controlled_upper,
        synthesis_norm_sq,
        relative_gap,
        holds: relative_gap <= tol.identity_tol,
    })
}

/// Defect of a controller-like matrix from being Hermitian, relative to its norm.
pub fn relative_hermitian_defect(m: &Matrix) -> f64 {
    let norm = operator_norm(m);
    if norm == 0.0 {
        0.0
    } else {
        crate::linops::hermitian_defect(m) / norm
    }
}

/// True if `m` would pass the Hermitian precondition of the eigen-solver.
pub fn is_hermitian(m: &Matrix) -> bool {
    relative_hermitian_defect(m) <= HERMITIAN_TOL
}
