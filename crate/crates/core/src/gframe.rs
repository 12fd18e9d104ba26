//! Continuous g-frames on a discretized measure space.
//!
//! A family `{Λ_w}` is stored as one `d_w × n` block per node. Integrals over
//! `Ω` become weighted sums over nodes, so the frame operator is
//! `S_Λ = Σ_w μ_w Λ_w* Λ_w`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linops::{hermitian_part_bounds, operator_norm, Matrix, C64, ZERO};
use crate::measure::{same_space, CoefficientFamily, DiscretizedMeasureSpace};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct GFrameFamily {
    space: Arc<DiscretizedMeasureSpace>,
    ambient_dim: usize,
    blocks: Vec<Matrix>,
}

impl GFrameFamily {
    pub fn new(space: Arc<DiscretizedMeasureSpace>, ambient_dim: usize, blocks: Vec<Matrix>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::DimensionMismatch("ambient dimension must be positive".into()));
        }
        if blocks.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for {} nodes",
                blocks.len(),
                space.len()
            )));
        }
        for (w, b) in blocks.iter().enumerate() {
            if b.shape() != (space.block_dim(w), ambient_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "block {w} has shape {:?}, expected ({}, {ambient_dim})",
                    b.shape(),
                    space.block_dim(w)
                )));
            }
            if !b.is_finite() {
                return Err(Error::DimensionMismatch(format!("block {w} has non-finite entries")));
            }
        }
        Ok(GFrameFamily {
            space,
            ambient_dim,
            blocks,
        })
    }

    /// Rebuilds a family from a stacked `Σd_w × n` matrix of raw blocks.
    pub fn from_stacked_blocks(space: Arc<DiscretizedMeasureSpace>, stacked: &Matrix) -> Result<Self> {
        if stacked.rows() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "stacked matrix has {} rows, space needs {}",
                stacked.rows(),
                space.total_dim()
            )));
        }
        let offsets = space.offsets();
        let blocks = (0..space.len())
            .map(|w| stacked.row_block(offsets[w], space.block_dim(w)))
            .collect();
        GFrameFamily::new(space, stacked.cols(), blocks)
    }

    pub fn space(&self) -> &Arc<DiscretizedMeasureSpace> {
        &self.space
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, node: usize) -> &Matrix {
        &self.blocks[node]
    }

    /// Applies `f` to every block (shape must be preserved).
    pub fn map_blocks(&self, f: impl Fn(usize, &Matrix) -> Matrix) -> Result<Self> {
        let blocks = self.blocks.iter().enumerate().map(|(w, b)| f(w, b)).collect();
        GFrameFamily::new(self.space.clone(), self.ambient_dim, blocks)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_blocks(|_, b| b.scale_real(s))
            .expect("scaling preserves shapes")
    }

    /// Raw blocks stacked vertically (`Σd_w × n`, no weights).
    pub fn stacked_blocks(&self) -> Matrix {
        Matrix::vstack(&self.blocks).expect("blocks share the ambient dimension")
    }

    /// Blocks scaled by `√μ_w` and stacked: the analysis operator in isometric
    /// coordinates of `ℓ²`, so its adjoint is the synthesis operator.
    pub fn weighted_stack(&self) -> Matrix {
        let scaled: Vec<Matrix> = self
            .blocks
            .iter()
            .zip(self.space.weights())
            .map(|(b, w)| b.scale_real(w.sqrt()))
            .collect();
        Matrix::vstack(&scaled).expect("blocks share the ambient dimension")
    }

    pub(crate) fn check_compatible(&self, other: &GFrameFamily) -> Result<()> {
        if !same_space(&self.space, &other.space) || self.ambient_dim != other.ambient_dim {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, f: &[C64]) -> Result<()> {
        if f.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                f.len(),
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// `{Λ_w f}_w`.
    pub fn analysis(&self, f: &[C64]) -> Result<CoefficientFamily> {
        self.check_vector(f)?;
        let blocks = self.blocks.iter().map(|b| b.mul_vec(f)).collect();
        Ok(CoefficientFamily::new(self.space.clone(), blocks)?)
    }

    /// `Σ_w μ_w Λ_w* c_w`.
    pub fn synthesis(&self, c: &CoefficientFamily) -> Result<Vec<C64>> {
        if !same_space(&self.space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = vec![ZERO; self.ambient_dim];
        for ((b, cw), &mu) in self.blocks.iter().zip(c.blocks()).zip(self.space.weights()) {
            for (o, z) in out.iter_mut().zip(b.adjoint_mul_vec(cw)) {
                *o += z * mu;
            }
        }
        Ok(out)
    }

    /// `S_Λ = Σ_w μ_w Λ_w* Λ_w`.
    pub fn frame_operator(&self) -> Matrix {
        self.mixed_frame_operator(self)
            .expect("a family is compatible with itself")
    }

    /// `S_ΛΓ = Σ_w μ_w Λ_w* Γ_w`.
    pub fn mixed_frame_operator(&self, gamma: &GFrameFamily) -> Result<Matrix> {
        self.check_compatible(gamma)?;
        let n = self.ambient_dim;
        let mut s = Matrix::zeros(n, n);
        for ((l, g), &mu) in self.blocks.iter().zip(&gamma.blocks).zip(self.space.weights()) {
            if l.rows() != g.rows() {
                return Err(Error::SpaceMismatch);
            }
            s = &s + &(&l.adjoint() * g).scale_real(mu);
        }
        Ok(s)
    }

    /// `Σ_w μ_w ‖Λ_w f‖²`.
    pub fn energy(&self, f: &[C64]) -> Result<f64> {
        Ok(self.analysis(f)?.norm_sqr())
    }

    /// Optimal frame bounds: the extremal eigenvalues of `S_Λ`.
    pub fn frame_bounds(&self, tol: &Tolerances) -> FrameReport {
        FrameReport::from_operator(&self.frame_operator(), tol)
    }

    /// `u_{w,v} = Λ_w* e_{w,v}` with weight `μ_w` (counting measure in `v`).
    pub fn induced_sequence(&self, bases: &[OrthonormalBasis]) -> Result<InducedSequence> {
        if bases.len() != self.space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} bases for {} nodes",
                bases.len(),
                self.space.len()
            )));
        }
        let mut vectors = Vec::new();
        let mut weights = Vec::new();
        let mut index = Vec::new();
        for (w, (b, basis)) in self.blocks.iter().zip(bases).enumerate() {
            if basis.dim() != b.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "basis at node {w} has dimension {}, block space has {}",
                    basis.dim(),
                    b.rows()
                )));
            }
            for v in 0..basis.dim() {
                vectors.push(b.adjoint_mul_vec(&basis.vector(v)));
                weights.push(self.space.weight(w));
                index.push((w, v));
            }
        }
        Ok(InducedSequence {
            ambient_dim: self.ambient_dim,
            vectors,
            weights,
            index,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameVerdict {
    Frame,
    BesselOnly,
    NotBesselDegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub verdict: FrameVerdict,
    pub tight: bool,
    pub parseval: bool,
    pub hermitian_defect: f64,
    pub notes: Vec<String>,
}

impl FrameReport {
    /// Verdict for the quadratic form `⟨Mf, f⟩` of a nominally Hermitian operator.
    pub fn from_operator(m: &Matrix, tol: &Tolerances) -> FrameReport {
        let mut notes = Vec::new();
        if !m.is_finite() {
            return FrameReport {
                lower_bound: f64::NAN,
                upper_bound: f64::INFINITY,
                verdict: FrameVerdict::NotBesselDegenerate,
                tight: false,
                parseval: false,
                hermitian_defect: f64::NAN,
                notes: vec!["frame operator has non-finite entries".into()],
            };
        }
        let hb = hermitian_part_bounds(m).expect("finite square operator");
        let (a, b) = (hb.lower, hb.upper);
        let verdict = if b <= tol.frame_floor {
            notes.push("upper bound vanishes: the family is identically zero".into());
            FrameVerdict::NotBesselDegenerate
        } else if a > tol.frame_floor {
            FrameVerdict::Frame
        } else {
            notes.push(format!("lower bound {a:.3e} does not exceed frame floor"));
            FrameVerdict::BesselOnly
        };
        let scale = b.abs().max(1.0);
        let tight = verdict == FrameVerdict::Frame && (b - a) <= tol.identity_tol * scale;
        let parseval = tight && (a - 1.0).abs() <= tol.identity_tol && (b - 1.0).abs() <= tol.identity_tol;
        if hb.defect > tol.defect_tol * operator_norm(m).max(f64::MIN_POSITIVE) {
            notes.push(format!("operator is not Hermitian: defect {:.3e}", hb.defect));
        }
        FrameReport {
            lower_bound: a,
            upper_bound: b,
            verdict,
            tight,
            parseval,
            hermitian_defect: hb.defect,
            notes,
        }
    }

    pub fn is_frame(&self) -> bool {
        self.verdict == FrameVerdict::Frame
    }
}

/// Orthonormal basis of a block space `H_w`, stored as the columns of a
/// square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    columns: Matrix,
}

impl OrthonormalBasis {
    pub fn new(columns: Matrix, node: usize, tol: &Tolerances) -> Result<Self> {
        if !columns.is_square() {
            return Err(Error::NotOrthonormal {
                node,
                defect: f64::INFINITY,
            });
        }
        let gram = &columns.adjoint() * &columns;
        let defect = operator_norm(&(&gram - &Matrix::identity(columns.cols())));
        if defect > tol.orth_tol {
            return Err(Error::NotOrthonormal { node, defect });
        }
        Ok(OrthonormalBasis { columns })
    }

    pub fn standard(dim: usize) -> Self {
        OrthonormalBasis {
            columns: Matrix::identity(dim),
        }
    }

    /// Standard basis at every node of `space`.
    pub fn standard_bases(space: &DiscretizedMeasureSpace) -> Vec<OrthonormalBasis> {
        space
            .block_dims()
            .iter()
            .map(|&d| OrthonormalBasis::standard(d))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.columns.cols()
    }

    pub fn vector(&self, v: usize) -> Vec<C64> {
        self.columns.col(v)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.columns
    }
}

/// Vector family `{u_{w,v}}` with product weights `μ_w × 1`.
#[derive(Debug, Clone)]
pub struct InducedSequence {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<C64>>,
    pub weights: Vec<f64>,
    /// `(w, v)` for each vector.
    pub index: Vec<(usize, usize)>,
}

impl InducedSequence {
    /// `Σ μ_w u u*`.
    pub fn frame_operator(&self) -> Matrix {
        let n = self.ambient_dim;
        let mut s = Matrix::zeros(n, n);
        for (u, &mu) in self.vectors.iter().zip(&self.weights) {
            let col = Matrix::column(u);
            s = &s + &(&col * &col.adjoint()).scale_real(mu);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::linops::{inner, norm2, ONE};
    use crate::measure::weighted_inner_product;
    use crate::sampling::{random_gaussian_matrix, random_unitary, random_vector, seeded_rng};

    fn single_identity(n: usize) -> GFrameFamily {
        let space = Arc::new(DiscretizedMeasureSpace::new(vec![1.0], vec![n]).unwrap());
        GFrameFamily::new(space, n, vec![Matrix::identity(n)]).unwrap()
    }

    fn trig_family(nodes: usize) -> GFrameFamily {
        let space = Arc::new(DiscretizedMeasureSpace::uniform_interval(0.0, 2.0 * PI, nodes, 1).unwrap());
        let blocks = space
            .points()
            .unwrap()
            .iter()
            .map(|&w| Matrix::from_real_rows(&[&[w.cos(), w.sin()]]))
            .collect();
        GFrameFamily::new(space, 2, blocks).unwrap()
    }

    fn random_family(seed: u64, n: usize, dims: &[usize]) -> GFrameFamily {
        let mut rng = seeded_rng(seed);
        let weights: Vec<f64> = dims.iter().enumerate().map(|(i, _)| 0.5 + 0.25 * i as f64).collect();
        let space = Arc::new(DiscretizedMeasureSpace::new(weights, dims.to_vec()).unwrap());
        let blocks = dims.iter().map(|&d| random_gaussian_matrix(&mut rng, d, n)).collect();
        GFrameFamily::new(space, n, blocks).unwrap()
    }

    #[test]
    fn analysis_examples() {
        let id = single_identity(3);
        let f = [ONE, C64::new(2.0, -1.0), ZERO];
        assert_eq!(id.analysis(&f).unwrap().block(0), &f);
        let zero = id.analysis(&[ZERO; 3]).unwrap();
        assert_eq!(zero.norm_sqr(), 0.0);
        assert!(matches!(id.analysis(&[ONE]), Err(Error::DimensionMismatch(_))));

        let trig = trig_family(8);
        let c = trig.analysis(&[ONE, ZERO]).unwrap();
        for (w, block) in trig.space().points().unwrap().iter().zip(c.blocks()) {
            assert!((block[0].re - w.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn synthesis_examples() {
        let id = single_identity(2);
        let v = vec![C64::new(1.0, 1.0), C64::new(-3.0, 0.0)];
        let c = CoefficientFamily::new(id.space().clone(), vec![v.clone()]).unwrap();
        assert_eq!(id.synthesis(&c).unwrap(), v);
        let zero = CoefficientFamily::zeros(id.space().clone());
        assert_eq!(id.synthesis(&zero).unwrap(), vec![ZERO; 2]);
        let other = trig_family(3);
        let foreign = CoefficientFamily::zeros(other.space().clone());
        assert_eq!(id.synthesis(&foreign), Err(Error::SpaceMismatch));
    }

    #[test]
    fn synthesis_is_adjoint_of_analysis() {
        let fam = random_family(4, 5, &[1, 2, 1, 3, 2, 1, 2]);
        let mut rng = seeded_rng(99);
        for _ in 0..10 {
            let f = random_vector(&mut rng, 5);
            let blocks = fam
                .space()
                .block_dims()
                .iter()
                .map(|&d| random_vector(&mut rng, d))
                .collect();
            let c = CoefficientFamily::new(fam.space().clone(), blocks).unwrap();
            let lhs = inner(&fam.synthesis(&c).unwrap(), &f);
            let rhs = weighted_inner_product(&c, &fam.analysis(&f).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn frame_operator_examples() {
        assert_eq!(single_identity(3).frame_operator(), Matrix::identity(3));

        let s = trig_family(1024).frame_operator();
        let expected = Matrix::identity(2).scale_real(PI);
        assert!(operator_norm(&(&s - &expected)) < 1e-10);

        let space = Arc::new(DiscretizedMeasureSpace::new(vec![1.0, 1.0], vec![1, 1]).unwrap());
        let fam = GFrameFamily::new(
            space,
            2,
            vec![
                Matrix::from_real_rows(&[&[1.0, 0.0]]),
                Matrix::from_real_rows(&[&[0.0, 1.0]]),
            ],
        )
        .unwrap();
        assert_eq!(fam.frame_operator(), Matrix::identity(2));
    }

    #[test]
    fn frame_operator_matches_stacked_composition_and_energy() {
        let fam = random_family(12, 4, &[2, 1, 3, 1]);
        let st = fam.weighted_stack();
        let composed = &st.adjoint() * &st;
        let s = fam.frame_operator();
        assert!(operator_norm(&(&composed - &s)) <= 1e-12 * operator_norm(&s));

        let mut rng = seeded_rng(13);
        for _ in 0..100 {
            let f = random_vector(&mut rng, 4);
            let quad = inner(&s.mul_vec(&f), &f).re;
            let energy = fam.energy(&f).unwrap();
            assert!((quad - energy).abs() <= 1e-12 * energy);
        }
    }

    #[test]
    fn bounds_examples() {
        let tol = Tolerances::default();
        let r = single_identity(2).frame_bounds(&tol);
        assert_eq!((r.lower_bound, r.upper_bound), (1.0, 1.0));
        assert!(r.tight && r.parseval && r.is_frame());

        let r = trig_family(1024).frame_bounds(&tol);
        assert!((r.lower_bound - PI).abs() < 1e-6 && (r.upper_bound - PI).abs() < 1e-6);
        assert!(r.tight && !r.parseval);

        // every block annihilates e₁
        let space = Arc::new(DiscretizedMeasureSpace::new(vec![1.0, 2.0], vec![1, 2]).unwrap());
        let fam = GFrameFamily::new(
            space,
            2,
            vec![
                Matrix::from_real_rows(&[&[0.0, 1.0]]),
                Matrix::from_real_rows(&[&[0.0, 3.0], &[0.0, -1.0]]),
            ],
        )
        .unwrap();
        let r = fam.frame_bounds(&tol);
        assert_eq!(r.verdict, FrameVerdict::BesselOnly);
        assert!(r.lower_bound.abs() < 1e-12);

        let zero = single_identity(2).scaled(0.0).frame_bounds(&tol);
        assert_eq!(zero.verdict, FrameVerdict::NotBesselDegenerate);
    }

    #[test]
    fn optimal_bounds_are_attained() {
        let fam = random_family(21, 3, &[1, 1, 2]);
        let s = fam.frame_operator();
        let eig = crate::linops::hermitian_eigendecomposition(&s).unwrap();
        let r = fam.frame_bounds(&Tolerances::default());
        for (col, target) in [(0, r.lower_bound), (2, r.upper_bound)] {
            let f = eig.vectors.col(col);
            assert!((norm2(&f) - 1.0).abs() < 1e-12);
            assert!((fam.energy(&f).unwrap() - target).abs() < 1e-10);
        }
    }

    #[test]
    fn induced_sequences() {
        let id = single_identity(3);
        let seq = id.induced_sequence(&[OrthonormalBasis::standard(3)]).unwrap();
        for (v, u) in seq.vectors.iter().enumerate() {
            assert_eq!(u, &Matrix::identity(3).col(v));
        }

        let trig = trig_family(16);
        let seq = trig
            .induced_sequence(&OrthonormalBasis::standard_bases(trig.space()))
            .unwrap();
        for (u, w) in seq.vectors.iter().zip(trig.space().points().unwrap()) {
            assert!((u[0].re - w.cos()).abs() < 1e-15 && (u[1].re - w.sin()).abs() < 1e-15);
        }

        // random bases: Σ μ_w |⟨f, u_{w,v}⟩|² = ⟨S f, f⟩
        let fam = random_family(30, 4, &[2, 3, 1]);
        let mut rng = seeded_rng(31);
        let tol = Tolerances::default();
        let bases: Vec<_> = fam
            .space()
            .block_dims()
            .iter()
            .enumerate()
            .map(|(w, &d)| OrthonormalBasis::new(random_unitary(&mut rng, d), w, &tol).unwrap())
            .collect();
        let seq = fam.induced_sequence(&bases).unwrap();
        let s = fam.frame_operator();
        for _ in 0..20 {
            let f = random_vector(&mut rng, 4);
            let sum: f64 = seq
                .vectors
                .iter()
                .zip(&seq.weights)
                .map(|(u, mu)| mu * inner(&f, u).norm_sqr())
                .sum();
            let quad = inner(&s.mul_vec(&f), &f).re;
            assert!((sum - quad).abs() <= 1e-12 * quad);
        }
        let seq_bounds = FrameReport::from_operator(&seq.frame_operator(), &tol);
        let fam_bounds = fam.frame_bounds(&tol);
        assert!((seq_bounds.lower_bound - fam_bounds.lower_bound).abs() < 1e-10);
        assert!((seq_bounds.upper_bound - fam_bounds.upper_bound).abs() < 1e-10);
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let skew = Matrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert!(matches!(
            OrthonormalBasis::new(skew, 4, &Tolerances::default()),
            Err(Error::NotOrthonormal { node: 4, .. })
        ));
    }

    #[test]
    fn mixed_frame_operator_examples() {
        let fam = random_family(40, 3, &[2, 2, 1]);
        assert_eq!(fam.mixed_frame_operator(&fam).unwrap(), fam.frame_operator());
        let zero = fam.scaled(0.0);
        assert_eq!(fam.mixed_frame_operator(&zero).unwrap(), Matrix::zeros(3, 3));

        let gamma = random_family(41, 3, &[2, 2, 1]);
        let lg = fam.mixed_frame_operator(&gamma).unwrap();
        let gl = gamma.mixed_frame_operator(&fam).unwrap();
        assert!(operator_norm(&(&lg.adjoint() - &gl)) <= 1e-12);

        let other = random_family(42, 3, &[2, 2]);
        assert_eq!(fam.mixed_frame_operator(&other), Err(Error::SpaceMismatch));
    }
}
