//! Reproducible fixtures, seeded generators and scenario files.
//!
//! A scenario bundles a family `Λ`, an optional second family `Γ` on the same
//! measure space and the controllers `P`, `Q`. Files are JSON documents whose
//! floats are written in shortest round-trip form, so a save/load cycle
//! reproduces every entry bit for bit.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::controlled::Controller;
use crate::error::{Error, Result};
use crate::gframe::GFrameFamily;
use crate::linops::{hermitian_eigendecomposition, Matrix};
use crate::measure::DiscretizedMeasureSpace;
use crate::sampling::{conjugate_diagonal, log_uniform_spectrum, random_gaussian_matrix, random_unitary, seeded_rng};

pub const FORMAT_NAME: &str = "gframe-lab-scenario";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub seed: u64,
    pub lambda: GFrameFamily,
    pub gamma: Option<GFrameFamily>,
    pub p: Controller,
    pub q: Controller,
}

impl Scenario {
    pub fn new(
        label: impl Into<String>,
        seed: u64,
        lambda: GFrameFamily,
        gamma: Option<GFrameFamily>,
        p: Controller,
        q: Controller,
    ) -> Result<Self> {
        let n = lambda.ambient_dim();
        if let Some(g) = &gamma {
            if g.space() != lambda.space() || g.ambient_dim() != n {
                return Err(Error::SpaceMismatch);
            }
        }
        for c in [&p, &q] {
            if c.dim() != n {
                return Err(Error::BadController(format!(
                    "controller of size {} on ambient dimension {n}",
                    c.dim()
                )));
            }
        }
        Ok(Scenario {
            label: label.into(),
            seed,
            lambda,
            gamma,
            p,
            q,
        })
    }

    pub fn space(&self) -> &Arc<DiscretizedMeasureSpace> {
        self.lambda.space()
    }

    pub fn ambient_dim(&self) -> usize {
        self.lambda.ambient_dim()
    }

    /// Same scenario with `Γ` replaced.
    pub fn with_gamma(&self, gamma: GFrameFamily) -> Result<Self> {
        Scenario::new(
            self.label.clone(),
            self.seed,
            self.lambda.clone(),
            Some(gamma),
            self.p.clone(),
            self.q.clone(),
        )
    }
}

/// `Λ_w = (cos w, sin w)` at `nodes` midpoints of `[0, 2π]`.
pub fn trig_example(nodes: usize, p: Controller, q: Controller) -> Result<Scenario> {
    if nodes < 2 {
        return Err(Error::DimensionMismatch(format!("need at least 2 nodes, got {nodes}")));
    }
    for c in [&p, &q] {
        if c.dim() != 2 {
            return Err(Error::BadController(format!(
                "expected a 2x2 controller, got size {}",
                c.dim()
            )));
        }
    }
    let space = Arc::new(DiscretizedMeasureSpace::uniform_interval(0.0, 2.0 * PI, nodes, 1)?);
    let blocks = space
        .points()
        .expect("uniform grid has points")
        .iter()
        .map(|&w| Matrix::from_real_rows(&[&[w.cos(), w.sin()]]))
        .collect();
    let lambda = GFrameFamily::new(space, 2, blocks)?;
    Scenario::new(format!("example15-n{nodes}"), 0, lambda, None, p, q)
}

/// Blocks drawn from a seeded standard complex Gaussian.
pub fn random_gframe(n: usize, dims: &[usize], weights: &[f64], seed: u64) -> Result<GFrameFamily> {
    let space = Arc::new(DiscretizedMeasureSpace::new(weights.to_vec(), dims.to_vec())?);
    let mut rng = seeded_rng(seed);
    let blocks = dims.iter().map(|&d| random_gaussian_matrix(&mut rng, d, n)).collect();
    GFrameFamily::new(space, n, blocks)
}

/// `V D V*` with `D` log-uniform in `[1, condition]` and `V` either random
/// unitary or the eigenbasis of `commuting_with`.
pub fn random_controller(n: usize, condition: f64, seed: u64, commuting_with: Option<&Matrix>) -> Result<Controller> {
    if !(condition >= 1.0 && condition.is_finite()) {
        return Err(Error::BadController(format!(
            "condition target {condition} must be at least 1"
        )));
    }
    let mut rng = seeded_rng(seed);
    let v = match commuting_with {
        Some(m) => {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "commuting target of shape {:?} for controller of size {n}",
                    m.shape()
                )));
            }
            hermitian_eigendecomposition(m)?.vectors
        }
        None => random_unitary(&mut rng, n),
    };
    let d = log_uniform_spectrum(&mut rng, n, condition);
    Controller::new(conjugate_diagonal(&v, &d))
}

/// Rotation by `theta` applied to `diag(values)`: `R diag R*`.
pub fn rotation_controller(theta: f64, values: [f64; 2]) -> Result<Controller> {
    let (c, s) = (theta.cos(), theta.sin());
    let r = Matrix::from_real_rows(&[&[c, -s], &[s, c]]);
    Controller::new(conjugate_diagonal(&r, &values))
}

/// Derived seed for the `k`-th component of a generated scenario.
fn component_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Parameters of a randomly generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    pub blocks: Vec<usize>,
    pub condition: f64,
    /// Build `P` and `Q` in the eigenbasis of `S_Λ`.
    pub commuting: bool,
    pub seed: u64,
}

/// Weights uniform in `[0.25, 1.25)`, Gaussian blocks, random controllers.
pub fn random_scenario(spec: &RandomSpec) -> Result<Scenario> {
    use rand::RngExt;
    let mut rng = seeded_rng(component_seed(spec.seed, 0));
    let weights: Vec<f64> = spec.blocks.iter().map(|_| 0.25 + rng.random::<f64>()).collect();
    let lambda = random_gframe(spec.n, &spec.blocks, &weights, component_seed(spec.seed, 1))?;
    let s = lambda.frame_operator();
    let target = spec.commuting.then_some(&s);
    let p = random_controller(spec.n, spec.condition, component_seed(spec.seed, 2), target)?;
    let q = random_controller(spec.n, spec.condition, component_seed(spec.seed, 3), target)?;
    let kind = if spec.commuting { "commuting" } else { "generic" };
    Scenario::new(
        format!("random-{kind}-n{}-seed{}", spec.n, spec.seed),
        spec.seed,
        lambda,
        None,
        p,
        q,
    )
}

fn diagonal_pair() -> Result<GFrameFamily> {
    let space = Arc::new(DiscretizedMeasureSpace::new(vec![1.0, 1.0], vec![1, 1])?);
    GFrameFamily::new(
        space,
        2,
        vec![
            Matrix::from_real_rows(&[&[1.0, 0.0]]),
            Matrix::from_real_rows(&[&[0.0, 2.0]]),
        ],
    )
}

/// `S_Λ = diag(1, 4)` with `P`, `Q` rotated diagonals at different angles, so
/// no two of `P`, `Q`, `S_Λ` commute.
pub fn noncommuting_fixture() -> Result<Scenario> {
    let p = rotation_controller(PI / 6.0, [1.0, 3.0])?;
    let q = rotation_controller(PI / 3.0, [2.0, 1.0])?;
    Scenario::new("noncommuting-2x2", 0, diagonal_pair()?, None, p, q)
}

/// `S_Λ = diag(1, 4)` with `P`, `Q` sharing a rotated eigenbasis: they commute
/// with each other but not with `S_Λ`.
pub fn partially_commuting_fixture() -> Result<Scenario> {
    let p = rotation_controller(PI / 6.0, [1.0, 3.0])?;
    let q = rotation_controller(PI / 6.0, [2.0, 1.0])?;
    Scenario::new("partially-commuting-2x2", 0, diagonal_pair()?, None, p, q)
}

/// A single rank-one node in dimension 2: Bessel but not a frame.
pub fn rank_deficient_fixture() -> Result<Scenario> {
    let space = Arc::new(DiscretizedMeasureSpace::new(vec![1.0], vec![1])?);
    let lambda = GFrameFamily::new(space, 2, vec![Matrix::from_real_rows(&[&[1.0, 0.0]])])?;
    Scenario::new(
        "rank-deficient",
        0,
        lambda,
        None,
        Controller::identity(2),
        Controller::identity(2),
    )
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    format: String,
    version: u32,
    label: String,
    seed: u64,
    space: DiscretizedMeasureSpace,
    ambient_dim: usize,
    lambda: Vec<Matrix>,
    gamma: Option<Vec<Matrix>>,
    p: Matrix,
    q: Matrix,
}

pub fn scenario_to_string(s: &Scenario) -> String {
    let file = ScenarioFile {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        label: s.label.clone(),
        seed: s.seed,
        space: (**s.space()).clone(),
        ambient_dim: s.ambient_dim(),
        lambda: s.lambda.blocks().to_vec(),
        gamma: s.gamma.as_ref().map(|g| g.blocks().to_vec()),
        p: s.p.matrix().clone(),
        q: s.q.matrix().clone(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario serializes");
    text.push('\n');
    text
}

pub fn scenario_from_str(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if file.format != FORMAT_NAME {
        return Err(Error::Format(format!("unknown format {:?}", file.format)));
    }
    if file.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported version {} (expected {FORMAT_VERSION})",
            file.version
        )));
    }
    let invalid = |e: Error| Error::Format(e.to_string());
    file.space.validate().map_err(|e| invalid(e.into()))?;
    let space = Arc::new(file.space);
    let lambda = GFrameFamily::new(space.clone(), file.ambient_dim, file.lambda).map_err(invalid)?;
    let gamma = file
        .gamma
        .map(|blocks| GFrameFamily::new(space, file.ambient_dim, blocks))
        .transpose()
        .map_err(invalid)?;
    let p = Controller::new(file.p).map_err(invalid)?;
    let q = Controller::new(file.q).map_err(invalid)?;
    Scenario::new(file.label, file.seed, lambda, gamma, p, q).map_err(invalid)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<()> {
    fs::write(path, scenario_to_string(s)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scenario_from_str(&text)
}
