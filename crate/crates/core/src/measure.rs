//! Finitely supported measure spaces and the weighted coefficient space.
//!
//! A [`DiscretizedMeasureSpace`] stands in for `(Ω, μ)`: nodes are opaque
//! ordinals `0..len`, each carrying a positive weight and the dimension of its
//! block space. Builders may record a coordinate per node; nothing in the
//! theory depends on it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linops::{inner, C64, ZERO};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("a measure space needs at least one node")]
    Empty,
    #[error("weight {value} at node {node} is not positive and finite")]
    BadWeight { node: usize, value: f64 },
    #[error("block dimension at node {0} is zero")]
    ZeroBlockDim(usize),
    #[error("weights ({weights}), block dims ({dims}) and points ({points}) differ in length")]
    LengthMismatch { weights: usize, dims: usize, points: usize },
    #[error("interval [{a}, {b}] with {nodes} nodes is not a valid quadrature domain")]
    BadInterval { a: f64, b: f64, nodes: usize },
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("block at node {node} has length {found}, expected {expected}")]
    DimensionMismatch { node: usize, expected: usize, found: usize },
    #[error("coefficient families live on different measure spaces")]
    SpaceMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedMeasureSpace {
    weights: Vec<f64>,
    block_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<f64>>,
}

impl DiscretizedMeasureSpace {
    pub fn new(weights: Vec<f64>, block_dims: Vec<usize>) -> Result<Self, MeasureError> {
        let space = DiscretizedMeasureSpace {
            weights,
            block_dims,
            points: None,
        };
        space.validate()?;
        Ok(space)
    }

    /// Attaches a coordinate to every node.
    pub fn with_points(mut self, points: Vec<f64>) -> Result<Self, MeasureError> {
        self.points = Some(points);
        self.validate()?;
        Ok(self)
    }

    /// Midpoint rule on `[a, b]`: `nodes` equal cells, weight `(b − a)/nodes` each.
    pub fn uniform_interval(a: f64, b: f64, nodes: usize, block_dim: usize) -> Result<Self, MeasureError> {
        if !(a.is_finite() && b.is_finite() && a < b) || nodes == 0 {
            return Err(MeasureError::BadInterval { a, b, nodes });
        }
        let h = (b - a) / nodes as f64;
        let points = (0..nodes).map(|k| a + (k as f64 + 0.5) * h).collect();
        DiscretizedMeasureSpace::new(vec![h; nodes], vec![block_dim; nodes])?.with_points(points)
    }

    /// Checks the invariants; used after deserialization as well.
    pub fn validate(&self) -> Result<(), MeasureError> {
        let points = self.points.as_ref().map_or(self.weights.len(), Vec::len);
        if self.weights.len() != self.block_dims.len() || points != self.weights.len() {
            return Err(MeasureError::LengthMismatch {
                weights: self.weights.len(),
                dims: self.block_dims.len(),
                points,
            });
        }
        if self.weights.is_empty() {
            return Err(MeasureError::Empty);
        }
        if let Some((node, &value)) = self
            .weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(MeasureError::BadWeight { node, value });
        }
        if let Some(node) = self.block_dims.iter().position(|&d| d == 0) {
            return Err(MeasureError::ZeroBlockDim(node));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.weights[node]
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_dim(&self, node: usize) -> usize {
        self.block_dims[node]
    }

    pub fn points(&self) -> Option<&[f64]> {
        self.points.as_deref()
    }

    /// `Σ_w d_w`, the dimension of the stacked coefficient space.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Starting row of each node's block in the stacked coefficient space.
    pub fn offsets(&self) -> Vec<usize> {
        self.block_dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect()
    }

    /// `μ(Ω)`, compensated summation.
    pub fn total_measure(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &w in &self.weights {
            let t = sum + w;
            if sum.abs() >= w.abs() {
                comp += (sum - t) + w;
            } else {
                comp += (w - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }
}

pub(crate) fn same_space(a: &Arc<DiscretizedMeasureSpace>, b: &Arc<DiscretizedMeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element `{f_w}_w` of `ℓ²({H_w}_w)`: one block per node.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFamily {
    space: Arc<DiscretizedMeasureSpace>,
    blocks: Vec<Vec<C64>>,
}

impl CoefficientFamily {
    pub fn new(space: Arc<DiscretizedMeasureSpace>, blocks: Vec<Vec<C64>>) -> Result<Self, MeasureError> {
        if blocks.len() != space.len() {
            return Err(MeasureError::LengthMismatch {
                weights: space.len(),
                dims: space.len(),
                points: blocks.len(),
            });
        }
        for (node, b) in blocks.iter().enumerate() {
            if b.len() != space.block_dim(node) {
                return Err(MeasureError::DimensionMismatch {
                    node,
                    expected: space.block_dim(node),
                    found: b.len(),
                });
            }
        }
        Ok(CoefficientFamily { space, blocks })
    }

    pub fn zeros(space: Arc<DiscretizedMeasureSpace>) -> Self {
        let blocks = space.block_dims().iter().map(|&d| vec![ZERO; d]).collect();
        CoefficientFamily { space, blocks }
    }

    pub fn space(&self) -> &Arc<DiscretizedMeasureSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &[Vec<C64>] {
        &self.blocks
    }

    pub fn block(&self, node: usize) -> &[C64] {
        &self.blocks[node]
    }

    /// `Σ_w μ_w ‖f_w‖²`.
    pub fn norm_sqr(&self) -> f64 {
        self.blocks
            .iter()
            .zip(self.space.weights())
            .map(|(b, w)| w * b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Isometric coordinates: block `w` scaled by `√μ_w` and concatenated, so
    /// the plain Euclidean inner product equals the weighted one.
    pub fn to_weighted_stacked(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .zip(self.space.weights())
            .flat_map(|(b, w)| {
                let s = w.sqrt();
                b.iter().map(move |z| z * s)
            })
            .collect()
    }

    pub fn from_weighted_stacked(space: Arc<DiscretizedMeasureSpace>, stacked: &[C64]) -> Result<Self, MeasureError> {
        if stacked.len() != space.total_dim() {
            return Err(MeasureError::DimensionMismatch {
                node: 0,
                expected: space.total_dim(),
                found: stacked.len(),
            });
        }
        let offsets = space.offsets();
        let blocks = (0..space.len())
            .map(|w| {
                let s = space.weight(w).sqrt();
                stacked[offsets[w]..offsets[w] + space.block_dim(w)]
                    .iter()
                    .map(|z| z / s)
                    .collect()
            })
            .collect();
        Ok(CoefficientFamily { space, blocks })
    }
}

/// `⟨x, y⟩ = Σ_w μ_w ⟨x_w, y_w⟩`, linear in `x`.
pub fn weighted_inner_product(x: &CoefficientFamily, y: &CoefficientFamily) -> Result<C64, MeasureError> {
    if !same_space(&x.space, &y.space) {
        return Err(MeasureError::SpaceMismatch);
    }
    Ok(x.blocks
        .iter()
        .zip(&y.blocks)
        .zip(x.space.weights())
        .map(|((a, b), w)| inner(a, b) * *w)
        .sum())
}

/// `v δ_w`: the family equal to `v / μ_w` at node `w` and zero elsewhere, so
/// that integrating against it evaluates at `w` with unit mass.
pub fn delta_embedding(
    space: &Arc<DiscretizedMeasureSpace>,
    node: usize,
    v: &[C64],
) -> Result<CoefficientFamily, MeasureError> {
    if node >= space.len() {
        return Err(MeasureError::UnknownNode(node));
    }
    if v.len() != space.block_dim(node) {
        return Err(MeasureError::DimensionMismatch {
            node,
            expected: space.block_dim(node),
            found: v.len(),
        });
    }
    let mut family = CoefficientFamily::zeros(space.clone());
    let mass = space.weight(node);
    family.blocks[node] = v.iter().map(|z| z / mass).collect();
    Ok(family)
}
