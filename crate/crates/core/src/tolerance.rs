//! Central tolerance record.
//!
//! Every threshold used by the analyses lives here so that the acceptance
//! suite and the CLI overrides can refer to them by name.

use serde::{Deserialize, Serialize};

/// Largest number of grid cells any sampling routine will allocate.
pub const DEFAULT_GRID_CAP: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative step tolerance of the root iteration; also scales the
    /// accepted residual `|P(root)| <= root * (1 + max |coeff|)`.
    pub root: f64,
    pub root_max_iterations: usize,
    pub newton_polish_steps: usize,
    /// Roots closer than `cluster_factor * (1 + cauchy_bound)` merge.
    pub cluster_factor: f64,
    /// `|curvature_at - curvature_hessian_at| <= formula_agreement * (1 + |K|)`.
    pub formula_agreement: f64,
    /// Largest positive value a curvature sample may take.
    pub nonpositivity_slack: f64,
    /// `|f''| <= degeneracy * (1 + max |P'' coeff|)` marks a degenerate critical point.
    pub degeneracy: f64,
    /// Relative cross-product threshold for collinear hull vertices.
    pub collinearity: f64,
    /// Absolute distance slack for hull containment.
    pub containment_slack: f64,
    /// Critical values within `level_equality * (1 + max |value|)` share a level.
    pub level_equality: f64,
    pub unit_modulus: f64,
    /// Non-constant coefficients of `Q - alpha P` must stay below
    /// `coefficient_match * max |coeff|`.
    pub coefficient_match: f64,
    pub loop_invariance: f64,
    /// A refutation witness must carry a curvature gap strictly above this.
    pub witness_threshold: f64,
    /// Relative curvature gap sought on large circles for the degree gate.
    pub degree_witness_relative: f64,
    pub grid_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-13,
            root_max_iterations: 200,
            newton_polish_steps: 5,
            cluster_factor: 1e-7,
            formula_agreement: 1e-9,
            nonpositivity_slack: 1e-12,
            degeneracy: 1e-8,
            collinearity: 1e-12,
            containment_slack: 1e-8,
            level_equality: 1e-9,
            unit_modulus: 1e-9,
            coefficient_match: 1e-9,
            loop_invariance: 1e-12,
            witness_threshold: 0.0,
            degree_witness_relative: 1e-3,
            grid_cap: DEFAULT_GRID_CAP,
        }
    }
}
