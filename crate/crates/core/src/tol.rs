//! Tolerance constants used throughout the crate.

use serde::{Deserialize, Serialize};

/// Default absolute tolerance for physical comparisons.
pub const TOL: f64 = 1e-9;
/// Algebraic identities on matrices of dimension at most 16.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Negative probabilities above this are treated as roundoff and clamped.
pub const NEG_PROB_TOL: f64 = 1e-12;
/// `|I_i|` below this is mapped to zero before taking the N-th root.
pub const ROOT_ZERO: f64 = 1e-15;
/// Saturation slack accepted when reducing a classical strategy.
pub const SATURATION_TOL: f64 = 1e-6;

/// The set of tolerances in force, echoed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub algebra_tol: f64,
    pub neg_prob_tol: f64,
    pub root_zero: f64,
    pub saturation_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol: TOL,
            algebra_tol: ALGEBRA_TOL,
            neg_prob_tol: NEG_PROB_TOL,
            root_zero: ROOT_ZERO,
            saturation_tol: SATURATION_TOL,
        }
    }
}
