//! Star-network inequalities `S^net = Σ_i |I_i|^{1/N} ≤ (C_1⋯C_N)^{1/N}`.
//!
//! A scenario has `N` edge parties, each sharing one source with the central
//! node. Edge `k` uses the Bell matrix `M^(k)` (all with the same number of
//! rows `n_B`). For each row `i` the node measures input `y_i` and maps its
//! outcome `b` to a sign with the lookup table `f_i`:
//!
//! ```text
//! I_i = Σ_{x_1..x_N} M^1_{i x_1} ⋯ M^N_{i x_N} ⟨A_{x_1} ⋯ A_{x_N} B_i⟩
//! ⟨A_{x_1} ⋯ A_{x_N} B_i⟩ = Σ_{a,b} (−1)^{a_1+…+a_N+f_i(b)} P(a b | x y_i)
//! ```

use serde::{Deserialize, Serialize};

use crate::bell::{local_bound, BellMatrix};
use crate::error::{Error, Result};
use crate::tol::{NEG_PROB_TOL, ROOT_ZERO, TOL};

/// Node input `y` used for one row, with its outcome → bit lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSetting {
    pub y: usize,
    pub f: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarScenario {
    edge_matrices: Vec<BellMatrix>,
    node_alphabets: Vec<usize>,
    node_settings: Vec<NodeSetting>,
}

/// Input and output cardinalities of a star network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkShape {
    pub edge_settings: Vec<usize>,
    /// Outcome count for each node input.
    pub node_alphabets: Vec<usize>,
}

impl NetworkShape {
    pub fn sources(&self) -> usize {
        self.edge_settings.len()
    }

    pub fn node_inputs(&self) -> usize {
        self.node_alphabets.len()
    }

    pub fn edge_input_count(&self) -> usize {
        self.edge_settings.iter().product()
    }

    /// Mixed-radix index of an edge input tuple, edge 1 most significant.
    pub fn x_index(&self, x: &[usize]) -> usize {
        x.iter()
            .zip(&self.edge_settings)
            .fold(0, |acc, (&xi, &n)| acc * n + xi)
    }

    pub fn x_tuple(&self, mut index: usize) -> Vec<usize> {
        let mut x = vec![0; self.sources()];
        for k in (0..self.sources()).rev() {
            x[k] = index % self.edge_settings[k];
            index /= self.edge_settings[k];
        }
        x
    }
}

impl StarScenario {
    pub fn new(
        edge_matrices: Vec<BellMatrix>,
        node_alphabets: Vec<usize>,
        node_settings: Vec<NodeSetting>,
    ) -> Result<Self> {
        let first = edge_matrices
            .first()
            .ok_or_else(|| Error::validation("a star scenario needs at least one source"))?;
        let n_b = first.n_b();
        if edge_matrices.iter().any(|m| m.n_b() != n_b) {
            return Err(Error::validation("all edge matrices must have the same number of rows"));
        }
        if node_settings.len() != n_b {
            return Err(Error::validation(format!(
                "{} node settings given for {n_b} matrix rows",
                node_settings.len()
            )));
        }
        if node_alphabets.is_empty() || node_alphabets.contains(&0) {
            return Err(Error::validation("node alphabets must be non-empty and positive"));
        }
        for (i, s) in node_settings.iter().enumerate() {
            let size = *node_alphabets.get(s.y).ok_or_else(|| {
                Error::validation(format!("setting {i} references unknown node input {}", s.y))
            })?;
            if s.f.len() != size {
                return Err(Error::validation(format!(
                    "f table {i} has {} entries, node input {} has {size} outcomes",
                    s.f.len(),
                    s.y
                )));
            }
            if s.f.iter().any(|&b| b > 1) {
                return Err(Error::validation(format!("f table {i} must contain only 0/1")));
            }
        }
        Ok(StarScenario {
            edge_matrices,
            node_alphabets,
            node_settings,
        })
    }

    /// Every edge uses `m`; one binary node input per row with `f(b) = b`.
    pub fn homogeneous_binary(m: &BellMatrix, sources: usize) -> Result<Self> {
        let n_b = m.n_b();
        Self::new(
            vec![m.clone(); sources],
            vec![2; n_b],
            (0..n_b).map(|y| NodeSetting { y, f: vec![0, 1] }).collect(),
        )
    }

    pub fn sources(&self) -> usize {
        self.edge_matrices.len()
    }

    pub fn n_b(&self) -> usize {
        self.edge_matrices[0].n_b()
    }

    pub fn edge_matrices(&self) -> &[BellMatrix] {
        &self.edge_matrices
    }

    pub fn node_alphabets(&self) -> &[usize] {
        &self.node_alphabets
    }

    pub fn node_settings(&self) -> &[NodeSetting] {
        &self.node_settings
    }

    /// The shared matrix when every edge uses the same one.
    pub fn homogeneous(&self) -> Option<&BellMatrix> {
        let first = &self.edge_matrices[0];
        self.edge_matrices.iter().all(|m| m == first).then_some(first)
    }

    pub fn shape(&self) -> NetworkShape {
        NetworkShape {
            edge_settings: self.edge_matrices.iter().map(BellMatrix::n_a).collect(),
            node_alphabets: self.node_alphabets.clone(),
        }
    }

    /// `(−1)^{f_i(b)}`.
    pub fn node_sign(&self, i: usize, b: usize) -> f64 {
        if self.node_settings[i].f[b] == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Conditional distribution `P(a_1…a_N b | x_1…x_N y)`.
///
/// Dense storage: for each `(y, x⃗)` a block of `2^N × max_alphabet`
/// entries, edge outcome `a_k` at bit `N−1−k` of the block row.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkBehavior {
    shape: NetworkShape,
    max_b: usize,
    table: Vec<f64>,
}

impl NetworkBehavior {
    pub(crate) fn zeros(shape: &NetworkShape) -> Self {
        let max_b = shape.node_alphabets.iter().copied().max().unwrap_or(1);
        let len = shape.node_inputs() * shape.edge_input_count() * (1 << shape.sources()) * max_b;
        NetworkBehavior {
            shape: shape.clone(),
            max_b,
            table: vec![0.0; len],
        }
    }

    /// Builds a behavior from a probability function, validating
    /// normalization per input tuple.
    pub fn from_fn(
        shape: &NetworkShape,
        mut p: impl FnMut(&[usize], usize, &[u8], usize) -> f64,
    ) -> Result<Self> {
        let mut beh = Self::zeros(shape);
        let n = shape.sources();
        for y in 0..shape.node_inputs() {
            for xi in 0..shape.edge_input_count() {
                let x = shape.x_tuple(xi);
                for abits in 0..1usize << n {
                    let a = beh.a_tuple(abits);
                    for b in 0..shape.node_alphabets[y] {
                        let at = beh.offset(y, xi, abits, b);
                        beh.table[at] = p(&x, y, &a, b);
                    }
                }
            }
        }
        beh.validate()?;
        Ok(beh)
    }

    pub fn shape(&self) -> &NetworkShape {
        &self.shape
    }

    pub fn sources(&self) -> usize {
        self.shape.sources()
    }

    pub(crate) fn offset(&self, y: usize, xi: usize, abits: usize, b: usize) -> usize {
        let n = self.shape.sources();
        ((y * self.shape.edge_input_count() + xi) * (1 << n) + abits) * self.max_b + b
    }

    pub(crate) fn add(&mut self, y: usize, xi: usize, abits: usize, b: usize, p: f64) {
        let at = self.offset(y, xi, abits, b);
        self.table[at] += p;
    }

    pub(crate) fn a_bits(&self, a: &[u8]) -> usize {
        a.iter().fold(0, |acc, &ak| (acc << 1) | ak as usize)
    }

    pub(crate) fn a_tuple(&self, abits: usize) -> Vec<u8> {
        let n = self.shape.sources();
        (0..n).map(|k| ((abits >> (n - 1 - k)) & 1) as u8).collect()
    }

    /// `P(a⃗ b | x⃗ y)`, with roundoff negatives clamped to zero.
    pub fn prob(&self, x: &[usize], y: usize, a: &[u8], b: usize) -> f64 {
        let xi = self.shape.x_index(x);
        self.table[self.offset(y, xi, self.a_bits(a), b)].max(0.0)
    }

    /// Probability block for one input tuple, indexed `[abits * max_b + b]`.
    pub(crate) fn block(&self, y: usize, xi: usize) -> &[f64] {
        let start = self.offset(y, xi, 0, 0);
        &self.table[start..start + (1 << self.shape.sources()) * self.max_b]
    }

    pub(crate) fn max_b(&self) -> usize {
        self.max_b
    }

    /// Checks every input tuple sums to one and no entry is negative beyond
    /// roundoff.
    pub fn validate(&self) -> Result<()> {
        for y in 0..self.shape.node_inputs() {
            for xi in 0..self.shape.edge_input_count() {
                let block = self.block(y, xi);
                let mut total = 0.0;
                for abits in 0..1usize << self.sources() {
                    for b in 0..self.max_b {
                        let p = block[abits * self.max_b + b];
                        if b >= self.shape.node_alphabets[y] && p != 0.0 {
                            return Err(Error::validation("probability on an undeclared node outcome"));
                        }
                        if !p.is_finite() || p < -NEG_PROB_TOL {
                            return Err(Error::validation(format!("invalid probability {p}")));
                        }
                        total += p;
                    }
                }
                if (total - 1.0).abs() > TOL {
                    return Err(Error::validation(format!(
                        "probabilities for input (x={:?}, y={y}) sum to {total}",
                        self.shape.x_tuple(xi)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest absolute difference between two behaviors of the same shape.
    pub fn max_abs_diff(&self, other: &NetworkBehavior) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarEvaluation {
    #[serde(rename = "I")]
    pub i_values: Vec<f64>,
    pub s_net: f64,
    pub bound: f64,
    pub violated: bool,
}

/// `|v|^{1/n}` computed as `exp(ln|v|/n)`, with tiny `|v|` mapped to zero.
pub fn nth_root_abs(v: f64, n: usize) -> f64 {
    let a = v.abs();
    if a < ROOT_ZERO {
        0.0
    } else {
        (a.ln() / n as f64).exp()
    }
}

/// `(C_1 ⋯ C_N)^{1/N}` from the per-edge local bounds.
pub fn star_bound(sc: &StarScenario) -> Result<f64> {
    let mut bounds = Vec::with_capacity(sc.sources());
    for (k, m) in sc.edge_matrices.iter().enumerate() {
        // identical matrices share one enumeration
        match sc.edge_matrices[..k].iter().position(|p| p == m) {
            Some(j) => bounds.push(bounds[j]),
            None => bounds.push(local_bound(m)?.bound),
        }
    }
    if bounds.iter().all(|&c| c == bounds[0]) {
        return Ok(bounds[0]);
    }
    Ok(geometric_mean(&bounds))
}

fn geometric_mean(values: &[f64]) -> f64 {
    if values.iter().any(|v| v.abs() < ROOT_ZERO) {
        return 0.0;
    }
    let log_sum: f64 = values.iter().map(|v| v.abs().ln()).sum();
    (log_sum / values.len() as f64).exp()
}

fn check_shape(beh: &NetworkBehavior, sc: &StarScenario) -> Result<()> {
    if beh.shape != sc.shape() {
        return Err(Error::validation(format!(
            "behavior shape {:?} does not match scenario shape {:?}",
            beh.shape,
            sc.shape()
        )));
    }
    Ok(())
}

/// `⟨A_{x_1} ⋯ A_{x_N} B_i⟩ = Σ_{a,b} (−1)^{Σa + f_i(b)} P(a b | x y_i)`.
pub fn network_correlator(
    beh: &NetworkBehavior,
    sc: &StarScenario,
    i: usize,
    x: &[usize],
) -> Result<f64> {
    check_shape(beh, sc)?;
    if i >= sc.n_b() {
        return Err(Error::validation(format!("row index {i} out of range 0..{}", sc.n_b())));
    }
    if x.len() != sc.sources() || x.iter().zip(&beh.shape.edge_settings).any(|(&xi, &n)| xi >= n) {
        return Err(Error::validation(format!("edge settings {x:?} out of range")));
    }
    Ok(correlator_unchecked(beh, sc, i, beh.shape.x_index(x)))
}

fn correlator_unchecked(beh: &NetworkBehavior, sc: &StarScenario, i: usize, xi: usize) -> f64 {
    let setting = &sc.node_settings[i];
    let block = beh.block(setting.y, xi);
    let max_b = beh.max_b();
    let mut acc = 0.0;
    for abits in 0..1usize << beh.sources() {
        let a_sign = if abits.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        for (b, &f) in setting.f.iter().enumerate() {
            let p = block[abits * max_b + b].max(0.0);
            acc += if f == 0 { a_sign * p } else { -a_sign * p };
        }
    }
    acc
}

/// Computes every `I_i`, `S^net` and the bound.
pub fn evaluate(beh: &NetworkBehavior, sc: &StarScenario) -> Result<StarEvaluation> {
    check_shape(beh, sc)?;
    let shape = &beh.shape;
    let n = sc.sources();
    let i_values: Vec<f64> = (0..sc.n_b())
        .map(|i| {
            let mut total = 0.0;
            for xi in 0..shape.edge_input_count() {
                let x = shape.x_tuple(xi);
                let coef: f64 = x
                    .iter()
                    .zip(&sc.edge_matrices)
                    .map(|(&xk, m)| m.get(i, xk))
                    .product();
                if coef != 0.0 {
                    total += coef * correlator_unchecked(beh, sc, i, xi);
                }
            }
            total
        })
        .collect();
    let s_net = i_values.iter().map(|&v| nth_root_abs(v, n)).sum();
    let bound = star_bound(sc)?;
    Ok(StarEvaluation {
        i_values,
        s_net,
        bound,
        violated: s_net > bound + TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductBound {
    pub geometric_mean: f64,
    pub holds: bool,
}

/// Compares `S^net` with the geometric mean `(Π_k |S_k|)^{1/N}` of the
/// per-edge Bell values, the ceiling for product node measurements.
pub fn product_bound_check(per_edge_bell_values: &[f64], s_net: f64) -> ProductBound {
    let geometric_mean = geometric_mean(per_edge_bell_values);
    ProductBound {
        geometric_mean,
        holds: s_net <= geometric_mean + TOL,
    }
}
