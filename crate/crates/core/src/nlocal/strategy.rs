use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::local_bound;
use crate::error::{Error, Result};
use crate::star::{NetworkBehavior, NetworkShape, StarScenario};

/// Finite-support N-local strategy.
///
/// Source `k` emits `λ_k` with probability `weights[k][λ_k]`. Edge `k`
/// answers `edge_tables[k][λ_k][x_k] ∈ {±1}`; the node answers
/// `node_table[y][λ⃗]`, where `λ⃗` is flattened mixed-radix with `λ_1` most
/// significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NLocalStrategy {
    pub weights: Vec<Vec<f64>>,
    pub edge_tables: Vec<Vec<Vec<i8>>>,
    pub node_table: Vec<Vec<usize>>,
}

impl NLocalStrategy {
    pub fn sources(&self) -> usize {
        self.weights.len()
    }

    pub fn support_sizes(&self) -> Vec<usize> {
        self.weights.iter().map(Vec::len).collect()
    }

    pub fn lambda_tuple_count(&self) -> usize {
        self.weights.iter().map(Vec::len).product()
    }

    pub fn lambda_tuple(&self, mut index: usize) -> Vec<usize> {
        let sizes = self.support_sizes();
        let mut out = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            out[k] = index % sizes[k];
            index /= sizes[k];
        }
        out
    }

    /// Probability of the λ tuple with the given flat index.
    pub fn lambda_weight(&self, index: usize) -> f64 {
        self.lambda_tuple(index)
            .iter()
            .zip(&self.weights)
            .map(|(&l, w)| w[l])
            .product()
    }

    /// Checks the strategy against a network shape.
    pub fn validate(&self, shape: &NetworkShape) -> Result<()> {
        let n = shape.sources();
        if self.weights.len() != n || self.edge_tables.len() != n {
            return Err(Error::validation(format!(
                "strategy has {} supports and {} edge tables for {n} sources",
                self.weights.len(),
                self.edge_tables.len()
            )));
        }
        for (k, w) in self.weights.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::validation(format!("source {k} has empty support")));
            }
            if w.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(Error::validation(format!("source {k} has a negative weight")));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::validation(format!("source {k} weights sum to {total}")));
            }
            let table = &self.edge_tables[k];
            if table.len() != w.len() {
                return Err(Error::validation(format!(
                    "edge {k} table covers {} λ values, support has {}",
                    table.len(),
                    w.len()
                )));
            }
            for row in table {
                if row.len() != shape.edge_settings[k] {
                    return Err(Error::validation(format!(
                        "edge {k} table row has {} settings, expected {}",
                        row.len(),
                        shape.edge_settings[k]
                    )));
                }
                if row.iter().any(|&v| v != 1 && v != -1) {
                    return Err(Error::validation(format!("edge {k} table entries must be ±1")));
                }
            }
        }
        if self.node_table.len() != shape.node_inputs() {
            return Err(Error::validation(format!(
                "node table has {} inputs, expected {}",
                self.node_table.len(),
                shape.node_inputs()
            )));
        }
        let tuples = self.lambda_tuple_count();
        for (y, row) in self.node_table.iter().enumerate() {
            if row.len() != tuples {
                return Err(Error::validation(format!(
                    "node table for input {y} has {} entries, expected {tuples}",
                    row.len()
                )));
            }
            if row.iter().any(|&b| b >= shape.node_alphabets[y]) {
                return Err(Error::validation(format!("node outcome out of range for input {y}")));
            }
        }
        Ok(())
    }
}

/// Behavior generated by an N-local strategy:
/// `P(a⃗ b | x⃗ y) = Σ_λ⃗ Π_k q_k(λ_k) [a_k = A^k(λ_k, x_k)] [b = B(λ⃗, y)]`,
/// with edge sign +1 ↦ outcome 0 and −1 ↦ outcome 1.
pub fn behavior_from_strategy(st: &NLocalStrategy, shape: &NetworkShape) -> Result<NetworkBehavior> {
    st.validate(shape)?;
    let mut beh = NetworkBehavior::zeros(shape);
    let n = shape.sources();
    let x_count = shape.edge_input_count();
    let x_tuples: Vec<Vec<usize>> = (0..x_count).map(|xi| shape.x_tuple(xi)).collect();
    for li in 0..st.lambda_tuple_count() {
        let lambda = st.lambda_tuple(li);
        let w = st.lambda_weight(li);
        if w == 0.0 {
            continue;
        }
        for (xi, x) in x_tuples.iter().enumerate() {
            let mut abits = 0usize;
            for k in 0..n {
                let out = u8::from(st.edge_tables[k][lambda[k]][x[k]] == -1);
                abits = (abits << 1) | out as usize;
            }
            for (y, row) in st.node_table.iter().enumerate() {
                beh.add(y, xi, abits, row[li], w);
            }
        }
    }
    beh.validate()?;
    Ok(beh)
}

/// Seeded stream of random N-local strategies with supports of size ≤ 4.
///
/// Half of the edge responses are drawn from the local-bound maximizers and
/// half of the node tables are sign-aligned with the edges, so the stream
/// regularly lands on or near the star bound.
pub struct StrategySampler {
    rng: ChaCha8Rng,
    scenario: StarScenario,
    maximizers: Vec<Vec<Vec<i8>>>,
    remaining: usize,
}

/// Deterministic pseudo-random strategies for `sc`, reproducible from `seed`.
pub fn sample_strategies(sc: &StarScenario, count: usize, seed: u64) -> Result<StrategySampler> {
    if count == 0 {
        return Err(Error::validation("sample count must be at least 1"));
    }
    let maximizers = sc
        .edge_matrices()
        .iter()
        .map(|m| {
            Ok(local_bound(m)?
                .maximizers
                .into_iter()
                .map(|a| a.values().to_vec())
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(StrategySampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        scenario: sc.clone(),
        maximizers,
        remaining: count,
    })
}

impl StrategySampler {
    fn draw(&mut self) -> NLocalStrategy {
        let sc = &self.scenario;
        let rng = &mut self.rng;
        let shape = sc.shape();
        let n = sc.sources();
        let mut weights = Vec::with_capacity(n);
        let mut edge_tables = Vec::with_capacity(n);
        for k in 0..n {
            let size = rng.gen_range(1..=4);
            let mut w: Vec<f64> = (0..size).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|p| *p /= total);
            // exact renormalization of the last entry
            let head: f64 = w[..size - 1].iter().sum();
            w[size - 1] = (1.0 - head).max(0.0);
            weights.push(w);
            let table = (0..size)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        self.maximizers[k].choose(rng).expect("maximizers").clone()
                    } else {
                        (0..shape.edge_settings[k])
                            .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                            .collect()
                    }
                })
                .collect();
            edge_tables.push(table);
        }
        let mut st = NLocalStrategy {
            weights,
            edge_tables,
            node_table: Vec::new(),
        };
        let aligned = rng.gen_bool(0.5);
        let tuples = st.lambda_tuple_count();
        st.node_table = (0..shape.node_inputs())
            .map(|y| {
                (0..tuples)
                    .map(|li| {
                        if aligned {
                            best_node_outcome(sc, &st, y, li)
                        } else {
                            rng.gen_range(0..shape.node_alphabets[y])
                        }
                    })
                    .collect()
            })
            .collect();
        st
    }
}

/// Node outcome for input `y` agreeing with the most signs of
/// `Π_k Â_i^k(λ_k)` among the rows that use `y`.
fn best_node_outcome(sc: &StarScenario, st: &NLocalStrategy, y: usize, li: usize) -> usize {
    let lambda = st.lambda_tuple(li);
    let targets: Vec<(usize, f64)> = sc
        .node_settings()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.y == y)
        .map(|(i, _)| {
            let prod: f64 = sc
                .edge_matrices()
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let row = &st.edge_tables[k][lambda[k]];
                    (0..m.n_a()).map(|x| m.get(i, x) * f64::from(row[x])).sum::<f64>()
                })
                .product();
            (i, prod)
        })
        .collect();
    (0..sc.node_alphabets()[y])
        .max_by(|&b1, &b2| {
            let score = |b: usize| -> f64 {
                targets.iter().map(|&(i, p)| sc.node_sign(i, b) * p).sum()
            };
            score(b1).total_cmp(&score(b2)).then(b2.cmp(&b1))
        })
        .unwrap_or(0)
}

impl Iterator for StrategySampler {
    type Item = NLocalStrategy;

    fn next(&mut self) -> Option<NLocalStrategy> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.draw())
    }
}
