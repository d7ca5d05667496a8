use serde::{Deserialize, Serialize};

use crate::bell::{local_bound, BellMatrix, DeterministicAssignment};
use crate::error::{Error, Result};
use crate::star::{evaluate, nth_root_abs, star_bound, StarScenario};
use crate::tol::{SATURATION_TOL, TOL};

use super::families::constant_node_outputs;
use super::strategy::{behavior_from_strategy, NLocalStrategy};

/// Strategy with one edge behavior shared by all sources and a node whose
/// correlator sign is fixed per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedStrategy {
    pub shared_weights: Vec<f64>,
    pub shared_edge_table: Vec<Vec<i8>>,
    pub node_signs: Vec<i8>,
}

impl ReducedStrategy {
    /// `⟨Â_i⟩ = Σ_λ w(λ) Σ_x M_ix A(λ, x)`.
    pub fn mean_transformed(&self, m: &BellMatrix) -> Vec<f64> {
        let mut avg = vec![0.0; m.n_b()];
        for (w, row) in self.shared_weights.iter().zip(&self.shared_edge_table) {
            let signs: Vec<f64> = row.iter().map(|&v| f64::from(v)).collect();
            for (a, y) in avg.iter_mut().zip(m.apply(&signs)) {
                *a += w * y;
            }
        }
        avg
    }

    /// `I_i = b_i ⟨Â_i⟩^N`.
    pub fn i_values(&self, m: &BellMatrix, sources: usize) -> Vec<f64> {
        self.mean_transformed(m)
            .iter()
            .zip(&self.node_signs)
            .map(|(&v, &b)| f64::from(b) * v.powi(sources as i32))
            .collect()
    }

    /// Expands into an explicit N-local strategy for a homogeneous scenario.
    ///
    /// The node answers one fixed outcome per input; rows whose mean vanishes
    /// do not constrain it.
    pub fn to_strategy(&self, sc: &StarScenario) -> Result<NLocalStrategy> {
        let m = sc
            .homogeneous()
            .ok_or_else(|| Error::validation("reduced strategies need a shared edge matrix"))?;
        if self.node_signs.len() != sc.n_b() {
            return Err(Error::validation(format!(
                "{} node signs for {} rows",
                self.node_signs.len(),
                sc.n_b()
            )));
        }
        let needed: Vec<Option<f64>> = self
            .mean_transformed(m)
            .iter()
            .zip(&self.node_signs)
            .map(|(&v, &b)| (v.abs() > TOL).then_some(f64::from(b)))
            .collect();
        let outputs = constant_node_outputs(sc, &needed)?;
        let n = sc.sources();
        let tuples = self.shared_weights.len().pow(n as u32);
        Ok(NLocalStrategy {
            weights: vec![self.shared_weights.clone(); n],
            edge_tables: vec![self.shared_edge_table.clone(); n],
            node_table: outputs.into_iter().map(|b| vec![b; tuples]).collect(),
        })
    }
}

/// Transformed vector of one row of an edge table.
fn transformed_row(m: &BellMatrix, row: &[i8]) -> Vec<f64> {
    let signs: Vec<f64> = row.iter().map(|&v| f64::from(v)).collect();
    m.apply(&signs)
}

fn near_zero(v: f64) -> bool {
    v.abs() <= TOL
}

/// Turns a bound-saturating N-local strategy on a homogeneous scenario into
/// a reduced strategy with the same `I_i`.
///
/// Saturation forces, for every row, a constant sign of the integrand
/// `Π_k Â_i^k(λ_k) B_i(λ⃗)`, so the node output factors into per-edge signs.
/// Those signs are absorbed into edge 1's responses by choosing, for each
/// `λ_1`, a saturating assignment whose transformed vector has the same
/// magnitudes and a common sign pattern `t`; then `b_i = t_i^N`.
pub fn reduce(st: &NLocalStrategy, sc: &StarScenario) -> Result<ReducedStrategy> {
    let m = sc
        .homogeneous()
        .ok_or_else(|| Error::Precondition("reduction requires identical edge matrices".into()))?;
    let n = sc.sources();
    let shape = sc.shape();
    let beh = behavior_from_strategy(st, &shape)?;
    let ev = evaluate(&beh, sc)?;
    let bound = star_bound(sc)?;
    if (ev.s_net - bound).abs() > SATURATION_TOL {
        return Err(Error::Precondition(format!(
            "strategy reaches {} but the bound is {bound}",
            ev.s_net
        )));
    }
    if let Some(v) = ev.i_values.iter().find(|&&v| v < -TOL) {
        return Err(Error::Precondition(format!("negative correlator value {v}")));
    }

    check_integrand_signs(st, sc, m)?;

    let lb = local_bound(m)?;
    let c = lb.bound;
    let support: Vec<(f64, Vec<f64>, &Vec<i8>)> = st.weights[0]
        .iter()
        .zip(&st.edge_tables[0])
        .filter(|(&w, _)| w > 0.0)
        .map(|(&w, row)| (w, transformed_row(m, row), row))
        .collect();
    for (_, y, _) in &support {
        let s: f64 = y.iter().map(|v| v.abs()).sum();
        if (s - c).abs() > SATURATION_TOL * c.abs().max(1.0) {
            return Err(Error::numeric(format!(
                "edge response reaches {s} instead of the local bound {c}"
            )));
        }
    }

    let rows = flip_alignment(&support)
        .or_else(|| pattern_search(&support, m, &lb.maximizers))
        .ok_or_else(|| {
            Error::numeric("edge responses do not share a common sign pattern".to_string())
        })?;

    // merge identical responses, keeping first-appearance order
    let mut shared_edge_table: Vec<Vec<i8>> = Vec::new();
    let mut shared_weights: Vec<f64> = Vec::new();
    for ((w, _, _), row) in support.iter().zip(rows) {
        match shared_edge_table.iter().position(|r| *r == row) {
            Some(j) => shared_weights[j] += w,
            None => {
                shared_edge_table.push(row);
                shared_weights.push(*w);
            }
        }
    }
    let total: f64 = shared_weights.iter().sum();
    shared_weights.iter_mut().for_each(|w| *w /= total);

    let mut reduced = ReducedStrategy {
        shared_weights,
        shared_edge_table,
        node_signs: vec![1; sc.n_b()],
    };
    let mean = reduced.mean_transformed(m);
    for (i, (&target, &avg)) in ev.i_values.iter().zip(&mean).enumerate() {
        if target > TOL {
            let raised = avg.powi(n as i32);
            reduced.node_signs[i] = if raised < 0.0 { -1 } else { 1 };
        }
    }
    for (i, (got, want)) in reduced.i_values(m, n).iter().zip(&ev.i_values).enumerate() {
        if (got - want).abs() > TOL * want.abs().max(1.0) {
            return Err(Error::numeric(format!(
                "reduced correlator {i} is {got}, original {want}"
            )));
        }
    }
    Ok(reduced)
}

/// Every row's integrand must keep one sign over the λ support.
fn check_integrand_signs(st: &NLocalStrategy, sc: &StarScenario, m: &BellMatrix) -> Result<()> {
    let n = sc.sources();
    let transformed: Vec<Vec<Vec<f64>>> = st
        .edge_tables
        .iter()
        .map(|table| table.iter().map(|row| transformed_row(m, row)).collect())
        .collect();
    for (i, setting) in sc.node_settings().iter().enumerate() {
        let mut seen = 0.0f64;
        for li in 0..st.lambda_tuple_count() {
            if st.lambda_weight(li) == 0.0 {
                continue;
            }
            let lambda = st.lambda_tuple(li);
            let edge: f64 = (0..n).map(|k| transformed[k][lambda[k]][i]).product();
            let node = sc.node_sign(i, st.node_table[setting.y][li]);
            let v = edge * node;
            if near_zero(v) {
                continue;
            }
            if seen != 0.0 && v.signum() != seen {
                return Err(Error::numeric(format!(
                    "row {i} integrand changes sign across the λ support"
                )));
            }
            seen = v.signum();
        }
    }
    Ok(())
}

/// Flips whole responses so all nonzero signs agree, propagating parity
/// constraints over responses that share nonzero rows.
fn flip_alignment(support: &[(f64, Vec<f64>, &Vec<i8>)]) -> Option<Vec<Vec<i8>>> {
    let count = support.len();
    let mut flip: Vec<Option<bool>> = vec![None; count];
    for start in 0..count {
        if flip[start].is_some() {
            continue;
        }
        flip[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let fu = flip[u].expect("assigned");
            for v in 0..count {
                for i in 0..support[u].1.len() {
                    let (a, b) = (support[u].1[i], support[v].1[i]);
                    if near_zero(a) || near_zero(b) {
                        continue;
                    }
                    // u and v must end with the same sign on row i
                    let want = fu ^ (a.signum() != b.signum());
                    match flip[v] {
                        None => {
                            flip[v] = Some(want);
                            queue.push_back(v);
                        }
                        Some(f) if f != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Some(
        support
            .iter()
            .zip(flip)
            .map(|((_, _, row), f)| {
                if f == Some(true) {
                    row.iter().map(|v| -v).collect()
                } else {
                    row.to_vec()
                }
            })
            .collect(),
    )
}

const PATTERN_SEARCH_MAX_ROWS: usize = 16;

/// Tries every row-sign pattern `t`, looking for saturating assignments
/// whose transformed vectors equal `t ⊙ |Y(λ)|` for each response.
fn pattern_search(
    support: &[(f64, Vec<f64>, &Vec<i8>)],
    m: &BellMatrix,
    maximizers: &[DeterministicAssignment],
) -> Option<Vec<Vec<i8>>> {
    let n_b = m.n_b();
    if n_b > PATTERN_SEARCH_MAX_ROWS {
        return None;
    }
    let candidates: Vec<(Vec<f64>, &DeterministicAssignment)> = maximizers
        .iter()
        .map(|a| (m.apply(&a.as_f64()), a))
        .collect();
    'patterns: for pattern in 0..1u32 << n_b {
        let t = |i: usize| if (pattern >> i) & 1 == 1 { -1.0 } else { 1.0 };
        let mut rows = Vec::with_capacity(support.len());
        for (_, y, _) in support {
            let hit = candidates.iter().find(|(cy, _)| {
                cy.iter()
                    .zip(y)
                    .enumerate()
                    .all(|(i, (&u, &v))| (u - t(i) * v.abs()).abs() <= TOL * v.abs().max(1.0))
            });
            match hit {
                Some((_, a)) => rows.push(a.values().to_vec()),
                None => continue 'patterns,
            }
        }
        return Some(rows);
    }
    None
}

/// Best classical value of a scenario, with the strategy attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMax {
    pub value: f64,
    /// Set when the edges use different matrices and the value is only a
    /// lower bound found by deterministic search.
    pub heuristic: bool,
    pub witness: Option<ReducedStrategy>,
    pub strategy: NLocalStrategy,
}

const HETEROGENEOUS_COMBINATION_CAP: usize = 4096;

/// Classical maximum of `S^net`.
///
/// With a shared matrix the value is the local bound, attained by one
/// maximizing assignment on every edge. Otherwise deterministic strategies
/// built from per-edge maximizers are searched and the best is reported as
/// a heuristic lower bound.
pub fn classical_max(sc: &StarScenario) -> Result<ClassicalMax> {
    let n = sc.sources();
    if let Some(m) = sc.homogeneous() {
        let lb = local_bound(m)?;
        let best = &lb.maximizers[0];
        // node signs follow sgn(Â_i)^N so every I_i is non-negative
        let raised: Vec<f64> = m
            .apply(&best.as_f64())
            .iter()
            .map(|v| v.powi(n as i32))
            .collect();
        let outputs = best_node_outputs(sc, &[raised]);
        let node_signs: Vec<i8> = (0..sc.n_b())
            .map(|i| {
                let out = outputs[sc.node_settings()[i].y];
                if sc.node_sign(i, out) < 0.0 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let witness = ReducedStrategy {
            shared_weights: vec![1.0],
            shared_edge_table: vec![best.values().to_vec()],
            node_signs,
        };
        let strategy = NLocalStrategy {
            weights: vec![vec![1.0]; n],
            edge_tables: vec![vec![best.values().to_vec()]; n],
            node_table: outputs.into_iter().map(|b| vec![b]).collect(),
        };
        return Ok(ClassicalMax {
            value: lb.bound,
            heuristic: false,
            witness: Some(witness),
            strategy,
        });
    }

    let per_edge: Vec<Vec<(Vec<i8>, Vec<f64>)>> = sc
        .edge_matrices()
        .iter()
        .map(|m| {
            Ok(local_bound(m)?
                .maximizers
                .into_iter()
                .map(|a| (a.values().to_vec(), m.apply(&a.as_f64())))
                .collect())
        })
        .collect::<Result<_>>()?;
    let total: usize = per_edge
        .iter()
        .map(Vec::len)
        .fold(1usize, |acc, l| acc.saturating_mul(l));
    let mut best: Option<(f64, Vec<usize>)> = None;
    for combo in 0..total.min(HETEROGENEOUS_COMBINATION_CAP) {
        let mut rest = combo;
        let mut pick = vec![0; n];
        for k in (0..n).rev() {
            pick[k] = rest % per_edge[k].len();
            rest /= per_edge[k].len();
        }
        let value: f64 = (0..sc.n_b())
            .map(|i| {
                let prod: f64 = (0..n).map(|k| per_edge[k][pick[k]].1[i]).product();
                nth_root_abs(prod, n)
            })
            .sum();
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((value, pick));
        }
    }
    let (value, pick) = best.expect("at least one maximizer per edge");
    let row_products: Vec<f64> = (0..sc.n_b())
        .map(|i| (0..n).map(|k| per_edge[k][pick[k]].1[i]).product())
        .collect();
    let outputs = best_node_outputs(sc, &[row_products]);
    let strategy = NLocalStrategy {
        weights: vec![vec![1.0]; n],
        edge_tables: (0..n).map(|k| vec![per_edge[k][pick[k]].0.clone()]).collect(),
        node_table: outputs.into_iter().map(|b| vec![b]).collect(),
    };
    Ok(ClassicalMax {
        value,
        heuristic: true,
        witness: None,
        strategy,
    })
}

/// For each node input, the outcome whose row signs best agree with the
/// signs of the given row targets (summed over the target vectors).
fn best_node_outputs(sc: &StarScenario, targets: &[Vec<f64>]) -> Vec<usize> {
    (0..sc.node_alphabets().len())
        .map(|y| {
            let score = |out: usize| -> usize {
                (0..sc.n_b())
                    .filter(|&i| sc.node_settings()[i].y == y)
                    .map(|i| {
                        targets
                            .iter()
                            .filter(|t| {
                                !near_zero(t[i]) && t[i].signum() == sc.node_sign(i, out)
                            })
                            .count()
                    })
                    .sum()
            };
            (0..sc.node_alphabets()[y])
                .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
                .unwrap_or(0)
        })
        .collect()
}
