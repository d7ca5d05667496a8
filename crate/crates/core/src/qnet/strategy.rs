use crate::error::{Error, Result};
use crate::qmath::{tensor_all, ComplexMatrix, DensityMatrix, Observable, ProjectiveMeasurement};
use crate::star::{NetworkBehavior, NetworkShape};
use crate::tol::TOL;

/// Quantum strategy on a star network.
///
/// Source `k` prepares `states[k]` on (edge `k` ⊗ node share `k`). Edge `k`
/// measures one of `edge_observables[k]`; the node measures one of
/// `node_measurements` jointly on its shares, ordered by source.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumNetworkStrategy {
    states: Vec<DensityMatrix>,
    edge_observables: Vec<Vec<Observable>>,
    node_measurements: Vec<ProjectiveMeasurement>,
    node_dims: Vec<usize>,
}

impl QuantumNetworkStrategy {
    pub fn new(
        states: Vec<DensityMatrix>,
        edge_observables: Vec<Vec<Observable>>,
        node_measurements: Vec<ProjectiveMeasurement>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::validation("a star network needs at least one source"));
        }
        if edge_observables.len() != states.len() {
            return Err(Error::validation(format!(
                "{} sources but {} edge observable lists",
                states.len(),
                edge_observables.len()
            )));
        }
        if node_measurements.is_empty() {
            return Err(Error::validation("the node needs at least one measurement"));
        }
        let mut node_dims = Vec::with_capacity(states.len());
        for (k, (state, obs)) in states.iter().zip(&edge_observables).enumerate() {
            let first = obs
                .first()
                .ok_or_else(|| Error::validation(format!("edge {k} has no observables")))?;
            let d_edge = first.dim();
            if obs.iter().any(|o| o.dim() != d_edge) {
                return Err(Error::validation(format!("edge {k} observables differ in dimension")));
            }
            if state.dim() % d_edge != 0 {
                return Err(Error::validation(format!(
                    "source {k} dimension {} does not factor with edge dimension {d_edge}",
                    state.dim()
                )));
            }
            for o in obs {
                o.sign_projectors()?;
            }
            node_dims.push(state.dim() / d_edge);
        }
        let d_node: usize = node_dims.iter().product();
        if let Some(y) = node_measurements.iter().position(|q| q.dim() != d_node) {
            return Err(Error::validation(format!(
                "node measurement {y} has dimension {}, node shares total {d_node}",
                node_measurements[y].dim()
            )));
        }
        Ok(QuantumNetworkStrategy {
            states,
            edge_observables,
            node_measurements,
            node_dims,
        })
    }

    pub fn sources(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn edge_observables(&self) -> &[Vec<Observable>] {
        &self.edge_observables
    }

    pub fn node_measurements(&self) -> &[ProjectiveMeasurement] {
        &self.node_measurements
    }

    /// Dimension of the node's share of each source.
    pub fn node_dims(&self) -> &[usize] {
        &self.node_dims
    }

    pub fn edge_dims(&self) -> Vec<usize> {
        self.edge_observables.iter().map(|o| o[0].dim()).collect()
    }

    pub fn shape(&self) -> NetworkShape {
        NetworkShape {
            edge_settings: self.edge_observables.iter().map(Vec::len).collect(),
            node_alphabets: self
                .node_measurements
                .iter()
                .map(ProjectiveMeasurement::outcome_count)
                .collect(),
        }
    }

    /// Same measurements with the sources replaced.
    pub fn with_states(&self, states: Vec<DensityMatrix>) -> Result<Self> {
        Self::new(states, self.edge_observables.clone(), self.node_measurements.clone())
    }
}

/// `Tr_edge[(Π ⊗ I) ρ]` for a state on (edge ⊗ node).
fn conditional_node_state(rho: &ComplexMatrix, proj: &ComplexMatrix, d_node: usize) -> ComplexMatrix {
    let d_edge = proj.rows();
    ComplexMatrix::from_fn(d_node, d_node, |n1, n2| {
        let mut acc = crate::qmath::ZERO;
        for e in 0..d_edge {
            for e2 in 0..d_edge {
                acc += proj[(e, e2)] * rho[(e2 * d_node + n1, e * d_node + n2)];
            }
        }
        acc
    })
}

/// Born-rule behavior `P(a⃗ b | x⃗ y) = Tr[(⊗_k ρ_k)(⊗_k Π^k_{a_k|x_k} ⊗ Q_{b|y})]`.
///
/// Each edge projector is traced out of its own source first, leaving the
/// unnormalized node states `σ_k(a|x)`; then `P = Tr[(⊗_k σ_k) Q_{b|y}]`.
/// This equals the global computation in the interleaved layout
/// (edge₁, node₁, edge₂, node₂, …) with node operators permuted into place.
pub fn behavior_from_quantum(
    qs: &QuantumNetworkStrategy,
    shape: &NetworkShape,
) -> Result<NetworkBehavior> {
    if *shape != qs.shape() {
        return Err(Error::validation(format!(
            "strategy shape {:?} does not match scenario shape {shape:?}",
            qs.shape()
        )));
    }
    let n = qs.sources();
    // conditional[k][x][a]
    let conditional: Vec<Vec<[ComplexMatrix; 2]>> = (0..n)
        .map(|k| {
            qs.edge_observables[k]
                .iter()
                .map(|o| {
                    let [plus, minus] = o.sign_projectors()?;
                    let rho = qs.states[k].matrix();
                    Ok([
                        conditional_node_state(rho, &plus, qs.node_dims[k]),
                        conditional_node_state(rho, &minus, qs.node_dims[k]),
                    ])
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut beh = NetworkBehavior::zeros(shape);
    for xi in 0..shape.edge_input_count() {
        let x = shape.x_tuple(xi);
        for abits in 0..1usize << n {
            let joint = tensor_all(
                (0..n).map(|k| &conditional[k][x[k]][(abits >> (n - 1 - k)) & 1]),
            );
            for (y, q) in qs.node_measurements.iter().enumerate() {
                for (b, proj) in q.projectors().iter().enumerate() {
                    let p = joint.trace_product(proj);
                    if p.im.abs() > TOL {
                        return Err(Error::numeric(format!(
                            "probability has imaginary part {}",
                            p.im
                        )));
                    }
                    beh.add(y, xi, abits, b, p.re);
                }
            }
        }
    }
    beh.validate().map_err(|e| Error::numeric(e.to_string()))?;
    Ok(beh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{
        bell_basis_2q, bloch_to_observable, pauli, permute_subsystems, werner, C64,
    };

    #[test]
    fn perfect_correlation_single_source() {
        let z = pauli(3);
        let qs = QuantumNetworkStrategy::new(
            vec![DensityMatrix::psi00()],
            vec![vec![z.clone()]],
            vec![ProjectiveMeasurement::binary(&z).unwrap()],
        )
        .unwrap();
        let beh = behavior_from_quantum(&qs, &qs.shape()).unwrap();
        assert!((beh.prob(&[0], 0, &[0], 0) - 0.5).abs() < 1e-15);
        assert!((beh.prob(&[0], 0, &[1], 1) - 0.5).abs() < 1e-15);
        assert!(beh.prob(&[0], 0, &[0], 1).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatches_rejected() {
        let z = pauli(3);
        let bsm = bell_basis_2q();
        assert!(QuantumNetworkStrategy::new(
            vec![DensityMatrix::psi00()],
            vec![vec![z.clone()]],
            vec![bsm.clone()],
        )
        .is_err());
        assert!(QuantumNetworkStrategy::new(
            vec![DensityMatrix::psi00(), DensityMatrix::psi00()],
            vec![vec![z.clone()]],
            vec![bsm.clone()],
        )
        .is_err());
        let half = bloch_to_observable([0.5, 0.0, 0.0]).unwrap();
        assert!(QuantumNetworkStrategy::new(
            vec![DensityMatrix::psi00(), DensityMatrix::psi00()],
            vec![vec![half], vec![z.clone()]],
            vec![bsm.clone()],
        )
        .is_err());
        let qs = QuantumNetworkStrategy::new(
            vec![DensityMatrix::psi00(), DensityMatrix::psi00()],
            vec![vec![z.clone()], vec![z]],
            vec![bsm],
        )
        .unwrap();
        let mut shape = qs.shape();
        shape.edge_settings[0] = 2;
        assert!(behavior_from_quantum(&qs, &shape).is_err());
    }

    // Global oracle: interleaved state, embedded operators, one big trace.
    fn global_prob(qs: &QuantumNetworkStrategy, x: &[usize], y: usize, a: &[u8], b: usize) -> f64 {
        let rho = qs.states().iter().skip(1).fold(qs.states()[0].matrix().clone(), |acc, s| {
            acc.kron(s.matrix())
        });
        let n = qs.sources();
        let mut ops: Vec<ComplexMatrix> = (0..n)
            .map(|k| qs.edge_observables()[k][x[k]].sign_projectors().unwrap()[a[k] as usize].clone())
            .collect();
        ops.push(qs.node_measurements()[y].projectors()[b].clone());
        // layout (edge_1..edge_N, node block) → (edge_1, node_1, ..., edge_N, node_N)
        let edge_dims = qs.edge_dims();
        let mut dims: Vec<usize> = edge_dims.clone();
        dims.extend(qs.node_dims());
        let stacked = tensor_all(ops.iter());
        let perm: Vec<usize> = (0..n).flat_map(|k| [k, n + k]).collect();
        let op = permute_subsystems(&stacked, &dims, &perm).unwrap();
        (&rho * &op).trace().re
    }

    #[test]
    fn matches_global_oracle() {
        let s = 1.0 / 3f64.sqrt();
        let ket = [C64::new(0.6, 0.0), C64::new(0.0, 0.48), C64::new(0.0, 0.0), C64::new(0.64, 0.0)];
        let psi = DensityMatrix::pure(&ket).unwrap();
        let qs = QuantumNetworkStrategy::new(
            vec![werner(0.8, &psi).unwrap(), DensityMatrix::psi00()],
            vec![
                vec![bloch_to_observable([s, s, s]).unwrap(), pauli(2)],
                vec![bloch_to_observable([0.0, 0.6, 0.8]).unwrap(), pauli(1), pauli(3)],
            ],
            vec![bell_basis_2q(), ProjectiveMeasurement::sign_patterns(&[pauli(1), pauli(2)]).unwrap()],
        )
        .unwrap();
        let shape = qs.shape();
        let beh = behavior_from_quantum(&qs, &shape).unwrap();
        for xi in 0..shape.edge_input_count() {
            let x = shape.x_tuple(xi);
            for y in 0..2 {
                for a in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
                    for b in 0..4 {
                        let want = global_prob(&qs, &x, y, &a, b);
                        assert!((beh.prob(&x, y, &a, b) - want.max(0.0)).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
