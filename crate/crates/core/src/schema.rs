//! JSON file formats and their conversion into validated library types.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bell::BellMatrix;
use crate::error::{Error, Result};
use crate::nlocal::NLocalStrategy;
use crate::qmath::{
    bell_basis_2q, bloch_to_observable, pauli, werner, ComplexMatrix, DensityMatrix, Observable,
    ProjectiveMeasurement, C64,
};
use crate::qnet::QuantumNetworkStrategy;
use crate::star::{NodeSetting, StarScenario};

/// `{"rows": r, "cols": c, "entries": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<BellMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::validation(format!(
                "matrix entries do not form a {}x{} array",
                self.rows, self.cols
            )));
        }
        BellMatrix::from_rows(&self.entries)
    }
}

impl From<&BellMatrix> for MatrixFile {
    fn from(m: &BellMatrix) -> Self {
        MatrixFile {
            rows: m.n_b(),
            cols: m.n_a(),
            entries: m.rows(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeFile {
    /// Outcome count per node input; keys must cover `0..n`.
    pub alphabets: BTreeMap<usize, usize>,
    pub settings: Vec<NodeSetting>,
}

/// Star scenario. A single edge matrix is shared by all sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub sources: usize,
    pub edge_matrices: Vec<MatrixFile>,
    pub node: NodeFile,
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<StarScenario> {
        if self.sources == 0 {
            return Err(Error::validation("sources must be at least 1"));
        }
        let matrices = match self.edge_matrices.len() {
            1 => vec![self.edge_matrices[0].to_matrix()?; self.sources],
            n if n == self.sources => self
                .edge_matrices
                .iter()
                .map(MatrixFile::to_matrix)
                .collect::<Result<_>>()?,
            n => {
                return Err(Error::validation(format!(
                    "{n} edge matrices for {} sources",
                    self.sources
                )))
            }
        };
        let alphabets: Vec<usize> = self.node.alphabets.values().copied().collect();
        if self.node.alphabets.keys().copied().ne(0..alphabets.len()) {
            return Err(Error::validation("node alphabet keys must be 0, 1, ..., n-1"));
        }
        StarScenario::new(matrices, alphabets, self.node.settings.clone())
    }
}

impl From<&StarScenario> for ScenarioFile {
    fn from(sc: &StarScenario) -> Self {
        let edge_matrices = match sc.homogeneous() {
            Some(m) => vec![MatrixFile::from(m)],
            None => sc.edge_matrices().iter().map(MatrixFile::from).collect(),
        };
        ScenarioFile {
            sources: sc.sources(),
            edge_matrices,
            node: NodeFile {
                alphabets: sc.node_alphabets().iter().copied().enumerate().collect(),
                settings: sc.node_settings().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportFile {
    pub weights: Vec<f64>,
}

/// Node outcomes nested by source, `λ_1` outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NestedOutcomes {
    Leaf(usize),
    Nested(Vec<NestedOutcomes>),
}

impl NestedOutcomes {
    fn flatten_into(&self, sizes: &[usize], out: &mut Vec<usize>) -> Result<()> {
        match (self, sizes.split_first()) {
            (NestedOutcomes::Leaf(b), None) => {
                out.push(*b);
                Ok(())
            }
            (NestedOutcomes::Nested(items), Some((&len, rest))) if items.len() == len => {
                items.iter().try_for_each(|item| item.flatten_into(rest, out))
            }
            _ => Err(Error::validation(
                "node outcome nesting does not match the source supports",
            )),
        }
    }

    fn from_flat(flat: &[usize], sizes: &[usize]) -> NestedOutcomes {
        match sizes.split_first() {
            None => NestedOutcomes::Leaf(flat[0]),
            Some((&len, rest)) => {
                let stride: usize = rest.iter().product();
                NestedOutcomes::Nested(
                    (0..len)
                        .map(|j| NestedOutcomes::from_flat(&flat[j * stride..], rest))
                        .collect(),
                )
            }
        }
    }
}

/// Classical N-local strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub supports: Vec<SupportFile>,
    pub edges: Vec<Vec<Vec<i8>>>,
    pub node: BTreeMap<usize, NestedOutcomes>,
}

impl StrategyFile {
    /// Structural conversion; ranges are checked against a scenario later.
    pub fn to_strategy(&self) -> Result<NLocalStrategy> {
        let sizes: Vec<usize> = self.supports.iter().map(|s| s.weights.len()).collect();
        if self.node.keys().copied().ne(0..self.node.len()) {
            return Err(Error::validation("node input keys must be 0, 1, ..., n-1"));
        }
        let node_table = self
            .node
            .values()
            .map(|nested| {
                let mut flat = Vec::new();
                nested.flatten_into(&sizes, &mut flat)?;
                Ok(flat)
            })
            .collect::<Result<_>>()?;
        Ok(NLocalStrategy {
            weights: self.supports.iter().map(|s| s.weights.clone()).collect(),
            edge_tables: self.edges.clone(),
            node_table,
        })
    }
}

impl From<&NLocalStrategy> for StrategyFile {
    fn from(st: &NLocalStrategy) -> Self {
        let sizes = st.support_sizes();
        StrategyFile {
            supports: st
                .weights
                .iter()
                .map(|w| SupportFile { weights: w.clone() })
                .collect(),
            edges: st.edge_tables.clone(),
            node: st
                .node_table
                .iter()
                .enumerate()
                .map(|(y, flat)| (y, NestedOutcomes::from_flat(flat, &sizes)))
                .collect(),
        }
    }
}

/// Complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

fn complex_from_rows(rows: &ComplexRows) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::validation("complex matrix rows must be non-empty and equal length"));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    ComplexMatrix::new(r, c, data)
}

pub fn complex_to_rows(m: &ComplexMatrix) -> ComplexRows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Psi00,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WernerSpec {
    pub v: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<StateSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    Preset(NamedState),
    /// White-noise mixture of `base`, which defaults to `|ψ₀₀⟩`.
    Werner(WernerSpec),
    Matrix(ComplexRows),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Preset(NamedState::Psi00) => Ok(DensityMatrix::psi00()),
            StateSpec::Werner(w) => {
                let base = match &w.base {
                    Some(b) => b.build()?,
                    None => DensityMatrix::psi00(),
                };
                werner(w.v, &base)
            }
            StateSpec::Matrix(rows) => DensityMatrix::new(complex_from_rows(rows)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableSpec {
    Bloch([f64; 3]),
    Pauli(u8),
    /// Tensor product of observables.
    Product(Vec<ObservableSpec>),
    Matrix(ComplexRows),
}

impl ObservableSpec {
    pub fn build(&self) -> Result<Observable> {
        match self {
            ObservableSpec::Bloch(v) => bloch_to_observable(*v),
            ObservableSpec::Pauli(k) if (1..=3).contains(k) => Ok(pauli(*k)),
            ObservableSpec::Pauli(k) => {
                Err(Error::validation(format!("Pauli index {k} must be 1, 2 or 3")))
            }
            ObservableSpec::Product(factors) => Observable::product(
                &factors.iter().map(ObservableSpec::build).collect::<Result<Vec<_>>>()?,
            ),
            ObservableSpec::Matrix(rows) => Observable::new(complex_from_rows(rows)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeMeasurementSpec {
    /// Two-qubit Bell-state measurement (the value must be `true`).
    Bsm2(bool),
    /// Joint sign-pattern measurement of one observable per node share.
    Product(Vec<ObservableSpec>),
    /// Two-outcome measurement of a ±1 observable.
    Binary(ObservableSpec),
    Projectors(Vec<ComplexRows>),
}

impl NodeMeasurementSpec {
    pub fn build(&self) -> Result<ProjectiveMeasurement> {
        match self {
            NodeMeasurementSpec::Bsm2(true) => Ok(bell_basis_2q()),
            NodeMeasurementSpec::Bsm2(false) => Err(Error::validation("bsm2 must be true")),
            NodeMeasurementSpec::Product(factors) => ProjectiveMeasurement::sign_patterns(
                &factors.iter().map(ObservableSpec::build).collect::<Result<Vec<_>>>()?,
            ),
            NodeMeasurementSpec::Binary(obs) => ProjectiveMeasurement::binary(&obs.build()?),
            NodeMeasurementSpec::Projectors(ps) => ProjectiveMeasurement::new(
                ps.iter().map(complex_from_rows).collect::<Result<_>>()?,
            ),
        }
    }
}

/// Quantum network strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumFile {
    pub sources: usize,
    pub states: Vec<StateSpec>,
    pub edges: Vec<Vec<ObservableSpec>>,
    pub node: Vec<NodeMeasurementSpec>,
}

impl QuantumFile {
    pub fn build(&self) -> Result<QuantumNetworkStrategy> {
        if self.states.len() != self.sources || self.edges.len() != self.sources {
            return Err(Error::validation(format!(
                "{} states and {} edge lists for {} sources",
                self.states.len(),
                self.edges.len(),
                self.sources
            )));
        }
        let states = self.states.iter().map(StateSpec::build).collect::<Result<_>>()?;
        let edges = self
            .edges
            .iter()
            .map(|obs| obs.iter().map(ObservableSpec::build).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let node = self.node.iter().map(NodeMeasurementSpec::build).collect::<Result<_>>()?;
        QuantumNetworkStrategy::new(states, edges, node)
    }

    /// `sources` copies of a bipartite strategy, the node measuring Bob's
    /// observables on every share.
    pub fn tensorized(bell: &BellStrategyFile, sources: usize) -> QuantumFile {
        QuantumFile {
            sources,
            states: vec![bell.state.clone(); sources],
            edges: vec![bell.alice.clone(); sources],
            node: bell
                .bob
                .iter()
                .map(|b| NodeMeasurementSpec::Product(vec![b.clone(); sources]))
                .collect(),
        }
    }
}

/// Bipartite Bell strategy: a state on (Alice ⊗ Bob) and both parties'
/// observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellStrategyFile {
    pub state: StateSpec,
    pub alice: Vec<ObservableSpec>,
    pub bob: Vec<ObservableSpec>,
}

impl BellStrategyFile {
    pub fn build(&self) -> Result<(DensityMatrix, Vec<Observable>, Vec<Observable>)> {
        let state = self.state.build()?;
        let alice = self.alice.iter().map(ObservableSpec::build).collect::<Result<_>>()?;
        let bob = self.bob.iter().map(ObservableSpec::build).collect::<Result<_>>()?;
        Ok((state, alice, bob))
    }
}
