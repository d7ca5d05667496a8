use crate::bell::{bell_terms, BellMatrix};
use crate::error::{Error, Result};
use crate::qmath::{DensityMatrix, Observable, ProjectiveMeasurement};
use crate::star::{NodeSetting, StarScenario};

use super::strategy::QuantumNetworkStrategy;

/// Scenario together with a quantum strategy for it.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSetup {
    pub scenario: StarScenario,
    pub strategy: QuantumNetworkStrategy,
}

/// Parity lookup over `2^n` sign-pattern outcomes.
pub(crate) fn parity_table(n: usize) -> Vec<u8> {
    (0..1u32 << n).map(|b| (b.count_ones() % 2) as u8).collect()
}

/// Lifts a bipartite Bell strategy to a star network of `sources` copies.
///
/// Every source carries `state`, every edge measures Alice's observables,
/// and node input `y` measures `B_y^{⊗N}` resolved into sign patterns whose
/// parity is the node bit. Correlators factorize, so `I_i` is the N-th power
/// of the bipartite row term and `S^net` equals the aligned Bell value.
pub fn tensorize(
    m: &BellMatrix,
    state: &DensityMatrix,
    alice: &[Observable],
    bob: &[Observable],
    sources: usize,
) -> Result<NetworkSetup> {
    if sources == 0 {
        return Err(Error::validation("a star network needs at least one source"));
    }
    bell_terms(m, state, alice, bob)?;
    let node_measurements = bob
        .iter()
        .map(|b| ProjectiveMeasurement::sign_patterns(&vec![b.clone(); sources]))
        .collect::<Result<Vec<_>>>()?;
    let strategy = QuantumNetworkStrategy::new(
        vec![state.clone(); sources],
        vec![alice.to_vec(); sources],
        node_measurements,
    )?;
    let parity = parity_table(sources);
    let scenario = StarScenario::new(
        vec![m.clone(); sources],
        vec![1 << sources; m.n_b()],
        (0..m.n_b())
            .map(|y| NodeSetting { y, f: parity.clone() })
            .collect(),
    )?;
    Ok(NetworkSetup { scenario, strategy })
}
