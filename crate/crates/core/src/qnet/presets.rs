use std::fmt;
use std::str::FromStr;

use crate::bell::BellMatrix;
use crate::error::{Error, Result};
use crate::schema::{NamedState, NodeMeasurementSpec, ObservableSpec, QuantumFile, StateSpec};
use crate::star::{NodeSetting, StarScenario};

use super::strategy::QuantumNetworkStrategy;

/// Named entanglement-swapping constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// CHSH on every edge, optimal settings, binary product node settings.
    ChshStar(usize),
    /// Elegant inequality, two sources, one Bell-state measurement.
    ElegantSwapBsm,
    /// Elegant inequality, two sources, node measures `σ_i ⊗ σ_i`.
    ElegantSwap3Settings,
    /// Transposed elegant matrix: Pauli edges, tetrahedron products at the node.
    ElegantSwappedRoles,
}

impl Preset {
    pub const NAMES: [&'static str; 4] = [
        "chsh_star",
        "elegant_swap_bsm",
        "elegant_swap_3settings",
        "elegant_swapped_roles",
    ];

    pub fn build(&self) -> Result<PresetBundle> {
        let (scenario, quantum) = match *self {
            Preset::ChshStar(n) => chsh_star(n)?,
            Preset::ElegantSwapBsm => elegant_swap_bsm()?,
            Preset::ElegantSwap3Settings => elegant_swap_3settings()?,
            Preset::ElegantSwappedRoles => elegant_swapped_roles()?,
        };
        let strategy = quantum.build()?;
        Ok(PresetBundle {
            scenario,
            quantum,
            strategy,
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::ChshStar(n) => write!(f, "chsh_star:{n}"),
            Preset::ElegantSwapBsm => f.write_str("elegant_swap_bsm"),
            Preset::ElegantSwap3Settings => f.write_str("elegant_swap_3settings"),
            Preset::ElegantSwappedRoles => f.write_str("elegant_swapped_roles"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `chsh_star` (two sources), `chsh_star:N` and `chsh_star(N)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "elegant_swap_bsm" => return Ok(Preset::ElegantSwapBsm),
            "elegant_swap_3settings" => return Ok(Preset::ElegantSwap3Settings),
            "elegant_swapped_roles" => return Ok(Preset::ElegantSwappedRoles),
            "chsh_star" => return Ok(Preset::ChshStar(2)),
            _ => {}
        }
        let arg = s
            .strip_prefix("chsh_star:")
            .or_else(|| s.strip_prefix("chsh_star(").and_then(|r| r.strip_suffix(')')));
        match arg.map(str::parse::<usize>) {
            Some(Ok(n)) if n >= 1 => Ok(Preset::ChshStar(n)),
            _ => Err(Error::validation(format!(
                "unknown preset {s:?}; expected one of {}",
                Preset::NAMES.join(", ")
            ))),
        }
    }
}

/// Scenario, its serializable quantum description, and the built strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetBundle {
    pub scenario: StarScenario,
    pub quantum: QuantumFile,
    pub strategy: QuantumNetworkStrategy,
}

fn psi00() -> StateSpec {
    StateSpec::Preset(NamedState::Psi00)
}

fn binary_rows(m: &BellMatrix, sources: usize) -> Result<StarScenario> {
    StarScenario::homogeneous_binary(m, sources)
}

/// Tetrahedron directions `m_x`, column `x` of the elegant matrix over √3.
fn tetrahedron() -> Vec<[f64; 3]> {
    let m = BellMatrix::elegant();
    let s = 1.0 / 3f64.sqrt();
    (0..m.n_a())
        .map(|x| [m.get(0, x) * s, m.get(1, x) * s, m.get(2, x) * s])
        .collect()
}

fn chsh_star(n: usize) -> Result<(StarScenario, QuantumFile)> {
    if n == 0 {
        return Err(Error::validation("chsh_star needs at least one source"));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let node_dirs = [[s, 0.0, s], [-s, 0.0, s]];
    let quantum = QuantumFile {
        sources: n,
        states: vec![psi00(); n],
        edges: vec![vec![ObservableSpec::Pauli(3), ObservableSpec::Pauli(1)]; n],
        node: node_dirs
            .iter()
            .map(|&d| {
                NodeMeasurementSpec::Binary(ObservableSpec::Product(vec![
                    ObservableSpec::Bloch(d);
                    n
                ]))
            })
            .collect(),
    };
    Ok((binary_rows(&BellMatrix::chsh(), n)?, quantum))
}

fn tetrahedron_edges() -> Vec<ObservableSpec> {
    tetrahedron().into_iter().map(ObservableSpec::Bloch).collect()
}

fn elegant_swap_bsm() -> Result<(StarScenario, QuantumFile)> {
    // outcome b = 2·b1 + b2; rows read b1, b1 + b2 + 1, b2
    let f = |g: fn(u8, u8) -> u8| -> Vec<u8> {
        (0..4u8).map(|b| g(b >> 1, b & 1) % 2).collect()
    };
    let settings = vec![
        NodeSetting { y: 0, f: f(|b1, _| b1) },
        NodeSetting { y: 0, f: f(|b1, b2| b1 + b2 + 1) },
        NodeSetting { y: 0, f: f(|_, b2| b2) },
    ];
    let m = BellMatrix::elegant();
    let scenario = StarScenario::new(vec![m.clone(), m], vec![4], settings)?;
    let quantum = QuantumFile {
        sources: 2,
        states: vec![psi00(); 2],
        edges: vec![tetrahedron_edges(); 2],
        node: vec![NodeMeasurementSpec::Bsm2(true)],
    };
    Ok((scenario, quantum))
}

fn elegant_swap_3settings() -> Result<(StarScenario, QuantumFile)> {
    let quantum = QuantumFile {
        sources: 2,
        states: vec![psi00(); 2],
        edges: vec![tetrahedron_edges(); 2],
        node: (1..=3u8)
            .map(|k| {
                NodeMeasurementSpec::Binary(ObservableSpec::Product(vec![
                    ObservableSpec::Pauli(k);
                    2
                ]))
            })
            .collect(),
    };
    Ok((binary_rows(&BellMatrix::elegant(), 2)?, quantum))
}

fn elegant_swapped_roles() -> Result<(StarScenario, QuantumFile)> {
    // ⟨A ⊗ B⟩ on ψ₀₀ pairs A with the transpose of B, so the node uses the
    // conjugated tetrahedron (y-component negated).
    let node = tetrahedron()
        .into_iter()
        .map(|[x, y, z]| {
            NodeMeasurementSpec::Binary(ObservableSpec::Product(vec![
                ObservableSpec::Bloch([x, -y, z]);
                2
            ]))
        })
        .collect();
    let quantum = QuantumFile {
        sources: 2,
        states: vec![psi00(); 2],
        edges: vec![(1..=3u8).map(ObservableSpec::Pauli).collect(); 2],
        node,
    };
    Ok((binary_rows(&BellMatrix::elegant().transpose(), 2)?, quantum))
}
