//! Quantum strategies on star networks: Born-rule behaviors, lifting a
//! bipartite Bell test to a star network, named presets and critical
//! visibilities.

mod presets;
mod strategy;
mod tensorize;
mod visibility;

pub use presets::{Preset, PresetBundle};
pub use strategy::{behavior_from_quantum, QuantumNetworkStrategy};
pub use tensorize::{tensorize, NetworkSetup};
pub use visibility::{critical_visibility, s_net_at_visibility, Visibility};
