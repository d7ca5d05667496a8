//! Classical N-local strategies: behavior generation, the classical
//! maximum, reduction of saturating strategies, and the families of
//! saturating correlator values.

mod families;
mod reduce;
pub(crate) mod strategy;

pub use families::{saturating_families, ClassMember, SignClass, SignConstraint};
pub use reduce::{classical_max, reduce, ClassicalMax, ReducedStrategy};
pub use strategy::{behavior_from_strategy, sample_strategies, NLocalStrategy, StrategySampler};
