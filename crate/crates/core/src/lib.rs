//! Star-network correlations built from full-correlation Bell inequalities.
//!
//! A real matrix `M` (rows = node settings, columns = edge settings) defines a
//! bipartite Bell functional with classical bound `C`. Distributing `N`
//! independent sources in a star configuration turns it into the nonlinear
//! inequality `Σ_i |I_i|^{1/N} ≤ C` on N-local correlations. This crate builds
//! those inequalities, evaluates classical (N-local) and quantum strategies
//! against them, and enumerates the classical strategies that saturate them.
//!
//! Module map:
//!
//! - [`qmath`]: dense complex matrices, states, observables, measurements.
//! - [`bell`]: Bell matrices, local bounds by enumeration, bipartite values.
//! - [`star`]: star scenarios, network behaviors, `I_i` and `S^net`.
//! - [`nlocal`]: N-local strategies, classical maximization, reduction and
//!   saturating families.
//! - [`qnet`]: quantum network strategies, tensorization, presets and
//!   critical visibility.
//! - [`schema`]: JSON file formats shared with the command-line tool.

pub mod bell;
pub mod error;
pub mod nlocal;
pub mod qmath;
pub mod qnet;
pub mod schema;
pub mod star;
pub mod tol;

pub use error::{Error, Result};
