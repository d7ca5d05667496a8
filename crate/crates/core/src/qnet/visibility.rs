use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::werner;
use crate::star::{evaluate, star_bound, StarScenario};

use super::strategy::{behavior_from_quantum, QuantumNetworkStrategy};

const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    /// Smallest common visibility at which the bound is reached.
    Critical(f64),
    NoViolation,
}

/// `S^net` with every source mixed with white noise at visibility `v`.
pub fn s_net_at_visibility(
    sc: &StarScenario,
    qs: &QuantumNetworkStrategy,
    v: f64,
) -> Result<f64> {
    let states = qs
        .states()
        .iter()
        .map(|rho| werner(v, rho))
        .collect::<Result<Vec<_>>>()?;
    let noisy = qs.with_states(states)?;
    let beh = behavior_from_quantum(&noisy, &sc.shape())?;
    Ok(evaluate(&beh, sc)?.s_net)
}

/// Bisects for the visibility where `S^net` crosses the star bound.
pub fn critical_visibility(sc: &StarScenario, qs: &QuantumNetworkStrategy) -> Result<Visibility> {
    if let Some(k) = qs.states().iter().position(|s| s.dim() != 4) {
        return Err(Error::validation(format!(
            "source {k} is not a two-qubit state"
        )));
    }
    let bound = star_bound(sc)?;
    if s_net_at_visibility(sc, qs, 1.0)? <= bound {
        return Ok(Visibility::NoViolation);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if s_net_at_visibility(sc, qs, mid)? > bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Visibility::Critical(hi))
}
