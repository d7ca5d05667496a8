use serde::{Deserialize, Serialize};

use crate::bell::{local_bound, BellMatrix, DeterministicAssignment};
use crate::error::{Error, Result};
use crate::star::StarScenario;
use crate::tol::TOL;

use super::strategy::NLocalStrategy;

/// Sign constraint a class places on one row of the transformed vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConstraint {
    Plus,
    Minus,
    /// Every member vanishes on this row.
    Free,
}

/// A bound-saturating deterministic assignment and its transformed vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMember {
    pub assignment: DeterministicAssignment,
    pub transformed: Vec<f64>,
}

/// Maximal set of saturating assignments whose transformed vectors agree in
/// sign on every row where they are nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignClass {
    pub sources: usize,
    pub members: Vec<ClassMember>,
    pub sign_pattern: Vec<SignConstraint>,
}

fn sign_of(v: f64) -> SignConstraint {
    if v > TOL {
        SignConstraint::Plus
    } else if v < -TOL {
        SignConstraint::Minus
    } else {
        SignConstraint::Free
    }
}

fn compatible(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(&u, &v)| {
        let (su, sv) = (sign_of(u), sign_of(v));
        su == SignConstraint::Free || sv == SignConstraint::Free || su == sv
    })
}

/// Enumerates the bound-saturating assignments of `m` and groups them into
/// maximal sign-consistent classes, ordered by sign pattern.
pub fn saturating_families(m: &BellMatrix, sources: usize) -> Result<Vec<SignClass>> {
    if sources == 0 {
        return Err(Error::validation("a star network needs at least one source"));
    }
    let members: Vec<ClassMember> = local_bound(m)?
        .maximizers
        .into_iter()
        .map(|a| ClassMember {
            transformed: m.apply(&a.as_f64()),
            assignment: a,
        })
        .collect();

    // Pairwise compatibility implies a common pattern, so maximal classes
    // are the maximal cliques of the compatibility graph.
    let n = members.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|s| r != s && compatible(&members[r].transformed, &members[s].transformed))
                .collect()
        })
        .collect();
    let mut cliques = Vec::new();
    bron_kerbosch(&adj, Vec::new(), (0..n).collect(), Vec::new(), &mut cliques);

    let mut classes: Vec<SignClass> = cliques
        .into_iter()
        .map(|mut idx| {
            idx.sort_unstable();
            let sign_pattern = (0..m.n_b())
                .map(|i| {
                    idx.iter()
                        .map(|&r| sign_of(members[r].transformed[i]))
                        .find(|&s| s != SignConstraint::Free)
                        .unwrap_or(SignConstraint::Free)
                })
                .collect();
            SignClass {
                sources,
                members: idx.iter().map(|&r| members[r].clone()).collect(),
                sign_pattern,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        a.sign_pattern.cmp(&b.sign_pattern).then_with(|| {
            let ka: Vec<u64> = a.members.iter().map(|c| c.assignment.index()).collect();
            let kb: Vec<u64> = b.members.iter().map(|c| c.assignment.index()).collect();
            ka.cmp(&kb)
        })
    });
    Ok(classes)
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("non-empty candidate set");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&u| u != v);
        x.push(v);
    }
}

fn check_mixture(p: &[f64], len: usize) -> Result<()> {
    if p.len() != len {
        return Err(Error::validation(format!(
            "mixture has {} weights for {len} class members",
            p.len()
        )));
    }
    if p.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::validation("mixture weights must be non-negative"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!("mixture weights sum to {total}")));
    }
    Ok(())
}

fn check_signs(b: &[i8], len: usize) -> Result<()> {
    if b.len() != len || b.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::validation(format!("node signs must be {len} values of ±1")));
    }
    Ok(())
}

impl SignClass {
    pub fn n_b(&self) -> usize {
        self.sign_pattern.len()
    }

    /// Averaged transformed vector `Σ_r p_r Y_r`.
    pub fn mixed_transformed(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_mixture(p, self.members.len())?;
        let mut avg = vec![0.0; self.n_b()];
        for (w, mem) in p.iter().zip(&self.members) {
            for (a, y) in avg.iter_mut().zip(&mem.transformed) {
                *a += w * y;
            }
        }
        Ok(avg)
    }

    /// Saturating point `I_i = b_i (Σ_r p_r Y_{r,i})^N`.
    pub fn point(&self, p: &[f64], b: &[i8]) -> Result<Vec<f64>> {
        check_signs(b, self.n_b())?;
        let avg = self.mixed_transformed(p)?;
        Ok(avg
            .iter()
            .zip(b)
            .map(|(&v, &s)| f64::from(s) * v.powi(self.sources as i32))
            .collect())
    }

    /// Explicit strategy reaching [`SignClass::point`]: every source picks
    /// member `r` with probability `p_r`, each edge answers with that
    /// member's assignment, and the node answers a fixed outcome per input
    /// whose sign lookup gives `b_i`.
    pub fn realize(&self, sc: &StarScenario, p: &[f64], b: &[i8]) -> Result<NLocalStrategy> {
        check_signs(b, self.n_b())?;
        let avg = self.mixed_transformed(p)?;
        if sc.sources() != self.sources || sc.n_b() != self.n_b() {
            return Err(Error::validation(
                "scenario does not match the class source count or row count",
            ));
        }
        let n_a = self.members[0].assignment.len();
        if sc.edge_matrices().iter().any(|m| m.n_a() != n_a) {
            return Err(Error::validation("scenario edge settings do not match the class"));
        }
        let needed: Vec<Option<f64>> = avg
            .iter()
            .zip(b)
            .map(|(&v, &s)| (v.abs() > TOL).then_some(f64::from(s)))
            .collect();
        let node_outputs = constant_node_outputs(sc, &needed)?;
        let table: Vec<Vec<i8>> = self
            .members
            .iter()
            .map(|m| m.assignment.values().to_vec())
            .collect();
        let tuples = self.members.len().pow(self.sources as u32);
        Ok(NLocalStrategy {
            weights: vec![p.to_vec(); self.sources],
            edge_tables: vec![table; self.sources],
            node_table: node_outputs.into_iter().map(|b| vec![b; tuples]).collect(),
        })
    }
}

/// One node outcome per input `y` whose sign lookup matches every required
/// row sign (rows with `None` are unconstrained).
pub(crate) fn constant_node_outputs(
    sc: &StarScenario,
    needed: &[Option<f64>],
) -> Result<Vec<usize>> {
    (0..sc.node_alphabets().len())
        .map(|y| {
            let rows: Vec<usize> = (0..sc.n_b())
                .filter(|&i| sc.node_settings()[i].y == y)
                .collect();
            (0..sc.node_alphabets()[y])
                .find(|&out| {
                    rows.iter().all(|&i| needed[i].map_or(true, |s| sc.node_sign(i, out) == s))
                })
                .ok_or_else(|| {
                    Error::validation(format!(
                        "no single outcome of node input {y} realizes the requested signs"
                    ))
                })
        })
        .collect()
}
