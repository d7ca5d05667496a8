//! Full-correlation bipartite Bell inequalities `Σ_{x,y} M_yx ⟨A_x B_y⟩ ≤ C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{expectation, tensor, DensityMatrix, Observable};
use crate::tol::TOL;

/// Largest number of Alice settings accepted by exhaustive enumeration.
pub const MAX_ENUM_SETTINGS: usize = 30;

/// Assignments per enumeration chunk. Each chunk is recomputed from scratch
/// at its start, then walked in Gray-code order.
const CHUNK_BITS: usize = 14;

/// Real `n_B × n_A` coefficient matrix; row `y` is Bob's setting, column `x`
/// Alice's.
#[derive(Debug, Clone, PartialEq)]
pub struct BellMatrix {
    n_b: usize,
    n_a: usize,
    entries: Vec<f64>,
}

impl BellMatrix {
    pub fn new(n_b: usize, n_a: usize, entries: Vec<f64>) -> Result<Self> {
        if n_b == 0 || n_a == 0 {
            return Err(Error::validation("Bell matrix dimensions must be positive"));
        }
        if entries.len() != n_b * n_a {
            return Err(Error::validation(format!(
                "expected {} entries for a {n_b}x{n_a} Bell matrix, got {}",
                n_b * n_a,
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("Bell matrix entries must be finite"));
        }
        if entries.iter().all(|&x| x == 0.0) {
            return Err(Error::validation("Bell matrix must have a nonzero entry"));
        }
        Ok(BellMatrix { n_b, n_a, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_b = rows.len();
        let n_a = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_a) {
            return Err(Error::validation("Bell matrix rows have unequal lengths"));
        }
        Self::new(n_b, n_a, rows.concat())
    }

    /// `M_xy = ½(−1)^{xy}`, local bound 1.
    pub fn chsh() -> Self {
        BellMatrix {
            n_b: 2,
            n_a: 2,
            entries: vec![0.5, 0.5, 0.5, -0.5],
        }
    }

    /// The 3×4 "elegant" matrix, local bound 6, quantum value 4√3.
    pub fn elegant() -> Self {
        BellMatrix {
            n_b: 3,
            n_a: 4,
            #[rustfmt::skip]
            entries: vec![
                1.0,  1.0, -1.0, -1.0,
                1.0, -1.0,  1.0, -1.0,
                1.0, -1.0, -1.0,  1.0,
            ],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        BellMatrix {
            n_b: n,
            n_a: n,
            entries,
        }
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.entries[y * self.n_a + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.entries[y * self.n_a..(y + 1) * self.n_a]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_b).map(|y| self.row(y).to_vec()).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Swaps the roles of the two parties.
    pub fn transpose(&self) -> BellMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for x in 0..self.n_a {
            for y in 0..self.n_b {
                entries.push(self.get(y, x));
            }
        }
        BellMatrix {
            n_b: self.n_a,
            n_a: self.n_b,
            entries,
        }
    }

    pub fn scaled(&self, c: f64) -> Result<BellMatrix> {
        BellMatrix::new(self.n_b, self.n_a, self.entries.iter().map(|x| x * c).collect())
    }

    /// `M · v` for a real vector indexed by Alice's settings.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n_b)
            .map(|y| self.row(y).iter().zip(v).map(|(m, a)| m * a).sum())
            .collect()
    }
}

/// A deterministic ±1 response for each of Alice's settings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct DeterministicAssignment(Vec<i8>);

impl DeterministicAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::validation("assignment entries must be +1 or -1"));
        }
        Ok(DeterministicAssignment(values))
    }

    /// Bit `b` of `index` selects the sign `1 − 2b` for setting `b`.
    pub fn from_index(index: u64, n_a: usize) -> Self {
        DeterministicAssignment((0..n_a).map(|b| 1 - 2 * ((index >> b) & 1) as i8).collect())
    }

    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .fold(0, |acc, (b, _)| acc | (1 << b))
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        DeterministicAssignment(self.0.iter().map(|v| -v).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| f64::from(v)).collect()
    }
}

impl TryFrom<Vec<i8>> for DeterministicAssignment {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DeterministicAssignment> for Vec<i8> {
    fn from(a: DeterministicAssignment) -> Vec<i8> {
        a.0
    }
}

/// `Â_y = Σ_x M_yx a_x`.
pub fn transformed(m: &BellMatrix, a: &DeterministicAssignment) -> Result<Vec<f64>> {
    if a.len() != m.n_a {
        return Err(Error::validation(format!(
            "assignment has {} entries, matrix has {} columns",
            a.len(),
            m.n_a
        )));
    }
    Ok(m.apply(&a.as_f64()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalBound {
    pub bound: f64,
    /// Every assignment within the tie tolerance of `bound`, by index.
    pub maximizers: Vec<DeterministicAssignment>,
}

/// Classical bound `C = max_a Σ_y |Σ_x M_yx a_x|` by exhaustive enumeration.
pub fn local_bound(m: &BellMatrix) -> Result<LocalBound> {
    local_bound_with_tol(m, TOL)
}

/// As [`local_bound`] with a custom relative tie tolerance.
pub fn local_bound_with_tol(m: &BellMatrix, tol: f64) -> Result<LocalBound> {
    check_capacity(m)?;
    let total = 1u64 << m.n_a;
    let chunk = 1u64 << CHUNK_BITS.min(m.n_a);
    let chunks = total / chunk;

    let approx_max = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut best = f64::NEG_INFINITY;
            gray_walk(m, c * chunk, chunk, |_, v| best = best.max(v));
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);

    // Gray-code sums drift slightly; collect a generous candidate set and
    // settle ties on freshly recomputed values.
    let loose = approx_max - 1e-6 * approx_max.abs().max(1.0);
    let mut candidates: Vec<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hits = Vec::new();
            gray_walk(m, c * chunk, chunk, |idx, v| {
                if v >= loose {
                    hits.push(idx);
                }
            });
            hits
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    candidates.sort_unstable();

    let exact: Vec<(u64, f64)> = candidates
        .into_iter()
        .map(|idx| (idx, objective_naive(m, idx)))
        .collect();
    let bound = exact.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let cut = bound - tol * bound.abs();
    let maximizers = exact
        .into_iter()
        .filter(|&(_, v)| v >= cut)
        .map(|(idx, _)| DeterministicAssignment::from_index(idx, m.n_a))
        .collect();
    Ok(LocalBound { bound, maximizers })
}

pub(crate) fn check_capacity(m: &BellMatrix) -> Result<()> {
    if m.n_a > MAX_ENUM_SETTINGS {
        return Err(Error::Capacity(format!(
            "{} settings exceed the enumeration limit of {MAX_ENUM_SETTINGS}",
            m.n_a
        )));
    }
    Ok(())
}

fn objective_naive(m: &BellMatrix, idx: u64) -> f64 {
    let a = DeterministicAssignment::from_index(idx, m.n_a);
    m.apply(&a.as_f64()).iter().map(|v| v.abs()).sum()
}

/// Visits `len` consecutive Gray-code positions starting at `start`, calling
/// `f(assignment_index, objective)` for each.
fn gray_walk(m: &BellMatrix, start: u64, len: u64, mut f: impl FnMut(u64, f64)) {
    let gray = |i: u64| i ^ (i >> 1);
    let mut idx = gray(start);
    let signs = DeterministicAssignment::from_index(idx, m.n_a).as_f64();
    let mut y = m.apply(&signs);
    f(idx, y.iter().map(|v| v.abs()).sum());
    for i in start + 1..start + len {
        let bit = i.trailing_zeros() as usize;
        idx ^= 1 << bit;
        // bit now set → sign went +1 → −1
        let delta = if (idx >> bit) & 1 == 1 { -2.0 } else { 2.0 };
        for (yy, row) in y.iter_mut().enumerate() {
            *row += delta * m.get(yy, bit);
        }
        f(idx, y.iter().map(|v| v.abs()).sum());
    }
}

fn check_strategy(
    m: &BellMatrix,
    state: &DensityMatrix,
    alice: &[Observable],
    bob: &[Observable],
) -> Result<()> {
    if alice.len() != m.n_a || bob.len() != m.n_b {
        return Err(Error::validation(format!(
            "need {} Alice and {} Bob observables, got {} and {}",
            m.n_a,
            m.n_b,
            alice.len(),
            bob.len()
        )));
    }
    let da = alice[0].dim();
    let db = bob[0].dim();
    if alice.iter().any(|o| o.dim() != da) || bob.iter().any(|o| o.dim() != db) {
        return Err(Error::validation("observables of one party must share a dimension"));
    }
    if da * db != state.dim() {
        return Err(Error::validation(format!(
            "state dimension {} is not {da}·{db}",
            state.dim()
        )));
    }
    Ok(())
}

/// Per-row terms `Σ_x M_yx ⟨A_x ⊗ B_y⟩_ρ`, one for each of Bob's settings.
pub fn bell_terms(
    m: &BellMatrix,
    state: &DensityMatrix,
    alice: &[Observable],
    bob: &[Observable],
) -> Result<Vec<f64>> {
    check_strategy(m, state, alice, bob)?;
    (0..m.n_b)
        .map(|y| {
            let mut acc = 0.0;
            for (x, a) in alice.iter().enumerate() {
                let coef = m.get(y, x);
                if coef != 0.0 {
                    acc += coef * expectation(state, &tensor(a.matrix(), bob[y].matrix()))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `S = Σ_{x,y} M_yx Tr[ρ (A_x ⊗ B_y)]`.
pub fn bell_value(
    m: &BellMatrix,
    state: &DensityMatrix,
    alice: &[Observable],
    bob: &[Observable],
) -> Result<f64> {
    Ok(bell_terms(m, state, alice, bob)?.iter().sum())
}

/// Bell value after flipping each of Bob's observables to make its row term
/// non-negative: `Σ_y |Σ_x M_yx ⟨A_x ⊗ B_y⟩|`.
pub fn aligned_bell_value(
    m: &BellMatrix,
    state: &DensityMatrix,
    alice: &[Observable],
    bob: &[Observable],
) -> Result<f64> {
    Ok(bell_terms(m, state, alice, bob)?.iter().map(|t| t.abs()).sum())
}
