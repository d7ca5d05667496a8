use std::f64::consts::FRAC_1_SQRT_2;

use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tol::TOL;

/// A valid density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::validation("density matrix must be square"));
        }
        if !matrix.is_hermitian(TOL) {
            return Err(Error::validation("density matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(Error::validation(format!("density matrix trace is {tr}, expected 1")));
        }
        let min_ev = hermitian_eigenvalues(&matrix)[0];
        if min_ev < -TOL {
            return Err(Error::validation(format!(
                "density matrix has negative eigenvalue {min_ev}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Normalizes `ket` and returns `|ψ⟩⟨ψ|`.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < TOL {
            return Err(Error::validation("state vector has zero norm"));
        }
        let psi: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi))
    }

    /// `|ψ₀₀⟩⟨ψ₀₀|` with `|ψ₀₀⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn psi00() -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&psi00_ket(), &psi00_ket()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}

/// Binary-outcome observable: Hermitian with spectrum in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_hermitian(TOL) {
            return Err(Error::validation("observable is not Hermitian"));
        }
        let ev = hermitian_eigenvalues(&matrix);
        if ev[0] < -1.0 - TOL || ev[ev.len() - 1] > 1.0 + TOL {
            return Err(Error::validation(format!(
                "observable eigenvalues {ev:?} leave [-1, 1]"
            )));
        }
        Ok(Observable { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn neg(&self) -> Observable {
        Observable {
            matrix: self.matrix.scale_real(-1.0),
        }
    }

    /// Transpose, equal to the complex conjugate for Hermitian operators.
    pub fn transpose(&self) -> Observable {
        Observable {
            matrix: self.matrix.transpose(),
        }
    }

    /// Kronecker product of observables; still binary.
    pub fn product(factors: &[Observable]) -> Result<Observable> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::validation("product of zero observables"))?;
        let matrix = rest
            .iter()
            .fold(first.matrix.clone(), |acc, o| acc.kron(&o.matrix));
        Ok(Observable { matrix })
    }

    /// Eigenprojectors `(Π₊, Π₋) = ((I + O)/2, (I − O)/2)`.
    ///
    /// Requires `O² = I` within tolerance, i.e. eigenvalues exactly ±1.
    pub fn sign_projectors(&self) -> Result<[ComplexMatrix; 2]> {
        let id = ComplexMatrix::identity(self.dim());
        let sq = &self.matrix * &self.matrix;
        if !sq.approx_eq(&id, TOL) {
            return Err(Error::validation(
                "observable does not square to identity; eigenvalues must be ±1",
            ));
        }
        let plus = (&id + &self.matrix).scale_real(0.5);
        let minus = (&id - &self.matrix).scale_real(0.5);
        Ok([plus, minus])
    }
}

/// Projective measurement with one projector per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let first = projectors
            .first()
            .ok_or_else(|| Error::validation("measurement needs at least one outcome"))?;
        let dim = first.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, p) in projectors.iter().enumerate() {
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::validation("projector dimensions differ"));
            }
            if !p.is_hermitian(TOL) {
                return Err(Error::validation(format!("projector {i} is not Hermitian")));
            }
            if !(p * p).approx_eq(p, TOL) {
                return Err(Error::validation(format!("projector {i} is not idempotent")));
            }
            sum = &sum + p;
        }
        if !sum.approx_eq(&ComplexMatrix::identity(dim), TOL) {
            return Err(Error::validation("projectors do not sum to identity"));
        }
        let zero = ComplexMatrix::zeros(dim, dim);
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                if !(&projectors[i] * &projectors[j]).approx_eq(&zero, TOL) {
                    return Err(Error::validation(format!(
                        "projectors {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(ProjectiveMeasurement { projectors })
    }

    /// Two-outcome measurement of a ±1 observable; outcome 0 ↔ +1.
    pub fn binary(obs: &Observable) -> Result<Self> {
        let [plus, minus] = obs.sign_projectors()?;
        Self::new(vec![plus, minus])
    }

    /// Joint measurement of commuting local ±1 observables, refined over
    /// sign patterns. Outcome `b` has bit `k` (most significant first) set
    /// when factor `k` returned −1.
    pub fn sign_patterns(factors: &[Observable]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::validation("sign-pattern measurement needs factors"));
        }
        let local: Vec<[ComplexMatrix; 2]> = factors
            .iter()
            .map(Observable::sign_projectors)
            .collect::<Result<_>>()?;
        let n = factors.len();
        let projectors = (0..1usize << n)
            .map(|b| {
                let mut acc: Option<ComplexMatrix> = None;
                for (k, pair) in local.iter().enumerate() {
                    let bit = (b >> (n - 1 - k)) & 1;
                    let p = &pair[bit];
                    acc = Some(match acc {
                        None => p.clone(),
                        Some(a) => a.kron(p),
                    });
                }
                acc.expect("at least one factor")
            })
            .collect();
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Born-rule probabilities `Tr(ρ P_b)`.
    pub fn probabilities(&self, state: &DensityMatrix) -> Result<Vec<f64>> {
        self.projectors
            .iter()
            .map(|p| expectation(state, p))
            .collect()
    }
}

/// `|ψ₀₀⟩ = (|00⟩ + |11⟩)/√2`.
pub fn psi00_ket() -> Vec<C64> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    vec![s, ZERO, ZERO, s]
}

/// Pauli matrix `σ_k` for `k ∈ {1, 2, 3}`; `k = 0` gives the identity.
pub fn pauli(k: u8) -> Observable {
    let m = match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        _ => panic!("Pauli index {k} out of range 0..=3"),
    };
    Observable { matrix: m }
}

/// `v₁σ₁ + v₂σ₂ + v₃σ₃`; unit vectors give eigenvalues ±1.
pub fn bloch_to_observable(v: [f64; 3]) -> Result<Observable> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::validation("Bloch vector must be finite"));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 + TOL {
        return Err(Error::validation(format!(
            "Bloch vector norm {norm} exceeds 1; not a binary observable"
        )));
    }
    let [x, y, z] = v;
    let m = ComplexMatrix::from_rows(&[
        &[C64::new(z, 0.0), C64::new(x, -y)],
        &[C64::new(x, y), C64::new(-z, 0.0)],
    ]);
    Ok(Observable { matrix: m })
}

/// Bell-state measurement on two qubits.
///
/// Outcome `b = 2·b₁ + b₂` projects onto `σ₃^{b₁} ⊗ σ₁^{b₂} |ψ₀₀⟩`.
pub fn bell_basis_2q() -> ProjectiveMeasurement {
    let z = pauli(3);
    let x = pauli(1);
    let id = ComplexMatrix::identity(2);
    let psi = psi00_ket();
    let projectors = (0..4)
        .map(|b| {
            let left = if b >> 1 == 1 { z.matrix() } else { &id };
            let right = if b & 1 == 1 { x.matrix() } else { &id };
            let ket = left.kron(right).apply(&psi);
            ComplexMatrix::outer(&ket, &ket)
        })
        .collect();
    ProjectiveMeasurement { projectors }
}

/// `v·base + (1 − v)·I/d`.
pub fn werner(v: f64, base: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::validation(format!("visibility {v} outside [0, 1]")));
    }
    let d = base.dim();
    let noise = ComplexMatrix::identity(d).scale_real((1.0 - v) / d as f64);
    Ok(DensityMatrix {
        matrix: &base.matrix.scale_real(v) + &noise,
    })
}

/// `Tr(ρ · op)`, which must be real for Hermitian `op`.
pub fn expectation(state: &DensityMatrix, op: &ComplexMatrix) -> Result<f64> {
    if op.rows() != state.dim() || op.cols() != state.dim() {
        return Err(Error::validation(format!(
            "operator is {}x{} but state has dimension {}",
            op.rows(),
            op.cols(),
            state.dim()
        )));
    }
    let v = state.matrix.trace_product(op);
    if v.im.abs() >= TOL {
        return Err(Error::numeric(format!(
            "expectation has imaginary part {}",
            v.im
        )));
    }
    Ok(v.re)
}
