//! Dense complex linear algebra and quantum primitives.

mod eigen;
mod matrix;
mod quantum;

pub use eigen::hermitian_eigenvalues;
pub use matrix::{
    permute_subsystems, subsystem_permutation, tensor, tensor_all, ComplexMatrix, C64, I, ONE,
    ZERO,
};
pub use quantum::{
    bell_basis_2q, bloch_to_observable, expectation, pauli, psi00_ket, werner, DensityMatrix,
    Observable, ProjectiveMeasurement,
};
