//! Dense complex linear algebra for registers of up to four qubits.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigenResult, HERMITIAN_TOL};
pub use matrix::{pauli, ComplexMatrix, Pauli, I, ONE, ZERO};
pub use ops::{
    entropy_of_spectrum, kron, kron_all, matrix_sqrt_psd, partial_trace, partial_transpose,
    trace_norm, vn_entropy, Subsystem, ENTROPY_CUTOFF, NEGATIVE_EIGEN_FLOOR,
};
