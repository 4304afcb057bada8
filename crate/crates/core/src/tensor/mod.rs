//! Dense complex linear algebra on composite systems.

mod eigen;
mod matrix;
mod perm;
mod state;

pub use eigen::{hermitian_eigenvalues, min_eigenvalue};
pub use matrix::{kron, kron_vec, ComplexMatrix, HERMITIAN_TOL};
pub use perm::{
    copy_permutation, permutation_operator, permutation_operator_capped, swap_operator, unravel,
    FactorPermutation, Permutation, DEFAULT_MAX_OPERATOR_DIM,
};
pub use state::{
    partial_trace, partial_trace_operator, partial_transpose, partial_transpose_operator,
    DensityMatrix, StateVector, SubsystemShape, NORM_TOL, PSD_TOL, TRACE_TOL,
};
