//! Dense complex linear algebra: the matrix type, Hermitian eigensolver,
//! singular values, trace norm, Kronecker and Hilbert-Schmidt products.
//!
//! Eigen- and singular-value problems are delegated to `nalgebra`; this module
//! fixes the conventions (row-major storage, ascending eigenvalues,
//! descending singular values) and the tolerance checks around them.

mod linalg;
mod matrix;

pub use linalg::{
    hermitian_eig, hermitian_eig_with_tol, hermitian_eigenvalues, hs_inner, kron, kron_vec,
    min_eigenvalue, normalize, numerical_rank, real_symmetric_eig, singular_values,
    trace_norm, trace_of_product, vector_norm, EigResult, RealSymEig,
};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;

/// Default tolerances shared by the whole crate.
pub mod tol {
    /// Slack for hermiticity, trace and positivity checks on states.
    pub const HERMITIAN: f64 = 1e-9;
    pub const PSD: f64 = 1e-9;
    pub const TRACE: f64 = 1e-9;
    /// Default verdict threshold for separability criteria.
    pub const CRITERION: f64 = 1e-9;
    /// Margins below this are treated as undecided in equivalence checks.
    pub const BOUNDARY_BAND: f64 = 1e-8;
    /// Pairwise orthonormality of basis observables.
    pub const ORTHONORMAL: f64 = 1e-12;
}

pub(crate) fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
