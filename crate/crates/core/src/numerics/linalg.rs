use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::tol;
use crate::error::{Error, Result};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matched with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigResult {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l)
                .sum()
        })
    }
}

/// Hermitian eigendecomposition with the default hermiticity slack.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigResult> {
    hermitian_eig_with_tol(h, tol::HERMITIAN)
}

/// Hermitian eigendecomposition. The input must satisfy
/// `|H - H^dagger|_F <= tol * max(1, |H|_F)`; it is symmetrized before solving.
pub fn hermitian_eig_with_tol(h: &ComplexMatrix, tol: f64) -> Result<EigResult> {
    if !h.is_square() {
        return Err(Error::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermiticity_deviation();
    if deviation > tol * h.frobenius_norm().max(1.0) {
        return Err(Error::NonHermitian { deviation });
    }
    let sym = h.hermitian_part().to_nalgebra();
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = h.rows();
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(h).map(|e| e.eigenvalues)
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    hermitian_eig(h).map(|e| e.min_eigenvalue())
}

/// Eigenpairs of a real symmetric matrix given row-major, eigenvalues
/// ascending, eigenvectors real and orthonormal.
#[derive(Debug, Clone)]
pub struct RealSymEig {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

pub fn real_symmetric_eig(n: usize, entries: &[f64]) -> Result<RealSymEig> {
    if entries.len() != n * n {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: (entries.len(), 1),
        });
    }
    if entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (entries[i * n + j] + entries[j * n + i]));
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(RealSymEig {
        eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        eigenvectors: order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect(),
    })
}

/// Singular values sorted descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Kronecker product with `(A x B)[(k*rB + m), (l*cB + n)] = A[k,l] * B[m,n]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(a.rows() * rb, a.cols() * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols(), b.rows());
    assert_eq!(a.rows(), b.cols());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(v: &mut [Complex64]) {
    let n = vector_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

/// Number of eigenvalues of a Hermitian PSD matrix above `rel_tol * max`.
pub fn numerical_rank(h: &ComplexMatrix, rel_tol: f64) -> Result<usize> {
    let eig = hermitian_eigenvalues(h)?;
    let scale = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0);
    }
    Ok(eig.iter().filter(|&&x| x > rel_tol * scale).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn eig_identity() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_diagonal_sorted_ascending() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, -1.0])).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_pauli_x() {
        // characteristic polynomial lambda^2 - 1
        let e = hermitian_eig(&pauli_x()).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(e.reconstruct().distance(&pauli_x()) < 1e-12);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::NonSquare { .. })));
        let upper = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&upper), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn singular_values_basic() {
        let sv = singular_values(&ComplexMatrix::identity(3));
        assert_eq!(sv.len(), 3);
        sv.iter().for_each(|s| assert_abs_diff_eq!(*s, 1.0, epsilon = 1e-14));
        let sv = singular_values(&ComplexMatrix::from_real_diagonal(&[2.0, -3.0]));
        assert_abs_diff_eq!(sv[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sv[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_norm_zero_and_density() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        let rho = ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25]);
        assert_abs_diff_eq!(trace_norm(&rho), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn kron_index_convention() {
        let id4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(id4, ComplexMatrix::identity(4));
        let k = kron(
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            &ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
        );
        assert_eq!(k, ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0]));
        // sigma_x (x) sigma_x is the anti-diagonal
        let xx = kron(&pauli_x(), &pauli_x());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(i, j)], c(expected));
            }
        }
    }

    #[test]
    fn hs_inner_cases() {
        let h = ComplexMatrix::identity(2).scale_real(1.0 / 2f64.sqrt());
        assert_abs_diff_eq!(hs_inner(&h, &h).unwrap().re, 1.0, epsilon = 1e-15);
        assert_eq!(hs_inner(&pauli_x(), &pauli_z()).unwrap(), c(0.0));
        let mut q01 = ComplexMatrix::zeros(2, 2);
        q01[(0, 1)] = c(1.0);
        assert_eq!(hs_inner(&q01, &q01).unwrap(), c(1.0));
        assert!(matches!(
            hs_inner(&q01, &ComplexMatrix::zeros(3, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn real_symmetric_eig_orthonormal() {
        let e = real_symmetric_eig(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 3.0, epsilon = 1e-14);
        let dot: f64 = e.eigenvectors[0]
            .iter()
            .zip(&e.eigenvectors[1])
            .map(|(a, b)| a * b)
            .sum();
        assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-14);
    }
}
