use crate::error::{Error, Result};
use crate::numerics::{c64, hs_inner, kron, Complex64, ComplexMatrix};

/// A complete set of `d^2` Hermitian observables with `Tr(M_k M_l) = delta_kl`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOrthogonalBasis {
    d: usize,
    observables: Vec<ComplexMatrix>,
}

impl LocalOrthogonalBasis {
    /// Normalized generalized Gell-Mann basis.
    ///
    /// Order: `1/sqrt(d)`, the `d - 1` traceless diagonal matrices, then for
    /// each pair `k < l` the symmetric `(|k><l| + |l><k|)/sqrt(2)` followed by
    /// the antisymmetric `i(|k><l| - |l><k|)/sqrt(2)`.
    pub fn hermitian(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut obs = Vec::with_capacity(d * d);
        obs.push(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()));
        for j in 1..d {
            let norm = ((j * (j + 1)) as f64).sqrt();
            obs.push(ComplexMatrix::from_fn(d, d, |a, b| {
                if a != b {
                    c64(0.0)
                } else if a < j {
                    c64(1.0 / norm)
                } else if a == j {
                    c64(-(j as f64) / norm)
                } else {
                    c64(0.0)
                }
            }));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for k in 0..d {
            for l in k + 1..d {
                let mut sym = ComplexMatrix::zeros(d, d);
                sym[(k, l)] = c64(s);
                sym[(l, k)] = c64(s);
                obs.push(sym);
                let mut anti = ComplexMatrix::zeros(d, d);
                anti[(k, l)] = Complex64::new(0.0, s);
                anti[(l, k)] = Complex64::new(0.0, -s);
                obs.push(anti);
            }
        }
        Ok(Self { d, observables: obs })
    }

    /// Wraps user-supplied observables after checking hermiticity,
    /// orthonormality and completeness.
    pub fn from_observables(d: usize, observables: Vec<ComplexMatrix>) -> Result<Self> {
        if observables.len() != d * d {
            return Err(Error::BasisSizeMismatch {
                expected: d * d,
                found: observables.len(),
            });
        }
        for (i, m) in observables.iter().enumerate() {
            if m.shape() != (d, d) {
                return Err(Error::ShapeMismatch {
                    expected: (d, d),
                    found: m.shape(),
                });
            }
            if !m.is_hermitian(1e-10) {
                return Err(Error::NonHermitianGenerator { index: i });
            }
        }
        let gram_error = gram_deviation(&observables);
        if gram_error > 1e-10 {
            return Err(Error::BadDecomposition(format!(
                "observables are not orthonormal (Gram deviation {gram_error:.3e})"
            )));
        }
        Ok(Self { d, observables })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn observables(&self) -> &[ComplexMatrix] {
        &self.observables
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    /// Real coordinates `Tr(M_k X)` of a Hermitian operator.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.observables
            .iter()
            .map(|m| crate::numerics::trace_of_product(m, x).re)
            .collect()
    }

    /// `sum_k a_k M_k`.
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.len());
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (m, &a) in self.observables.iter().zip(coeffs) {
            if a != 0.0 {
                out = &out + &m.scale_real(a);
            }
        }
        out
    }

    /// `sum_k M_k (x) M_k`, which equals the flip operator for a complete basis.
    pub fn flip_sum(&self) -> ComplexMatrix {
        let n = self.d * self.d;
        self.observables
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, m| &acc + &kron(m, m))
    }

    /// Largest deviation of `Tr(M_k M_l)` from `delta_kl`.
    pub fn orthonormality_error(&self) -> f64 {
        gram_deviation(&self.observables)
    }
}

pub fn hermitian_basis(d: usize) -> Result<LocalOrthogonalBasis> {
    LocalOrthogonalBasis::hermitian(d)
}

/// The matrix units `Q_kl = |k><l|`, ordered by `k * d + l`.
pub fn matrix_unit_basis(d: usize) -> Vec<ComplexMatrix> {
    (0..d * d)
        .map(|i| {
            let mut q = ComplexMatrix::zeros(d, d);
            q[(i / d, i % d)] = c64(1.0);
            q
        })
        .collect()
}

/// `M_i = sum_j U[i, j] B_j`.
pub fn rotate_operators(ops: &[ComplexMatrix], u: &ComplexMatrix) -> Vec<ComplexMatrix> {
    assert_eq!(u.shape(), (ops.len(), ops.len()));
    let (r, c) = ops[0].shape();
    (0..ops.len())
        .map(|i| {
            ops.iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(r, c), |acc, (j, b)| {
                    &acc + &b.scale(u[(i, j)])
                })
        })
        .collect()
}

/// Gram matrix `G[i, j] = Tr(A_i^dagger A_j)`.
pub fn gram_matrix(ops: &[ComplexMatrix]) -> ComplexMatrix {
    ComplexMatrix::from_fn(ops.len(), ops.len(), |i, j| {
        hs_inner(&ops[i], &ops[j]).expect("operators share a shape")
    })
}

fn gram_deviation(ops: &[ComplexMatrix]) -> f64 {
    let g = gram_matrix(ops);
    g.distance(&ComplexMatrix::identity(ops.len()))
}
