//! Operator Schmidt decomposition `rho = sum_k lambda_k M_k (x) M_k` for
//! permutationally invariant operators, and quasi-mixture constructions.
//!
//! Coefficients keep their sign; the observables stay orthonormal. A
//! symmetric state has coefficients summing to one and is PPT exactly when all
//! of them are nonnegative.

use serde::{Deserialize, Serialize};

use crate::criteria::{local_expectation, partial_transpose, LocalOrthogonalBasis};
use crate::error::{Error, Result};
use crate::numerics::{kron, min_eigenvalue, real_symmetric_eig, tol, ComplexMatrix};
use crate::states::BipartiteState;

/// Asymmetry of the coefficient matrix tolerated before symmetrizing.
const COEFFICIENT_ASYMMETRY: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Sorted descending.
    pub coefficients: Vec<f64>,
    /// Orthonormal Hermitian observables, one per coefficient.
    pub observables: Vec<ComplexMatrix>,
}

impl SchmidtDecomposition {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn min_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `sum_k lambda_k M_k (x) M_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        weighted_tensor_sum(&self.coefficients, &self.observables)
    }
}

/// `sum_k w_k A_k (x) A_k`.
pub fn weighted_tensor_sum(weights: &[f64], ops: &[ComplexMatrix]) -> ComplexMatrix {
    let d = ops[0].rows();
    weights
        .iter()
        .zip(ops)
        .filter(|(w, _)| **w != 0.0)
        .fold(ComplexMatrix::zeros(d * d, d * d), |acc, (&w, m)| {
            &acc + &kron(m, m).scale_real(w)
        })
}

/// Decomposes a validated state; see [`schmidt_decompose_operator`].
pub fn schmidt_decompose(
    s: &BipartiteState,
    basis: &LocalOrthogonalBasis,
) -> Result<SchmidtDecomposition> {
    if !s.is_permutationally_invariant(tol::HERMITIAN) {
        return Err(Error::NotPermutationallyInvariant);
    }
    schmidt_decompose_operator(s.rho(), basis)
}

/// Schmidt decomposition of any Hermitian permutationally invariant operator
/// on `C^d (x) C^d`.
///
/// Builds `T[k,l] = Tr(X M_k (x) M_l)`, diagonalizes it as `O diag(lambda) O^T`
/// and rotates the basis to `M'_k = sum_l O[l,k] M_l`. Eigenvectors are
/// sign-fixed so their first entry above `1e-12` in magnitude is positive.
pub fn schmidt_decompose_operator(
    x: &ComplexMatrix,
    basis: &LocalOrthogonalBasis,
) -> Result<SchmidtDecomposition> {
    let d = basis.dim();
    if x.shape() != (d * d, d * d) {
        return Err(Error::ShapeMismatch {
            expected: (d * d, d * d),
            found: x.shape(),
        });
    }
    if !x.is_hermitian(tol::HERMITIAN * x.frobenius_norm().max(1.0)) {
        return Err(Error::NonHermitian {
            deviation: x.hermiticity_deviation(),
        });
    }
    let obs = basis.observables();
    let n = obs.len();
    let mut t = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            t[k * n + l] = operator_expectation(x, d, &obs[k], &obs[l]);
        }
    }
    let mut asym = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            asym = asym.max((t[k * n + l] - t[l * n + k]).abs());
        }
    }
    if asym > COEFFICIENT_ASYMMETRY {
        return Err(Error::NotPermutationallyInvariant);
    }
    // symmetrized inside the eigensolver
    let eig = real_symmetric_eig(n, &t)?;
    let mut pairs: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .into_iter()
        .zip(eig.eigenvectors)
        .map(|(l, mut v)| {
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (l, v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(SchmidtDecomposition {
        coefficients: pairs.iter().map(|p| p.0).collect(),
        observables: pairs.iter().map(|p| basis.combine(&p.1)).collect(),
    })
}

/// `Tr(X (a (x) b))` for a real-valued pairing of Hermitian operators.
fn operator_expectation(x: &ComplexMatrix, d: usize, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for k in 0..d {
        for l in 0..d {
            let al = a[(l, k)];
            if al.norm_sqr() == 0.0 {
                continue;
            }
            for m in 0..d {
                for n in 0..d {
                    acc += (x[(k * d + m, l * d + n)] * al * b[(n, m)]).re;
                }
            }
        }
    }
    acc
}

/// Checks that PPT and nonnegativity of all Schmidt coefficients coincide.
/// Returns `true` when both sides agree at the `1e-8` boundary band.
pub fn ppt_iff_nonnegative_check(s: &BipartiteState) -> Result<bool> {
    if !s.is_symmetric(tol::HERMITIAN) {
        return Err(Error::NotSymmetric);
    }
    let basis = LocalOrthogonalBasis::hermitian(s.dim())?;
    let decomposition = schmidt_decompose(s, &basis)?;
    let band = tol::BOUNDARY_BAND;
    let ppt = min_eigenvalue(&partial_transpose(s))? >= -band;
    let nonnegative = decomposition.min_coefficient() >= -band;
    Ok(ppt == nonnegative)
}

/// Number of tensor factors in a quasi-mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parties {
    Two,
    Four,
}

impl Parties {
    pub fn count(self) -> usize {
        match self {
            Parties::Two => 2,
            Parties::Four => 4,
        }
    }
}

impl TryFrom<usize> for Parties {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Parties::Two),
            4 => Ok(Parties::Four),
            other => Err(Error::Unsupported(format!(
                "quasi-mixtures over {other} parties"
            ))),
        }
    }
}

/// `O = sum_k c_k A_k^{(x) parties}`.
///
/// Bipartite mixtures need strictly positive coefficients; four-party ones
/// accept zeros.
pub fn quasi_mixture_build(
    coeffs: &[f64],
    ops: &[ComplexMatrix],
    parties: Parties,
) -> Result<ComplexMatrix> {
    if coeffs.len() != ops.len() || ops.is_empty() {
        return Err(Error::BasisSizeMismatch {
            expected: coeffs.len(),
            found: ops.len(),
        });
    }
    for (index, &c) in coeffs.iter().enumerate() {
        let ok = match parties {
            Parties::Two => c > 0.0,
            Parties::Four => c >= 0.0,
        } && c.is_finite();
        if !ok {
            return Err(Error::InvalidCoefficient { index, value: c });
        }
    }
    let shape = ops[0].shape();
    for (index, a) in ops.iter().enumerate() {
        if a.shape() != shape || !a.is_square() {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: a.shape(),
            });
        }
        if !a.is_hermitian(1e-12 * a.frobenius_norm().max(1.0)) {
            return Err(Error::NonHermitianGenerator { index });
        }
    }
    let d = shape.0;
    let dim = d.pow(parties.count() as u32);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (&c, a) in coeffs.iter().zip(ops) {
        if c == 0.0 {
            continue;
        }
        let mut t = a.clone();
        for _ in 1..parties.count() {
            t = kron(&t, a);
        }
        out = &out + &t.scale_real(c);
    }
    Ok(out)
}

/// `(O - lambda_min(O) 1) / Tr(.)` when `O` has a negative eigenvalue,
/// otherwise `O / Tr O`.
pub fn shift_and_normalize(o: &ComplexMatrix) -> Result<ComplexMatrix> {
    let min = min_eigenvalue(o)?;
    let shifted = if min < 0.0 {
        o - &ComplexMatrix::identity(o.rows()).scale_real(min)
    } else {
        o.clone()
    };
    let t = shifted.trace().re;
    if t <= 0.0 {
        return Err(Error::Validation("operator has non-positive trace".into()));
    }
    Ok(shifted.scale_real(1.0 / t))
}

/// `<A (x) A>` on a state, exposed for Schmidt-coefficient sanity checks.
pub fn symmetric_correlation(s: &BipartiteState, a: &ComplexMatrix) -> f64 {
    local_expectation(s, a, a).re
}
