//! Separability criteria for bipartite states and the machinery relating them
//! on the symmetric subspace.
//!
//! For a symmetric state the six conditions computed here are equivalent:
//! positivity of the partial transpose, the realignment (CCNR) bound,
//! `<A (x) A> >= 0` for all observables, positivity of the expectation-value
//! matrix, positivity of the correlation matrix, and the covariance
//! inequality. [`full_report`] evaluates all of them side by side.

mod basis;
mod extremal;
mod multiqubit;

pub use basis::{
    gram_matrix, hermitian_basis, matrix_unit_basis, rotate_operators, LocalOrthogonalBasis,
};
pub use extremal::{extremal_observable, transposed_correlation_check, ExtremalObservable};
pub use multiqubit::{
    bipartition_report, multiqubit_partial_transpose, multiqubit_realign, BipartitionReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    min_eigenvalue, numerical_rank, real_symmetric_eig, tol, trace_norm,
    Complex64, ComplexMatrix,
};
use crate::states::BipartiteState;

/// Partial transpose on the first party of a `d x d` operator:
/// `out[(k,m),(l,n)] = m[(l,m),(k,n)]`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    assert_eq!(m.shape(), (d * d, d * d));
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (k, bm) = (r / d, r % d);
        let (l, bn) = (c / d, c % d);
        m[(l * d + bm, k * d + bn)]
    })
}

/// Realignment of an operator on `C^da (x) C^db`. The output is
/// `da^2 x db^2` with `out[(k*da + l), (m*db + n)] = rho_{kl,mn}`.
pub fn realign_matrix(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    assert_eq!(m.shape(), (da * db, da * db));
    ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (k, l) = (r / da, r % da);
        let (bm, bn) = (c / db, c % db);
        m[(k * db + bm, l * db + bn)]
    })
}

/// `rho^{T_A}`.
pub fn partial_transpose(s: &BipartiteState) -> ComplexMatrix {
    partial_transpose_matrix(s.rho(), s.dim())
}

/// `rho^R`, generally not Hermitian.
pub fn realign(s: &BipartiteState) -> ComplexMatrix {
    realign_matrix(s.rho(), s.dim(), s.dim())
}

/// `Tr(rho (a (x) b))` without forming the tensor product.
pub fn local_expectation(s: &BipartiteState, a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let d = s.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..d {
        for l in 0..d {
            let al = a[(l, k)];
            if al == Complex64::new(0.0, 0.0) {
                continue;
            }
            for m in 0..d {
                for n in 0..d {
                    acc += s.entry(k, l, m, n) * al * b[(n, m)];
                }
            }
        }
    }
    acc
}

/// Smallest eigenvalue of the Hermitian part `(X + X^dagger)/2`, i.e. the
/// minimum of `Re <v|X|v>` over unit vectors.
pub fn hermitian_part_min_eigenvalue(x: &ComplexMatrix) -> Result<f64> {
    min_eigenvalue(&x.hermitian_part())
}

/// `eta[i, j] = Tr(rho B_i (x) B_j^dagger)` for exactly `d^2` operators.
///
/// With matrix units `B_{k*d+l} = |k><l|` the composite row index is `(k, l)`.
/// `eta` is Hermitian whenever the state is permutationally invariant.
pub fn expectation_value_matrix(s: &BipartiteState, ops: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = s.dim();
    if ops.len() != d * d {
        return Err(Error::BasisSizeMismatch {
            expected: d * d,
            found: ops.len(),
        });
    }
    eta_unchecked(s, ops)
}

fn eta_unchecked(s: &BipartiteState, ops: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = s.dim();
    if let Some(bad) = ops.iter().find(|o| o.shape() != (d, d)) {
        return Err(Error::ShapeMismatch {
            expected: (d, d),
            found: bad.shape(),
        });
    }
    let daggers: Vec<ComplexMatrix> = ops.iter().map(|o| o.adjoint()).collect();
    Ok(ComplexMatrix::from_fn(ops.len(), ops.len(), |i, j| {
        local_expectation(s, &ops[i], &daggers[j])
    }))
}

/// Expectation-value matrix for an arbitrary operator set.
#[derive(Debug, Clone)]
pub struct OperatorSetEta {
    pub eta: ComplexMatrix,
    /// Whether the operators span the full `d^2`-dimensional operator space.
    pub tomographically_complete: bool,
}

/// `eta` for any number of (possibly non-orthogonal) operators, with a
/// completeness flag derived from the rank of their Gram matrix.
pub fn expectation_value_matrix_for_set(
    s: &BipartiteState,
    ops: &[ComplexMatrix],
) -> Result<OperatorSetEta> {
    if ops.is_empty() {
        return Err(Error::BasisSizeMismatch {
            expected: s.dim() * s.dim(),
            found: 0,
        });
    }
    let eta = eta_unchecked(s, ops)?;
    let rank = numerical_rank(&gram_matrix(ops), 1e-10)?;
    Ok(OperatorSetEta {
        eta,
        tomographically_complete: rank == s.dim() * s.dim(),
    })
}

/// `C[k, l] = <M_k (x) M_l> - <M_k (x) 1><1 (x) M_l>`.
pub fn correlation_matrix(s: &BipartiteState, basis: &LocalOrthogonalBasis) -> Result<ComplexMatrix> {
    check_basis_dim(s, basis)?;
    let id = ComplexMatrix::identity(s.dim());
    let obs = basis.observables();
    let alice: Vec<f64> = obs.iter().map(|m| local_expectation(s, m, &id).re).collect();
    let bob: Vec<f64> = obs.iter().map(|m| local_expectation(s, &id, m).re).collect();
    Ok(ComplexMatrix::from_fn(obs.len(), obs.len(), |k, l| {
        Complex64::new(
            local_expectation(s, &obs[k], &obs[l]).re - alice[k] * bob[l],
            0.0,
        )
    }))
}

fn check_basis_dim(s: &BipartiteState, basis: &LocalOrthogonalBasis) -> Result<()> {
    if basis.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: basis.dim(),
        });
    }
    Ok(())
}

/// Both sides of the covariance inequality `|C|_1^2 <= [1 - Tr rho_A^2][1 - Tr rho_B^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCondition {
    pub lhs: f64,
    pub rhs: f64,
}

impl CovarianceCondition {
    pub fn violated(&self, tol: f64) -> bool {
        self.lhs > self.rhs + tol
    }
}

pub fn covariance_condition(
    s: &BipartiteState,
    basis: &LocalOrthogonalBasis,
) -> Result<CovarianceCondition> {
    let c = correlation_matrix(s, basis)?;
    let ra = s.reduced_a();
    let rb = s.reduced_b();
    if s.is_symmetric(tol::HERMITIAN) && ra.distance(&rb) > 1e-10 {
        return Err(Error::Numerical(format!(
            "reduced states of a symmetric state differ by {:.3e}",
            ra.distance(&rb)
        )));
    }
    let purity = |r: &ComplexMatrix| r.matmul(r).trace().re;
    let norm = trace_norm(&c);
    Ok(CovarianceCondition {
        lhs: norm * norm,
        rhs: (1.0 - purity(&ra)) * (1.0 - purity(&rb)),
    })
}

/// Violation flags for the six criteria; `true` means the criterion signals
/// entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub ppt: bool,
    pub ccnr: bool,
    pub observable_positivity: bool,
    pub expectation_matrix: bool,
    pub correlation_matrix: bool,
    pub covariance: bool,
}

impl Verdicts {
    pub fn as_array(&self) -> [bool; 6] {
        [
            self.ppt,
            self.ccnr,
            self.observable_positivity,
            self.expectation_matrix,
            self.correlation_matrix,
            self.covariance,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&v| v == a[0])
    }
}

/// All six criteria evaluated on one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub ppt_min_eigenvalue: f64,
    pub ccnr_trace_norm: f64,
    /// Minimum of `<A (x) A>` over Hermitian `A` with `Tr A^2 = 1`.
    pub observable_min_value: f64,
    pub eta_min_eigenvalue: f64,
    pub corr_min_eigenvalue: f64,
    pub covariance_lhs: f64,
    pub covariance_rhs: f64,
    pub verdicts: Verdicts,
    pub symmetric: bool,
    pub permutationally_invariant: bool,
    pub tolerance: f64,
}

impl CriteriaReport {
    /// Whether any criterion that is a valid separability test for this
    /// state is violated. The observable, `eta` and correlation-matrix
    /// conditions only count for symmetric states.
    pub fn entanglement_detected(&self) -> bool {
        let v = &self.verdicts;
        v.ppt
            || v.ccnr
            || v.covariance
            || (self.symmetric
                && (v.observable_positivity || v.expectation_matrix || v.correlation_matrix))
    }
}

/// [`full_report_with_tol`] at the default tolerance.
pub fn full_report(s: &BipartiteState, basis: &LocalOrthogonalBasis) -> Result<CriteriaReport> {
    full_report_with_tol(s, basis, tol::CRITERION)
}

/// Evaluates every criterion. For symmetric states the partial-transpose and
/// `eta` spectra must agree, and outside the boundary band around the
/// partial-transpose minimum the other spectral criteria must give the same
/// verdict; a mismatch is reported as [`Error::Numerical`].
pub fn full_report_with_tol(
    s: &BipartiteState,
    basis: &LocalOrthogonalBasis,
    tol: f64,
) -> Result<CriteriaReport> {
    check_basis_dim(s, basis)?;
    let symmetric = s.is_symmetric(tol::HERMITIAN);
    let permutationally_invariant = s.is_permutationally_invariant(tol::HERMITIAN);

    let ppt_min_eigenvalue = min_eigenvalue(&partial_transpose(s))?;
    let ccnr_trace_norm = trace_norm(&realign(s));
    let eta = expectation_value_matrix(s, basis.observables())?;
    let eta_min_eigenvalue = hermitian_part_min_eigenvalue(&eta)?;
    let observable_min_value = if symmetric {
        extremal_observable(s)?.value
    } else {
        // eta is real in a Hermitian basis; <A (x) A> = a^T eta a
        let n = eta.rows();
        let entries: Vec<f64> = eta.as_slice().iter().map(|z| z.re).collect();
        real_symmetric_eig(n, &entries)?.eigenvalues[0]
    };
    let corr = correlation_matrix(s, basis)?;
    let corr_min_eigenvalue = hermitian_part_min_eigenvalue(&corr)?;
    let cov = covariance_condition(s, basis)?;

    let verdicts = Verdicts {
        ppt: ppt_min_eigenvalue < -tol,
        ccnr: ccnr_trace_norm > 1.0 + tol,
        observable_positivity: observable_min_value < -tol,
        expectation_matrix: eta_min_eigenvalue < -tol,
        correlation_matrix: corr_min_eigenvalue < -tol,
        covariance: cov.violated(tol),
    };

    let report = CriteriaReport {
        ppt_min_eigenvalue,
        ccnr_trace_norm,
        observable_min_value,
        eta_min_eigenvalue,
        corr_min_eigenvalue,
        covariance_lhs: cov.lhs,
        covariance_rhs: cov.rhs,
        verdicts,
        symmetric,
        permutationally_invariant,
        tolerance: tol,
    };
    if symmetric {
        check_symmetric_consistency(&report)?;
    }
    Ok(report)
}

/// Signed margins of the six criteria; negative means violated.
pub fn criterion_margins(r: &CriteriaReport) -> [f64; 6] {
    [
        r.ppt_min_eigenvalue,
        1.0 - r.ccnr_trace_norm,
        r.observable_min_value,
        r.eta_min_eigenvalue,
        r.corr_min_eigenvalue,
        r.covariance_rhs - r.covariance_lhs,
    ]
}

fn check_symmetric_consistency(r: &CriteriaReport) -> Result<()> {
    let gap = (r.ppt_min_eigenvalue - r.eta_min_eigenvalue).abs();
    if gap > 1e-8 {
        return Err(Error::Numerical(format!(
            "partial transpose and eta spectra disagree by {gap:.3e}"
        )));
    }
    // CCNR, C >= 0 and the covariance inequality are tight on PPT states, so
    // only the partial-transpose margin decides whether a state is banded.
    // The covariance margin can be much smaller than |ppt| and is left out.
    let band = tol::BOUNDARY_BAND;
    if r.ppt_min_eigenvalue.abs() > band {
        let npt = r.ppt_min_eigenvalue < 0.0;
        let margins = &criterion_margins(r)[..5];
        if margins.iter().any(|&m| (m < -band) != npt) {
            return Err(Error::Numerical(format!(
                "criteria disagree on a symmetric state: margins {margins:?}"
            )));
        }
    }
    Ok(())
}
