use rand::SeedableRng;

use super::{hermitian_basis, local_expectation, partial_transpose};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, real_symmetric_eig, tol, Complex64, ComplexMatrix};
use crate::states::random::{random_hermitian, StateRng};
use crate::states::BipartiteState;

/// Gap above which the extremal construction is treated as a failure.
const EXTREMAL_FAILURE_GAP: f64 = 1e-6;
/// Gap above which the eigenspace fallback is attempted.
const EXTREMAL_TARGET_GAP: f64 = 1e-7;

/// A normalized observable minimizing `<A (x) A>` on a symmetric state.
#[derive(Debug, Clone)]
pub struct ExtremalObservable {
    pub observable: ComplexMatrix,
    /// `Tr(rho A (x) A)`.
    pub value: f64,
    /// Smallest eigenvalue of `rho^{T_A}`, the value the observable should reach.
    pub pt_min_eigenvalue: f64,
    /// Whether the Hermitian-basis fallback was needed.
    pub used_fallback: bool,
}

impl ExtremalObservable {
    pub fn gap(&self) -> f64 {
        self.value - self.pt_min_eigenvalue
    }
}

/// Finds Hermitian `A` with `Tr A^2 = 1` such that `<A (x) A>` equals the
/// smallest eigenvalue of the partial transpose.
///
/// The first attempt reshapes the lowest eigenvector `v` of `rho^{T_A}` into a
/// `d x d` matrix `V` and tries the normalized Hermitian and anti-Hermitian
/// parts of `V` and of `conj(V)`. If none reaches the target within `1e-7`
/// (possible when the lowest eigenvalue is degenerate), the lowest real
/// eigenvector of `T[k,l] = <M_k (x) M_l>` in the Gell-Mann basis is used.
pub fn extremal_observable(s: &BipartiteState) -> Result<ExtremalObservable> {
    if !s.is_symmetric(tol::HERMITIAN) {
        return Err(Error::NotSymmetric);
    }
    let d = s.dim();
    let pt_eig = hermitian_eig(&partial_transpose(s))?;
    let target = pt_eig.min_eigenvalue();
    let v = pt_eig.eigenvector(0);
    let reshaped = ComplexMatrix::from_fn(d, d, |k, m| v[k * d + m]);

    let mut best: Option<(ComplexMatrix, f64)> = None;
    let mut consider = |a: ComplexMatrix| {
        let n = a.frobenius_norm();
        if n < 1e-8 {
            return;
        }
        let a = a.hermitian_part().scale_real(1.0 / n);
        let value = local_expectation(s, &a, &a).re;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((a, value));
        }
    };
    for x in [reshaped.clone(), reshaped.conj()] {
        let xd = x.adjoint();
        consider((&x + &xd).scale_real(0.5));
        consider((&x - &xd).scale(Complex64::new(0.0, 0.5)));
    }

    let (mut observable, mut value) = best.expect("eigenvector is a unit vector");
    let mut used_fallback = false;
    if value - target > EXTREMAL_TARGET_GAP {
        let basis = hermitian_basis(d)?;
        let obs = basis.observables();
        let n = obs.len();
        let mut t = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                t[k * n + l] = local_expectation(s, &obs[k], &obs[l]).re;
            }
        }
        let eig = real_symmetric_eig(n, &t)?;
        let a = basis.combine(&eig.eigenvectors[0]);
        let fallback_value = local_expectation(s, &a, &a).re;
        if fallback_value < value {
            observable = a;
            value = fallback_value;
            used_fallback = true;
        }
    }
    if value - target > EXTREMAL_FAILURE_GAP {
        return Err(Error::Numerical(format!(
            "extremal observable misses the partial-transpose minimum by {:.3e}",
            value - target
        )));
    }
    Ok(ExtremalObservable {
        observable,
        value,
        pt_min_eigenvalue: target,
        used_fallback,
    })
}

/// Samples random unit-norm Hermitian `A` and checks `<A^T (x) A> >= -1e-9`
/// on a symmetric PPT state.
pub fn transposed_correlation_check(s: &BipartiteState, trials: usize, seed: u64) -> Result<bool> {
    if !s.is_symmetric(tol::HERMITIAN) {
        return Err(Error::NotSymmetric);
    }
    let min = hermitian_eig(&partial_transpose(s))?.min_eigenvalue();
    if min < -tol::PSD {
        return Err(Error::NotPpt {
            min_eigenvalue: min,
        });
    }
    let mut rng = StateRng::seed_from_u64(seed);
    for _ in 0..trials {
        let a = random_hermitian(s.dim(), &mut rng);
        if local_expectation(s, &a.transpose(), &a).re < -tol::PSD {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;
    use crate::states::builtin_rho33;
    use crate::states::random::random_symmetric_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn triplet_extremal_value() {
        let s = BipartiteState::from_pure(2, &[c64(0.0), c64(1.0), c64(1.0), c64(0.0)]).unwrap();
        let e = extremal_observable(&s).unwrap();
        assert_abs_diff_eq!(e.value, -0.5, epsilon = 1e-10);
        assert!(e.observable.is_hermitian(1e-12));
        assert_abs_diff_eq!(e.observable.matmul(&e.observable).trace().re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn product_state_is_nonnegative() {
        let s = BipartiteState::product_symmetric(&[c64(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        let e = extremal_observable(&s).unwrap();
        assert!(e.value >= -1e-9);
    }

    #[test]
    fn random_states_reach_minimum() {
        for seed in 0..10 {
            let s = random_symmetric_state(3, seed).unwrap();
            let e = extremal_observable(&s).unwrap();
            assert!(e.gap().abs() < 1e-7, "seed {seed}: gap {}", e.gap());
        }
    }

    #[test]
    fn degenerate_spectrum_uses_fallback_if_needed() {
        // the symmetric-subspace mixture has a threefold-degenerate PT minimum
        let s = BipartiteState::symmetric_subspace_mixed(3).unwrap();
        let e = extremal_observable(&s).unwrap();
        assert!(e.gap().abs() < 1e-7);
    }

    #[test]
    fn rejects_non_symmetric() {
        let s = BipartiteState::from_pure(2, &[c64(0.0), c64(1.0), c64(-1.0), c64(0.0)]).unwrap();
        assert!(matches!(extremal_observable(&s), Err(Error::NotSymmetric)));
    }

    #[test]
    fn transposed_correlation_check_is_deterministic_and_guards_ppt() {
        let mixed = BipartiteState::symmetric_subspace_mixed(3).unwrap();
        assert_eq!(
            transposed_correlation_check(&mixed, 50, 3).unwrap(),
            transposed_correlation_check(&mixed, 50, 3).unwrap()
        );
        let triplet =
            BipartiteState::from_pure(2, &[c64(0.0), c64(1.0), c64(1.0), c64(0.0)]).unwrap();
        assert!(matches!(
            transposed_correlation_check(&triplet, 10, 0),
            Err(Error::NotPpt { .. })
        ));
    }

    #[test]
    fn transposed_correlations_can_be_negative_on_ppt_states() {
        // A = i(|0><1| - |1><0|)/sqrt(2) has A^T = -A, so <A^T (x) A> = -<A (x) A>
        let s = builtin_rho33();
        let a = hermitian_basis(3).unwrap().observables()[4].clone();
        assert!(a.transpose().distance(&a.scale_real(-1.0)) < 1e-15);
        let plain = local_expectation(&s, &a, &a).re;
        let transposed = local_expectation(&s, &a.transpose(), &a).re;
        assert!(plain > 0.0);
        assert_abs_diff_eq!(transposed, -plain, epsilon = 1e-15);
        assert!(!transposed_correlation_check(&s, 500, 7).unwrap());
        let mixed = BipartiteState::symmetric_subspace_mixed(3).unwrap();
        assert!(!transposed_correlation_check(&mixed, 200, 1).unwrap());
    }

    #[test]
    fn real_symmetric_observables_stay_nonnegative() {
        let s = builtin_rho33();
        let mut rng = StateRng::seed_from_u64(3);
        for _ in 0..500 {
            let a = random_hermitian(3, &mut rng).map(|z| Complex64::new(z.re, 0.0));
            assert!(local_expectation(&s, &a.transpose(), &a).re >= -1e-12);
        }
    }
}
