use super::{BipartiteState, MultiQubitState};
use crate::error::{Error, Result};
use crate::numerics::{c64, kron, kron_vec, Complex64, ComplexMatrix};

/// Largest number of qubits the Smolin constructors will build by default.
pub const DEFAULT_QUBIT_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub fn pauli(p: Pauli) -> ComplexMatrix {
    let (o, l, i) = (c64(0.0), c64(1.0), Complex64::new(0.0, 1.0));
    let data = match p {
        Pauli::I => vec![l, o, o, l],
        Pauli::X => vec![o, l, l, o],
        Pauli::Y => vec![o, -i, i, o],
        Pauli::Z => vec![l, o, o, -l],
    };
    ComplexMatrix::new(2, 2, data).expect("2x2 literal")
}

/// Swap operator `F |a,b> = |b,a>` on two `d`-level systems.
pub fn flip_operator(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            f[(b * d + a, a * d + b)] = c64(1.0);
        }
    }
    Ok(f)
}

/// `(1 + F) / 2`.
pub fn symmetric_projector(d: usize) -> Result<ComplexMatrix> {
    let f = flip_operator(d)?;
    Ok((&ComplexMatrix::identity(d * d) + &f).scale_real(0.5))
}

/// `(1 - F) / 2`.
pub fn antisymmetric_projector(d: usize) -> Result<ComplexMatrix> {
    let f = flip_operator(d)?;
    Ok((&ComplexMatrix::identity(d * d) - &f).scale_real(0.5))
}

/// The two-qutrit symmetric PPT entangled state.
///
/// Assembled from five symmetric two-qutrit vectors over the local basis
/// `alpha = |0>`, `beta = |1>`, `gamma = |2>`.
pub fn builtin_rho33() -> BipartiteState {
    let e = |i: usize| {
        let mut v = vec![c64(0.0); 3];
        v[i] = c64(1.0);
        v
    };
    let (alpha, beta, gamma) = (e(0), e(1), e(2));
    let pair = |a: &[Complex64], b: &[Complex64]| kron_vec(a, b);
    let combine = |terms: &[(f64, Vec<Complex64>)]| -> Vec<Complex64> {
        let mut out = vec![c64(0.0); 9];
        for (w, v) in terms {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * *w;
            }
        }
        out
    };
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let v0 = pair(&alpha, &alpha);
    let v1 = combine(&[
        (1.0 / s2, pair(&alpha, &beta)),
        (1.0 / s2, pair(&beta, &alpha)),
    ]);
    let v2 = combine(&[
        (1.0 / s6, pair(&alpha, &gamma)),
        (2.0 / s6, pair(&beta, &beta)),
        (1.0 / s6, pair(&gamma, &alpha)),
    ]);
    let v3 = combine(&[
        (1.0 / s2, pair(&gamma, &beta)),
        (1.0 / s2, pair(&beta, &gamma)),
    ]);
    let v4 = pair(&gamma, &gamma);

    let terms: [(f64, &[Complex64], &[Complex64]); 7] = [
        (0.22, &v0, &v0),
        (0.176, &v1, &v1),
        (0.167, &v2, &v2),
        (0.254, &v3, &v3),
        (0.183, &v4, &v4),
        (-0.059, &v3, &v0),
        (-0.059, &v0, &v3),
    ];
    let mut rho = ComplexMatrix::zeros(9, 9);
    for (w, ket, bra) in terms {
        rho = &rho + &ComplexMatrix::outer(ket, bra).scale_real(w);
    }
    BipartiteState::new(3, rho).expect("rho33 is a valid density matrix")
}

/// Generalized Smolin state on `2n` qubits,
/// `2^{-2n} [1 + (-1)^n sum_{l=x,y,z} sigma_l^{(x)2n}]`.
pub fn smolin_state(n: usize) -> Result<MultiQubitState> {
    smolin_state_capped(n, DEFAULT_QUBIT_CAP)
}

pub fn smolin_state_capped(n: usize, max_qubits: usize) -> Result<MultiQubitState> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let qubits = 2 * n;
    if qubits > max_qubits {
        return Err(Error::DimensionTooLarge {
            requested: qubits,
            cap: max_qubits,
        });
    }
    let dim = 1usize << qubits;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut rho = ComplexMatrix::identity(dim);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        let s = pauli(p);
        let mut t = s.clone();
        for _ in 1..qubits {
            t = kron(&t, &s);
        }
        rho = &rho + &t.scale_real(sign);
    }
    MultiQubitState::new(qubits, rho.scale_real(1.0 / dim as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermitian_eigenvalues, numerical_rank};
    use approx::assert_abs_diff_eq;

    #[test]
    fn flip_d2_entries() {
        let f = flip_operator(2).unwrap();
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                1., 0., 0., 0., //
                0., 0., 1., 0., //
                0., 1., 0., 0., //
                0., 0., 0., 1.,
            ],
        )
        .unwrap();
        assert_eq!(f, expected);
        assert!(flip_operator(1).is_err());
    }

    #[test]
    fn flip_trace_and_involution() {
        for d in 2..=4 {
            let f = flip_operator(d).unwrap();
            // one fixed basis pair |aa> per a
            assert_abs_diff_eq!(f.trace().re, d as f64, epsilon = 1e-15);
            assert_eq!(f.matmul(&f), ComplexMatrix::identity(d * d));
            assert!(f.is_hermitian(0.0));
        }
    }

    #[test]
    fn flip_swaps_product_vectors() {
        let d = 3;
        let f = flip_operator(d).unwrap();
        for a in 0..d {
            for b in 0..d {
                let mut ab = vec![c64(0.0); 9];
                ab[a * d + b] = c64(1.0);
                let out = f.mul_vec(&ab);
                assert_eq!(out[b * d + a], c64(1.0));
            }
        }
    }

    #[test]
    fn symmetric_projector_rank_and_action() {
        for (d, rank) in [(2, 3), (3, 6)] {
            let p = symmetric_projector(d).unwrap();
            assert!(p.matmul(&p).distance(&p) < 1e-15);
            assert_eq!(numerical_rank(&p, 1e-9).unwrap(), rank);
        }
        let p = symmetric_projector(2).unwrap();
        let out = p.mul_vec(&[c64(0.0), c64(1.0), c64(0.0), c64(0.0)]);
        assert_eq!(out, vec![c64(0.0), c64(0.5), c64(0.5), c64(0.0)]);
    }

    #[test]
    fn flip_acts_on_projectors() {
        let d = 3;
        let f = flip_operator(d).unwrap();
        let ps = symmetric_projector(d).unwrap();
        let pa = antisymmetric_projector(d).unwrap();
        assert!(f.matmul(&ps).distance(&ps) < 1e-15);
        assert!(f.matmul(&pa).distance(&pa.scale_real(-1.0)) < 1e-15);
    }

    #[test]
    fn rho33_is_symmetric_unit_trace() {
        let s = builtin_rho33();
        assert_abs_diff_eq!(s.rho().trace().re, 1.0, epsilon = 1e-12);
        assert!(s.is_symmetric(1e-12));
        assert!(s.rho().is_hermitian(1e-15));
    }

    #[test]
    fn smolin_four_qubits() {
        let s = smolin_state(2).unwrap();
        assert_eq!(s.qubits(), 4);
        assert_abs_diff_eq!(s.rho().trace().re, 1.0, epsilon = 1e-15);
        let ev = hermitian_eigenvalues(s.rho()).unwrap();
        // projector onto a 4-dimensional subspace, weight 1/4 each
        assert!(ev[0] >= -1e-12);
        assert_abs_diff_eq!(ev[15], 0.25, epsilon = 1e-12);
        let zeros = ev.iter().filter(|x| x.abs() < 1e-12).count();
        assert_eq!(zeros, 12);
    }

    #[test]
    fn smolin_cap() {
        assert!(matches!(
            smolin_state(5),
            Err(Error::DimensionTooLarge {
                requested: 10,
                cap: 8
            })
        ));
        assert!(smolin_state(0).is_err());
        assert!(smolin_state_capped(3, 6).is_ok());
    }
}
