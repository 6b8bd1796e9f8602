//! Bipartite and multi-qubit density matrices.
//!
//! A [`BipartiteState`] on two `d`-level systems stores
//! `rho[(k*d + m), (l*d + n)] = rho_{kl,mn}` for the operator
//! `sum rho_{kl,mn} |k><l| (x) |m><n|`, i.e. Alice's index is the slow one.

mod builtin;
pub mod random;

pub use builtin::{
    antisymmetric_projector, builtin_rho33, flip_operator, pauli, smolin_state,
    smolin_state_capped, symmetric_projector, Pauli, DEFAULT_QUBIT_CAP,
};

use crate::error::{Error, Result};
use crate::numerics::{c64, hermitian_eig, kron_vec, normalize, tol, Complex64, ComplexMatrix};

/// Checks hermiticity, unit trace and positivity, all within `tol`.
pub fn validate_density_matrix(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::NonSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    let dev = rho.hermiticity_deviation();
    if dev > tol {
        return Err(Error::Validation(format!(
            "not Hermitian (deviation {dev:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::Validation(format!(
            "trace is {:.12}{:+.3e}i, expected 1",
            tr.re, tr.im
        )));
    }
    let min = hermitian_eig(&rho.hermitian_part())?.min_eigenvalue();
    if min < -tol {
        return Err(Error::Validation(format!(
            "negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// Density matrix of two `d`-level systems.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d: usize,
    rho: ComplexMatrix,
}

impl BipartiteState {
    pub fn new(d: usize, rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(d, rho, tol::PSD)
    }

    pub fn with_tolerance(d: usize, rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if rho.shape() != (d * d, d * d) {
            return Err(Error::ShapeMismatch {
                expected: (d * d, d * d),
                found: rho.shape(),
            });
        }
        validate_density_matrix(&rho, tol)?;
        Ok(Self { d, rho })
    }

    /// `|psi><psi|` after normalizing `psi`.
    pub fn from_pure(d: usize, psi: &[Complex64]) -> Result<Self> {
        let mut v = psi.to_vec();
        normalize(&mut v);
        Self::new(d, ComplexMatrix::outer(&v, &v))
    }

    /// `rho_a (x) rho_b`.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch {
                expected: a.shape(),
                found: b.shape(),
            });
        }
        Self::new(a.rows(), crate::numerics::kron(a, b))
    }

    /// `|phi phi><phi phi|`.
    pub fn product_symmetric(phi: &[Complex64]) -> Result<Self> {
        let mut v = phi.to_vec();
        normalize(&mut v);
        Self::from_pure(v.len(), &kron_vec(&v, &v))
    }

    /// Normalized projector onto the symmetric subspace.
    pub fn symmetric_subspace_mixed(d: usize) -> Result<Self> {
        let p = symmetric_projector(d)?;
        let t = p.trace().re;
        Self::new(d, p.scale_real(1.0 / t))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::new(d, ComplexMatrix::identity(d * d).scale_real(1.0 / (d * d) as f64))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// `rho_{kl,mn}`: coefficient of `|k><l| (x) |m><n|`.
    pub fn entry(&self, k: usize, l: usize, m: usize, n: usize) -> Complex64 {
        self.rho[(k * self.d + m, l * self.d + n)]
    }

    /// `Tr(rho X)`.
    pub fn expectation(&self, x: &ComplexMatrix) -> Complex64 {
        crate::numerics::trace_of_product(&self.rho, x)
    }

    /// Reduced state of the first party.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let d = self.d;
        ComplexMatrix::from_fn(d, d, |k, l| (0..d).map(|m| self.entry(k, l, m, m)).sum())
    }

    /// Reduced state of the second party.
    pub fn reduced_b(&self) -> ComplexMatrix {
        let d = self.d;
        ComplexMatrix::from_fn(d, d, |m, n| (0..d).map(|k| self.entry(k, k, m, n)).sum())
    }

    /// `rho = F rho = rho F` within `tol` (Frobenius).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let f = flip_operator(self.d).expect("d >= 2 checked at construction");
        f.matmul(&self.rho).distance(&self.rho) <= tol
            && self.rho.matmul(&f).distance(&self.rho) <= tol
    }

    /// `F rho F = rho` within `tol` (Frobenius).
    pub fn is_permutationally_invariant(&self, tol: f64) -> bool {
        self.swapped().distance(&self.rho) <= tol
    }

    /// `F rho F`, computed as an index permutation.
    pub fn swapped(&self) -> ComplexMatrix {
        let d = self.d;
        ComplexMatrix::from_fn(d * d, d * d, |r, c| {
            let (k, m) = (r / d, r % d);
            let (l, n) = (c / d, c % d);
            self.rho[(m * d + k, n * d + l)]
        })
    }

    /// Convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let m = &self.rho.scale_real(p) + &other.rho.scale_real(1.0 - p);
        Self::new(self.d, m)
    }
}

pub fn is_symmetric(s: &BipartiteState, tol: f64) -> bool {
    s.is_symmetric(tol)
}

pub fn is_permutationally_invariant(s: &BipartiteState, tol: f64) -> bool {
    s.is_permutationally_invariant(tol)
}

/// Density matrix of `n` qubits; qubit 0 is the most significant bit of the
/// computational-basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQubitState {
    n: usize,
    rho: ComplexMatrix,
}

impl MultiQubitState {
    pub fn new(n: usize, rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(n, rho, tol::PSD)
    }

    pub fn with_tolerance(n: usize, rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if n > 16 {
            return Err(Error::DimensionTooLarge {
                requested: n,
                cap: 16,
            });
        }
        let dim = 1usize << n;
        if rho.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch {
                expected: (dim, dim),
                found: rho.shape(),
            });
        }
        validate_density_matrix(&rho, tol)?;
        Ok(Self { n, rho })
    }

    pub fn from_pure(n: usize, psi: &[Complex64]) -> Result<Self> {
        let mut v = psi.to_vec();
        normalize(&mut v);
        Self::new(n, ComplexMatrix::outer(&v, &v))
    }

    /// Computational basis state given by the bits of `index`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n;
        let mut v = vec![c64(0.0); dim];
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        v[index] = c64(1.0);
        Self::from_pure(n, &v)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Applies the permutation that moves qubit `perm[j]` to position `j`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<ComplexMatrix> {
        permute_qubit_matrix(&self.rho, self.n, perm)
    }
}

/// Reorders the tensor factors of a `2^n x 2^n` operator so that output
/// position `j` carries input qubit `perm[j]`.
pub fn permute_qubit_matrix(m: &ComplexMatrix, n: usize, perm: &[usize]) -> Result<ComplexMatrix> {
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&q| q >= n || std::mem::replace(&mut seen[q], true)) {
        return Err(Error::BadPartition(format!(
            "{perm:?} is not a permutation of 0..{n}"
        )));
    }
    let dim = 1usize << n;
    let map = |idx: usize| -> usize {
        // bit of output position j = bit of input qubit perm[j]
        let mut out = 0;
        for (j, &q) in perm.iter().enumerate() {
            let bit = (idx >> (n - 1 - q)) & 1;
            out |= bit << (n - 1 - j);
        }
        out
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let rr = map(r);
        for c in 0..dim {
            out[(rr, map(c))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Split of `n` qubits into two non-empty complementary groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// `left` names the qubits of the first party; the rest form the second.
    pub fn new(n: usize, left: &[usize]) -> Result<Self> {
        let mut l = left.to_vec();
        l.sort_unstable();
        if l.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadPartition(format!("duplicate qubit in {left:?}")));
        }
        if let Some(&q) = l.iter().find(|&&q| q >= n) {
            return Err(Error::BadPartition(format!(
                "qubit {q} out of range for {n} qubits"
            )));
        }
        if l.is_empty() || l.len() == n {
            return Err(Error::BadPartition(
                "both sides of the partition must be non-empty".into(),
            ));
        }
        let right = (0..n).filter(|q| !l.contains(q)).collect();
        Ok(Self { n, left: l, right })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// Every bipartition with `k` qubits on the left.
    pub fn all_with_left_size(n: usize, k: usize) -> Vec<Self> {
        (0usize..1 << n)
            .filter(|mask| mask.count_ones() as usize == k)
            .filter_map(|mask| {
                let left: Vec<usize> = (0..n).filter(|q| mask & (1 << (n - 1 - q)) != 0).collect();
                Self::new(n, &left).ok()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ket(d: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![c64(0.0); d];
        v[i] = c64(1.0);
        v
    }

    fn bell(sign: f64) -> BipartiteState {
        let mut v = vec![c64(0.0); 4];
        v[1] = c64(1.0);
        v[2] = c64(sign);
        BipartiteState::from_pure(2, &v).unwrap()
    }

    #[test]
    fn validation_errors() {
        let not_unit = ComplexMatrix::identity(4);
        assert!(matches!(
            BipartiteState::new(2, not_unit),
            Err(Error::Validation(_))
        ));
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5, 0.0, 0.0]);
        assert!(matches!(
            BipartiteState::new(2, negative),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            BipartiteState::new(2, ComplexMatrix::identity(3)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            BipartiteState::new(1, ComplexMatrix::identity(1)),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn symmetry_predicates() {
        let triplet = bell(1.0);
        let singlet = bell(-1.0);
        assert!(triplet.is_symmetric(1e-9));
        assert!(!singlet.is_symmetric(1e-9));
        assert!(singlet.is_permutationally_invariant(1e-9));
        let ab = BipartiteState::from_pure(2, &kron_vec(&ket(2, 0), &ket(2, 1))).unwrap();
        assert!(!ab.is_permutationally_invariant(1e-9));
        assert!(!ab.is_symmetric(1e-9));
    }

    #[test]
    fn reduced_states() {
        let a = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let b = ComplexMatrix::from_real_diagonal(&[0.1, 0.9]);
        let s = BipartiteState::product(&a, &b).unwrap();
        assert!(s.reduced_a().distance(&a) < 1e-15);
        assert!(s.reduced_b().distance(&b) < 1e-15);
        let r = bell(1.0).reduced_a();
        assert_abs_diff_eq!(r[(0, 0)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn bipartition_checks() {
        assert!(Bipartition::new(4, &[0, 1]).is_ok());
        assert!(matches!(Bipartition::new(4, &[]), Err(Error::BadPartition(_))));
        assert!(matches!(
            Bipartition::new(4, &[0, 1, 2, 3]),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(Bipartition::new(4, &[4]), Err(Error::BadPartition(_))));
        assert!(matches!(Bipartition::new(4, &[1, 1]), Err(Error::BadPartition(_))));
        assert_eq!(Bipartition::new(4, &[2, 0]).unwrap().right(), &[1, 3]);
        assert_eq!(Bipartition::all_with_left_size(4, 2).len(), 6);
        assert_eq!(Bipartition::all_with_left_size(4, 1).len(), 4);
    }

    #[test]
    fn qubit_permutation_moves_bits() {
        // |01> -> |10> when swapping qubits
        let s = MultiQubitState::basis(2, 0b01).unwrap();
        let p = s.permute_qubits(&[1, 0]).unwrap();
        assert_eq!(p[(0b10, 0b10)], c64(1.0));
        assert!(s.permute_qubits(&[0, 0]).is_err());
    }
}
