//! Seeded random states and operators.
//!
//! Every generator takes an explicit 64-bit seed and draws from ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), so a failing property case
//! replays exactly from its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{flip_operator, symmetric_projector, BipartiteState};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, kron_vec, normalize, Complex64, ComplexMatrix};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut StateRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
pub fn ginibre(rows: usize, cols: usize, rng: &mut StateRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniformly distributed unit vector in `C^d`.
pub fn random_unit_vector(d: usize, rng: &mut StateRng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    normalize(&mut v);
    v
}

/// Hermitian matrix with unit Hilbert-Schmidt norm.
pub fn random_hermitian(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    let g = ginibre(d, d, rng).hermitian_part();
    let n = g.frobenius_norm();
    g.scale_real(1.0 / n)
}

/// Unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    let h = ginibre(d, d, rng).hermitian_part();
    hermitian_eig(&h)
        .expect("hermitian part is Hermitian")
        .eigenvectors
}

/// Random full-rank density matrix `G G^dagger / Tr` of size `n`.
pub fn random_density_matrix(n: usize, rng: &mut StateRng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    m.scale_real(1.0 / t).hermitian_part()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// `Pi_S G G^dagger Pi_S / Tr(.)` with a square Ginibre matrix `G`.
pub fn random_symmetric_state(d: usize, seed: u64) -> Result<BipartiteState> {
    check_dim(d)?;
    let mut rng = rng_from_seed(seed);
    let p = symmetric_projector(d)?;
    let g = ginibre(d * d, d * d, &mut rng);
    let pg = p.matmul(&g);
    let m = pg.matmul(&pg.adjoint());
    let t = m.trace().re;
    BipartiteState::new(d, m.scale_real(1.0 / t).hermitian_part())
}

/// `sum_k p_k |phi_k><phi_k| (x) |phi_k><phi_k|` with random unit vectors and
/// weights drawn uniformly from the simplex.
pub fn random_separable_symmetric_state(
    d: usize,
    terms: usize,
    seed: u64,
) -> Result<BipartiteState> {
    check_dim(d)?;
    if terms == 0 {
        return Err(Error::Validation("at least one term is required".into()));
    }
    let mut rng = rng_from_seed(seed);
    // exponential spacings give a uniform point on the simplex
    let raw: Vec<f64> = (0..terms)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let mut rho = ComplexMatrix::zeros(d * d, d * d);
    for w in raw {
        let phi = random_unit_vector(d, &mut rng);
        let pp = kron_vec(&phi, &phi);
        rho = &rho + &ComplexMatrix::outer(&pp, &pp).scale_real(w / total);
    }
    BipartiteState::new(d, rho.hermitian_part())
}

/// `(sigma + F sigma F) / 2` for a random full-rank `sigma`.
pub fn random_permutationally_invariant_state(d: usize, seed: u64) -> Result<BipartiteState> {
    check_dim(d)?;
    let mut rng = rng_from_seed(seed);
    let sigma = random_density_matrix(d * d, &mut rng);
    let f = flip_operator(d)?;
    let swapped = f.matmul(&sigma).matmul(&f);
    BipartiteState::new(d, (&sigma + &swapped).scale_real(0.5))
}
