use proptest::prelude::*;

use symsep::criteria::{
    expectation_value_matrix, hermitian_basis, matrix_unit_basis, partial_transpose,
    partial_transpose_matrix, realign, realign_matrix,
};
use symsep::io::{parse_state, state_to_json, StateFile};
use symsep::numerics::{hermitian_eigenvalues, singular_values, trace_norm, ComplexMatrix};
use symsep::schmidt::{quasi_mixture_build, schmidt_decompose, shift_and_normalize, Parties};
use symsep::states::random::{
    random_density_matrix, random_hermitian, random_permutationally_invariant_state,
    random_separable_symmetric_state, random_symmetric_state, random_unit_vector, rng_from_seed,
};
use symsep::states::{flip_operator, BipartiteState};
use symsep::witness::{
    certify_by_grid, optimize_symmetric_product, see_saw, symmetric_product_value,
    SchmidtOperator,
};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(d in 2usize..5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let m = random_density_matrix(d * d, &mut rng);
        let twice = partial_transpose_matrix(&partial_transpose_matrix(&m, d), d);
        prop_assert!(twice.distance(&m) < 1e-15);
    }

    #[test]
    fn realignment_preserves_frobenius_norm(d in 2usize..5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let m = random_density_matrix(d * d, &mut rng);
        let r = realign_matrix(&m, d, d);
        prop_assert!((r.frobenius_norm() - m.frobenius_norm()).abs() < 1e-13);
    }

    #[test]
    fn symmetric_states_satisfy_the_flip_identity(d in 2usize..5, seed in any::<u64>()) {
        let s = random_symmetric_state(d, seed).unwrap();
        let f = flip_operator(d).unwrap();
        let pt = partial_transpose(&s);
        prop_assert!(f.matmul(&realign(&s)).distance(&pt) < 1e-10);
        let eta = expectation_value_matrix(&s, &matrix_unit_basis(d)).unwrap();
        prop_assert!(eta.distance(&pt) < 1e-10);
    }

    #[test]
    fn realignment_spectrum_matches_partial_transpose(d in 2usize..5, seed in any::<u64>()) {
        let s = random_symmetric_state(d, seed).unwrap();
        let sv = singular_values(&realign(&s));
        let mut ev: Vec<f64> = hermitian_eigenvalues(&partial_transpose(&s))
            .unwrap()
            .into_iter()
            .map(f64::abs)
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in sv.iter().zip(&ev) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_reconstructs_and_sums(d in 2usize..5, seed in any::<u64>(), pi in any::<bool>()) {
        let s = if pi {
            random_permutationally_invariant_state(d, seed).unwrap()
        } else {
            random_symmetric_state(d, seed).unwrap()
        };
        let dec = schmidt_decompose(&s, &hermitian_basis(d).unwrap()).unwrap();
        prop_assert!(dec.reconstruct().distance(s.rho()) < 1e-9);
        let sum = dec.coefficient_sum();
        if pi {
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&sum));
        } else {
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn states_round_trip_through_json(d in 2usize..5, seed in any::<u64>()) {
        let s = StateFile::Bipartite(random_symmetric_state(d, seed).unwrap());
        let back = parse_state(&state_to_json(&s).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn shifted_quasi_mixtures_pass_ccnr(d in 2usize..4, terms in 1usize..6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let ops: Vec<ComplexMatrix> = (0..terms).map(|_| random_hermitian(d, &mut rng)).collect();
        let coeffs: Vec<f64> = (0..terms).map(|k| 0.1 + k as f64).collect();
        let o = quasi_mixture_build(&coeffs, &ops, Parties::Two).unwrap();
        let rho = shift_and_normalize(&o).unwrap();
        prop_assert!(trace_norm(&realign_matrix(&rho, d, d)) <= 1.0 + 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn see_saw_never_decreases(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let basis = hermitian_basis(3).unwrap();
        let coeffs: Vec<f64> = (0..9).map(|_| rand::Rng::gen_range(&mut rng, -0.5..1.0)).collect();
        let m = SchmidtOperator::new(coeffs, basis.observables().to_vec()).unwrap().matrix();
        let run = see_saw(&m, &random_unit_vector(3, &mut rng), 5000).unwrap();
        prop_assert!(run.values.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!((run.value() - symmetric_product_value(&m, &run.vector)).abs() < 1e-10);
    }

    #[test]
    fn grid_never_beats_the_optimizer(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(4, &mut rng);
        let best = optimize_symmetric_product(&h, 16, 5000, seed).unwrap().best_value;
        prop_assert!(certify_by_grid(&h, 40).unwrap() <= best + 1e-6);
    }

    #[test]
    fn mixed_value_is_convex_combination_bound(seed in any::<u64>()) {
        // with nonnegative coefficients no mixed state beats the pure optimum
        let mut rng = rng_from_seed(seed);
        let basis = hermitian_basis(2).unwrap();
        let coeffs: Vec<f64> = (0..4).map(|_| rand::Rng::gen_range(&mut rng, 0.0..1.0)).collect();
        let op = SchmidtOperator::new(coeffs, basis.observables().to_vec()).unwrap();
        let best = op.maximize(16, 5000, seed).unwrap().best_value;
        for _ in 0..50 {
            let rho = random_density_matrix(2, &mut rng);
            prop_assert!(op.product_value_mixed(&rho).unwrap() <= best + 1e-6);
        }
    }

    #[test]
    fn separable_symmetric_states_are_ppt(d in 2usize..4, terms in 1usize..8, seed in any::<u64>()) {
        let s: BipartiteState = random_separable_symmetric_state(d, terms, seed).unwrap();
        let min = hermitian_eigenvalues(&partial_transpose(&s)).unwrap()[0];
        prop_assert!(min >= -1e-12);
    }
}
