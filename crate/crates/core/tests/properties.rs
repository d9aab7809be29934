//! Cross-module properties checked on random inputs.

use compspace_core::bridge::{classify_rank2, trivial_iff_irreducible_pair};
use compspace_core::lie::{
    self, adjoint_representation, derived_series, invariant_subspace_witness, is_absolutely_irreducible,
    transport_bracket, upper_triangular_algebra, verify_lie_algebra, verify_representation,
};
use compspace_core::linalg::{preimage_subspace, rank_factor};
use compspace_core::pencil::{pencil_constant_rank, pencil_of};
use compspace_core::space::{
    brute_force_compression_fp, brute_force_rank2, common_kernel_and_image, constant_rank_verdict,
    detect_compression_rank2, fixtures, generic_rank, random_equivalent, verify_certificate, ConstantRankStatus,
    DEFAULT_BUDGET,
};
use compspace_core::{Field, Mat, MatrixSpace, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rational;
const RETRIES: usize = 16;

fn small_prime() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(3)), Just(Field::Prime(5))]
}

/// A random space with `m, n <= 4`, `d <= 4` and generic rank at most 2.
fn rank2_space(field: Field, seed: u64) -> Option<MatrixSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = fixtures::random_small_space(field, &mut rng)?;
    (generic_rank(&space, seed).ok()?.generic_rank <= 2).then_some(space)
}

fn status_tag(status: &Option<ConstantRankStatus>) -> String {
    serde_json::to_value(status).unwrap()["status"].to_string()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_equals_transpose_rank(seed in any::<u64>(), prime in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = if prime { Field::Prime(7) } else { Q };
        let a = Mat::random(field, rng.gen_range(1..6), rng.gen_range(1..6), &mut rng, 4);
        let rf = rank_factor(&a);
        prop_assert_eq!(rf.rank, a.transpose().rank());
        prop_assert_eq!(rf.rank + rf.kernel.dim(), a.cols());
        prop_assert_eq!(rf.image.dim(), rf.rank);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..6);
        let vectors = (0..rng.gen_range(0..5))
            .map(|_| (0..n).map(|_| Q.random(&mut rng, 5)).collect())
            .collect();
        let u = Subspace::from_vectors(Q, n, vectors).unwrap();
        let again = Subspace::from_vectors(Q, n, u.basis().to_vec()).unwrap();
        prop_assert_eq!(again, u);
    }

    #[test]
    fn preimage_is_largest_subspace_mapped_inside(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (rng.gen_range(1..5), rng.gen_range(1..5));
        let a = Mat::random(Q, m, n, &mut rng, 3);
        let w = Subspace::from_vectors(Q, m, vec![(0..m).map(|_| Q.random(&mut rng, 3)).collect()]).unwrap();
        let pre = preimage_subspace(&a, &w).unwrap();
        prop_assert!(w.contains_subspace(&pre.image_under(&a).unwrap()));
        prop_assert!(pre.contains_subspace(&a.kernel()));
        for _ in 0..8 {
            let u: Vec<_> = (0..n).map(|_| Q.random(&mut rng, 3)).collect();
            prop_assert_eq!(w.contains(&a.mul_vec(&u)), pre.contains(&u));
        }
    }

    #[test]
    fn detector_agrees_with_oracle(field in small_prime(), seed in any::<u64>()) {
        let Some(space) = rank2_space(field, seed) else { return Ok(()) };
        let detected = detect_compression_rank2(&space, seed, RETRIES).unwrap();
        if let Some(cert) = &detected {
            prop_assert!(verify_certificate(&space, cert));
        }
        let oracle = brute_force_rank2(&space, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(detected.is_some(), oracle.iter().any(|o| o.certificate.is_some()));
    }

    #[test]
    fn compressibility_is_transpose_dual(field in small_prime(), seed in any::<u64>()) {
        let Some(space) = rank2_space(field, seed) else { return Ok(()) };
        let dual = space.transpose();
        for (k1, k2) in [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)] {
            let direct = brute_force_compression_fp(&space, k1, k2, DEFAULT_BUDGET).unwrap();
            let swapped = brute_force_compression_fp(&dual, k2, k1, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(direct.is_some(), swapped.is_some(), "split ({}, {})", k1, k2);
        }
    }

    #[test]
    fn verdicts_survive_equivalence(field in small_prime(), seed in any::<u64>()) {
        let Some(space) = rank2_space(field, seed) else { return Ok(()) };
        let moved = random_equivalent(&space, seed);
        let p = field.order().unwrap();
        let before = constant_rank_verdict(&space, p).unwrap();
        let after = constant_rank_verdict(&moved, p).unwrap();
        prop_assert_eq!(before.generic_rank, after.generic_rank);
        prop_assert_eq!(status_tag(&before.constant_rank), status_tag(&after.constant_rank));
        let a = classify_rank2(&space, seed, RETRIES).unwrap();
        let b = classify_rank2(&moved, seed, RETRIES).unwrap();
        prop_assert_eq!(a.primitive, b.primitive);
        prop_assert_eq!(a.split, b.split);
    }

    #[test]
    fn common_spaces_bound_the_rank(field in small_prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(space) = fixtures::random_small_space(field, &mut rng) else { return Ok(()) };
        let rank = generic_rank(&space, seed).unwrap().generic_rank;
        let common = common_kernel_and_image(&space);
        prop_assert!(common.image.dim() >= rank);
        prop_assert!(common.kernel.codim() >= rank);
    }

    #[test]
    fn constant_rank_pencils_are_exactly_certified(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..5);
        let space = MatrixSpace::new(vec![Mat::random(Q, 2, n, &mut rng, 3), Mat::random(Q, 2, n, &mut rng, 3)]);
        let Ok(space) = space else { return Ok(()) };
        let (a, b) = pencil_of(&space).unwrap();
        let pencil = pencil_constant_rank(a, b).unwrap();
        prop_assume!(pencil.normal_rank == 2);
        let verdict = constant_rank_verdict(&space, 101).unwrap();
        let certified = matches!(verdict.constant_rank, Some(ConstantRankStatus::ExactCertified { .. }));
        prop_assert_eq!(pencil.constant_rank, certified);
    }

    #[test]
    fn transported_brackets_stay_lie(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = lie::fixtures::scaling_algebra(Q, n);
        let phi = Mat::random_invertible(Q, g.dim(), &mut rng, 3);
        let h = transport_bracket(&phi, &g).unwrap();
        prop_assert!(verify_lie_algebra(&h));
        prop_assert_eq!(derived_series(&h).dims, derived_series(&g).dims);
        prop_assert!(verify_representation(&adjoint_representation(&h)));
    }

    #[test]
    fn triangular_representations_are_reducible(seed in any::<u64>(), k in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, tautological) = upper_triangular_algebra(k, Q).unwrap();
        let p = Mat::random_invertible(Q, k, &mut rng, 3);
        let moved = tautological.conjugate(&p).unwrap();
        prop_assert!(verify_representation(&moved));
        let before = is_absolutely_irreducible(&tautological);
        let after = is_absolutely_irreducible(&moved);
        prop_assert!(!after.irreducible);
        prop_assert_eq!(before, after);
        if let Some(u) = invariant_subspace_witness(&moved, seed, RETRIES) {
            prop_assert!(u.dim() > 0 && u.dim() < k);
            for rho in &moved.rho {
                prop_assert!(u.contains_subspace(&u.image_under(rho).unwrap()));
            }
        }
    }

    #[test]
    fn irreducibility_survives_change_of_basis(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sl2 = lie::fixtures::sl2(Q);
        let adjoint = adjoint_representation(&sl2);
        let p = Mat::random_invertible(Q, 3, &mut rng, 3);
        let moved = adjoint.conjugate(&p).unwrap();
        prop_assert_eq!(is_absolutely_irreducible(&adjoint), is_absolutely_irreducible(&moved));
        prop_assert!(is_absolutely_irreducible(&moved).irreducible);
    }
}

#[test]
fn biconditional_holds_for_larger_degrees() {
    for n in 0..=40 {
        let report = trivial_iff_irreducible_pair(n).unwrap();
        assert_eq!(report.trivial, report.has_irreducible_pair, "degree {n}");
    }
}

#[test]
fn classification_matches_oracle_on_reducible_corpus() {
    for p in [3, 5, 7] {
        let field = Field::Prime(p);
        let corpus = [
            fixtures::skew3(field),
            fixtures::bordered(field, 4),
            fixtures::l2_pencil(field),
            fixtures::diag_pencil(field),
        ];
        for space in corpus {
            let report = classify_rank2(&space, 0, RETRIES).unwrap();
            let oracle = brute_force_rank2(&space, DEFAULT_BUDGET).unwrap();
            assert_eq!(
                !report.primitive,
                oracle.iter().any(|o| o.certificate.is_some()),
                "{space:?} mod {p}"
            );
            for summand in &report.rep_view {
                assert!(summand.verified);
                assert!(summand.irreducibility.irreducible);
                assert_eq!(summand.irreducibility.enveloping_dim, 1);
            }
        }
    }
}
