//! Invariant checks on randomized inputs: spectral-kernel residuals,
//! unitary invariance, partial-trace/transpose algebra, measure ranges,
//! and the structural facts the metric evaluation relies on.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{conjugate, random_density, random_hermitian, random_unitary};
use qgeo::geometry::{identity_channel, McFunction};
use qgeo::matrix::{
    commutator_i, herm_eig, hs_inner, kron, partial_trace, partial_transpose, ComplexMatrix, Pauli,
    Subsystem,
};
use qgeo::{
    concurrence, metric_eval, negativity, pure_schmidt, tangent_from_generator, DensityMatrix,
    TangentVector,
};

#[test]
fn jacobi_reconstruction_residual_on_10k_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let n = if i % 2 == 0 { 2 } else { 4 };
        let m = random_hermitian(&mut rng, n);
        let eig = herm_eig(&m).unwrap();
        worst = worst.max(eig.reconstruct().max_abs_diff(&m));

        let ortho = &eig.basis.dagger() * &eig.basis;
        assert!(ortho.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-13);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }
    assert!(worst < 1e-12, "worst reconstruction residual = {worst:e}");
}

#[test]
fn measure_ranges_on_10k_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    for _ in 0..10_000 {
        let rho = random_density(&mut rng, 4);
        let n = negativity(&rho).unwrap();
        let c = concurrence(&rho).unwrap();
        assert!((0.0..=0.5).contains(&n), "negativity {n} out of range");
        assert!((0.0..=1.0).contains(&c), "concurrence {c} out of range");
    }
}

#[test]
fn product_states_carry_no_entanglement() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcafe);
    for _ in 0..200 {
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let rho = DensityMatrix::new(kron(a.matrix(), b.matrix())).unwrap();
        assert!(negativity(&rho).unwrap() < 1e-10);
        assert!(concurrence(&rho).unwrap() < 1e-10);
    }
}

#[test]
fn pure_state_concurrence_is_twice_negativity() {
    for i in 1..=99 {
        let rho = pure_schmidt(i as f64 / 100.0).unwrap();
        let n = negativity(&rho).unwrap();
        let c = concurrence(&rho).unwrap();
        assert!((c - 2.0 * n).abs() < 1e-12);
    }
}

#[test]
fn hs_inner_is_unitarily_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd00d);
    for _ in 0..200 {
        let x = random_hermitian(&mut rng, 4);
        let y = random_hermitian(&mut rng, 4);
        let u = random_unitary(&mut rng, 4);
        let before = hs_inner(&x, &y).unwrap();
        let after = hs_inner(&conjugate(&u, &x), &conjugate(&u, &y)).unwrap();
        assert!((before - after).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_of_kron_recovers_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..200 {
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 2);
        let joint = kron(&a, &b);
        let first = partial_trace(&joint, Subsystem::First).unwrap();
        let expected = a.scale(b.trace());
        assert!(first.max_abs_diff(&expected) < 1e-12);
        let second = partial_trace(&joint, Subsystem::Second).unwrap();
        assert!(second.max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }
}

#[test]
fn commutator_tangents_have_zero_diagonal_in_the_eigenbasis() {
    // The first metric sum vanishes identically for i[rho, K] tangents;
    // at diagonal rho the diagonal entries are exact zeros.
    let rho = ComplexMatrix::from_diagonal(&[0.36, 0.64]);
    for generator in [Pauli::X, Pauli::Y] {
        let t = commutator_i(&rho, &generator.matrix()).unwrap();
        assert_eq!(t[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(t[(1, 1)], Complex64::new(0.0, 0.0));
    }
}

#[test]
fn metric_agrees_with_direct_formula_at_diagonal_states() {
    let mc = McFunction::bures();
    let mut rng = ChaCha8Rng::seed_from_u64(0x00d1a6);
    for _ in 0..200 {
        let a = 0.05 + 0.9 * rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[a, 1.0 - a])).unwrap();
        let k = random_hermitian(&mut rng, 2);
        let tangent = tangent_from_generator(&rho, &k).unwrap();

        // Direct application in the given basis, no eigendecomposition.
        let t = tangent.matrix();
        let direct = mc.big_c() * (t[(0, 0)].re.powi(2) / a + t[(1, 1)].re.powi(2) / (1.0 - a))
            + 2.0 * t[(0, 1)].norm_sqr() * mc.c(a, 1.0 - a);
        let via_eigenbasis = metric_eval(&rho, &tangent, &mc).unwrap();
        assert!((direct - via_eigenbasis).abs() < 1e-12);
    }
}

#[test]
fn metric_is_positive_and_zero_only_on_zero_tangents() {
    let mc = McFunction::bures();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9051);
    for _ in 0..500 {
        let rho = common::random_full_rank_qubit(&mut rng, 1e-6);
        let k = random_hermitian(&mut rng, 2);
        let tangent = tangent_from_generator(&rho, &k).unwrap();
        let value = metric_eval(&rho, &tangent, &mc).unwrap();
        assert!(value >= 0.0);
        if tangent.max_component() > 1e-10 {
            assert!(value > 0.0);
        }
        if tangent.max_component() < 1e-14 {
            assert!(value < 1e-20);
        }
    }
}

#[test]
fn sx_and_sy_metrics_agree_at_real_diagonal_states() {
    let mc = McFunction::bures();
    for a in [0.05, 0.2, 0.36, 0.49, 0.77] {
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[a, 1.0 - a])).unwrap();
        let kx = metric_eval(
            &rho,
            &tangent_from_generator(&rho, &Pauli::X.matrix()).unwrap(),
            &mc,
        )
        .unwrap();
        let ky = metric_eval(
            &rho,
            &tangent_from_generator(&rho, &Pauli::Y.matrix()).unwrap(),
            &mc,
        )
        .unwrap();
        assert!((kx - ky).abs() < 1e-12);
    }
}

#[test]
fn metric_form_is_sesquilinear_in_real_combinations() {
    let mc = McFunction::bures();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf0f0);
    for _ in 0..100 {
        let rho = common::random_full_rank_qubit(&mut rng, 1e-6);
        let a = tangent_from_generator(&rho, &random_hermitian(&mut rng, 2)).unwrap();
        let b = tangent_from_generator(&rho, &random_hermitian(&mut rng, 2)).unwrap();
        let c = tangent_from_generator(&rho, &random_hermitian(&mut rng, 2)).unwrap();

        let sum = TangentVector::new(&b.matrix().scale_re(1.5) + c.matrix()).unwrap();
        let lhs = qgeo::metric_form(&rho, &a, &sum, &mc).unwrap();
        let rhs = qgeo::metric_form(&rho, &a, &b, &mc).unwrap() * 1.5
            + qgeo::metric_form(&rho, &a, &c, &mc).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }
}

#[test]
fn identity_channel_preserves_metric_exactly() {
    let mc = McFunction::bures();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d1d);
    let id = identity_channel(2);
    for _ in 0..50 {
        let rho = common::random_full_rank_qubit(&mut rng, 1e-6);
        let a = tangent_from_generator(&rho, &random_hermitian(&mut rng, 2)).unwrap();
        match qgeo::monotonicity_check(&rho, &a, &id, &mc).unwrap() {
            qgeo::geometry::MonotonicityVerdict::Checked(rep) => {
                assert!((rep.lhs - rep.rhs).abs() < 1e-12);
                assert!(rep.holds);
            }
            qgeo::geometry::MonotonicityVerdict::Skipped { reason } => {
                panic!("unexpected skip: {reason}")
            }
        }
    }
}

proptest! {
    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(
        seed in 0u64..1_000_000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, 4);
        let pt = partial_transpose(&m, Subsystem::First).unwrap();
        prop_assert!((pt.trace() - m.trace()).norm() < 1e-13);
        let back = partial_transpose(&pt, Subsystem::First).unwrap();
        prop_assert!(back.max_abs_diff(&m) < 1e-15);

        let pt2 = partial_transpose(&m, Subsystem::Second).unwrap();
        let back2 = partial_transpose(&pt2, Subsystem::Second).unwrap();
        prop_assert!(back2.max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn commutator_outputs_live_in_the_tangent_set(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, 4);
        let k = random_hermitian(&mut rng, 4);
        let t = commutator_i(rho.matrix(), &k).unwrap();
        prop_assert!(t.hermiticity_deficit() < 1e-12);
        prop_assert!(t.trace().norm() < 1e-12);
    }

    #[test]
    fn state_files_round_trip_exactly(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, 4);
        let dir = std::env::temp_dir().join(format!("qgeo_prop_{seed}"));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.json");
        qgeo::states::save_state(&path, &rho).unwrap();
        let back = qgeo::states::load_state(&path).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) == 0.0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
