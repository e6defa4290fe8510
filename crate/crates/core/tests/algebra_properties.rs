use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randspace_core::algebra::{
    entropy_sum_infimum, epsilon_entropy, gns_construct, is_commuting, luders_update,
    random_algebra_basis, random_pure_vector, random_state, random_unitary, spectral_pmf,
    AlgebraElement, CMatrix, State,
};
use randspace_core::{LogBase, SpectralPartition};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(d: usize, r: &mut ChaCha8Rng) -> CMatrix {
    let u = random_unitary(d, r);
    let v = random_unitary(d, r);
    &u + &v * Complex64::new(0.5, -0.25)
}

fn random_hermitian(d: usize, r: &mut ChaCha8Rng) -> AlgebraElement {
    let m = random_matrix(d, r);
    AlgebraElement::new(&m + m.adjoint()).unwrap()
}

/// `U diag(values) U*`.
fn with_spectrum(u: &CMatrix, values: &[f64]) -> AlgebraElement {
    let d = AlgebraElement::diag(values).unwrap();
    AlgebraElement::new(u * d.matrix() * u.adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_star_identity(seed in any::<u64>(), d in 1usize..=6) {
        let mut r = rng(seed);
        let a = AlgebraElement::new(random_matrix(d, &mut r)).unwrap();
        let n = a.operator_norm();
        prop_assert!(((&a.adjoint() * &a).operator_norm() - n * n).abs() <= 1e-10);
    }

    #[test]
    fn states_are_positive_functionals(seed in any::<u64>(), d in 1usize..=5, rank in 1usize..=5) {
        let mut r = rng(seed);
        let s = random_state(d, rank.min(d), &mut r);
        for _ in 0..8 {
            let b = AlgebraElement::new(random_matrix(d, &mut r)).unwrap();
            prop_assert!(s.expectation(&(&b.adjoint() * &b)).re >= -1e-12);
        }
    }

    #[test]
    fn gns_invariants(seed in any::<u64>(), d in 1usize..=4) {
        let mut r = rng(seed);
        let basis = random_algebra_basis(d, &mut r);
        let rank = 1 + (seed as usize) % d;
        let s = random_state(d, rank, &mut r);
        let t = gns_construct(&basis, &s).unwrap();
        prop_assert!(t.expectation_residual() <= 1e-10);
        prop_assert!(t.multiplicativity_residual() <= 1e-10);
        prop_assert!(t.star_residual() <= 1e-10);
        prop_assert!((t.cyclic_norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn spectral_pmf_normalized_and_coarsening_never_increases_entropy(
        seed in any::<u64>(),
        d in 1usize..=5,
        eps in 0.05f64..1.0,
    ) {
        let mut r = rng(seed);
        let a = random_hermitian(d, &mut r);
        let s = random_state(d, d, &mut r);
        let part = SpectralPartition::for_element(&a, eps).unwrap();
        let p = spectral_pmf(&a, &s, &part).unwrap();
        prop_assert!((p.total() - 1.0).abs() <= 1e-12);
        let fine = epsilon_entropy(&a, &s, eps, LogBase::Two).unwrap();
        let coarse = epsilon_entropy(&a, &s, 2.0 * eps, LogBase::Two).unwrap();
        prop_assert!(coarse <= fine + 1e-12, "fine={} coarse={}", fine, coarse);
    }

    #[test]
    fn luders_gives_states(seed in any::<u64>(), d in 2usize..=5, k in 1usize..=4) {
        let mut r = rng(seed);
        let s = random_state(d, d, &mut r);
        let u = random_unitary(d, &mut r);
        let k = k.min(d - 1);
        let values: Vec<f64> = (0..d).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
        let p = with_spectrum(&u, &values);
        let post = luders_update(&s, &p).unwrap();
        prop_assert!(State::new(post.density().clone()).is_ok());
        let again = luders_update(&post, &p).unwrap();
        prop_assert!((again.density() - post.density()).norm() <= 1e-10);
    }
}

/// Spectrum with neighbouring eigenvalues at least `gap` apart, in `[-1, 1]`.
fn separated(d: usize, gap: f64, r: &mut ChaCha8Rng) -> Vec<f64> {
    use rand::Rng;
    let slack = 2.0 - gap * (d - 1) as f64;
    let mut cuts: Vec<f64> = (0..d).map(|_| r.random_range(0.0..slack)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.iter()
        .enumerate()
        .map(|(i, c)| -1.0 + c + gap * i as f64)
        .collect()
}

#[test]
fn large_infimum_implies_non_commuting() {
    let mut r = rng(99);
    let mut flagged = 0;
    for trial in 0..40 {
        let d = 2 + trial % 3;
        let gap = 0.4;
        let u = random_unitary(d, &mut r);
        let v = if trial % 2 == 0 {
            u.clone()
        } else {
            random_unitary(d, &mut r)
        };
        let a = with_spectrum(&u, &separated(d, gap, &mut r));
        let b = with_spectrum(&v, &separated(d, gap, &mut r));
        let res = entropy_sum_infimum(&a, &b, 0.3, 0.3, LogBase::Two, 2_000, trial as u64).unwrap();
        let commuting = is_commuting(&a, &b).unwrap();
        if res.value > 0.05 {
            flagged += 1;
            assert!(
                !commuting,
                "trial {trial}: infimum {} for a commuting pair",
                res.value
            );
        }
        if commuting {
            assert!(
                res.value <= 0.01,
                "trial {trial}: commuting pair left at {}",
                res.value
            );
        }
    }
    assert!(flagged > 0);
}

#[test]
fn pure_states_from_random_vectors_are_valid() {
    let mut r = rng(5);
    for d in 1..=6 {
        let v = random_pure_vector(d, &mut r);
        assert!((v.norm() - 1.0).abs() <= 1e-12);
        assert!(State::pure(&v).is_ok());
    }
}
