use proptest::prelude::*;
use randspace_core::gen::{random_model, RandomModelLimits};
use randspace_core::{ParticleModel, Pmf, SpaceEnsemble, WalkSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn velocity_direct_equals_charfn_route(seed in any::<u64>()) {
        let model = random_model(seed, &RandomModelLimits::default()).unwrap();
        for n in 0..model.horizon() {
            let direct = model.velocity_pmf(n).unwrap();
            let inverted = model.velocity_pmf_via_charfn(n).unwrap();
            prop_assert!(direct.approx_eq(&inverted, 1e-10), "n={}", n);
        }
    }

    #[test]
    fn induced_laws_are_normalized(seed in any::<u64>()) {
        let model = random_model(seed, &RandomModelLimits::default()).unwrap();
        for n in 0..=model.horizon() {
            let law = model.position_pmf(n).unwrap();
            prop_assert!((law.pmf.total() - 1.0).abs() <= 1e-12);
            prop_assert!(law.raw_mass > 0.0);
            if n < model.horizon() {
                for c in law.pmf.support() {
                    let row = model.induced_transition_row(n, c).unwrap();
                    prop_assert!((row.pmf.total() - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn transition_bound_holds(seed in any::<u64>()) {
        let model = random_model(seed, &RandomModelLimits::default()).unwrap();
        for n in 0..model.horizon() {
            for c in model.position_pmf(n).unwrap().pmf.support() {
                let check = model.transition_bound_check(n, c).unwrap();
                prop_assert!(check.holds, "n={} c={} {:?}", n, c, check.worst);
            }
        }
    }

    #[test]
    fn uniform_equivalent_rows_are_translation_covariant(
        p in 0.1f64..0.9,
        walks in 1usize..5,
        atoms in prop::collection::btree_map(-3i64..=3, 0.05f64..1.0, 1..4),
    ) {
        let init = Pmf::from_weights(atoms).unwrap().0;
        let ens = SpaceEnsemble::identical(WalkSpec::new(p, init).unwrap(), walks, 4).unwrap();
        let model = ParticleModel::uniform(ens);
        for n in 0..4 {
            let support: Vec<i64> = model.position_pmf(n).unwrap().pmf.support().collect();
            let first = model.induced_transition_row(n, support[0]).unwrap().pmf;
            for &c in &support[1..] {
                let row = model.induced_transition_row(n, c).unwrap().pmf;
                let shift = c - support[0];
                let moved = first.shift(-shift);
                prop_assert!(row.approx_eq(&moved, 1e-12), "n={} c={}", n, c);
            }
        }
    }
}
