use std::collections::BTreeMap;

use proptest::prelude::*;
use randspace_core::entropy::{conditional_entropy, eur_report, shannon};
use randspace_core::gen::{random_model, RandomModelLimits};
use randspace_core::{LogBase, Pmf};

fn pmf_strategy() -> impl Strategy<Value = Pmf> {
    prop::collection::btree_map(-6i64..=6, 0.01f64..1.0, 1..6)
        .prop_map(|w| Pmf::from_weights(w).unwrap().0)
}

proptest! {
    #[test]
    fn entropy_is_concave(p in pmf_strategy(), q in pmf_strategy(), w in 0.0f64..=1.0) {
        let mix = Pmf::mixture([(w, &p), (1.0 - w, &q)]).unwrap();
        for base in [LogBase::Two, LogBase::E] {
            let lhs = shannon(&mix, base);
            let rhs = w * shannon(&p, base) + (1.0 - w) * shannon(&q, base);
            prop_assert!(lhs >= rhs - 1e-12);
        }
    }

    #[test]
    fn conditioning_reduces_entropy(
        rows in prop::collection::vec(pmf_strategy(), 1..5),
        weights in prop::collection::vec(0.01f64..1.0, 5),
    ) {
        let family: BTreeMap<i64, Pmf> = rows.into_iter().enumerate().map(|(i, r)| (i as i64, r)).collect();
        let y = Pmf::from_weights(family.keys().map(|&k| (k, weights[k as usize]))).unwrap().0;
        let h = conditional_entropy(&family, &y, LogBase::Two).unwrap();
        prop_assert!(h.value <= h.marginal + 1e-12);
        prop_assert!(h.reduces());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eur_slack_is_nonnegative(seed in any::<u64>()) {
        let model = random_model(seed, &RandomModelLimits::default()).unwrap();
        for n in 0..model.horizon() {
            let r = eur_report(&model, n, LogBase::Two).unwrap();
            prop_assert!(r.slack >= -1e-9, "n={} slack={}", n, r.slack);
            prop_assert!(r.chain_holds(1e-9));
        }
    }
}
