use markov_core::corpus;
use markov_core::hm::{kyfan, mu_diff, random_function, sf_add, sf_neg, truncate, BaseGroup, StepFunction, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn base() -> impl Strategy<Value = BaseGroup> {
    prop_oneof![
        Just(BaseGroup::cyclic(2)),
        Just(BaseGroup::cyclic(6)),
        Just(BaseGroup::Discrete(vec![2, 4])),
        Just(BaseGroup::Circle),
    ]
}

fn triple() -> impl Strategy<Value = (StepFunction, StepFunction, StepFunction)> {
    (base(), any::<u64>()).prop_map(|(b, seed)| {
        let mut r = corpus::rng(seed);
        (
            random_function(&mut r, &b, 5, 10),
            random_function(&mut r, &b, 5, 10),
            random_function(&mut r, &b, 5, 10),
        )
    })
}

fn unit() -> impl Strategy<Value = Q> {
    (0i64..=20).prop_map(|n| Q::new(BigInt::from(n), BigInt::from(20)))
}

proptest! {
    #[test]
    fn metrics((f, g, h) in triple()) {
        for d in [mu_diff, kyfan] {
            prop_assert!(d(&f, &f).unwrap().is_zero());
            prop_assert_eq!(d(&f, &g).unwrap(), d(&g, &f).unwrap());
            prop_assert!(d(&f, &h).unwrap() <= d(&f, &g).unwrap() + d(&g, &h).unwrap());
            prop_assert_eq!(d(&f, &g).unwrap().is_zero(), f == g);
            let shifted = d(&sf_add(&f, &h).unwrap(), &sf_add(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(shifted, d(&f, &g).unwrap());
        }
        prop_assert!(kyfan(&f, &g).unwrap() <= mu_diff(&f, &g).unwrap());
    }

    #[test]
    fn group_laws((f, g, h) in triple()) {
        prop_assert_eq!(sf_add(&f, &g).unwrap(), sf_add(&g, &f).unwrap());
        prop_assert_eq!(
            sf_add(&sf_add(&f, &g).unwrap(), &h).unwrap(),
            sf_add(&f, &sf_add(&g, &h).unwrap()).unwrap()
        );
        prop_assert!(sf_add(&f, &sf_neg(&f)).unwrap().is_zero());
    }

    #[test]
    fn truncation_modulus((_f, _g, h) in triple(), s in unit(), t in unit()) {
        let d = mu_diff(&truncate(&h, &s), &truncate(&h, &t)).unwrap();
        let gap = if s <= t { &t - &s } else { &s - &t };
        prop_assert!(d <= gap);
        prop_assert_eq!(truncate(&truncate(&h, &s), &t), truncate(&h, if s <= t { &s } else { &t }));
    }
}

#[test]
fn mismatched_bases_are_rejected() {
    let a = StepFunction::zero(&BaseGroup::cyclic(2));
    let b = StepFunction::zero(&BaseGroup::Circle);
    assert!(mu_diff(&a, &b).is_err());
    assert!(kyfan(&a, &b).is_err());
    assert!(sf_add(&a, &b).is_err());
}
