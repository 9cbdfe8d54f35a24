use markov_core::cardinal::Cardinal;
use markov_core::corpus;
use markov_core::presentation::Presentation;
use markov_core::structure::{m_torsion, multiply, rank_profile, torsion_free_part, torsion_part};
use proptest::prelude::*;

fn presentation() -> impl Strategy<Value = Presentation> {
    any::<u64>().prop_map(|seed| corpus::random_presentation(&mut corpus::rng(seed), 6))
}

proptest! {
    #[test]
    fn multiplication_composes(g in presentation(), a in 1u64..=12, b in 1u64..=12) {
        let twice = multiply(a, &multiply(b, &g).unwrap()).unwrap();
        prop_assert_eq!(twice, multiply(a * b, &g).unwrap());
    }

    #[test]
    fn transforms_commute_with_direct_sums(g in presentation(), h in presentation(), m in 1u64..=30) {
        let s = g.direct_sum(&h);
        prop_assert_eq!(multiply(m, &s).unwrap(), multiply(m, &g).unwrap().direct_sum(&multiply(m, &h).unwrap()));
        prop_assert_eq!(m_torsion(m, &s).unwrap(), m_torsion(m, &g).unwrap().direct_sum(&m_torsion(m, &h).unwrap()));
    }

    #[test]
    fn torsion_split(g in presentation()) {
        prop_assert_eq!(torsion_part(&g).direct_sum(&torsion_free_part(&g)), g);
    }

    #[test]
    fn rank_remarks(g in presentation()) {
        let r = rank_profile(&g).r;
        let size = g.cardinality();
        if r.ge(&Cardinal::OMEGA).unwrap() {
            prop_assert_eq!(&r, &size);
        }
        if size.gt(&Cardinal::OMEGA).unwrap() {
            prop_assert_eq!(&r, &size);
        }
        prop_assert!(r.le(&size).unwrap());
    }
}
