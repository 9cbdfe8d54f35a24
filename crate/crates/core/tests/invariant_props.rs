use markov_core::cardinal::Cardinal;
use markov_core::corpus;
use markov_core::decompose::{hm_symbolic, split_bounded_wdiv};
use markov_core::invariants::{divisible_weight, is_m_group, is_w_divisible, uk_invariants};
use markov_core::oracle::{iso_type_of, realize_with_bound};
use markov_core::plan::plan_connected_topology;
use markov_core::presentation::{Block, Presentation};
use proptest::prelude::*;

fn presentation() -> impl Strategy<Value = Presentation> {
    any::<u64>().prop_map(|seed| corpus::random_presentation(&mut corpus::rng(seed), 5))
}

fn small_bounded() -> impl Strategy<Value = Presentation> {
    prop::collection::vec((prop::sample::select(vec![2u64, 3, 5]), 1u32..=3, 1u64..=3), 1..4).prop_map(|raw| {
        Presentation::normalize(raw.into_iter().map(|(p, k, n)| (Block::cyclic(p, k), Cardinal::fin(n)))).unwrap()
    })
}

proptest! {
    #[test]
    fn divisible_weight_of_sums(a in presentation(), b in presentation()) {
        let s = a.direct_sum(&b);
        prop_assert_eq!(divisible_weight(&s), divisible_weight(&a).max(&divisible_weight(&b)));
        let both = is_w_divisible(&a).unwrap() && is_w_divisible(&b).unwrap();
        if both {
            prop_assert!(is_w_divisible(&s).unwrap());
        }
    }

    #[test]
    fn planner_succeeds_exactly_on_m_groups(g in presentation()) {
        let m = is_m_group(&g).unwrap().holds;
        let plan = plan_connected_topology(&g).unwrap();
        prop_assert_eq!(plan.certificate().is_some(), m);
        if let Some(cert) = plan.certificate() {
            let v = cert.verify();
            prop_assert!(v.ok(), "{:?}", v.failures);
        }
    }

    #[test]
    fn uk_table_matches_counted_iso_type(g in small_bounded()) {
        if let Ok(concrete) = realize_with_bound(&g, 100_000) {
            let counted = iso_type_of(&concrete);
            let table = uk_invariants(&g).unwrap();
            for (p, row) in &table.rows {
                for (i, alpha) in row.alphas.iter().enumerate() {
                    prop_assert_eq!(&counted.multiplicity(&Block::cyclic(*p, i as u32 + 1)), alpha);
                }
            }
        }
    }

    #[test]
    fn bounded_part_recombines(g in presentation()) {
        let (k, m) = split_bounded_wdiv(&g).unwrap();
        prop_assert_eq!(k.direct_sum(&m), g);
    }

    #[test]
    fn hm_symbolic_laws(a in presentation(), b in presentation()) {
        prop_assert_eq!(hm_symbolic(&a.direct_sum(&b)), hm_symbolic(&a).direct_sum(&hm_symbolic(&b)));
        prop_assert_eq!(hm_symbolic(&hm_symbolic(&a)), hm_symbolic(&a));
    }
}
