use std::collections::BTreeSet;

use ample_core::random::{sample_explicit, HashComplexOracle, ProbProfile};
use ample_core::simplex::{ComplexView, ExplicitComplex, RemovalFamily, Simplex, Vertex};
use proptest::prelude::*;

fn arb_complex() -> impl Strategy<Value = ExplicitComplex> {
    (3u64..9, prop::collection::vec(prop::collection::btree_set(0u64..9, 1..5), 0..8)).prop_map(|(n, sets)| {
        let facets: Vec<Simplex> = sets
            .into_iter()
            .map(|s| Simplex::new(s.into_iter().map(|v| v % n).collect::<BTreeSet<_>>().into_iter().collect()).unwrap())
            .collect();
        ExplicitComplex::from_facets(0..n, &facets, 3).unwrap()
    })
}

fn downward_closed(x: &ExplicitComplex) -> bool {
    x.all_simplices().iter().all(|s| s.len() == 1 || s.facets().all(|f| x.contains_simplex(&f)))
}

proptest! {
    #[test]
    fn induced_on_everything_is_identity(x in arb_complex()) {
        prop_assert_eq!(x.induced(x.vertex_set()).unwrap(), x);
    }

    #[test]
    fn removal_ignores_redundant_members(x in arb_complex(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..5)) {
        let all = x.all_simplices();
        let fam = RemovalFamily::new(picks.iter().map(|i| all[i.index(all.len())].clone()));
        let y = x.remove_family(&fam, true).unwrap();
        prop_assert!(downward_closed(&y));
        prop_assert_eq!(&y, &x.remove_family(&fam.antichain_reduce(), true).unwrap());
        prop_assert!(fam.antichain_reduce().is_antichain());
        for m in fam.members() {
            prop_assert!(!y.contains_simplex(m));
        }
    }

    #[test]
    fn link_of_cone_apex(x in arb_complex()) {
        let apex: Vertex = 100;
        prop_assert_eq!(x.cone(apex).unwrap().link(apex).unwrap(), x);
    }

    #[test]
    fn file_round_trip(x in arb_complex()) {
        let json = x.to_json();
        let back = ExplicitComplex::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn oracle_agrees_with_sampler(seed in any::<u64>(), n in 4u64..24) {
        let profile = ProbProfile::constant(0.5).unwrap();
        let x = sample_explicit(n, &profile, 3, seed);
        let o = HashComplexOracle::new(n, &profile, 3, seed).unwrap();
        for mask in 1u64..1 << n.min(12) {
            let s: Vec<Vertex> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if s.len() > 4 {
                continue;
            }
            prop_assert_eq!(o.contains(&s), x.contains_simplex(&Simplex::new(s.clone()).unwrap()));
        }
    }
}
