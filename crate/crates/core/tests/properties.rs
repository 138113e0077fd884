use std::sync::Arc;

use joinframe::frames::{is_frame_generating, Method};
use joinframe::oracle::Oracle;
use joinframe::random::{random_joinspec, random_poset, Ratio, Rng};
use joinframe::speclattices::uminus;
use joinframe::{ElemSet, JoinSpec, Poset};
use proptest::prelude::*;

fn instance(seed: u64, n: usize, k: usize) -> (Arc<Poset>, JoinSpec) {
    let mut rng = Rng::new(seed);
    let p = Arc::new(random_poset(&mut rng, n, Ratio::new(1, 2).unwrap()).unwrap());
    let u = random_joinspec(&mut rng, p.clone(), k).unwrap();
    (p, u)
}

fn subset(p: &Poset, bits: u64) -> ElemSet {
    p.set((0..p.len()).filter(|i| bits >> i & 1 == 1))
}

fn same(a: &JoinSpec, b: &JoinSpec) -> bool {
    a.is_subset(b) && b.is_subset(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gamma_is_the_smallest_ideal(seed: u64, n in 1usize..=6, k in 1usize..=4, a: u64, b: u64) {
        let (p, u) = instance(seed, n, k);
        let oracle = Oracle::new(&u).unwrap();
        let (s, t) = (subset(&p, a), subset(&p, b));
        let g = u.gamma(&s);
        prop_assert!(s.is_subset(&g));
        prop_assert!(u.is_ideal(&g).unwrap());
        prop_assert_eq!(u.gamma(&g), g);
        prop_assert_eq!(g, oracle.smallest_ideal(&s));
        prop_assert!(u.gamma(&s.intersection(&t)).is_subset(&g));
    }

    #[test]
    fn upsilon_sits_between_downclosure_and_gamma(seed: u64, n in 1usize..=6, k in 1usize..=4, a: u64) {
        let (p, u) = instance(seed, n, k);
        let s = subset(&p, a);
        let ups = u.upsilon(&s);
        prop_assert!(p.downclose(&s).unwrap().is_subset(&ups));
        prop_assert!(ups.is_subset(&u.gamma(&s)));
    }

    #[test]
    fn maximal_extension_is_a_closure(seed: u64, n in 1usize..=6, k in 1usize..=4, a: u64) {
        let (p, u) = instance(seed, n, k);
        let plus = u.uplus().unwrap();
        prop_assert!(u.is_subset(&plus));
        prop_assert!(same(&plus.uplus().unwrap(), &plus));
        let s = subset(&p, a);
        prop_assert_eq!(plus.gamma(&s), u.gamma(&s));
    }

    #[test]
    fn methods_agree_and_core_is_frame_generating(seed: u64, n in 1usize..=6, k in 1usize..=4) {
        let (_, u) = instance(seed, n, k);
        let report = is_frame_generating(&u, &Method::ALL).unwrap();
        prop_assert_eq!(report.verdict, report.witness.is_none());
        let core = uminus(&u);
        prop_assert!(core.is_subset(&u));
        prop_assert!(is_frame_generating(&core, &Method::ALL).unwrap().verdict);
        prop_assert!(same(&uminus(&core), &core));
        if report.verdict {
            prop_assert!(same(&core, &u));
        }
    }
}
