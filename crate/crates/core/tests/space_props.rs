mod common;

use cech_descent::descent::{isomorphisms, pullback};
use cech_descent::groupoid::DEFAULT_ENUMERATION_LIMIT;
use cech_descent::nerve::{component_nerve, nerve_map, plain_nerve};
use cech_descent::space::*;
use common::*;
use proptest::prelude::*;

fn all_opens(space: &FiniteSpace) -> Vec<PointSet> {
    (0u32..1 << space.len())
        .map(|mask| (0..space.len()).filter(|&p| mask >> p & 1 == 1).collect::<PointSet>())
        .filter(|s| space.is_down_closed(s))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_open_is_least_open_neighbourhood(seed in any::<u64>()) {
        let space = random_space(&mut rng(seed));
        let opens = all_opens(&space);
        for p in 0..space.len() {
            let m = min_open(&space, space.point_name(p)).unwrap();
            prop_assert!(m.contains(p));
            prop_assert!(space.is_down_closed(m.members()));
            let meet = opens
                .iter()
                .filter(|u| u.contains(&p))
                .fold(space.all_points(), |acc, u| acc.intersection(u).copied().collect());
            prop_assert_eq!(m.members(), &meet);
        }
    }

    #[test]
    fn components_partition_opens(seed in any::<u64>()) {
        let space = random_space(&mut rng(seed));
        for set in all_opens(&space).into_iter().filter(|s| !s.is_empty()) {
            let open = space.open(set.clone()).unwrap();
            let parts = components(&space, &open);
            let union: PointSet = parts.iter().flatten().copied().collect();
            prop_assert_eq!(&union, &set);
            prop_assert_eq!(parts.iter().map(|c| c.len()).sum::<usize>(), set.len());
            for p in &set {
                let isolated = set.iter().all(|q| q == p || !space.comparable(*p, *q));
                let singleton = parts.iter().any(|c| c.len() == 1 && c.contains(p));
                prop_assert_eq!(isolated, singleton);
            }
        }
    }

    #[test]
    fn minimal_cover_refines_every_cover(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random_space(&mut r);
        let m = minimal_cover(&space).unwrap();
        for _ in 0..4 {
            let c = random_cover(&mut r, &space, "c");
            prop_assert!(find_refinement(&m, &c).is_some());
        }
        // nothing is strictly finer than the minimal cover
        let c = random_cover(&mut r, &space, "c");
        if find_refinement(&c, &m).is_some() {
            prop_assert!(find_refinement(&m, &c).is_some());
        }
    }

    #[test]
    fn sieves_of_covers_cover(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random_space(&mut r);
        let (u, v) = (random_cover(&mut r, &space, "u"), random_cover(&mut r, &space, "v"));
        let (s, t) = (sieve_of_cover(&space, &u), sieve_of_cover(&space, &v));
        prop_assert!(is_covering_sieve(&space, &s));
        prop_assert!(is_covering_sieve(&space, &intersect_sieves(&s, &t)));
        prop_assert_eq!(intersect_sieves(&s, &s), s.clone());
        let back = cover_of_sieve(&space, &s).unwrap();
        prop_assert!(find_refinement(&back, &u).is_some());
    }

    #[test]
    fn glue_and_trivialize_are_inverse(seed in any::<u64>()) {
        let inst = random_site_instance(&mut rng(seed), 3);
        let em = glue_etale(&inst.space, &inst.cover, &inst.datum).unwrap();
        prop_assert!(em.is_local_homeomorphism());
        let t = verify_trivialization(&em, &inst.cover).unwrap();
        prop_assert_eq!(&t.datum.transitions(), &inst.datum.transitions());
        // the other way round: gluing the recovered datum rebuilds the map
        let again = glue_etale(&inst.space, &inst.cover, &t.datum).unwrap();
        prop_assert_eq!(&again.proj, &em.proj);
        prop_assert_eq!(again.total.points(), em.total.points());
        let n = em.total.len();
        for p in 0..n {
            for q in 0..n {
                prop_assert_eq!(again.total.leq(p, q), em.total.leq(p, q));
            }
        }
        // chart-free, the match holds once members are split into components
        let bare = verify_trivialization(&em.without_charts(), &inst.cover).unwrap();
        let (split, r) = connected_refinement(&inst.space, &inst.cover).unwrap();
        let nm = nerve_map(&inst.space, &split, &inst.cover, &r).unwrap();
        let a = pullback(&nm, &inst.datum).unwrap();
        let b = pullback(&nm, &bare.datum).unwrap();
        prop_assert!(!isomorphisms(&a, &b, DEFAULT_ENUMERATION_LIMIT).unwrap().is_empty());
    }

    #[test]
    fn component_nerve_forgets_to_plain_nerve(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random_space(&mut r);
        let c = random_cover(&mut r, &space, "c");
        let n = component_nerve(&space, &c);
        prop_assert_eq!(n.forget(), plain_nerve(&space, &c));
        prop_assert!(n.validate().is_empty());
        // every edge stands for a connected open
        for e in n.edges() {
            let comp = e.component.as_ref().unwrap();
            prop_assert_eq!(components_of(&space, comp).len(), 1);
            prop_assert!(space.is_down_closed(comp));
        }
    }

    #[test]
    fn nerve_maps_respect_boundaries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random_space(&mut r);
        let u = random_cover(&mut r, &space, "u");
        let v = random_cover(&mut r, &space, "v");
        let (w, ru, rv) = common_refinement(&space, &u, &v).unwrap();
        for (target, rf) in [(&u, &ru), (&v, &rv)] {
            let nm = nerve_map(&space, &w, target, rf).unwrap();
            prop_assert!(nm.respects_boundaries());
        }
        let m = minimal_cover(&space).unwrap();
        let rm = find_refinement(&m, &u).unwrap();
        prop_assert!(nerve_map(&space, &m, &u, &rm).unwrap().respects_boundaries());
    }
}
