mod common;

use common::{fibration_oracle, weak_equivalence_oracle};
use grpd_core::gamma::{hfp_map, swap_comparison};
use grpd_core::generate::{
    eg_action, random_gamma_groupoid, random_group_gamma, random_point_inclusion, random_twisted,
    random_weak_equivalence, seeded, shuffled, to_point,
};
use grpd_core::schema::{groupoid_from_doc, groupoid_to_doc};
use grpd_core::twisted::orbit_mass;
use grpd_core::{hfp, iota, parameter_fibration, quotient_comparison, twisted_orbits, GroupAction};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hfp_is_a_valid_groupoid_and_iota_a_fibration(seed in any::<u64>()) {
        let a = random_gamma_groupoid(&mut seeded(seed), 40);
        let (h, i) = iota(&a.value);
        prop_assert!(h.groupoid().validate().is_empty(), "{}", a.name);
        prop_assert!(i.is_functor());
        prop_assert!(fibration_oracle(&i), "{}", a.name);
    }

    #[test]
    fn relabelling_preserves_fixed_points(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random_gamma_groupoid(&mut rng, 40);
        let (b, _) = shuffled(&mut rng, &a.value);
        let (ha, hb) = (hfp(&a.value), hfp(&b));
        prop_assert_eq!(ha.groupoid().obj_count(), hb.groupoid().obj_count());
        prop_assert_eq!(ha.groupoid().components().count(), hb.groupoid().components().count());
        prop_assert_eq!(ha.groupoid().cardinality(), hb.groupoid().cardinality());
    }

    #[test]
    fn weak_equivalences_preserve_cardinality(seed in any::<u64>()) {
        let f = random_weak_equivalence(&mut seeded(seed));
        let m = f.value.map();
        prop_assert_eq!(m.dom().cardinality(), m.cod().cardinality(), "{}", f.name);
        let h = hfp_map(&f.value);
        prop_assert!(weak_equivalence_oracle(&h.map), "{}", f.name);
        prop_assert_eq!(h.dom.groupoid().cardinality(), h.cod.groupoid().cardinality());
    }

    #[test]
    fn eg_to_point_is_an_acyclic_fibration(seed in any::<u64>()) {
        let s = random_group_gamma(&mut seeded(seed), 12);
        let f = to_point(&eg_action(&s.value));
        prop_assert!(f.map().is_fibration() && f.map().is_weak_equivalence(), "{}", s.name);
        let h = hfp_map(&f);
        prop_assert!(h.map.is_fibration() && h.map.is_weak_equivalence(), "{}", s.name);
    }

    #[test]
    fn point_inclusions_are_well_formed(seed in any::<u64>()) {
        let f = random_point_inclusion(&mut seeded(seed));
        prop_assert!(f.value.map().is_functor(), "{}", f.name);
        let two_objects = f.value.map().cod().obj_count() > 1;
        prop_assert_eq!(f.value.map().is_fibration(), !two_objects, "{}", f.name);
    }

    #[test]
    fn swap_fixed_points_recover_the_groupoid(seed in any::<u64>()) {
        let a = random_gamma_groupoid(&mut seeded(seed), 12);
        let x = a.value.carrier().clone();
        let c = swap_comparison(x.clone());
        prop_assert!(c.weak_equivalence, "{}", a.name);
        prop_assert_eq!(x.cardinality(), c.hfp.groupoid().cardinality());
    }

    #[test]
    fn orbit_mass_is_fixed_point_cardinality(seed in any::<u64>()) {
        let d = random_twisted(&mut seeded(seed), 8);
        let p = parameter_fibration(&d.value);
        prop_assert_eq!(p.verdict(), (true, true), "{}", d.name);
        prop_assert_eq!(orbit_mass(&twisted_orbits(&d.value)), p.hfp.groupoid().cardinality());
    }

    #[test]
    fn free_normal_quotients_are_acyclic_fibrations(seed in any::<u64>()) {
        let s = random_group_gamma(&mut seeded(seed), 12);
        let g = s.value.group();
        let action = GroupAction::left_multiplication(g);
        for n in g.subgroups().into_iter().filter(|n| n.is_normal_in(g).is_none()) {
            let q = quotient_comparison(&action, n.elements()).expect("left multiplication is free");
            prop_assert!(q.is_acyclic_fibration(), "{} by {:?}", s.name, n.elements());
        }
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>()) {
        let a = random_gamma_groupoid(&mut seeded(seed), 30);
        let b = random_gamma_groupoid(&mut seeded(seed), 30);
        prop_assert_eq!(&a.name, &b.name);
        prop_assert!(a.value.carrier().same_tables(b.value.carrier()));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let a = random_gamma_groupoid(&mut seeded(seed), 30);
        let x = a.value.carrier();
        let back = groupoid_from_doc(&groupoid_to_doc(x)).expect("round trip");
        prop_assert!(back.same_tables(x));
    }
}
