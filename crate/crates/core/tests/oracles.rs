mod common;

use common::{
    classes_oracle, essentially_surjective_oracle, faithful_oracle, fibration_oracle, full_oracle, h1_oracle,
    twisted_hfp_oracle, weak_equivalence_oracle, z1_oracle,
};
use grpd_core::fixtures::{group_gamma_fixtures, groupoid_corpus, small_groupoids, twisted_fixtures};
use grpd_core::generate::{functors_between, random_fibration, random_weak_equivalence, seeded};
use grpd_core::{h1, hfp, parameter_fibration, z1};

#[test]
fn predicates_agree_on_every_functor_between_small_groupoids() {
    let family = small_groupoids();
    let mut cases = 0;
    for (an, a) in &family {
        for (bn, b) in &family {
            for f in functors_between(a, b) {
                cases += 1;
                let ctx = || format!("{an} -> {bn} objects {:?}", f.obj_map());
                assert_eq!(f.is_fibration(), fibration_oracle(&f), "fibration: {}", ctx());
                assert_eq!(f.is_full(), full_oracle(&f), "full: {}", ctx());
                assert_eq!(f.is_faithful(), faithful_oracle(&f), "faithful: {}", ctx());
                assert_eq!(f.is_essentially_surjective(), essentially_surjective_oracle(&f), "eso: {}", ctx());
            }
        }
    }
    assert!(cases >= 500, "only {cases} functors enumerated");
}

#[test]
fn functor_enumeration_matches_hand_counts() {
    let family = small_groupoids();
    let point = family.iter().find(|(_, g)| g.obj_count() == 1 && g.mor_count() == 1).expect("point").1.clone();
    for (name, g) in &family {
        // Functors out of the point pick an object; into it there is one.
        assert_eq!(functors_between(&point, g).len(), g.obj_count(), "{name}");
        assert_eq!(functors_between(g, &point).len(), 1, "{name}");
    }
}

#[test]
fn generated_maps_satisfy_their_oracles() {
    let mut rng = seeded(5);
    for _ in 0..40 {
        let f = random_fibration(&mut rng);
        assert!(fibration_oracle(f.value.map()), "{}", f.name);
        let w = random_weak_equivalence(&mut rng);
        assert!(weak_equivalence_oracle(w.value.map()), "{}", w.name);
    }
}

#[test]
fn classes_and_cardinality_match_oracle_on_corpus() {
    for (name, g) in groupoid_corpus() {
        let (classes, card) = classes_oracle(&g);
        assert_eq!(g.components().count(), classes, "{name}");
        assert_eq!(g.cardinality().to_string(), card.to_string(), "{name}");
    }
}

#[test]
fn cocycles_and_classes_match_enumeration() {
    for (name, a) in group_gamma_fixtures() {
        assert_eq!(z1(&a).len(), z1_oracle(a.group(), a.bar_table()), "{name}");
        let oracle = h1_oracle(a.group(), a.bar_table());
        assert_eq!(h1(&a).len(), oracle.len(), "{name}");
        for c in h1(&a) {
            assert!(oracle.iter().any(|o| o.contains(&c.representative)), "{name}");
        }
        let h = hfp(&a.bg_action());
        assert_eq!(h.groupoid().obj_count(), z1(&a).len(), "{name}");
    }
}

#[test]
fn twisted_fixed_points_match_direct_enumeration() {
    for (name, d) in twisted_fixtures() {
        let p = parameter_fibration(&d);
        let g = p.hfp.groupoid();
        let (objects, classes, card) = twisted_hfp_oracle(&d);
        assert_eq!(g.obj_count(), objects, "{name}");
        assert_eq!(g.components().count(), classes, "{name}");
        assert_eq!(g.cardinality().to_string(), card.to_string(), "{name}");
    }
}
