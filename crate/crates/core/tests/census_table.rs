use helly_core::census::{c_z2_profile, census_up_to, expand_to_maximal, maximal_membership};
use helly_core::engine::ExtInt;
use helly_core::lattice::convex_hull;

#[test]
fn class_counts_by_interior() {
    let census = census_up_to(5, None, |_, _, _| {}).unwrap();
    let counts: Vec<usize> = (0..=5).map(|i| census.classes(i).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 16, 45, 120, 211, 403]);
}

#[test]
fn table_through_ten() {
    let census = census_up_to(10, None, |_, _, _| {}).unwrap();
    let z = c_z2_profile(10, &census).unwrap();
    let expect: Vec<ExtInt> = [4, 6, 6, 6, 8, 7, 8, 9, 8, 8, 10].map(ExtInt::Fin).to_vec();
    assert_eq!(z.profile.g, expect);
    assert_eq!(z.profile.c, expect);
    assert_eq!(z.drops, vec![5, 8]);
    assert!(z.c_exceeds_g.is_empty());
}

#[test]
fn maximal_witnesses_match_table() {
    let census = census_up_to(5, None, |_, _, _| {}).unwrap();
    let z = c_z2_profile(5, &census).unwrap();
    for k in 1..=5 {
        let w = z.profile.witnesses[k].as_ref().unwrap();
        let p = convex_hull(w).unwrap();
        let m = expand_to_maximal(&p, k).unwrap();
        let r = maximal_membership(&m.vertices().unwrap(), k).unwrap();
        assert!(r.member);
        assert_eq!(ExtInt::Fin(r.facets as i64), z.profile.c[k]);
    }
}
