use gammapres_core::group::catalog::*;
use gammapres_core::group::is_gamma_isomorphic;
use gammapres_core::varieties::*;
use gammapres_core::{GammaGroup, Limits};

fn plain(g: gammapres_core::FiniteGroup) -> GammaGroup {
    GammaGroup::without_gamma(g)
}

fn spec(members: Vec<GammaGroup>) -> VarietySpec {
    VarietySpec::with_limits(members, &Limits::default()).unwrap()
}

#[test]
fn membership_examples() {
    let l = Limits::default();
    let c = spec(vec![plain(cyclic(2))]);
    assert!(variety_contains(&c, &plain(cyclic(2)), &l).unwrap().contains);
    assert!(variety_contains(&c, &plain(trivial()), &l).unwrap().contains);
    let z4 = variety_contains(&c, &plain(cyclic(4)), &l).unwrap();
    assert!(!z4.contains);
    assert_eq!(z4.status, MembershipStatus::ExcludedByExponent);
    let v = variety_contains(&c, &plain(elementary_abelian(2, 3)), &l).unwrap();
    assert!(v.contains);
    assert_eq!(v.status, MembershipStatus::FreeQuotient);
}

#[test]
fn s3_and_d8_varieties() {
    let l = Limits::default();
    let c = spec(vec![plain(symmetric(3))]);
    assert!(variety_contains(&c, &plain(cyclic(6)), &l).unwrap().contains);
    assert!(variety_contains(&c, &plain(cyclic(3)), &l).unwrap().contains);
    let d12 = variety_contains(&c, &plain(dihedral(6)), &l).unwrap();
    assert!(d12.contains);
    // D8 and Q8 generate the same variety
    let c8 = spec(vec![plain(dihedral(4))]);
    let q8 = variety_contains(&c8, &plain(quaternion()), &l).unwrap();
    assert!(q8.contains);
    assert_eq!(q8.free_order, Some(32));
    let c4 = spec(vec![plain(cyclic(4))]);
    let q8 = variety_contains(&c4, &plain(quaternion()), &l).unwrap();
    assert!(!q8.contains);
    assert_eq!(q8.status, MembershipStatus::ExcludedByFreeGroup);
}

#[test]
fn gamma_membership() {
    let l = Limits::default();
    let c = spec(vec![cyclic_with_inversion(3)]);
    assert!(variety_contains(&c, &abelian_with_inversion(&[3, 3]), &l).unwrap().contains);
    let triv_action = GammaGroup::trivial_action(cyclic(3), cyclic(2));
    let v = variety_contains(&c, &triv_action, &l).unwrap();
    assert!(!v.contains && v.is_certified());
}

#[test]
fn completion_examples() {
    let l = Limits::default();
    let c = spec(vec![plain(cyclic(2))]);
    let done = pro_c_completion(&plain(cyclic(4)), &c, &l).unwrap();
    assert_eq!(done.quotient.order(), 2);
    let done = pro_c_completion(&plain(elementary_abelian(2, 2)), &c, &l).unwrap();
    assert_eq!(done.quotient.order(), 4);
    let c1 = spec(vec![plain(trivial())]);
    assert_eq!(pro_c_completion(&plain(symmetric(3)), &c1, &l).unwrap().quotient.order(), 1);
    let c3 = spec(vec![plain(symmetric(3))]);
    let g = plain(symmetric(4));
    let done = pro_c_completion(&g, &c3, &l).unwrap();
    assert_eq!(done.quotient.order(), 6);
    let again = pro_c_completion(&done.quotient, &c3, &l).unwrap();
    assert!(is_gamma_isomorphic(&again.quotient, &done.quotient).is_some());
}

#[test]
fn heights() {
    let l = Limits::default();
    assert_eq!(height(&symmetric(3), &l).unwrap(), 2);
    assert_eq!(height(&cyclic(4), &l).unwrap(), 2);
    assert_eq!(height(&elementary_abelian(2, 3), &l).unwrap(), 1);
    assert_eq!(exhaustive_height(&symmetric(3), &l).unwrap(), 2);
    assert_eq!(height_hat(&cyclic(8), &l).unwrap(), 3);
    assert_eq!(exhaustive_height_hat(&cyclic(8), &l).unwrap(), 3);
    assert_eq!(height_hat(&symmetric(3), &l).unwrap(), 2);
    assert_eq!(height_hat(&elementary_abelian(3, 2), &l).unwrap(), 1);
    let r = height_report(&symmetric(4), true, &l).unwrap();
    assert!(r.witness_valid && r.greedy_confirmed);
    assert_eq!(r.h_value, 3);
    let c = spec(vec![plain(cyclic(8)), plain(symmetric(3))]);
    assert_eq!(height_hat_of_variety(&c, &l).unwrap(), 3);
}
