use gammapres_core::group::catalog::*;
use gammapres_core::group::is_gamma_isomorphic;
use gammapres_core::randmodel::*;
use gammapres_core::{ElemSet, GammaGroup, Limits};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn full(f: &GammaGroup) -> ElemSet {
    ElemSet::full(f.order())
}

/// A5 with Γ = Z/2 acting by conjugation by a transposition.
fn a5_with_transposition() -> GammaGroup {
    let s5 = symmetric(5);
    let a = s5.derived_subgroup_of(&ElemSet::full(s5.order()));
    let (a5, embed) = s5.subgroup(&a).unwrap();
    let t = s5.elements().find(|&x| !a.contains(x) && s5.element_order(x) == 2).unwrap();
    let back = |x: usize| embed.iter().position(|&e| e == x).unwrap();
    let swap: Vec<usize> = a5.elements().map(|i| back(s5.conj(embed[i], t))).collect();
    let id: Vec<usize> = a5.elements().collect();
    GammaGroup::new(a5, cyclic(2), vec![id, swap]).unwrap()
}

#[test]
fn closed_form_examples() {
    let l = Limits::default();
    let f = cyclic_with_inversion(3);
    let d = decompose_relation_group(&f, &full(&f), &l).unwrap();
    assert_eq!(generation_probability(&d, 2).unwrap().value, ratio(8, 9));
    assert_eq!(exhaustive_generation_probability(&f, &full(&f), 2, &l).unwrap(), ratio(8, 9));

    let f = abelian_with_inversion(&[3, 3]);
    let d = decompose_relation_group(&f, &full(&f), &l).unwrap();
    assert_eq!(d.factors.len(), 1);
    assert_eq!(d.factors[0].multiplicity, 2);
    assert_eq!(d.factors[0].y_size, 3);
    let p = generation_probability(&d, 3).unwrap();
    assert_eq!(p.value, ratio(208, 243));
    assert_eq!(exhaustive_generation_probability(&f, &full(&f), 3, &l).unwrap(), ratio(208, 243));
    assert_eq!(naive_generation_probability(&f, &full(&f), 3, &l).unwrap(), ratio(208, 243));
}

#[test]
fn fixed_part_never_generated() {
    let l = Limits::default();
    // F_3[Z/2] contains the trivial module, whose Y-image is zero
    let f = GammaGroup::new(
        elementary_abelian(3, 2),
        cyclic(2),
        vec![(0..9).collect(), (0..9).map(|x| (x % 3) * 3 + x / 3).collect()],
    )
    .unwrap();
    let d = decompose_relation_group(&f, &full(&f), &l).unwrap();
    assert_eq!(d.factors.len(), 2);
    let p = generation_probability(&d, 4).unwrap();
    assert_eq!(p.value, ratio(0, 1));
    assert!(p.abelian_positive.contains(&false));
    assert_eq!(exhaustive_generation_probability(&f, &full(&f), 4, &l).unwrap(), ratio(0, 1));
}

#[test]
fn mixed_primes_and_nonabelian() {
    let l = Limits::default();
    let f = abelian_with_inversion(&[3, 5]);
    let d = decompose_relation_group(&f, &full(&f), &l).unwrap();
    let expect = ratio(8, 9) * ratio(24, 25);
    assert_eq!(generation_probability(&d, 2).unwrap().value, expect);
    assert_eq!(exhaustive_generation_probability(&f, &full(&f), 2, &l).unwrap(), expect);

    let f = a5_with_transposition();
    let d = decompose_relation_group(&f, &full(&f), &l).unwrap();
    assert_eq!(d.factors.len(), 1);
    assert!(!d.factors[0].abelian);
    assert_eq!(d.factors[0].y_size, 10);
    for k in 1..=3 {
        let closed = generation_probability(&d, k).unwrap().value;
        assert_eq!(closed, ratio(10i64.pow(k as u32) - 1, 10i64.pow(k as u32)));
        assert_eq!(exhaustive_generation_probability(&f, &full(&f), k, &l).unwrap(), closed);
    }
}

#[test]
fn y_image_counts() {
    let f = abelian_with_inversion(&[3, 3]);
    assert_eq!(y_image_size(&f, &full(&f)), 9);
    let t = GammaGroup::trivial_action(cyclic(4), cyclic(2));
    assert_eq!(y_image_size(&t, &full(&t)), 1);
    assert!(y_map(&f, &[], 1).is_err());
}

#[test]
fn non_semisimple_rejected() {
    let l = Limits::default();
    let f = cyclic_with_inversion(9);
    assert!(decompose_relation_group(&f, &full(&f), &l).is_err());
}

#[test]
fn sampling_is_deterministic_and_matches_counts() {
    let l = Limits::default();
    let f = abelian_with_inversion(&[3, 3]);
    let a = sample_quotients(&f, 2, 4000, 7, &l).unwrap();
    let b = sample_quotients(&f, 2, 4000, 7, &l).unwrap();
    assert_eq!(a, b);
    let exact = exhaustive_quotient_distribution(&f, 2, &l).unwrap();
    let mut total = 0;
    for bucket in &a.buckets {
        let kernel = ElemSet::from_indices(f.order(), bucket.representative_kernel.iter().copied());
        let (rep, _) = f.quotient(&kernel).unwrap();
        let mut p = 0.0;
        for (k, q) in &exact {
            let (other, _) = f.quotient(k).unwrap();
            if other.order() == rep.order() && is_gamma_isomorphic(&rep, &other).is_some() {
                p += q.to_f64().unwrap();
            }
        }
        let n = a.draws as f64;
        let sigma = (n * p * (1.0 - p)).sqrt().max(1.0);
        assert!((bucket.count as f64 - n * p).abs() <= 4.0 * sigma, "bucket {:?} p {p}", bucket.quotient_order);
        total += bucket.count;
    }
    assert_eq!(total, a.draws);
}
