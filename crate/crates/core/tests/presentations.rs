use gammapres_core::flmod::simple_modules;
use gammapres_core::group::catalog::*;
use gammapres_core::presentations::truncation::*;
use gammapres_core::presentations::*;
use gammapres_core::{FiniteGroup, FpModule, GammaGroup, GroupHom, Limits};

fn limits() -> Limits {
    Limits::default()
}

fn trivial_module(h: &GammaGroup, p: u32) -> FpModule {
    let sd = h.semidirect_product(&limits()).unwrap();
    FpModule::trivial(&sd.group, p, 1)
}

/// G acts trivially and the Γ generator by −1.
fn sign_module(h: &GammaGroup, p: u32) -> FpModule {
    let sd = h.semidirect_product(&limits()).unwrap();
    let vals: Vec<u32> = sd
        .group
        .generators()
        .iter()
        .map(|&s| if sd.split(s).1 == h.gamma().identity() { 1 } else { p - 1 })
        .collect();
    FpModule::character(&sd.group, p, &vals).unwrap()
}

fn hom(f: &FiniteGroup, g: &FiniteGroup, images: &[usize]) -> GroupHom {
    GroupHom::from_generator_images(f, g, images).unwrap()
}

#[test]
fn formula_cyclic_trivial_gamma() {
    for p in [2u32, 3, 5] {
        let h = GammaGroup::without_gamma(cyclic(p as usize));
        let a = trivial_module(&h, p);
        assert_eq!(multiplicity_formula(1, &h, &a, &limits()).unwrap(), 1);
    }
}

#[test]
fn formula_zero_when_prime_divides_gamma() {
    let h = cyclic_with_inversion(3);
    let a = trivial_module(&h, 2);
    assert_eq!(multiplicity_formula(2, &h, &a, &limits()).unwrap(), 0);
}

#[test]
fn formula_inversion_sign() {
    let h = cyclic_with_inversion(3);
    let a = sign_module(&h, 3);
    let t = multiplicity_terms(1, &h, &a, &limits()).unwrap();
    assert_eq!((t.h1, t.h2, t.xi, t.value), (1, 1, 0, 1));
    let ad = admissible_multiplicity(1, &h, &a, &limits()).unwrap();
    assert_eq!(ad.value, 1.into());
    assert!(ad.warning.is_none());
}

#[test]
fn formula_linear_in_n() {
    let h = cyclic_with_inversion(3);
    for a in [sign_module(&h, 3), trivial_module(&h, 3)] {
        let m: Vec<usize> = (1..4).map(|n| multiplicity_formula(n, &h, &a, &limits()).unwrap()).collect();
        assert_eq!(m[1] - m[0], a.dim());
        assert_eq!(m[2] - m[1], a.dim());
    }
}

#[test]
fn oracle_examples() {
    let l = limits();
    let f = GammaGroup::without_gamma(cyclic(9));
    let h = GammaGroup::without_gamma(cyclic(3));
    let omega = hom(f.group(), h.group(), &[1]);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &trivial_module(&h, 3), &l).unwrap(), 1);

    let id = GroupHom::identity(h.group());
    assert_eq!(multiplicity_oracle(&h, &h, &id, &trivial_module(&h, 3), &l).unwrap(), 0);

    let f = abelian_with_inversion(&[3, 3]);
    let h = cyclic_with_inversion(3);
    let omega = hom(f.group(), h.group(), &[1, 0]);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &sign_module(&h, 3), &l).unwrap(), 1);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &trivial_module(&h, 3), &l).unwrap(), 0);
}

#[test]
fn cover_agrees_with_formula() {
    let l = limits();
    let f = cyclic_with_inversion(9);
    let h = cyclic_with_inversion(3);
    let omega = hom(f.group(), h.group(), &[1]);
    let a = sign_module(&h, 3);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &a, &l).unwrap(), multiplicity_formula(1, &h, &a, &l).unwrap());

    let f = abelian_with_inversion(&[9, 3]);
    let omega = hom(f.group(), h.group(), &[1, 0]);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &a, &l).unwrap(), 2);
    assert_eq!(multiplicity_formula(2, &h, &a, &l).unwrap(), 2);
}

#[test]
fn nontrivial_action_xi() {
    // S3 → Z/2 over F_3 with the sign character: ξ = 1 for Γ = 1.
    let l = limits();
    let s3 = symmetric(3);
    let z2 = cyclic(2);
    let images: Vec<usize> = s3.generators().iter().map(|&g| if s3.element_order(g) == 2 { 1 } else { 0 }).collect();
    let omega = hom(&s3, &z2, &images);
    let f = GammaGroup::without_gamma(s3);
    let h = GammaGroup::without_gamma(z2);
    let sd = h.semidirect_product(&l).unwrap();
    let a = FpModule::character(&sd.group, 3, &[2]).unwrap();
    let t = multiplicity_terms(1, &h, &a, &l).unwrap();
    assert_eq!((t.xi, t.value), (1, 0));
    assert_eq!(multiplicity_formula(2, &h, &a, &l).unwrap(), 1);
    assert_eq!(multiplicity_oracle(&f, &h, &omega, &a, &l).unwrap(), 1);
}

#[test]
fn abelian_oracle_examples() {
    let z2 = cyclic(2);
    let f = group_algebra_power(&z2, 3, 2);
    let sign = FpModule::character(&z2, 3, &[2]).unwrap();
    let triv = FpModule::trivial(&z2, 3, 1);
    // kill one trivial summand: e_0 + e_1 in the first copy
    let (target, map) = quotient_by_submodule(&f, &[vec![1, 1, 0, 0]]).unwrap();
    assert_eq!(target.dim(), 3);
    assert_eq!(abelian_multiplicity_oracle(&f, &target, &map, &sign).unwrap(), 0);
    let (target, map) = quotient_by_submodule(&f, &[vec![1, 1, 0, 0], vec![1, 2, 0, 0], vec![0, 0, 1, 2]]).unwrap();
    assert_eq!(target.dim(), 1);
    assert_eq!(abelian_multiplicity_oracle(&f, &target, &map, &sign).unwrap(), 2);
    assert_eq!(abelian_multiplicity_oracle(&f, &target, &map, &triv).unwrap(), 1);
}

#[test]
fn relator_rank_examples() {
    let l = limits();
    let h = GammaGroup::without_gamma(trivial());
    assert_eq!(relator_rank(3, &h, None, None, &l).unwrap().value, 3);
    for p in [2usize, 3] {
        let h = GammaGroup::without_gamma(cyclic(p));
        let r = relator_rank(1, &h, None, None, &l).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.exact);
        let h = GammaGroup::without_gamma(elementary_abelian(p, 2));
        assert_eq!(relator_rank(2, &h, None, None, &l).unwrap().value, 3);
    }
}

#[test]
fn msum_tower() {
    let l = limits();
    let e = GammaGroup::without_gamma(elementary_abelian(3, 2));
    let f = GammaGroup::without_gamma(cyclic(3));
    let g = GammaGroup::without_gamma(trivial());
    let alpha = hom(e.group(), f.group(), &[1, 0]);
    let section = hom(f.group(), e.group(), &[3]);
    let beta = hom(f.group(), g.group(), &[0]);
    let a = trivial_module(&g, 3);
    let r = msum_decompose(&e, &f, &g, &alpha, &section, &beta, &a, &l).unwrap();
    assert_eq!((r.m_alpha, r.m_beta, r.m_pi), (1, 1, 2));
    assert!(r.bound_holds && r.equality);
}

#[test]
fn augmentation_ideal_dims() {
    for (g, p) in [(cyclic(2), 3u32), (cyclic(3), 2), (symmetric(3), 5)] {
        let j = augmentation_ideal(&g, p);
        assert_eq!(j.dim(), g.order() - 1);
        assert_eq!(j.h0_dim(), 0);
        let simples = simple_modules(&g, p, &limits()).unwrap();
        assert!(!simples.is_empty());
    }
}
