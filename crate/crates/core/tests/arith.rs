use gammapres_core::arith::*;
use num_rational::Rational64;

fn nf(module: ModuleKind, dim: u64) -> LocalData {
    LocalData::new(5, FieldKind::Number, module, dim)
}

fn ff(module: ModuleKind, dim: u64) -> LocalData {
    LocalData::new(5, FieldKind::Function, module, dim)
}

fn int(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

fn trivial(field: FieldKind) -> LocalData {
    let mut d = LocalData::new(5, field, ModuleKind::Trivial, 1);
    d.dim_a_gamma = 1;
    d
}

#[test]
fn log_chi_cases() {
    let r = log_chi(&ff(ModuleKind::Other, 2)).unwrap();
    assert_eq!(r.value, 0);
    assert!(r.note.is_some());
    let mut d = nf(ModuleKind::Other, 3);
    d.r2 = 2;
    d.archimedean = vec![ArchimedeanPlace { hhat0_dim: 0, h0_dim: 3 }; 2];
    assert_eq!(log_chi(&d).unwrap().value, -6);
    assert_eq!(log_chi(&nf(ModuleKind::Other, 3)).unwrap().value, 0);
}

#[test]
fn delta_ff_cases() {
    let mut d = ff(ModuleKind::Other, 2);
    assert!(delta_ff(&d).is_err());
    d.genus = Some(0);
    d.dim_a_gal_coinvariants = Some(1);
    assert_eq!(delta_ff(&d).unwrap(), -1);
    let mut t = trivial(FieldKind::Function);
    t.genus = Some(2);
    t.dim_dual_gal = Some(0);
    t.dim_a_gal = Some(1);
    assert_eq!(delta_ff(&t).unwrap(), -1);
    d.genus = Some(3);
    d.dim_dual_gal = Some(0);
    d.dim_a_gal = Some(0);
    assert_eq!(delta_ff(&d).unwrap(), 0);
}

#[test]
fn delta_nf_over_rationals() {
    // totally real A over ℚ: Ĥ⁰ = H⁰ = 0 at ∞ and ε = dim A from the place over ℓ
    let mut t = trivial(FieldKind::Number);
    t.r1 = 1;
    t.archimedean = vec![ArchimedeanPlace::default()];
    t.dim_dual_gal = Some(0);
    t.dim_a_gal = Some(1);
    t.ell_adic_places = vec![EllAdicPlace { residue_char: 5, ord: 1 }];
    let b = delta_nf_bound(&t).unwrap();
    assert_eq!(b.value, 0);
    assert!(!b.equality_decided);
    let mut o = nf(ModuleKind::Other, 3);
    o.r1 = 1;
    o.archimedean = vec![ArchimedeanPlace::default()];
    o.dim_dual_gal = Some(0);
    o.dim_a_gal = Some(0);
    o.epsilon = Some(3);
    assert_eq!(delta_nf_bound(&o).unwrap().value, 3);
    assert_eq!(delta_nf_bound(&nf(ModuleKind::Other, 3)).unwrap().value, 0);
}

#[test]
fn main_bounds() {
    let mut t = trivial(FieldKind::Number);
    assert_eq!(mult_bound_main(4, &t, BoundCase::Admissible).unwrap(), int(0));
    let mut o = nf(ModuleKind::Other, 2);
    assert_eq!(mult_bound_main(3, &o, BoundCase::Nf).unwrap(), int(8));
    t.field = FieldKind::Function;
    for n in 1..6 {
        assert_eq!(mult_bound_main(n, &t, BoundCase::Ff).unwrap(), int(n as i64 - 1));
    }
    let mu = ff(ModuleKind::RootsOfUnity, 1);
    assert!(mult_bound_main(2, &mu, BoundCase::Ff).is_err());
    assert!("bogus".parse::<BoundCase>().is_err());
    for h in 1..=4 {
        for g in 0..=2 {
            o.endo_dim = h;
            o.dim_a_gamma = g;
            for n in 0..5 {
                let ad = mult_bound_main(n, &o, BoundCase::Admissible).unwrap();
                let full = mult_bound_main(n, &o, BoundCase::Nf).unwrap();
                assert_eq!(ad, full - Rational64::new((n * g) as i64, h as i64));
            }
        }
    }
}

fn imaginary_quadratic(module: ModuleKind, dim: u64, fixed: u64) -> LocalData {
    let mut d = nf(module, dim);
    d.dim_a_gamma = fixed;
    d.r1 = 1;
    d.r2 = 0;
    d.epsilon = Some(dim as i64);
    d.real_place_fixed_dims = vec![fixed];
    d
}

#[test]
fn other_signatures() {
    let t = imaginary_quadratic(ModuleKind::Trivial, 1, 1);
    assert_eq!(mult_bound_other_signatures(7, &t).unwrap(), int(0));
    for n in 1..5 {
        for (dim, fixed, h) in [(2, 0, 1), (3, 1, 1), (4, 0, 2)] {
            let mut o = imaginary_quadratic(ModuleKind::Other, dim, fixed);
            o.endo_dim = h;
            let expect = Rational64::new((n * (dim - fixed)) as i64, h as i64);
            assert_eq!(mult_bound_other_signatures(n, &o).unwrap(), expect);
            // n elements here against n+1 elements for the admissible main bound
            assert_eq!(expect, positivity_threshold(n, dim, fixed, h));
            assert_eq!(mult_bound_main(n, &o, BoundCase::Admissible).unwrap(), positivity_threshold(n + 1, dim, fixed, h));
        }
    }
    let mut z = trivial(FieldKind::Number);
    z.dim_a_gamma = 1;
    assert_eq!(mult_bound_other_signatures(3, &z).unwrap(), int(-1));
    let mut missing = nf(ModuleKind::Other, 2);
    missing.r1 = 2;
    assert!(mult_bound_other_signatures(1, &missing).is_err());
}

#[test]
fn roots_of_unity() {
    for ell in [5u32, 7, 11] {
        for dim in 1..4u64 {
            for n in 1..4u64 {
                let mut d = LocalData::new(ell, FieldKind::Number, ModuleKind::Other, dim);
                d.mu_ell_in_base = true;
                d.r2 = (ell as u64 - 1) / 2;
                d.xi = Some(0);
                // ℓ is totally ramified in ℚ(ζ_ℓ), so ord_v(#A) = (ℓ−1)·dim A
                d.ell_adic_places = vec![EllAdicPlace { residue_char: ell, ord: (ell as i64 - 1) * dim as i64 }];
                let want = (n + (ell as u64 - 1) / 2) * dim;
                assert_eq!(mult_bound_roots_of_unity(n, &d).unwrap(), int(want as i64));
                let mut f = d.clone();
                f.field = FieldKind::Function;
                assert!(mult_bound_roots_of_unity(n, &d).unwrap() > mult_bound_roots_of_unity(n, &f).unwrap());
            }
        }
    }
    let mut t = trivial(FieldKind::Function);
    t.mu_ell_in_base = true;
    t.xi = Some(0);
    assert_eq!(mult_bound_roots_of_unity(5, &t).unwrap(), int(1));
    let mut z = nf(ModuleKind::Other, 1);
    z.mu_ell_in_base = true;
    assert_eq!(mult_bound_roots_of_unity(0, &z).unwrap(), int(0));
    assert!(mult_bound_roots_of_unity(1, &nf(ModuleKind::Other, 1)).is_err());
}

#[test]
fn relation_counts() {
    assert_eq!(fin_pres_relation_bound(0, 1).unwrap(), 1);
    assert_eq!(fin_pres_relation_bound(5, 2).unwrap(), 7);
    assert!(fin_pres_relation_bound(1, 0).is_err());
    // δ ≤ [k:ℚ]·dim A for every simple module gives at most [k:ℚ] + n relations
    for degree in 1..5u64 {
        let mut deltas = Vec::new();
        for dim in 1..5u64 {
            let mut d = nf(ModuleKind::Other, dim);
            d.epsilon = Some((degree * dim) as i64);
            d.dim_dual_gal = Some(0);
            d.dim_a_gal = Some(0);
            deltas.push((delta_nf_bound(&d).unwrap().value, dim));
        }
        for n in 0..4 {
            let r = relation_bound_from_deltas(n, &deltas).unwrap();
            assert!(r <= fin_pres_relation_bound(n, degree).unwrap());
            assert_eq!(r, degree + n);
        }
    }
}

#[test]
fn validation() {
    let mut d = nf(ModuleKind::Other, 2);
    d.epsilon = Some(3);
    assert!(log_chi(&d).is_err());
    d.epsilon = Some(2);
    d.ell_adic_places = vec![EllAdicPlace { residue_char: 5, ord: 4 }];
    assert!(log_chi(&d).is_err());
    let mut e = nf(ModuleKind::Other, 2);
    e.ell = 6;
    assert!(log_chi(&e).is_err());
    let json = r#"{"ell":3,"field":"number","module":"other","dim_a":2,"epsilon":2}"#;
    let parsed: LocalData = serde_json::from_str(json).unwrap();
    assert_eq!(parsed.endo_dim, 1);
    assert!(serde_json::from_str::<LocalData>(r#"{"ell":3,"field":"number","module":"other","dim_a":2,"bogus":1}"#).is_err());
}
