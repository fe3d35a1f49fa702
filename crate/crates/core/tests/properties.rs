use gammapres_core::cohom::{h1_dim, h2_dim};
use gammapres_core::flmod::fp::is_prime;
use gammapres_core::group::catalog::{abelian, abelian_with_inversion, cyclic};
use gammapres_core::io::{group_from_json, group_to_json, module_from_json, module_to_json};
use gammapres_core::randmodel::{generation_probability, sample_quotients, RelationFactor, RelationModuleDecomposition};
use gammapres_core::{FpModule, Limits};
use proptest::prelude::*;

const PRIMES: [u32; 5] = [2, 3, 5, 7, 11];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// A valid abelian factor: prime ℓ, h = dim End(A), |A| = ℓ^{hd}, |A^Γ| = ℓ^{hg} with g < d.
fn abelian_factor() -> impl Strategy<Value = RelationFactor> {
    (0..3usize, 1..4usize, 1..4usize, 1..4usize)
        .prop_flat_map(|(pi, h, d, m)| (Just((pi, h, d, m)), 0..d))
        .prop_map(|((pi, h, d, m), g)| {
            let l = [2u128, 3, 5][pi];
            RelationFactor {
                abelian: true,
                multiplicity: m,
                prime: Some(l as u32),
                endo_dim: Some(h),
                order: l.pow((h * d) as u32),
                y_size: l.pow((h * (d - g)) as u32),
            }
        })
}

fn nonabelian_factor() -> impl Strategy<Value = RelationFactor> {
    (1..3usize, prop::sample::select(vec![60u128, 168, 360])).prop_map(|(m, order)| RelationFactor {
        abelian: false,
        multiplicity: m,
        prime: None,
        endo_dim: None,
        order,
        y_size: order,
    })
}

fn decomposition() -> impl Strategy<Value = RelationModuleDecomposition> {
    prop::collection::vec(prop_oneof![3 => abelian_factor(), 1 => nonabelian_factor()], 1..4)
        .prop_map(|f| RelationModuleDecomposition::new(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_json_round_trip(orders in prop::collection::vec(2..7usize, 1..4)) {
        let l = Limits::default();
        let g = abelian(&orders);
        let j = group_to_json(&g);
        let back = group_from_json(&j, &l).unwrap();
        prop_assert_eq!(back.order(), g.order());
        prop_assert_eq!(group_to_json(&back), j);
    }

    #[test]
    fn module_json_round_trip(n in 2..12usize, pi in 0..5usize, t in 1..100u64) {
        let p = PRIMES[pi];
        let g = cyclic(n);
        let e = (p as u64 - 1) / gcd(n as u64, p as u64 - 1);
        let v = pow_mod(t % (p as u64 - 1) + 1, e, p as u64) as u32;
        let a = FpModule::character(&g, p, &[v]).unwrap().direct_sum(&FpModule::trivial(&g, p, 1)).unwrap();
        let j = module_to_json(&a);
        let back = module_from_json(&j, &g, &Limits::default()).unwrap();
        prop_assert_eq!(module_to_json(&back), j);
    }

    #[test]
    fn generation_probability_is_monotone(d in decomposition(), k in 1..6usize) {
        let a = generation_probability(&d, k).unwrap();
        let b = generation_probability(&d, k + 1).unwrap();
        prop_assert!(a.value <= b.value);
        prop_assert!(b.value <= num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn positivity_threshold(f in abelian_factor(), k in 1..6usize) {
        let d = RelationModuleDecomposition::new(vec![f.clone()]).unwrap();
        let r = generation_probability(&d, k).unwrap();
        let l = f.prime.unwrap() as u128;
        let h = f.endo_dim.unwrap();
        let logy = (0..).find(|&e| l.pow(e) == f.y_size).unwrap() as usize;
        prop_assert_eq!(r.abelian_positive[0], h * (f.multiplicity - 1) < k * logy);
        prop_assert_eq!(r.abelian_within_bound[0], f.multiplicity * h <= k * logy);
        if r.abelian_within_bound[0] {
            prop_assert!(r.abelian_positive[0]);
        }
    }

    #[test]
    fn coprime_cohomology_vanishes(n in 2..16usize, pi in 0..5usize, t in 1..100u64) {
        let p = PRIMES[pi];
        prop_assume!(n % p as usize != 0);
        let e = (p as u64 - 1) / gcd(n as u64, p as u64 - 1);
        let v = pow_mod(t % (p as u64 - 1) + 1, e, p as u64) as u32;
        let a = FpModule::character(&cyclic(n), p, &[v]).unwrap();
        let l = Limits::default();
        prop_assert_eq!(h1_dim(&a, &l).unwrap(), 0);
        prop_assert_eq!(h2_dim(&a, &l).unwrap(), 0);
    }

    #[test]
    fn trivial_h1_counts_divisible_factors(orders in prop::collection::vec(2..9usize, 1..3), pi in 0..3usize) {
        let p = PRIMES[pi];
        prop_assert!(is_prime(p as u64));
        let g = abelian(&orders);
        let a = FpModule::trivial(&g, p, 1);
        let expected = orders.iter().filter(|&&o| o % p as usize == 0).count();
        prop_assert_eq!(h1_dim(&a, &Limits::default()).unwrap(), expected);
    }

    #[test]
    fn sampling_is_seed_determined(seed in any::<u64>(), k in 1..4usize) {
        let f = abelian_with_inversion(&[3]);
        let l = Limits::default();
        let a = sample_quotients(&f, k, 200, seed, &l).unwrap();
        let b = sample_quotients(&f, k, 200, seed, &l).unwrap();
        prop_assert_eq!(a, b);
    }
}
