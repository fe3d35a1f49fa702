//! The acceptance suite: eleven checks against exact small-instance oracles.
//! Reports are deterministic for a fixed seed and carry no timings.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, ArchimedeanPlace, BoundCase, EllAdicPlace, FieldKind, LocalData, ModuleKind};
use crate::cohom::{h1_dim, h1_semidirect_trivial_on_v, h2_dim};
use crate::flmod::simple_modules;
use crate::group::catalog::*;
use crate::group::is_gamma_isomorphic;
use crate::presentations::truncation::{augmentation_power, group_algebra_power, module_as_gamma_group, quotient_by_submodule};
use crate::presentations::{abelian_multiplicity_oracle, msum_decompose, multiplicity_formula, multiplicity_oracle, semidirect_map};
use crate::randmodel::{
    decompose_relation_group, exhaustive_generation_probability, exhaustive_quotient_distribution, generation_probability,
    sample_quotients,
};
use crate::varieties::{exhaustive_height, exhaustive_height_hat, height, height_hat, height_hat_of_variety, pro_c_map, VarietySpec};
use crate::{ElemSet, Error, FiniteGroup, FpModule, GammaGroup, GroupHom, Limits, Matrix, Result};

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "cocycle solver calibration"),
    (2, "coprime vanishing"),
    (3, "free truncation H1"),
    (4, "augmentation truncation H1"),
    (5, "formula against oracles"),
    (6, "multiplicity subadditivity in towers"),
    (7, "monotonicity under pro-C completion"),
    (8, "generation probability"),
    (9, "heights"),
    (10, "arithmetic evaluators"),
    (11, "determinism"),
];

/// Monte Carlo draws per histogram.
pub const DRAWS: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    /// One line per instance, prefixed FAIL for failures.
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestBundle {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

struct Tally {
    instances: usize,
    failed: bool,
    detail: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: 0, failed: false, detail: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.instances += 1;
        if ok {
            self.detail.push(line);
        } else {
            self.failed = true;
            self.detail.push(format!("FAIL {line}"));
        }
    }

    fn attempt(&mut self, label: &str, r: Result<(bool, String)>) {
        match r {
            Ok((ok, line)) => self.check(ok, format!("{label}: {line}")),
            Err(e) => self.check(false, format!("{label}: error: {e}")),
        }
    }

    fn finish(self, id: u8) -> CriterionResult {
        let name = CRITERIA[id as usize - 1].1.to_string();
        let passed = !self.failed && self.instances > 0;
        CriterionResult { id, name, passed, instances: self.instances, detail: self.detail }
    }
}

/// Runs every criterion with the given seed.
pub fn run_selftest(seed: u64, limits: &Limits) -> SelftestBundle {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, seed, limits)).collect();
    let all_passed = criteria.iter().all(|c| c.passed);
    SelftestBundle { seed, criteria, all_passed }
}

pub fn run_criterion(id: u8, seed: u64, limits: &Limits) -> CriterionResult {
    let t = match id {
        1 => calibration(limits),
        2 => coprime_vanishing(seed, limits),
        3 => free_truncation(limits),
        4 => augmentation_truncation(limits),
        5 => formula_vs_oracles(limits),
        6 => towers(limits),
        7 => completion_monotonicity(limits),
        8 => probabilities(seed, limits),
        9 => heights(seed, limits),
        10 => evaluators(),
        11 => determinism(seed, limits),
        _ => {
            let mut t = Tally::new();
            t.check(false, format!("unknown criterion {id}"));
            return CriterionResult { id, name: "unknown".into(), passed: false, instances: 1, detail: t.detail };
        }
    };
    t.finish(id)
}

fn label(g: &FiniteGroup) -> String {
    g.name().map(str::to_string).unwrap_or_else(|| format!("order {}", g.order()))
}

fn calibration(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    for ell in [2usize, 3, 5] {
        for k in 1..=2u32 {
            let g = cyclic(ell.pow(k));
            let a = FpModule::trivial(&g, ell as u32, 1);
            t.attempt(&format!("Z/{}, F_{ell}", ell.pow(k)), (|| {
                let (h1, h2) = (h1_dim(&a, limits)?, h2_dim(&a, limits)?);
                Ok((h1 == 1 && h2 == 1, format!("h1 {h1} h2 {h2}")))
            })());
        }
    }
    t
}

/// Groups of order at most 48 for random coprime pairs.
fn small_group_pool() -> Vec<FiniteGroup> {
    let mut pool: Vec<FiniteGroup> = (2..=12).map(cyclic).collect();
    pool.extend([
        abelian(&[2, 2]),
        abelian(&[2, 4]),
        abelian(&[3, 3]),
        abelian(&[2, 2, 2]),
        abelian(&[4, 4]),
        abelian(&[2, 12]),
        symmetric(3),
        dihedral(4),
        quaternion(),
        dihedral(5),
        alternating(4),
        dihedral(6),
        dicyclic(3),
        symmetric(4),
        heisenberg(3),
        dihedral(8),
        dicyclic(4),
        dihedral(12),
        dihedral(24),
        symmetric(4).direct_product(&cyclic(2)),
    ]);
    pool
}

fn coprime_vanishing(seed: u64, limits: &Limits) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let pool = small_group_pool();
    let primes = [2u32, 3, 5, 7, 11, 13];
    for _ in 0..20 {
        let g = pool.choose(&mut rng).expect("pool is nonempty").clone();
        let coprime: Vec<u32> = primes.iter().copied().filter(|&p| g.order() % p as usize != 0).collect();
        let p = *coprime.choose(&mut rng).expect("some small prime is coprime");
        let pick = rng.gen::<u64>();
        t.attempt(&format!("{}, F_{p}", label(&g)), (|| {
            let simples = simple_modules(&g, p, limits)?;
            let a = simples[(pick % simples.len() as u64) as usize].clone();
            let a = if pick % 3 == 0 { a.direct_sum(&simples[(pick / 3 % simples.len() as u64) as usize])? } else { a };
            let (h1, h2) = (h1_dim(&a, limits)?, h2_dim(&a, limits)?);
            Ok((h1 == 0 && h2 == 0, format!("dim A {} h1 {h1} h2 {h2}", a.dim())))
        })());
    }
    t
}

/// The Γ grid for the truncation criteria.
fn truncation_grid() -> Vec<(FiniteGroup, u32)> {
    vec![(cyclic(2), 3), (cyclic(3), 2), (symmetric(3), 5)]
}

fn free_truncation(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    for (gamma, p) in truncation_grid() {
        let simples = match simple_modules(&gamma, p, limits) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, format!("{}: {e}", label(&gamma)));
                continue;
            }
        };
        for (i, a) in simples.iter().enumerate() {
            for n in 1..=3 {
                let v = group_algebra_power(&gamma, p, n);
                t.attempt(&format!("{} F_{p} simple {i} n {n}", label(&gamma)), (|| {
                    let d = h1_semidirect_trivial_on_v(&v, a)?;
                    Ok((d == n * a.dim(), format!("h1 {d} expected {}", n * a.dim())))
                })());
            }
        }
    }
    t
}

fn augmentation_truncation(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    for (gamma, p) in truncation_grid() {
        let simples = match simple_modules(&gamma, p, limits) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, format!("{}: {e}", label(&gamma)));
                continue;
            }
        };
        for (i, a) in simples.iter().enumerate() {
            let coinv = a.dim() - a.h0_dim();
            for n in 1..=3 {
                let v = augmentation_power(&gamma, p, n);
                t.attempt(&format!("{} F_{p} simple {i} n {n}", label(&gamma)), (|| {
                    let d = h1_semidirect_trivial_on_v(&v, a)?;
                    Ok((d == n * coinv, format!("h1 {d} expected {}", n * coinv)))
                })());
            }
        }
    }
    t
}

/// Inflates a Γ-module to G ⋊ Γ with G acting trivially.
fn inflate(h: &GammaGroup, a: &FpModule, limits: &Limits) -> Result<FpModule> {
    let sd = h.semidirect_product(limits)?;
    let p = a.prime();
    let mut mats: Vec<Matrix> = h.group().generators().iter().map(|_| Matrix::identity(p, a.dim())).collect();
    mats.extend(a.generator_matrices().iter().cloned());
    FpModule::with_dim(&sd.group, p, a.dim(), mats)
}

/// One-dimensional module on G ⋊ Γ: G acts trivially and every Γ generator by −1.
fn sign_module(h: &GammaGroup, p: u32, limits: &Limits) -> Result<FpModule> {
    let sd = h.semidirect_product(limits)?;
    let vals: Vec<u32> =
        sd.group.generators().iter().map(|&s| if sd.split(s).1 == h.gamma().identity() { 1 } else { p - 1 }).collect();
    FpModule::character(&sd.group, p, &vals)
}

fn trivial_module(h: &GammaGroup, p: u32, limits: &Limits) -> Result<FpModule> {
    Ok(FpModule::trivial(&h.semidirect_product(limits)?.group, p, 1))
}

fn hom(f: &FiniteGroup, g: &FiniteGroup, images: &[usize]) -> Result<GroupHom> {
    GroupHom::from_generator_images(f, g, images)
}

/// The map onto the first factor of a direct product.
fn first_factor_images(f: &FiniteGroup, factors: usize) -> Vec<usize> {
    f.generators().iter().enumerate().map(|(i, _)| if i == 0 { 1 } else { 0 }).take(factors).collect()
}

fn formula_vs_oracles(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    // F_ℓ[Γ]ⁿ onto 0 or onto the trivial module; A simple with ℓ ∤ |Γ|
    let grid = [(cyclic(2), 3u32), (cyclic(3), 2), (symmetric(3), 5), (cyclic(4), 5)];
    for (gamma, p) in grid {
        let simples = match simple_modules(&gamma, p, limits) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, format!("{}: {e}", label(&gamma)));
                continue;
            }
        };
        for (i, a) in simples.iter().enumerate() {
            for n in 1..=2 {
                for onto_trivial in [false, true] {
                    if onto_trivial && a.is_trivial_action() {
                        continue;
                    }
                    let tag = format!("{} F_{p} simple {i} n {n} {}", label(&gamma), if onto_trivial { "onto F_l" } else { "onto 0" });
                    t.attempt(&tag, (|| {
                        let f = group_algebra_power(&gamma, p, n);
                        let (target, map) = if onto_trivial {
                            let mut rows = vec![vec![0i64; f.dim()]];
                            rows[0][..gamma.order()].fill(1);
                            let m = Matrix::from_rows(p, &rows).ok_or_else(|| Error::InvalidData("bad map".into()))?;
                            (FpModule::trivial(&gamma, p, 1), m)
                        } else {
                            let basis: Vec<Vec<u8>> =
                                (0..f.dim()).map(|j| (0..f.dim()).map(|k| (j == k) as u8).collect()).collect();
                            quotient_by_submodule(&f, &basis)?
                        };
                        let oracle = abelian_multiplicity_oracle(&f, &target, &map, a)?;
                        let h = module_as_gamma_group(&target, limits)?;
                        let formula = multiplicity_formula(n, &h, &inflate(&h, a, limits)?, limits)?;
                        Ok((formula == oracle, format!("formula {formula} oracle {oracle}")))
                    })());
                }
            }
        }
    }
    for (tag, r) in cover_instances(limits) {
        t.attempt(&tag, r.and_then(|(n, f, h, omega, a)| {
            let oracle = multiplicity_oracle(&f, &h, &omega, &a, limits)?;
            let formula = multiplicity_formula(n, &h, &a, limits)?;
            Ok((formula == oracle, format!("formula {formula} oracle {oracle}")))
        }));
    }
    t
}

type Cover = (usize, GammaGroup, GammaGroup, GroupHom, FpModule);

/// Finite covers that are the largest A-quotient on n generators.
fn cover_instances(limits: &Limits) -> Vec<(String, Result<Cover>)> {
    let plain = GammaGroup::without_gamma;
    let mut out = Vec::new();
    for ell in [2usize, 3, 5] {
        out.push((format!("Z/{} onto Z/{ell}", ell * ell), (|| {
            let (f, h) = (plain(cyclic(ell * ell)), plain(cyclic(ell)));
            let omega = hom(f.group(), h.group(), &[1])?;
            let a = trivial_module(&h, ell as u32, limits)?;
            Ok((1, f, h, omega, a))
        })()));
    }
    for ell in [2usize, 3] {
        out.push((format!("Z/{}xZ/{ell} onto Z/{ell}", ell * ell), (|| {
            let (f, h) = (plain(abelian(&[ell * ell, ell])), plain(cyclic(ell)));
            let omega = hom(f.group(), h.group(), &first_factor_images(f.group(), 2))?;
            let a = trivial_module(&h, ell as u32, limits)?;
            Ok((2, f, h, omega, a))
        })()));
    }
    for (ell, n) in [(2usize, 3usize), (3, 2), (5, 2)] {
        out.push((format!("(Z/{ell})^{n} onto 1"), (|| {
            let (f, h) = (plain(elementary_abelian(ell, n)), plain(trivial()));
            let omega = hom(f.group(), h.group(), &vec![0; f.group().generators().len()])?;
            let a = trivial_module(&h, ell as u32, limits)?;
            Ok((n, f, h, omega, a))
        })()));
    }
    out.push(("Z/9 inverted onto Z/3 inverted".into(), (|| {
        let (f, h) = (cyclic_with_inversion(9), cyclic_with_inversion(3));
        let omega = hom(f.group(), h.group(), &[1])?;
        Ok((1, f, h.clone(), omega, sign_module(&h, 3, limits)?))
    })()));
    out.push(("Z/9xZ/3 inverted onto Z/3 inverted".into(), (|| {
        let (f, h) = (abelian_with_inversion(&[9, 3]), cyclic_with_inversion(3));
        let omega = hom(f.group(), h.group(), &first_factor_images(f.group(), 2))?;
        Ok((2, f, h.clone(), omega, sign_module(&h, 3, limits)?))
    })()));
    for n in 1..=2usize {
        out.push((format!("(Z/3)^{n} inverted onto 1"), (|| {
            let f = abelian_with_inversion(&vec![3; n]);
            let h = GammaGroup::trivial_action(trivial(), cyclic(2));
            let omega = hom(f.group(), h.group(), &vec![0; f.group().generators().len()])?;
            Ok((n, f, h.clone(), omega, sign_module(&h, 3, limits)?))
        })()));
    }
    out.push(("S3 onto Z/2, F_3 sign".into(), (|| {
        let s3 = symmetric(3);
        let images: Vec<usize> = s3.generators().iter().map(|&g| usize::from(s3.element_order(g) == 2)).collect();
        let (f, h) = (plain(s3.clone()), plain(cyclic(2)));
        let omega = hom(f.group(), h.group(), &images)?;
        let sd = h.semidirect_product(limits)?;
        Ok((2, f, h, omega, FpModule::character(&sd.group, 3, &[2])?))
    })()));
    out.push(("Z/4 onto Z/2".into(), (|| {
        let (f, h) = (plain(cyclic(4)), plain(cyclic(2)));
        let omega = hom(f.group(), h.group(), &[1])?;
        Ok((1, f, h.clone(), omega, trivial_module(&h, 2, limits)?))
    })()));
    out
}

/// E = F × K with the projection onto F and its inclusion as a section.
fn product_tower(f: &GammaGroup, k: &GammaGroup) -> Result<(GammaGroup, GroupHom, GroupHom)> {
    let e = f.direct_product(k)?;
    let m = k.order();
    let ek = k.group().identity();
    let alpha = GroupHom::from_map(e.group(), f.group(), e.group().elements().map(|x| x / m).collect())?;
    let section = GroupHom::from_map(f.group(), e.group(), f.group().elements().map(|x| x * m + ek).collect())?;
    Ok((e, alpha, section))
}

fn towers(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    let plain = GammaGroup::without_gamma;
    let s3_sign = |g: &FiniteGroup| -> Vec<usize> { g.generators().iter().map(|&x| usize::from(g.element_order(x) == 2)).collect() };
    type Build = Box<dyn Fn() -> Result<(GammaGroup, GammaGroup, Vec<usize>, GammaGroup, FpModule)>>;
    // (F, G, generator images of β, K, A over G ⋊ Γ)
    let l = limits.clone();
    let cases: Vec<(&str, Build)> = vec![
        ("Z/3 x Z/3 -> Z/3 -> 1", Box::new(move || {
            let g = plain(trivial());
            let a = trivial_module(&g, 3, &l)?;
            Ok((plain(cyclic(3)), g, vec![0], plain(cyclic(3)), a))
        })),
        ("Z/9 x Z/3 -> Z/9 -> Z/3", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(3));
                let a = trivial_module(&g, 3, &l)?;
                Ok((plain(cyclic(9)), g, vec![1], plain(cyclic(3)), a))
            })
        }),
        ("Z/2 x Z/2 -> Z/2 -> 1", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(trivial());
                let a = trivial_module(&g, 2, &l)?;
                Ok((plain(cyclic(2)), g, vec![0], plain(cyclic(2)), a))
            })
        }),
        ("Z/4 x Z/2 -> Z/4 -> Z/2", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(2));
                let a = trivial_module(&g, 2, &l)?;
                Ok((plain(cyclic(4)), g, vec![1], plain(cyclic(2)), a))
            })
        }),
        ("S3 x Z/3 -> S3 -> Z/2, sign", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(2));
                let sd = g.semidirect_product(&l)?;
                let a = FpModule::character(&sd.group, 3, &[2])?;
                let s3 = symmetric(3);
                let images = s3_sign(&s3);
                Ok((plain(s3), g, images, plain(cyclic(3)), a))
            })
        }),
        ("S3 x Z/2 -> S3 -> Z/2", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(2));
                let a = trivial_module(&g, 2, &l)?;
                let s3 = symmetric(3);
                let images = s3_sign(&s3);
                Ok((plain(s3), g, images, plain(cyclic(2)), a))
            })
        }),
        ("Z/3 x Z/3 inverted -> Z/3 -> 1, sign", {
            let l = limits.clone();
            Box::new(move || {
                let g = GammaGroup::trivial_action(trivial(), cyclic(2));
                let a = sign_module(&g, 3, &l)?;
                Ok((cyclic_with_inversion(3), g, vec![0], cyclic_with_inversion(3), a))
            })
        }),
        ("Z/9 x Z/3 inverted -> Z/9 -> Z/3, sign", {
            let l = limits.clone();
            Box::new(move || {
                let g = cyclic_with_inversion(3);
                let a = sign_module(&g, 3, &l)?;
                Ok((cyclic_with_inversion(9), g, vec![1], cyclic_with_inversion(3), a))
            })
        }),
        ("Z/3 x Z/3 inverted -> Z/3 -> 1, trivial", {
            let l = limits.clone();
            Box::new(move || {
                let g = GammaGroup::trivial_action(trivial(), cyclic(2));
                let a = trivial_module(&g, 3, &l)?;
                Ok((cyclic_with_inversion(3), g, vec![0], cyclic_with_inversion(3), a))
            })
        }),
        ("Z/3 x Z/9 -> Z/3 -> 1", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(trivial());
                let a = trivial_module(&g, 3, &l)?;
                Ok((plain(cyclic(3)), g, vec![0], plain(cyclic(9)), a))
            })
        }),
        ("Z/2xZ/2 x Z/2 -> Z/2xZ/2 -> Z/2", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(2));
                let a = trivial_module(&g, 2, &l)?;
                let f = plain(abelian(&[2, 2]));
                let images = first_factor_images(f.group(), 2);
                Ok((f, g, images, plain(cyclic(2)), a))
            })
        }),
        // ℓ prime to |F ⋊ Γ|: every extension of F by A splits
        ("Z/2 x Z/3 -> Z/2 -> 1, F_3", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(trivial());
                let a = trivial_module(&g, 3, &l)?;
                Ok((plain(cyclic(2)), g, vec![0], plain(cyclic(3)), a))
            })
        }),
        ("Z/2 x (Z/3)^2 -> Z/2 -> 1, F_3", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(trivial());
                let a = trivial_module(&g, 3, &l)?;
                Ok((plain(cyclic(2)), g, vec![0], plain(elementary_abelian(3, 2)), a))
            })
        }),
        ("S3 x Z/5 -> S3 -> Z/2, F_5", {
            let l = limits.clone();
            Box::new(move || {
                let g = plain(cyclic(2));
                let a = trivial_module(&g, 5, &l)?;
                let s3 = symmetric(3);
                let images = s3_sign(&s3);
                Ok((plain(s3), g, images, plain(cyclic(5)), a))
            })
        }),
        ("Z/3 x Z/5 inverted -> Z/3 -> 1, F_5 sign", {
            let l = limits.clone();
            Box::new(move || {
                let g = GammaGroup::trivial_action(trivial(), cyclic(2));
                let a = sign_module(&g, 5, &l)?;
                Ok((cyclic_with_inversion(3), g, vec![0], cyclic_with_inversion(5), a))
            })
        }),
    ];
    for (name, build) in cases {
        t.attempt(name, (|| {
            let (f, g, images, k, a) = build()?;
            let beta = hom(f.group(), g.group(), &images)?;
            let (e, alpha, section) = product_tower(&f, &k)?;
            let r = msum_decompose(&e, &f, &g, &alpha, &section, &beta, &a, limits)?;
            let split = r.extensions_split == Some(true);
            let ok = r.bound_holds && (!split || r.equality);
            Ok((ok, format!("m_pi {} m_alpha {} m_beta {} split {split}", r.m_pi, r.m_alpha, r.m_beta)))
        })());
    }
    t
}

fn completion_monotonicity(limits: &Limits) -> Tally {
    let mut t = Tally::new();
    let plain = GammaGroup::without_gamma;
    let spec = |members: Vec<GammaGroup>| VarietySpec::with_limits(members, limits);
    let s3 = symmetric(3);
    let s3_sign: Vec<usize> = s3.generators().iter().map(|&x| usize::from(s3.element_order(x) == 2)).collect();
    // (name, F, G, generator images, members of C)
    let cases: Vec<(&str, GammaGroup, GammaGroup, Vec<usize>, Vec<GammaGroup>)> = vec![
        ("Z/9 -> Z/3, C = var(Z/3)", plain(cyclic(9)), plain(cyclic(3)), vec![1], vec![plain(cyclic(3))]),
        ("Z/9 -> Z/3, C = var(Z/9)", plain(cyclic(9)), plain(cyclic(3)), vec![1], vec![plain(cyclic(9))]),
        ("Z/4 -> Z/2, C = var(Z/2)", plain(cyclic(4)), plain(cyclic(2)), vec![1], vec![plain(cyclic(2))]),
        ("S3 -> Z/2, C = var(Z/2)", plain(s3.clone()), plain(cyclic(2)), s3_sign.clone(), vec![plain(cyclic(2))]),
        ("S3 -> Z/2, C = var(S3)", plain(s3.clone()), plain(cyclic(2)), s3_sign, vec![plain(symmetric(3))]),
        ("Z/3xZ/3 -> Z/3, C = var(Z/3)", plain(abelian(&[3, 3])), plain(cyclic(3)), vec![1, 0], vec![plain(cyclic(3))]),
        ("Z/9xZ/3 inverted -> Z/3, C = var(Z/3 inverted)", abelian_with_inversion(&[9, 3]), cyclic_with_inversion(3), vec![1, 0], vec![
            cyclic_with_inversion(3),
        ]),
        ("Z/9 inverted -> Z/3, C = var(Z/9 inverted)", cyclic_with_inversion(9), cyclic_with_inversion(3), vec![1], vec![
            cyclic_with_inversion(9),
        ]),
        ("Z/4xZ/2 -> Z/2, C = var(Z/2)", plain(abelian(&[4, 2])), plain(cyclic(2)), vec![1, 0], vec![plain(cyclic(2))]),
        ("D8 -> Z/2, C = var(Z/4)", plain(dihedral(4)), plain(cyclic(2)), vec![], vec![plain(cyclic(4))]),
        ("Q8 -> Z/2, C = var(Z/2)", plain(quaternion()), plain(cyclic(2)), vec![], vec![plain(cyclic(2))]),
    ];
    for (name, f, g, images, members) in cases {
        let r = (|| {
            let omega = if images.is_empty() { onto_z2(f.group(), g.group())? } else { hom(f.group(), g.group(), &images)? };
            let c = spec(members)?;
            let done = pro_c_map(&f, &g, &omega, &c, limits)?;
            let target = &done.target;
            let tsd = target.semidirect_product(limits)?;
            let gsd = g.semidirect_product(limits)?;
            let back = semidirect_map(&done.target_projection, &gsd, &tsd);
            let mut lines = Vec::new();
            let mut ok = true;
            let mut primes = crate::presentations::prime_divisors(f.order());
            primes.retain(|&p| (p as usize) < 8);
            for p in primes {
                for a in simple_modules(&tsd.group, p, limits)? {
                    let small = multiplicity_oracle(&done.source.quotient, target, &done.map, &a, limits)?;
                    let big = multiplicity_oracle(&f, &g, &omega, &a.pullback(&back)?, limits)?;
                    ok &= small <= big;
                    lines.push(format!("F_{p} dim {}: {small} <= {big}", a.dim()));
                }
            }
            Ok((ok, lines.join(", ")))
        })();
        t.attempt(name, r);
    }
    t
}

/// The first surjection onto Z/2 found among generator images.
fn onto_z2(f: &FiniteGroup, z2: &FiniteGroup) -> Result<GroupHom> {
    let k = f.generators().len();
    for mask in 1..(1usize << k) {
        let images: Vec<usize> = (0..k).map(|i| (mask >> i) & 1).collect();
        if let Ok(h) = hom(f, z2, &images) {
            if h.is_surjective() {
                return Ok(h);
            }
        }
    }
    Err(Error::InvalidHom("no surjection onto Z/2".into()))
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Z/2 acting on S3 by conjugation by a transposition.
fn s3_with_transposition() -> Result<GammaGroup> {
    let s3 = symmetric(3);
    let t = s3.generators().iter().copied().find(|&x| s3.element_order(x) == 2).ok_or(Error::InvalidGroup("S3".into()))?;
    let swap: Vec<usize> = s3.elements().map(|x| s3.conj(x, t)).collect();
    GammaGroup::new(s3.clone(), cyclic(2), vec![s3.elements().collect(), swap])
}

/// A5 with Z/2 acting by conjugation by a transposition of S5.
fn a5_with_transposition() -> Result<GammaGroup> {
    let s5 = symmetric(5);
    let a = s5.derived_subgroup_of(&ElemSet::full(s5.order()));
    let (a5, embed) = s5.subgroup(&a)?;
    let t = s5.elements().find(|&x| !a.contains(x) && s5.element_order(x) == 2).ok_or(Error::InvalidGroup("S5".into()))?;
    let back = |x: usize| embed.iter().position(|&e| e == x).expect("conjugate stays in A5");
    let swap: Vec<usize> = a5.elements().map(|i| back(s5.conj(embed[i], t))).collect();
    GammaGroup::new(a5.clone(), cyclic(2), vec![a5.elements().collect(), swap])
}

/// A Γ-module viewed as a Γ-group, n copies.
fn module_group(gamma: FiniteGroup, p: u32, rows: &[&[i64]], n: usize, limits: &Limits) -> Result<GammaGroup> {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    let m = Matrix::from_rows(p, &rows).ok_or_else(|| Error::InvalidData("bad matrix".into()))?;
    let v = FpModule::new(&gamma, p, vec![m])?.power(n);
    module_as_gamma_group(&v, limits)
}

fn random_instance_pool(limits: &Limits) -> Vec<(String, Result<(GammaGroup, ElemSet)>)> {
    let whole = |f: GammaGroup| {
        let r = ElemSet::full(f.order());
        (f, r)
    };
    let mut pool: Vec<(String, Result<(GammaGroup, ElemSet)>)> = Vec::new();
    for orders in [&[3usize][..], &[5], &[7], &[3, 3], &[3, 5], &[5, 5], &[3, 3, 3], &[3, 7], &[3, 3, 3, 3]] {
        pool.push((format!("{orders:?} inverted"), Ok(whole(abelian_with_inversion(orders)))));
    }
    pool.push(("Z/3 with trivial Z/2".into(), Ok(whole(GammaGroup::trivial_action(cyclic(3), cyclic(2))))));
    pool.push(("F_2^2 rotated by Z/3".into(), module_group(cyclic(3), 2, &[&[0, 1], &[1, 1]], 1, limits).map(whole)));
    pool.push(("(F_2^2)^2 rotated by Z/3".into(), module_group(cyclic(3), 2, &[&[0, 1], &[1, 1]], 2, limits).map(whole)));
    pool.push(("F_2[Z/3]".into(), module_group(cyclic(3), 2, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]], 1, limits).map(whole)));
    pool.push(("F_3^2 rotated by Z/4".into(), module_group(cyclic(4), 3, &[&[0, 2], &[1, 0]], 1, limits).map(whole)));
    pool.push(("(F_3^2)^2 rotated by Z/4".into(), module_group(cyclic(4), 3, &[&[0, 2], &[1, 0]], 2, limits).map(whole)));
    pool.push(("A3 inside S3".into(), s3_with_transposition().map(|f| {
        let r = f.group().derived_subgroup_of(&ElemSet::full(f.order()));
        (f, r)
    })));
    pool.push(("A5 with a transposition".into(), a5_with_transposition().map(whole)));
    pool
}

fn probability_instance(f: &GammaGroup, r: &ElemSet, k: usize, limits: &Limits) -> Result<(bool, String)> {
    let d = decompose_relation_group(f, r, limits)?;
    let closed = generation_probability(&d, k)?.value;
    let exact = exhaustive_generation_probability(f, r, k, limits)?;
    Ok((closed == exact, format!("n+u {k} closed {closed} exhaustive {exact}")))
}

fn histogram_check(f: &GammaGroup, k: usize, seed: u64, limits: &Limits) -> Result<(bool, String)> {
    let h = sample_quotients(f, k, DRAWS, seed, limits)?;
    let exact = exhaustive_quotient_distribution(f, k, limits)?;
    let classes: Vec<(GammaGroup, BigRational)> =
        exact.iter().map(|(kern, p)| f.quotient(kern).map(|(q, _)| (q, p.clone()))).collect::<Result<_>>()?;
    let mut ok = h.buckets.iter().map(|b| b.count).sum::<u64>() == h.draws;
    let mut lines = Vec::new();
    let mut covered = BigRational::from_integer(0.into());
    for b in &h.buckets {
        let kernel = ElemSet::from_indices(f.order(), b.representative_kernel.iter().copied());
        let (rep, _) = f.quotient(&kernel)?;
        let mut p = BigRational::from_integer(0.into());
        for (q, w) in &classes {
            if q.order() == rep.order() && is_gamma_isomorphic(&rep, q).is_some() {
                p += w;
            }
        }
        covered += &p;
        let pf = p.to_f64().unwrap_or(0.0);
        let n = h.draws as f64;
        let sigma = (n * pf * (1.0 - pf)).sqrt();
        let dev = (b.count as f64 - n * pf).abs();
        let within = if sigma == 0.0 { dev == 0.0 } else { dev <= 4.0 * sigma };
        ok &= within;
        lines.push(format!("order {} count {} expected {}", b.quotient_order, b.count, p));
    }
    // classes never drawn must be rare enough to miss at this sample size
    let missing = BigRational::from_integer(1.into()) - covered;
    let miss = missing.to_f64().unwrap_or(1.0);
    ok &= miss * h.draws as f64 <= 4.0 * (h.draws as f64 * miss).sqrt().max(1.0);
    Ok((ok, lines.join("; ")))
}

fn probabilities(seed: u64, limits: &Limits) -> Tally {
    let mut t = Tally::new();
    let f = cyclic_with_inversion(3);
    t.attempt("Z/3 inverted", probability_instance(&f, &ElemSet::full(3), 2, limits).map(|(ok, s)| {
        let want = ratio(8, 9).to_string();
        (ok && s.contains(&format!("closed {want} ")), s)
    }));
    let f = abelian_with_inversion(&[3, 3]);
    t.attempt("(Z/3)^2 inverted", probability_instance(&f, &ElemSet::full(9), 3, limits).map(|(ok, s)| {
        let want = ratio(208, 243).to_string();
        (ok && s.contains(&format!("closed {want} ")), s)
    }));
    let pool = random_instance_pool(limits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(&mut rng);
    for &i in order.iter().take(10) {
        let k = rng.gen_range(1..=4usize);
        let (name, inst) = &pool[i];
        let r = match inst {
            Ok((f, r)) => probability_instance(f, r, k, limits),
            Err(e) => Err(Error::InvalidData(e.to_string())),
        };
        t.attempt(name, r);
    }
    let hist: Vec<(&str, Result<GammaGroup>, usize)> = vec![
        ("histogram Z/3 inverted", Ok(cyclic_with_inversion(3)), 2),
        ("histogram (Z/3)^2 inverted", Ok(abelian_with_inversion(&[3, 3])), 3),
        ("histogram F_3^2 rotated by Z/4", module_group(cyclic(4), 3, &[&[0, 2], &[1, 0]], 1, limits), 1),
    ];
    for (name, f, k) in hist {
        t.attempt(name, f.and_then(|f| histogram_check(&f, k, seed, limits)));
    }
    t
}

fn height_pool() -> Vec<FiniteGroup> {
    vec![
        cyclic(2),
        cyclic(3),
        cyclic(4),
        cyclic(5),
        cyclic(6),
        cyclic(8),
        cyclic(9),
        abelian(&[2, 2]),
        abelian(&[3, 3]),
        symmetric(3),
        dihedral(4),
        quaternion(),
        dihedral(5),
        alternating(4),
    ]
}

fn heights(seed: u64, limits: &Limits) -> Tally {
    let mut t = Tally::new();
    t.attempt("H(S3)", (|| {
        let g = symmetric(3);
        let (a, b) = (height(&g, limits)?, exhaustive_height(&g, limits)?);
        Ok((a == 2 && b == 2, format!("greedy {a} exhaustive {b}")))
    })());
    t.attempt("hat h(Z/8)", (|| {
        let g = cyclic(8);
        let (a, b) = (height_hat(&g, limits)?, exhaustive_height_hat(&g, limits)?);
        Ok((a == 3 && b == 3, format!("greedy {a} exhaustive {b}")))
    })());
    for (p, k) in [(2usize, 1usize), (2, 3), (3, 2), (5, 2), (2, 5)] {
        t.attempt(&format!("hat h((Z/{p})^{k})"), (|| {
            let g = elementary_abelian(p, k);
            let (a, b) = (height_hat(&g, limits)?, exhaustive_height_hat(&g, limits)?);
            Ok((a == 1 && b == 1, format!("greedy {a} exhaustive {b}")))
        })());
    }
    let pool = height_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
    let mut done = 0;
    while done < 20 {
        let g = pool.choose(&mut rng).expect("pool is nonempty");
        let h = pool.choose(&mut rng).expect("pool is nonempty");
        if g.order() * h.order() > 96 {
            continue;
        }
        done += 1;
        t.attempt(&format!("product {} x {}", label(g), label(h)), (|| {
            let gh = g.direct_product(h);
            let (a, b, c) = (height_hat(g, limits)?, height_hat(h, limits)?, height_hat(&gh, limits)?);
            let mut ok = c <= a.max(b);
            if gh.order() <= limits.exhaustive_height_order {
                ok &= exhaustive_height_hat(&gh, limits)? == c;
            }
            Ok((ok, format!("{c} <= max({a}, {b})")))
        })());
    }
    let members = [cyclic(2), cyclic(3), cyclic(4), symmetric(3), abelian(&[2, 2]), cyclic(9)];
    for _ in 0..20 {
        let g = pool.choose(&mut rng).expect("pool is nonempty").clone();
        let count = rng.gen_range(1..=2usize);
        let chosen: Vec<FiniteGroup> = members.choose_multiple(&mut rng, count).cloned().collect();
        let names: Vec<String> = chosen.iter().map(label).collect();
        t.attempt(&format!("{} completed in var({})", label(&g), names.join(", ")), (|| {
            let c = VarietySpec::with_limits(chosen.into_iter().map(GammaGroup::without_gamma).collect(), limits)?;
            let done = crate::varieties::pro_c_completion(&GammaGroup::without_gamma(g.clone()), &c, limits)?;
            let hc = height_hat_of_variety(&c, limits)?;
            let h = height_hat(done.quotient.group(), limits)?;
            Ok((h <= hc, format!("order {} hat h {h} <= {hc}", done.quotient.order())))
        })());
    }
    t
}

fn evaluators() -> Tally {
    let mut t = Tally::new();
    let int = Rational64::from_integer;
    let trivial = |field: FieldKind| {
        let mut d = LocalData::new(5, field, ModuleKind::Trivial, 1);
        d.dim_a_gamma = 1;
        d
    };
    // function field δ: the genus cases
    for g in 0..4u64 {
        t.attempt(&format!("delta_ff trivial genus {g}"), (|| {
            let mut d = trivial(FieldKind::Function);
            d.genus = Some(g);
            d.dim_dual_gal = Some(0);
            d.dim_a_gal = Some(1);
            d.dim_a_gal_coinvariants = Some(1);
            let v = arith::delta_ff(&d)?;
            Ok((v == -1, format!("{v}")))
        })());
        for dim in 1..4u64 {
            t.attempt(&format!("delta_ff dim {dim} genus {g}"), (|| {
                let mut d = LocalData::new(5, FieldKind::Function, ModuleKind::Other, dim);
                d.genus = Some(g);
                let v = if g == 0 {
                    d.dim_a_gal_coinvariants = Some(0);
                    arith::delta_ff(&d)?
                } else {
                    d.dim_dual_gal = Some(0);
                    d.dim_a_gal = Some(0);
                    arith::delta_ff(&d)?
                };
                Ok((v == 0, format!("{v}")))
            })());
        }
    }
    // totally real over ℚ: 0 for F_ℓ and dim A otherwise
    for dim in 1..5u64 {
        t.attempt(&format!("delta over Q dim {dim}"), (|| {
            let mut o = LocalData::new(5, FieldKind::Number, ModuleKind::Other, dim);
            o.r1 = 1;
            o.archimedean = vec![ArchimedeanPlace::default()];
            o.dim_dual_gal = Some(0);
            o.dim_a_gal = Some(0);
            o.ell_adic_places = vec![EllAdicPlace { residue_char: 5, ord: dim as i64 }];
            let v = arith::delta_nf_bound(&o)?.value;
            Ok((v == dim as i64, format!("{v}")))
        })());
    }
    t.attempt("delta over Q, F_l", (|| {
        let mut d = trivial(FieldKind::Number);
        d.r1 = 1;
        d.archimedean = vec![ArchimedeanPlace::default()];
        d.dim_dual_gal = Some(0);
        d.dim_a_gal = Some(1);
        d.ell_adic_places = vec![EllAdicPlace { residue_char: 5, ord: 1 }];
        let v = arith::delta_nf_bound(&d)?.value;
        Ok((v == 0, format!("{v}")))
    })());
    for n in 0..6 {
        t.attempt(&format!("admissible bound for F_l, n {n}"), (|| {
            let v = arith::mult_bound_main(n, &trivial(FieldKind::Number), BoundCase::Admissible)?;
            Ok((v == int(0), format!("{v}")))
        })());
    }
    for ell in [5u32, 7, 11, 13] {
        for dim in 1..4u64 {
            for n in 1..4u64 {
                t.attempt(&format!("roots of unity ell {ell} dim {dim} n {n}"), (|| {
                    let mut d = LocalData::new(ell, FieldKind::Number, ModuleKind::Other, dim);
                    d.mu_ell_in_base = true;
                    d.r2 = (ell as u64 - 1) / 2;
                    d.xi = Some(0);
                    d.ell_adic_places = vec![EllAdicPlace { residue_char: ell, ord: (ell as i64 - 1) * dim as i64 }];
                    let v = arith::mult_bound_roots_of_unity(n, &d)?;
                    let want = int(((n + (ell as u64 - 1) / 2) * dim) as i64);
                    Ok((v == want, format!("{v} expected {want}")))
                })());
            }
        }
    }
    t
}

fn determinism(seed: u64, limits: &Limits) -> Tally {
    let mut t = Tally::new();
    for id in [2u8, 8, 9] {
        let a = serde_json::to_vec(&run_criterion(id, seed, limits));
        let b = serde_json::to_vec(&run_criterion(id, seed, limits));
        match (a, b) {
            (Ok(a), Ok(b)) => t.check(a == b, format!("criterion {id}: {} bytes", a.len())),
            _ => t.check(false, format!("criterion {id}: serialization failed")),
        }
    }
    t
}
