//! The random relation model: Y-values, the closed-form probability that
//! Y-values of random elements normally generate a semisimple relation
//! group, exhaustive counts, and seeded sampling of random quotients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{gamma_fingerprint, is_gamma_isomorphic, Fingerprint, GammaGroup};
use crate::presentations::oracle::quotient_module;
use crate::{ElemSet, Error, FpModule, Limits, Result};

/// Y(g) = (g⁻¹γ₁(g), …, g⁻¹γ_d(g)) for the listed elements γ_i of Γ, which
/// must generate Γ.
pub fn y_map(h: &GammaGroup, gamma_generators: &[usize], g: usize) -> Result<Vec<usize>> {
    let gamma = h.gamma();
    if gamma_generators.iter().any(|&t| t >= gamma.order()) || gamma.closure(gamma_generators).count() != gamma.order() {
        return Err(Error::Precondition("listed elements do not generate Γ".into()));
    }
    Ok(y_values(h, gamma_generators, g))
}

fn y_values(h: &GammaGroup, gens: &[usize], g: usize) -> Vec<usize> {
    let grp = h.group();
    let gi = grp.inv(g);
    gens.iter().map(|&t| grp.mul(gi, h.act(t, g))).collect()
}

/// Number of distinct Y-values over the elements of `s`, counted directly.
pub fn y_image_size(h: &GammaGroup, s: &ElemSet) -> usize {
    let gens = h.gamma().generators().to_vec();
    let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    for x in s.iter() {
        seen.insert(y_values(h, &gens, x));
    }
    seen.len()
}

/// One isotypic block of a relation group R = ∏ A_i^{m_i}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFactor {
    pub abelian: bool,
    pub multiplicity: usize,
    /// The prime ℓ with |A| a power of ℓ, for abelian factors.
    pub prime: Option<u32>,
    /// dim End(A) over F_ℓ, for abelian factors.
    pub endo_dim: Option<usize>,
    pub order: u128,
    /// |Y(A)| = |A| / |A^Γ|.
    pub y_size: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationModuleDecomposition {
    pub factors: Vec<RelationFactor>,
}

impl RelationModuleDecomposition {
    pub fn new(factors: Vec<RelationFactor>) -> Result<Self> {
        for f in &factors {
            if f.multiplicity == 0 {
                return Err(Error::InvalidData("factor multiplicities must be positive".into()));
            }
            if f.abelian && (f.prime.is_none() || f.endo_dim.is_none()) {
                return Err(Error::InvalidData("abelian factors need a prime and an endomorphism dimension".into()));
            }
            if f.y_size == 0 {
                return Err(Error::InvalidData("|Y(A)| must be positive".into()));
            }
            if f.abelian {
                let (l, h) = (f.prime.unwrap() as u128, f.endo_dim.unwrap());
                let dims = (ilog(f.order, l), ilog(f.y_size, l));
                match dims {
                    (Some(d), Some(y)) if h > 0 && d % h == 0 && y % h == 0 && y <= d => {}
                    _ => {
                        return Err(Error::InvalidData(
                            "abelian factor: |A| and |Y(A)| must be powers of ℓ^h with |Y(A)| ≤ |A|".into(),
                        ))
                    }
                }
            }
        }
        Ok(RelationModuleDecomposition { factors })
    }
}

/// Splits the normal Γ-subgroup `r` of `f` into minimal normal Γ-subgroups of
/// `f`, grouped by isomorphism as F ⋊ Γ-groups.
pub fn decompose_relation_group(f: &GammaGroup, r: &ElemSet, limits: &Limits) -> Result<RelationModuleDecomposition> {
    if !f.is_gamma_normal(r) {
        return Err(Error::NotNormal);
    }
    let g = f.group();
    let trivial = ElemSet::singleton(g.order(), g.identity());
    let mins: Vec<ElemSet> = f.minimal_gamma_normal_subgroups().into_iter().filter(|k| k.is_subset(r)).collect();
    let mut prod = trivial.clone();
    let mut parts = Vec::new();
    for k in &mins {
        if k.intersection(&prod) == trivial {
            let mut seeds = g.small_generating_set(&prod);
            seeds.extend(g.small_generating_set(k));
            prod = g.closure(&seeds);
            parts.push(k.clone());
        }
    }
    if prod != *r {
        return Err(Error::Precondition("relation group is not a product of minimal normal Γ-subgroups".into()));
    }
    let sd = f.semidirect_product(limits)?;
    let lift: Vec<usize> = g.elements().collect();
    let mut abelian: Vec<(FpModule, usize, RelationFactor)> = Vec::new();
    let mut factors = Vec::new();
    for k in &parts {
        let order = k.count() as u128;
        let y_size = y_image_size(f, k) as u128;
        let ks = k.to_vec();
        let is_abelian = ks.iter().all(|&a| ks.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
        if !is_abelian {
            factors.push(RelationFactor { abelian: false, multiplicity: 1, prime: None, endo_dim: None, order, y_size });
            continue;
        }
        let p = g.element_order(ks.iter().copied().find(|&x| x != g.identity()).unwrap()) as u32;
        let module = quotient_module(f, &sd, &lift, k, &trivial, p)?
            .ok_or_else(|| Error::InvalidData("abelian minimal normal subgroup is not elementary".into()))?;
        if let Some(entry) = abelian.iter_mut().find(|(m, _, _)| m.dim() == module.dim() && m.prime() == p && m.is_isomorphic(&module)) {
            entry.1 += 1;
        } else {
            let endo = crate::flmod::endomorphism_dim(&module);
            let factor =
                RelationFactor { abelian: true, multiplicity: 1, prime: Some(p), endo_dim: Some(endo), order, y_size };
            abelian.push((module, 1, factor));
        }
    }
    for (_, m, mut factor) in abelian {
        factor.multiplicity = m;
        factors.push(factor);
    }
    RelationModuleDecomposition::new(factors)
}

/// The closed-form probability with its per-factor positivity data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationProbability {
    #[serde(with = "crate::io::ratio_serde::big")]
    pub value: BigRational,
    pub n_plus_u: usize,
    /// For each abelian factor: whether m ≤ (n+u)·log_ℓ|Y(A)| / dim End(A).
    pub abelian_within_bound: Vec<bool>,
    /// For each abelian factor: whether its product of terms is positive.
    pub abelian_positive: Vec<bool>,
}

fn big_pow(base: u128, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), e)
}

fn ilog(mut x: u128, base: u128) -> Option<usize> {
    let mut k = 0;
    while x > 1 {
        if x % base != 0 {
            return None;
        }
        x /= base;
        k += 1;
    }
    Some(k)
}

/// ∏_{abelian} ∏_{j<m} (1 − |End A|^j·|Y(A)|^{−(n+u)}) · ∏_{nonabelian} (1 − |Y(A)|^{−(n+u)})^m.
pub fn generation_probability(decomp: &RelationModuleDecomposition, n_plus_u: usize) -> Result<GenerationProbability> {
    let one = BigRational::one();
    let mut value = one.clone();
    let mut within = Vec::new();
    let mut positive = Vec::new();
    for f in &decomp.factors {
        let ypow = big_pow(f.y_size, n_plus_u);
        if f.abelian {
            let p = f.prime.unwrap() as u128;
            let h = f.endo_dim.unwrap();
            let logy = ilog(f.y_size, p).ok_or_else(|| Error::InvalidData("|Y(A)| is not a power of ℓ".into()))?;
            let mut part = one.clone();
            for j in 0..f.multiplicity {
                part *= &one - BigRational::new(big_pow(p, h * j), ypow.clone());
            }
            within.push(f.multiplicity * h <= n_plus_u * logy);
            positive.push(part > BigRational::zero());
            value *= part;
        } else {
            if f.y_size <= 1 {
                return Err(Error::Precondition("nonabelian factor with |Y(A)| = 1".into()));
            }
            let term = &one - BigRational::new(BigInt::one(), ypow);
            value *= num_traits::pow(term, f.multiplicity);
        }
    }
    Ok(GenerationProbability { value, n_plus_u, abelian_within_bound: within, abelian_positive: positive })
}

/// Counts tuples by the subgroup their Y-values normally generate, grouping
/// tuples with equal prefix closures.
struct ClosureCounter<'a> {
    f: &'a GammaGroup,
    ops: Vec<Vec<u32>>,
    pool: Vec<usize>,
    /// Y-values of each pool element.
    ys: Vec<Vec<usize>>,
    memo: HashMap<(ElemSet, usize), HashMap<ElemSet, BigInt>>,
}

impl<'a> ClosureCounter<'a> {
    fn new(f: &'a GammaGroup, pool: &ElemSet) -> Self {
        let gens = f.gamma().generators().to_vec();
        let pool: Vec<usize> = pool.to_vec();
        let ys = pool.iter().map(|&x| y_values(f, &gens, x)).collect();
        ClosureCounter { f, ops: f.operator_perms(), pool, ys, memo: HashMap::new() }
    }

    fn extend(&self, s: &ElemSet, ys: &[usize]) -> ElemSet {
        if ys.iter().all(|&y| s.contains(y)) {
            return s.clone();
        }
        let g = self.f.group();
        let mut seeds = g.small_generating_set(s);
        seeds.extend_from_slice(ys);
        crate::group::lattice::op_closure(g, &self.ops, &seeds)
    }

    /// Distribution of the final closure over all extensions of length `k`.
    fn count(&mut self, s: ElemSet, k: usize) -> HashMap<ElemSet, BigInt> {
        if k == 0 {
            return HashMap::from([(s, BigInt::one())]);
        }
        let key = (s.clone(), k);
        if let Some(d) = self.memo.get(&key) {
            return d.clone();
        }
        let mut next: HashMap<ElemSet, u64> = HashMap::new();
        for i in 0..self.pool.len() {
            *next.entry(self.extend(&s, &self.ys[i])).or_default() += 1;
        }
        let mut out: HashMap<ElemSet, BigInt> = HashMap::new();
        let mut next: Vec<(ElemSet, u64)> = next.into_iter().collect();
        next.sort();
        for (t, c) in next {
            for (u, d) in self.count(t, k - 1) {
                *out.entry(u).or_insert_with(BigInt::zero) += d * c;
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

fn closure_distribution(f: &GammaGroup, pool: &ElemSet, n_plus_u: usize, limits: &Limits) -> Result<(HashMap<ElemSet, BigInt>, BigInt)> {
    let lattice = f.gamma_normal_subgroups(limits)?;
    let work = lattice.len() as u128 * pool.count() as u128 * n_plus_u as u128;
    if work > limits.enumeration_budget as u128 {
        return Err(Error::BudgetExceeded { needed: work, budget: limits.enumeration_budget as u128 });
    }
    let mut counter = ClosureCounter::new(f, pool);
    let trivial = ElemSet::singleton(f.order(), f.group().identity());
    let dist = counter.count(trivial, n_plus_u);
    Ok((dist, big_pow(pool.count() as u128, n_plus_u)))
}

/// Fraction of tuples in R^{n+u} whose Y-values generate `r` as a normal
/// Γ-subgroup of `f`, by exact counting.
pub fn exhaustive_generation_probability(f: &GammaGroup, r: &ElemSet, n_plus_u: usize, limits: &Limits) -> Result<BigRational> {
    if !f.is_gamma_normal(r) {
        return Err(Error::NotNormal);
    }
    let (dist, total) = closure_distribution(f, r, n_plus_u, limits)?;
    let hit = dist.get(r).cloned().unwrap_or_else(BigInt::zero);
    Ok(BigRational::new(hit, total))
}

/// The same fraction by visiting every tuple one at a time.
pub fn naive_generation_probability(f: &GammaGroup, r: &ElemSet, n_plus_u: usize, limits: &Limits) -> Result<BigRational> {
    if !f.is_gamma_normal(r) {
        return Err(Error::NotNormal);
    }
    let pool = r.to_vec();
    let total = (pool.len() as u128).checked_pow(n_plus_u as u32).unwrap_or(u128::MAX);
    if total > limits.enumeration_budget as u128 {
        return Err(Error::BudgetExceeded { needed: total, budget: limits.enumeration_budget as u128 });
    }
    let gens = f.gamma().generators().to_vec();
    let ops = f.operator_perms();
    let hits: u64 = (0..total as u64)
        .into_par_iter()
        .map(|mut idx| {
            let mut seeds = Vec::new();
            for _ in 0..n_plus_u {
                let x = pool[(idx % pool.len() as u64) as usize];
                idx /= pool.len() as u64;
                seeds.extend(y_values(f, &gens, x));
            }
            u64::from(crate::group::lattice::op_closure(f.group(), &ops, &seeds) == *r)
        })
        .sum();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Exact distribution of the Γ-isomorphism class of F/[Y(r₁), …, Y(r_{n+u})]
/// over uniform tuples in F^{n+u}, keyed by kernel.
pub fn exhaustive_quotient_distribution(f: &GammaGroup, n_plus_u: usize, limits: &Limits) -> Result<Vec<(ElemSet, BigRational)>> {
    let (dist, total) = closure_distribution(f, &ElemSet::full(f.order()), n_plus_u, limits)?;
    let mut out: Vec<(ElemSet, BigRational)> =
        dist.into_iter().map(|(s, c)| (s, BigRational::new(c, total.clone()))).collect();
    out.sort_by(|a, b| a.0.count().cmp(&b.0.count()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// One Γ-isomorphism class of sampled quotients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBucket {
    pub fingerprint: Fingerprint,
    pub quotient_order: usize,
    /// Kernel of the first draw landing in this class.
    pub representative_kernel: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleHistogram {
    pub seed: u64,
    pub draws: u64,
    pub n_plus_u: usize,
    pub admissible: bool,
    pub buckets: Vec<SampleBucket>,
}

/// The random stream of one draw, derived from the seed and the draw index.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `n_plus_u` uniform elements of `f` per sample and buckets the
/// quotient by the normal Γ-closure of their Y-values.
pub fn sample_quotients(f: &GammaGroup, n_plus_u: usize, draws: u64, seed: u64, limits: &Limits) -> Result<SampleHistogram> {
    limits.check_order("sampled group order", f.order(), limits.group_order)?;
    let gens = f.gamma().generators().to_vec();
    let ops = f.operator_perms();
    let n = f.order();
    let kernels: Vec<ElemSet> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = draw_rng(seed, i);
            let mut seeds = Vec::with_capacity(n_plus_u * gens.len());
            for _ in 0..n_plus_u {
                let x = rng.gen_range(0..n);
                seeds.extend(y_values(f, &gens, x));
            }
            crate::group::lattice::op_closure(f.group(), &ops, &seeds)
        })
        .collect();
    // first-seen order keeps bucketing deterministic
    let mut by_kernel: HashMap<ElemSet, usize> = HashMap::new();
    let mut classes: Vec<(GammaGroup, SampleBucket)> = Vec::new();
    for k in kernels {
        if let Some(&b) = by_kernel.get(&k) {
            classes[b].1.count += 1;
            continue;
        }
        let (q, _) = f.quotient(&k)?;
        let fp = gamma_fingerprint(&q);
        let found = classes
            .iter()
            .position(|(rep, b)| b.fingerprint == fp && is_gamma_isomorphic(rep, &q).is_some());
        let b = match found {
            Some(b) => b,
            None => {
                let bucket =
                    SampleBucket { fingerprint: fp, quotient_order: q.order(), representative_kernel: k.to_vec(), count: 0 };
                classes.push((q, bucket));
                classes.len() - 1
            }
        };
        classes[b].1.count += 1;
        by_kernel.insert(k, b);
    }
    let mut buckets: Vec<SampleBucket> = classes.into_iter().map(|(_, b)| b).collect();
    buckets.sort_by(|a, b| a.quotient_order.cmp(&b.quotient_order).then_with(|| a.fingerprint.cmp(&b.fingerprint)));
    Ok(SampleHistogram { seed, draws, n_plus_u, admissible: f.is_admissible(), buckets })
}
