//! Multiplicities and relator rank assembled from cohomology dimensions.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cohom::semidirect_cohomology;
use crate::flmod::{endomorphism_dim, fp::is_prime, simple_modules, FpModule};
use crate::group::{GammaGroup, SemidirectProduct};
use crate::{ElemSet, Error, Limits, Result};

/// The ingredients of the multiplicity formula for one module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTerms {
    pub n: usize,
    pub prime: u32,
    pub dim: usize,
    /// dim End(A).
    pub endo: usize,
    pub xi: usize,
    pub h1: usize,
    pub h2: usize,
    /// dim A^Γ.
    pub gamma_fixed: usize,
    /// True when ℓ divides |Γ| and the value is 0 without cohomology.
    pub divisible: bool,
    pub value: usize,
}

pub(crate) fn check_over_semidirect(sd: &SemidirectProduct, a: &FpModule) -> Result<()> {
    if !sd.group.same_table(a.group()) || sd.group.generators() != a.group().generators() {
        return Err(Error::InvalidModule("module is not over G ⋊ Γ".into()));
    }
    Ok(())
}

/// m(n, Γ, G, A) with every intermediate term.
pub fn multiplicity_terms(n: usize, h: &GammaGroup, a: &FpModule, limits: &Limits) -> Result<MultiplicityTerms> {
    let sd = h.semidirect_product(limits)?;
    check_over_semidirect(&sd, a)?;
    let p = a.prime();
    let dim = a.dim();
    let gamma_part = sd.gamma_subgroup();
    let gamma_fixed = a.invariant_dim(&gamma_part);
    let mut t = MultiplicityTerms {
        n,
        prime: p,
        dim,
        endo: endomorphism_dim(a),
        xi: 0,
        h1: 0,
        h2: 0,
        gamma_fixed,
        divisible: false,
        value: 0,
    };
    if h.gamma().order() % p as usize == 0 {
        t.divisible = true;
        return Ok(t);
    }
    t.xi = a.xi(&gamma_part, &ElemSet::full(sd.group.order()))?;
    let c = semidirect_cohomology(h, a, limits)?;
    t.h1 = c.h1;
    t.h2 = c.h2;
    let num = (n * dim) as i64 - t.xi as i64 + t.h2 as i64 - t.h1 as i64;
    let den = t.endo as i64;
    if num < 0 || num % den != 0 {
        return Err(Error::NonIntegralMultiplicity { numerator: num, denominator: den });
    }
    t.value = (num / den) as usize;
    Ok(t)
}

/// m(n, Γ, G, A): 0 when ℓ divides |Γ|, else (n·dim A − ξ + h² − h¹) / dim End(A).
///
/// `a` must be a module over the group of `h.semidirect_product(limits)`.
pub fn multiplicity_formula(n: usize, h: &GammaGroup, a: &FpModule, limits: &Limits) -> Result<usize> {
    Ok(multiplicity_terms(n, h, a, limits)?.value)
}

/// The admissible multiplicity m(n) − n·dim A^Γ / dim End(A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleMultiplicity {
    #[serde(with = "crate::io::ratio_serde::small")]
    pub value: Rational64,
    pub terms: MultiplicityTerms,
    /// Set when the value is negative, so `a` cannot occur as a factor.
    pub warning: Option<String>,
}

pub fn admissible_multiplicity(n: usize, h: &GammaGroup, a: &FpModule, limits: &Limits) -> Result<AdmissibleMultiplicity> {
    let terms = multiplicity_terms(n, h, a, limits)?;
    let value = Rational64::from_integer(terms.value as i64)
        - Rational64::new((n * terms.gamma_fixed) as i64, terms.endo as i64);
    let mut warning = None;
    if value < Rational64::from_integer(0) {
        warning = Some(format!("negative admissible multiplicity {value}: the module cannot occur"));
    } else if terms.gamma_fixed > 0 && !a.is_trivial_action() {
        warning = Some("Γ fixes a nonzero vector of a nontrivial module over an admissible group".into());
    }
    Ok(AdmissibleMultiplicity { value, terms, warning })
}

/// The module attaining the relator rank supremum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWitness {
    pub prime: u32,
    pub dim: usize,
    pub h1: usize,
    pub h2: usize,
    pub xi: usize,
    pub term: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorRank {
    pub n: usize,
    pub value: i64,
    pub primes: Vec<u32>,
    pub modules_checked: usize,
    /// None when the trivial module at a prime not dividing |G||Γ| attains the supremum.
    pub attained_by: Option<RankWitness>,
    /// True when every prime dividing |G| and not |Γ| was scanned with all
    /// simple modules, so the value is the full supremum rather than a lower bound.
    pub exact: bool,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Primes dividing `n`.
pub fn prime_divisors(mut n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q as u32);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n as u32);
    }
    out
}

/// Relator rank: n + the supremum over primes ℓ ∤ |Γ| and simple G ⋊ Γ-modules A
/// of ⌈(dim H² − dim H¹ − ξ)/dim A⌉.
///
/// Primes coprime to |G ⋊ Γ| contribute at most 0, attained by the trivial
/// module, so the supremum always includes 0. With `primes` unset the scan
/// covers the primes dividing |G| and not |Γ|. With `modules` set, only
/// those modules are scanned.
pub fn relator_rank(
    n: usize,
    g: &GammaGroup,
    modules: Option<&[FpModule]>,
    primes: Option<&[u32]>,
    limits: &Limits,
) -> Result<RelatorRank> {
    let gamma_order = g.gamma().order();
    let needed: Vec<u32> = prime_divisors(g.order())
        .into_iter()
        .filter(|&p| gamma_order % p as usize != 0)
        .collect();
    let scan: Vec<u32> = match primes {
        Some(list) => {
            for &p in list {
                if !is_prime(p as u64) {
                    return Err(Error::Precondition(format!("{p} is not prime")));
                }
            }
            list.iter().copied().filter(|&p| gamma_order % p as usize != 0).collect()
        }
        None => needed.clone(),
    };
    let sd = g.semidirect_product(limits)?;
    let mut candidates: Vec<FpModule> = Vec::new();
    let exact;
    match modules {
        Some(list) => {
            for a in list {
                check_over_semidirect(&sd, a)?;
            }
            candidates.extend(list.iter().filter(|a| gamma_order % a.prime() as usize != 0).cloned());
            exact = false;
        }
        None => {
            for &p in &scan {
                candidates.extend(simple_modules(&sd.group, p, limits)?);
            }
            exact = needed.iter().all(|p| scan.contains(p));
        }
    }
    let full = ElemSet::full(sd.group.order());
    let gamma_part = sd.gamma_subgroup();
    let mut best: Option<RankWitness> = None;
    for a in &candidates {
        let c = semidirect_cohomology(g, a, limits)?;
        let xi = a.xi(&gamma_part, &full)?;
        let term = ceil_div(c.h2 as i64 - c.h1 as i64 - xi as i64, a.dim() as i64);
        if term > 0 && best.as_ref().is_none_or(|b| term > b.term) {
            best = Some(RankWitness { prime: a.prime(), dim: a.dim(), h1: c.h1, h2: c.h2, xi, term });
        }
    }
    let sup = best.as_ref().map_or(0, |b| b.term);
    Ok(RelatorRank {
        n,
        value: n as i64 + sup,
        primes: scan,
        modules_checked: candidates.len(),
        attained_by: best,
        exact,
    })
}
