//! Varieties of Γ-groups generated by finitely many members, pro-C
//! completions of finite Γ-groups, and heights.

mod free;
mod height;

use serde::{Deserialize, Serialize};

pub use free::RelativelyFree;
pub use height::{
    exhaustive_height, exhaustive_height_hat, height, height_chain, height_hat, height_hat_of_variety, height_report, is_valid_height_chain,
    HeightReport,
};

use crate::group::{is_gamma_isomorphic, lcm, GammaGroup, GroupHom};
use crate::presentations::{check_cover, prime_divisors};
use crate::{ElemSet, Error, Limits, Result};

/// Finitely many Γ-groups generating a variety, with search bounds.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub members: Vec<GammaGroup>,
    /// Largest relatively free group built by a membership test.
    pub product_order_bound: usize,
    /// Largest number of Γ-generators used by a membership test.
    pub search_depth: usize,
}

impl VarietySpec {
    pub fn new(members: Vec<GammaGroup>, product_order_bound: usize, search_depth: usize) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Precondition("a variety needs at least one member".into()));
        };
        if members.iter().any(|m| !m.same_gamma(first)) {
            return Err(Error::Precondition("variety members must share Γ".into()));
        }
        if product_order_bound == 0 || search_depth == 0 {
            return Err(Error::Precondition("variety bounds must be positive".into()));
        }
        Ok(VarietySpec { members, product_order_bound, search_depth })
    }

    /// Members with the default bounds from `limits` and at most 4 generators.
    pub fn with_limits(members: Vec<GammaGroup>, limits: &Limits) -> Result<Self> {
        Self::new(members, limits.variety_product_bound, 4)
    }

    fn exponent(&self) -> usize {
        self.members.iter().fold(1, |acc, m| lcm(acc, m.group().exponent()))
    }

    fn primes(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.members.iter().flat_map(|m| prime_divisors(m.order())).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// How a membership question was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipStatus {
    /// Trivial group or Γ-isomorphic to a member.
    Immediate,
    /// A quotient of the relatively free group on the generators.
    FreeQuotient,
    /// The exponent does not divide the exponent of the variety.
    ExcludedByExponent,
    /// The order has a prime factor that no member order has.
    ExcludedByPrimes,
    /// The relatively free group was built and does not map onto the group.
    ExcludedByFreeGroup,
    /// The relatively free group exceeded the bounds; nothing is asserted.
    NotFoundWithinBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub contains: bool,
    pub status: MembershipStatus,
    pub generators: usize,
    /// Order of the relatively free group when it was built.
    pub free_order: Option<usize>,
}

impl Membership {
    fn new(contains: bool, status: MembershipStatus, generators: usize, free_order: Option<usize>) -> Self {
        Membership { contains, status, generators, free_order }
    }

    /// True when the answer is a proof either way.
    pub fn is_certified(&self) -> bool {
        self.status != MembershipStatus::NotFoundWithinBound
    }
}

/// Γ-generating set chosen greedily by decreasing element order.
pub fn gamma_generating_set(h: &GammaGroup) -> Vec<usize> {
    let g = h.group();
    let mut elems: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    elems.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    let mut gens = Vec::new();
    let mut cur = ElemSet::singleton(g.order(), g.identity());
    for x in elems {
        if cur.count() == g.order() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = h.gamma_subgroup_closure(&gens);
        }
    }
    gens
}

/// Membership tests sharing relatively free groups across queries.
pub struct MembershipOracle<'a> {
    spec: &'a VarietySpec,
    limits: &'a Limits,
    free: Vec<Option<Result<RelativelyFree>>>,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(spec: &'a VarietySpec, limits: &'a Limits) -> Self {
        MembershipOracle { spec, limits, free: Vec::new() }
    }

    fn free_group(&mut self, k: usize) -> &Result<RelativelyFree> {
        if self.free.len() <= k {
            self.free.resize_with(k + 1, || None);
        }
        if self.free[k].is_none() {
            self.free[k] = Some(RelativelyFree::build(&self.spec.members, k, self.spec.product_order_bound, self.limits));
        }
        self.free[k].as_ref().unwrap()
    }

    pub fn contains(&mut self, h: &GammaGroup) -> Result<Membership> {
        use MembershipStatus::*;
        let spec = self.spec;
        if !h.same_gamma(&spec.members[0]) {
            return Err(Error::Precondition("group and variety have different Γ".into()));
        }
        if h.order() == 1 {
            return Ok(Membership::new(true, Immediate, 0, None));
        }
        if spec.exponent() % h.group().exponent() != 0 {
            return Ok(Membership::new(false, ExcludedByExponent, 0, None));
        }
        let primes = spec.primes();
        if prime_divisors(h.order()).iter().any(|p| !primes.contains(p)) {
            return Ok(Membership::new(false, ExcludedByPrimes, 0, None));
        }
        if spec.members.iter().any(|m| m.order() == h.order() && is_gamma_isomorphic(m, h).is_some()) {
            return Ok(Membership::new(true, Immediate, 0, None));
        }
        let gens = gamma_generating_set(h);
        let k = gens.len();
        if k > spec.search_depth {
            return Ok(Membership::new(false, NotFoundWithinBound, k, None));
        }
        match self.free_group(k) {
            Ok(free) => {
                let order = free.order();
                if free.maps_onto(h, &gens) {
                    Ok(Membership::new(true, FreeQuotient, k, Some(order)))
                } else {
                    Ok(Membership::new(false, ExcludedByFreeGroup, k, Some(order)))
                }
            }
            Err(e) if e.is_capacity() => Ok(Membership::new(false, NotFoundWithinBound, k, None)),
            Err(e) => Err(Error::InvalidData(e.to_string())),
        }
    }
}

/// Decides whether `h` lies in the variety generated by the members.
///
/// A negative answer is a proof only when `is_certified` holds.
pub fn variety_contains(c: &VarietySpec, h: &GammaGroup, limits: &Limits) -> Result<Membership> {
    MembershipOracle::new(c, limits).contains(h)
}

/// The largest quotient of a finite Γ-group lying in the variety.
#[derive(Clone, Debug)]
pub struct ProCompletion {
    pub quotient: GammaGroup,
    pub projection: GroupHom,
    pub kernel: ElemSet,
    /// Set when some quotient could not be decided within bounds, so the
    /// completion may be too small.
    pub exhausted: bool,
}

/// Quotient by the intersection of all normal Γ-subgroups whose quotients
/// pass the membership test.
pub fn pro_c_completion(g: &GammaGroup, c: &VarietySpec, limits: &Limits) -> Result<ProCompletion> {
    let mut oracle = MembershipOracle::new(c, limits);
    let lattice = g.gamma_normal_subgroups(limits)?;
    let mut kernel = ElemSet::full(g.order());
    let mut exhausted = false;
    for m in lattice.iter().rev() {
        if kernel.is_subset(m) {
            continue;
        }
        let (q, _) = g.quotient(m)?;
        let verdict = oracle.contains(&q)?;
        if verdict.contains {
            kernel = kernel.intersection(m);
        } else if !verdict.is_certified() {
            exhausted = true;
        }
    }
    let (quotient, projection) = g.quotient(&kernel)?;
    Ok(ProCompletion { quotient, projection, kernel, exhausted })
}

/// The completion of a surjection ω: F → G, as a map F^C → F^C/φ(ker ω),
/// together with the induced surjection G → F^C/φ(ker ω).
#[derive(Clone, Debug)]
pub struct ProCompletedMap {
    pub source: ProCompletion,
    pub target: GammaGroup,
    pub map: GroupHom,
    /// G → target.
    pub target_projection: GroupHom,
}

pub fn pro_c_map(f: &GammaGroup, g: &GammaGroup, omega: &GroupHom, c: &VarietySpec, limits: &Limits) -> Result<ProCompletedMap> {
    check_cover(f, g, omega)?;
    let source = pro_c_completion(f, c, limits)?;
    let fc = &source.quotient;
    let image = source.projection.image_of(&omega.kernel());
    let (target, map) = fc.quotient(&image)?;
    let mut proj = vec![usize::MAX; g.order()];
    for x in f.group().elements() {
        proj[omega.apply(x)] = map.apply(source.projection.apply(x));
    }
    let target_projection = GroupHom::from_map(g.group(), target.group(), proj)?.set_gamma_equivariant(true);
    Ok(ProCompletedMap { source, target, map, target_projection })
}
