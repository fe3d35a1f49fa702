use std::fmt;
use std::sync::Arc;

use super::lattice::{maximal_below, op_closure, op_lattice, op_minimal};
use super::{catalog, FiniteGroup, GroupHom};
use crate::bitset::ElemSet;
use crate::{Error, Limits, Result};

/// A finite group `g` with an action of `gamma` by automorphisms.
///
/// `action[γ][x]` is the image of `x` under the element `γ` of `gamma`.
#[derive(Clone)]
pub struct GammaGroup {
    g: FiniteGroup,
    gamma: FiniteGroup,
    action: Arc<Vec<Vec<u32>>>,
}

impl fmt::Debug for GammaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaGroup")
            .field("g", &self.g)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl GammaGroup {
    pub fn new(g: FiniteGroup, gamma: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.order();
        if action.len() != gamma.order() {
            return Err(Error::InvalidAction(format!("{} permutations for {} elements of Γ", action.len(), gamma.order())));
        }
        let mut perms = Vec::with_capacity(action.len());
        for (i, p) in action.iter().enumerate() {
            if p.len() != n {
                return Err(Error::InvalidAction(format!("permutation {i} has length {}, expected {n}", p.len())));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || seen[x] {
                    return Err(Error::InvalidAction(format!("entry {i} is not a permutation")));
                }
                seen[x] = true;
            }
            for &s in g.generators() {
                for x in g.elements() {
                    if p[g.mul(x, s)] != g.mul(p[x], p[s]) {
                        return Err(Error::InvalidAction(format!("entry {i} is not an automorphism")));
                    }
                }
            }
            perms.push(p.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        }
        if (0..n).any(|x| perms[gamma.identity()][x] as usize != x) {
            return Err(Error::InvalidAction("identity of Γ does not act trivially".into()));
        }
        for &s in gamma.generators() {
            for t in gamma.elements() {
                let st = gamma.mul(s, t);
                if (0..n).any(|x| perms[st][x] != perms[s][perms[t][x] as usize]) {
                    return Err(Error::InvalidAction(format!("action is not a homomorphism at ({s}, {t})")));
                }
            }
        }
        Ok(GammaGroup { g, gamma, action: Arc::new(perms) })
    }

    pub(crate) fn trusted(g: FiniteGroup, gamma: FiniteGroup, action: Vec<Vec<u32>>) -> Self {
        GammaGroup { g, gamma, action: Arc::new(action) }
    }

    pub fn trivial_action(g: FiniteGroup, gamma: FiniteGroup) -> Self {
        let id: Vec<u32> = (0..g.order() as u32).collect();
        let action = vec![id; gamma.order()];
        GammaGroup::trusted(g, gamma, action)
    }

    /// `g` with the trivial group acting.
    pub fn without_gamma(g: FiniteGroup) -> Self {
        Self::trivial_action(g, catalog::trivial())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    #[inline]
    pub fn act(&self, gamma: usize, x: usize) -> usize {
        self.action[gamma][x] as usize
    }

    pub fn action_perm(&self, gamma: usize) -> &[u32] {
        &self.action[gamma]
    }

    pub fn action_table(&self) -> Vec<Vec<usize>> {
        self.action.iter().map(|p| p.iter().map(|&x| x as usize).collect()).collect()
    }

    pub fn same_gamma(&self, other: &GammaGroup) -> bool {
        self.gamma.same_table(&other.gamma)
    }

    pub fn order(&self) -> usize {
        self.g.order()
    }

    /// Conjugation by generators of `g` together with the action of generators of Γ.
    pub fn operator_perms(&self) -> Vec<Vec<u32>> {
        let mut ops = self.g.conjugation_perms();
        ops.extend(self.gamma.generators().iter().map(|&s| self.action[s].clone()));
        ops
    }

    /// Γ-action permutations for generators of Γ only.
    pub fn gamma_perms(&self) -> Vec<Vec<u32>> {
        self.gamma.generators().iter().map(|&s| self.action[s].clone()).collect()
    }

    /// Smallest normal Γ-stable subgroup containing `seeds`.
    pub fn gamma_normal_closure(&self, seeds: &[usize]) -> ElemSet {
        op_closure(&self.g, &self.operator_perms(), seeds)
    }

    /// Smallest Γ-stable subgroup containing `seeds`.
    pub fn gamma_subgroup_closure(&self, seeds: &[usize]) -> ElemSet {
        op_closure(&self.g, &self.gamma_perms(), seeds)
    }

    pub fn is_gamma_stable(&self, s: &ElemSet) -> bool {
        self.gamma.generators().iter().all(|&t| s.iter().all(|x| s.contains(self.act(t, x))))
    }

    pub fn is_gamma_normal(&self, s: &ElemSet) -> bool {
        self.g.is_normal(s) && self.is_gamma_stable(s)
    }

    /// Elements fixed by every element of Γ.
    pub fn fixed_points(&self) -> ElemSet {
        ElemSet::from_indices(
            self.order(),
            self.g.elements().filter(|&x| self.gamma.generators().iter().all(|&t| self.act(t, x) == x)),
        )
    }

    /// Quotient by a normal Γ-subgroup, carrying the induced action.
    pub fn quotient(&self, n: &ElemSet) -> Result<(GammaGroup, GroupHom)> {
        if !self.is_gamma_stable(n) {
            return Err(Error::Precondition("subgroup is not Γ-stable".into()));
        }
        let (q, coset) = self.g.quotient(n)?;
        let mut rep = vec![usize::MAX; q.order()];
        for x in self.g.elements() {
            if rep[coset[x]] == usize::MAX {
                rep[coset[x]] = x;
            }
        }
        let action: Vec<Vec<u32>> = (0..self.gamma.order())
            .map(|t| rep.iter().map(|&r| coset[self.act(t, r)] as u32).collect())
            .collect();
        let proj = GroupHom::trusted(&self.g, &q, coset).set_gamma_equivariant(true);
        Ok((GammaGroup::trusted(q, self.gamma.clone(), action), proj))
    }

    /// A Γ-stable subgroup as a Γ-group, with its embedding.
    pub fn subgroup(&self, s: &ElemSet) -> Result<(GammaGroup, Vec<usize>)> {
        if !self.is_gamma_stable(s) {
            return Err(Error::Precondition("subgroup is not Γ-stable".into()));
        }
        let (sub, embed) = self.g.subgroup(s)?;
        let mut local = vec![u32::MAX; self.order()];
        for (i, &x) in embed.iter().enumerate() {
            local[x] = i as u32;
        }
        let action = (0..self.gamma.order())
            .map(|t| embed.iter().map(|&x| local[self.act(t, x)]).collect())
            .collect();
        Ok((GammaGroup::trusted(sub, self.gamma.clone(), action), embed))
    }

    /// Direct product with the diagonal Γ-action. Both factors must share Γ.
    pub fn direct_product(&self, other: &GammaGroup) -> Result<GammaGroup> {
        if !self.same_gamma(other) {
            return Err(Error::Precondition("direct product needs a common Γ".into()));
        }
        let g = self.g.direct_product(&other.g);
        let m = other.order();
        let action = (0..self.gamma.order())
            .map(|t| {
                (0..g.order())
                    .map(|x| (self.act(t, x / m) * m + other.act(t, x % m)) as u32)
                    .collect()
            })
            .collect();
        Ok(GammaGroup::trusted(g, self.gamma.clone(), action))
    }

    /// True iff gcd(|G|, |Γ|) = 1 and G is Γ-normally generated by the values g⁻¹γ(g).
    pub fn is_admissible(&self) -> bool {
        if super::finite::gcd(self.order(), self.gamma.order()) != 1 {
            return false;
        }
        let mut seeds = Vec::new();
        for x in self.g.elements() {
            for &t in self.gamma.generators() {
                seeds.push(self.g.mul(self.g.inv(x), self.act(t, x)));
            }
        }
        self.gamma_normal_closure(&seeds).count() == self.order()
    }

    /// Normal Γ-subgroups of `g`, sorted by order.
    pub fn gamma_normal_subgroups(&self, limits: &Limits) -> Result<Vec<ElemSet>> {
        op_lattice(&self.g, &self.operator_perms(), &ElemSet::full(self.order()), limits)
    }

    /// Minimal nontrivial normal Γ-subgroups.
    pub fn minimal_gamma_normal_subgroups(&self) -> Vec<ElemSet> {
        op_minimal(&self.g, &self.operator_perms(), &ElemSet::full(self.order()))
    }

    /// Subgroups of the normal Γ-subgroup `n` maximal among proper subgroups
    /// that are normal in `g` and Γ-stable.
    pub fn maximal_proper_gnormal_subgroups_of(&self, n: &ElemSet, limits: &Limits) -> Result<Vec<ElemSet>> {
        if !self.is_gamma_normal(n) {
            return Err(Error::NotNormal);
        }
        let lattice = op_lattice(&self.g, &self.operator_perms(), n, limits)?;
        Ok(maximal_below(&lattice, n))
    }

    /// The semidirect product `G ⋊ Γ` with `(h₁,γ₁)(h₂,γ₂) = (h₁·γ₁(h₂), γ₁γ₂)`.
    pub fn semidirect_product(&self, limits: &Limits) -> Result<SemidirectProduct> {
        let n = self.order();
        let m = self.gamma.order();
        let order = n * m;
        limits.check_order("semidirect product order", order, limits.group_order)?;
        let g = &self.g;
        let gm = &self.gamma;
        let mut table = vec![0u32; order * order];
        for t1 in 0..m {
            let act = &self.action[t1];
            for h1 in 0..n {
                let x = t1 * n + h1;
                let row = &mut table[x * order..(x + 1) * order];
                for t2 in 0..m {
                    let t = gm.mul(t1, t2) * n;
                    for h2 in 0..n {
                        row[t2 * n + h2] = (t + g.mul(h1, act[h2] as usize)) as u32;
                    }
                }
            }
        }
        let eg = g.identity();
        let et = gm.identity();
        let mut gens: Vec<usize> = g.generators().iter().map(|&h| et * n + h).collect();
        gens.extend(gm.generators().iter().map(|&t| t * n + eg));
        let name = match (g.name(), gm.name()) {
            (Some(a), Some(b)) => Some(format!("{a}:{b}")),
            _ => None,
        };
        let group = FiniteGroup::from_trusted(name, order, table, gens);
        let embed_g = GroupHom::trusted(g, &group, (0..n).map(|h| et * n + h).collect());
        let embed_gamma = GroupHom::trusted(gm, &group, (0..m).map(|t| t * n + eg).collect());
        let projection = GroupHom::trusted(&group, gm, (0..order).map(|x| x / n).collect());
        Ok(SemidirectProduct { group, g_order: n, embed_g, embed_gamma, projection })
    }

    /// Same group and action tables.
    pub fn same_structure(&self, other: &GammaGroup) -> bool {
        self.g.same_table(&other.g) && self.same_gamma(other) && self.action == other.action
    }
}

/// `G ⋊ Γ` with its canonical maps. Element `(h, γ)` has index `γ·|G| + h`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    g_order: usize,
    pub embed_g: GroupHom,
    pub embed_gamma: GroupHom,
    pub projection: GroupHom,
}

impl SemidirectProduct {
    #[inline]
    pub fn pair(&self, h: usize, gamma: usize) -> usize {
        gamma * self.g_order + h
    }

    #[inline]
    pub fn split(&self, x: usize) -> (usize, usize) {
        (x % self.g_order, x / self.g_order)
    }

    /// Image of the normal factor G.
    pub fn g_subgroup(&self) -> ElemSet {
        self.embed_g.image()
    }

    /// Image of the complement Γ.
    pub fn gamma_subgroup(&self) -> ElemSet {
        self.embed_gamma.image()
    }

    pub fn g_order(&self) -> usize {
        self.g_order
    }
}
