//! Relatively free Γ-groups of a variety, built inside a product of members.

use std::collections::HashMap;

use crate::group::GammaGroup;
use crate::{Error, Limits, Result};

/// The Γ-subgroup generated by the k free generators inside the product of
/// all members over all k-tuples, stored as a Cayley graph on the generators
/// γ(x_i).
pub struct RelativelyFree {
    k: usize,
    gamma_order: usize,
    /// Number of group generators, k·|Γ|; generator `t·k + i` is γ_t(x_i).
    ngens: usize,
    /// BFS parent and generator of every element except the identity (index 0).
    parent: Vec<(u32, u32)>,
    /// `edges[d·ngens + s]` is the index of d·generator(s).
    edges: Vec<u32>,
}

impl RelativelyFree {
    pub fn build(members: &[GammaGroup], k: usize, bound: usize, limits: &Limits) -> Result<Self> {
        let gamma = members[0].gamma();
        let gamma_order = gamma.order();
        // one coordinate per (member, tuple)
        let mut coords: Vec<(usize, Vec<usize>)> = Vec::new();
        for (mi, m) in members.iter().enumerate() {
            let n = m.order();
            let count = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if count > limits.enumeration_budget as u128 {
                return Err(Error::BudgetExceeded { needed: count, budget: limits.enumeration_budget as u128 });
            }
            for idx in 0..count as usize {
                let mut t = Vec::with_capacity(k);
                let mut r = idx;
                for _ in 0..k {
                    t.push(r % n);
                    r /= n;
                }
                coords.push((mi, t));
            }
        }
        let width = coords.len();
        let memory = width as u128 * bound as u128;
        if memory > limits.enumeration_budget as u128 * 4 {
            return Err(Error::BudgetExceeded { needed: memory, budget: limits.enumeration_budget as u128 * 4 });
        }
        let ngens = k * gamma_order;
        let gens: Vec<Vec<u32>> = (0..ngens)
            .map(|s| {
                let (t, i) = (s / k, s % k);
                coords.iter().map(|(mi, tup)| members[*mi].act(t, tup[i]) as u32).collect()
            })
            .collect();
        let identity: Vec<u32> = coords.iter().map(|(mi, _)| members[*mi].group().identity() as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut elems: Vec<Vec<u32>> = vec![identity.clone()];
        index.insert(identity, 0);
        let mut parent = vec![(0u32, 0u32)];
        let mut edges: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < elems.len() {
            for (s, gen) in gens.iter().enumerate() {
                let prod: Vec<u32> = elems[head]
                    .iter()
                    .zip(gen)
                    .zip(&coords)
                    .map(|((&a, &b), (mi, _))| members[*mi].group().mul(a as usize, b as usize) as u32)
                    .collect();
                let next = match index.get(&prod) {
                    Some(&j) => j,
                    None => {
                        let j = elems.len();
                        if j >= bound {
                            return Err(Error::capacity("relatively free group order", j + 1, bound));
                        }
                        index.insert(prod.clone(), j as u32);
                        elems.push(prod);
                        parent.push((head as u32, s as u32));
                        j as u32
                    }
                };
                edges.push(next);
            }
            head += 1;
        }
        Ok(RelativelyFree { k, gamma_order, ngens, parent, edges })
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    /// True when x_i ↦ gens[i] extends to a Γ-equivariant homomorphism onto
    /// the subgroup Γ-generated by `gens`.
    pub fn maps_onto(&self, h: &GammaGroup, gens: &[usize]) -> bool {
        assert_eq!(gens.len(), self.k, "generator count must match the rank");
        assert_eq!(h.gamma().order(), self.gamma_order, "Γ must match");
        let g = h.group();
        let images: Vec<usize> = (0..self.ngens).map(|s| h.act(s / self.k, gens[s % self.k])).collect();
        let mut img = vec![g.identity(); self.order()];
        for d in 1..self.order() {
            let (p, s) = self.parent[d];
            img[d] = g.mul(img[p as usize], images[s as usize]);
        }
        (0..self.order()).all(|d| {
            (0..self.ngens).all(|s| img[self.edges[d * self.ngens + s] as usize] == g.mul(img[d], images[s]))
        })
    }
}
