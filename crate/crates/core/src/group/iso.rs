//! Isomorphism testing by invariant fingerprints and backtracking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hom::extend_partial;
use super::{FiniteGroup, GammaGroup, GroupHom};

/// Isomorphism invariants compared before any search.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    /// (element order, count) pairs.
    pub order_histogram: Vec<(usize, usize)>,
    /// Sorted conjugacy class sizes.
    pub class_sizes: Vec<usize>,
    pub abelianization_order: usize,
    /// `None` when the group is not solvable.
    pub derived_length: Option<usize>,
    /// Number of Γ-fixed elements; equal to the order when Γ is absent.
    pub fixed_points: usize,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for x in g.elements() {
        *hist.entry(g.element_order(x)).or_default() += 1;
    }
    let mut class_sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
    class_sizes.sort_unstable();
    let series = g.derived_series();
    let abelianization_order = g.order() / series.get(1).map_or(g.order(), |d| d.count());
    let derived_length = if series.last().unwrap().count() == 1 { Some(series.len() - 1) } else { None };
    Fingerprint {
        order: g.order(),
        order_histogram: hist.into_iter().collect(),
        class_sizes,
        abelianization_order,
        derived_length,
        fixed_points: g.order(),
    }
}

pub fn gamma_fingerprint(h: &GammaGroup) -> Fingerprint {
    let mut f = fingerprint(h.group());
    f.fixed_points = h.fixed_points().count();
    f
}

/// Per-element invariants preserved by any isomorphism.
fn element_keys(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let mut class_size = vec![0usize; g.order()];
    for c in g.conjugacy_classes() {
        for &x in &c {
            class_size[x] = c.len();
        }
    }
    g.elements().map(|x| (g.element_order(x), class_size[x])).collect()
}

/// An isomorphism `g → h`, if one exists.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<GroupHom> {
    if fingerprint(g) != fingerprint(h) {
        return None;
    }
    search(g, h, None)
}

/// A Γ-equivariant isomorphism, if one exists. Both sides must carry the same Γ table.
pub fn is_gamma_isomorphic(a: &GammaGroup, b: &GammaGroup) -> Option<GroupHom> {
    if !a.same_gamma(b) || gamma_fingerprint(a) != gamma_fingerprint(b) {
        return None;
    }
    search(a.group(), b.group(), Some((a, b))).map(|f| f.set_gamma_equivariant(true))
}

fn search(g: &FiniteGroup, h: &FiniteGroup, gamma: Option<(&GammaGroup, &GammaGroup)>) -> Option<GroupHom> {
    let n = g.order();
    if n == 1 {
        return Some(GroupHom::trusted(g, h, vec![h.identity()]));
    }
    let gens = match gamma {
        Some((a, _)) => gamma_generating_set(a),
        None => g.small_generating_set(&crate::bitset::ElemSet::full(n)),
    };
    let kg = element_keys(g);
    let kh = element_keys(h);
    let mut fixed_h = vec![true; h.order()];
    let mut fixed_g = vec![true; n];
    if let Some((a, b)) = gamma {
        for &t in a.gamma().generators() {
            for x in 0..n {
                fixed_g[x] &= a.act(t, x) == x;
                fixed_h[x] &= b.act(t, x) == x;
            }
        }
    }
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| h.elements().filter(|&y| kh[y] == kg[s] && fixed_h[y] == fixed_g[s]).collect())
        .collect();
    let mut st = State { g, h, gamma, gens: &gens, cands: &cands, src: Vec::new(), dst: Vec::new() };
    st.go(0)
}

/// Γ-orbits of generators found greedily: the list generates `g` as a Γ-group.
fn gamma_generating_set(a: &GammaGroup) -> Vec<usize> {
    let g = a.group();
    let mut cand: Vec<usize> = g.elements().collect();
    cand.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    let mut gens = Vec::new();
    let mut cur = crate::bitset::ElemSet::singleton(g.order(), g.identity());
    for x in cand {
        if cur.count() == g.order() {
            break;
        }
        if cur.contains(x) {
            continue;
        }
        gens.push(x);
        cur = a.gamma_subgroup_closure(&gens);
    }
    gens
}

struct State<'a> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    gamma: Option<(&'a GammaGroup, &'a GammaGroup)>,
    gens: &'a [usize],
    cands: &'a [Vec<usize>],
    src: Vec<usize>,
    dst: Vec<usize>,
}

impl State<'_> {
    fn go(&mut self, k: usize) -> Option<GroupHom> {
        if k == self.gens.len() {
            let map = extend_partial(self.g, self.h, &self.src, &self.dst)?;
            if map.iter().any(|&y| y == usize::MAX) {
                return None;
            }
            return Some(GroupHom::trusted(self.g, self.h, map));
        }
        let s = self.gens[k];
        for &t in &self.cands[k] {
            let mark = self.src.len();
            match self.gamma {
                None => {
                    self.src.push(s);
                    self.dst.push(t);
                }
                Some((a, b)) => {
                    for gm in a.gamma().elements() {
                        self.src.push(a.act(gm, s));
                        self.dst.push(b.act(gm, t));
                    }
                }
            }
            if self.consistent() {
                if let Some(f) = self.go(k + 1) {
                    return Some(f);
                }
            }
            self.src.truncate(mark);
            self.dst.truncate(mark);
        }
        None
    }

    /// The partial assignment extends to an injective homomorphism on the generated subgroup.
    fn consistent(&self) -> bool {
        let Some(map) = extend_partial(self.g, self.h, &self.src, &self.dst) else {
            return false;
        };
        let mut seen = crate::bitset::ElemSet::empty(self.h.order());
        map.iter().filter(|&&y| y != usize::MAX).all(|&y| seen.insert(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;

    #[test]
    fn basic_cases() {
        assert!(is_isomorphic(&cyclic(6), &abelian(&[2, 3])).is_some());
        assert!(is_isomorphic(&symmetric(3), &cyclic(6)).is_none());
        assert!(is_isomorphic(&abelian(&[2, 2]), &cyclic(4)).is_none());
        assert!(is_isomorphic(&dihedral(4), &quaternion()).is_none());
        assert!(is_isomorphic(&symmetric(3), &dihedral(3)).is_some());
    }

    #[test]
    fn found_map_is_bijective_hom() {
        let g = symmetric(4);
        let h = FiniteGroup::from_permutations(None, 4, &[vec![1, 0, 2, 3], vec![0, 2, 3, 1], vec![1, 2, 3, 0]], 100).unwrap();
        let f = is_isomorphic(&g, &h).unwrap();
        assert!(f.is_injective() && f.is_surjective());
        assert!(GroupHom::from_map(&g, &h, f.full_map()).is_ok());
    }

    #[test]
    fn gamma_iso_respects_action() {
        let a = cyclic_with_inversion(5);
        let triv = GammaGroup::trivial_action(cyclic(5), cyclic(2));
        assert!(is_gamma_isomorphic(&a, &a).is_some());
        assert!(is_gamma_isomorphic(&a, &triv).is_none());
    }
}
