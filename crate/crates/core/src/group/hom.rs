use std::sync::Arc;

use super::FiniteGroup;
use crate::bitset::ElemSet;
use crate::{Error, Result};

/// A homomorphism between finite groups with its full element map.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Arc<Vec<u32>>,
    gamma_equivariant: bool,
}

impl GroupHom {
    /// Validates that `map` respects multiplication.
    pub fn from_map(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::InvalidHom(format!("map has {} entries, expected {}", map.len(), source.order())));
        }
        if map.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidHom("image out of range".into()));
        }
        if map[source.identity()] != target.identity() {
            return Err(Error::InvalidHom("identity not preserved".into()));
        }
        // f(x s) = f(x) f(s) for all x and generators s implies f is a homomorphism.
        for &s in source.generators() {
            for x in source.elements() {
                if map[source.mul(x, s)] != target.mul(map[x], map[s]) {
                    return Err(Error::InvalidHom(format!("multiplication not respected at ({x}, {s})")));
                }
            }
        }
        Ok(Self::trusted(source, target, map))
    }

    pub(crate) fn trusted(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            map: Arc::new(map.into_iter().map(|x| x as u32).collect()),
            gamma_equivariant: false,
        }
    }

    /// Extends generator images to a homomorphism, failing if the images do
    /// not satisfy the relations of the source.
    pub fn from_generator_images(source: &FiniteGroup, target: &FiniteGroup, images: &[usize]) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::InvalidHom(format!("{} images for {} generators", images.len(), gens.len())));
        }
        let map = extend_images(source, target, gens, images)
            .ok_or_else(|| Error::InvalidHom("generator images do not define a homomorphism".into()))?;
        Ok(Self::trusted(source, target, map))
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self::trusted(g, g, g.elements().collect())
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// Images of the source generators.
    pub fn images(&self) -> Vec<usize> {
        self.source.generators().iter().map(|&g| self.apply(g)).collect()
    }

    pub fn full_map(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x as usize).collect()
    }

    pub fn is_gamma_equivariant(&self) -> bool {
        self.gamma_equivariant
    }

    pub(crate) fn set_gamma_equivariant(mut self, flag: bool) -> Self {
        self.gamma_equivariant = flag;
        self
    }

    pub fn kernel(&self) -> ElemSet {
        let e = self.target.identity();
        ElemSet::from_indices(self.source.order(), self.source.elements().filter(|&x| self.apply(x) == e))
    }

    pub fn image(&self) -> ElemSet {
        ElemSet::from_indices(self.target.order(), self.map.iter().map(|&y| y as usize))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().count() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().count() == 1
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GroupHom) -> Result<GroupHom> {
        if !self.target.same_table(&after.source) {
            return Err(Error::InvalidHom("composition of incompatible maps".into()));
        }
        let map = self.map.iter().map(|&y| after.apply(y as usize)).collect();
        Ok(GroupHom::trusted(&self.source, &after.target, map).set_gamma_equivariant(self.gamma_equivariant && after.gamma_equivariant))
    }

    /// Preimage of a subset of the target.
    pub fn preimage(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.source.order(), self.source.elements().filter(|&x| s.contains(self.apply(x))))
    }

    /// Image of a subset of the source.
    pub fn image_of(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.target.order(), s.iter().map(|x| self.apply(x)))
    }
}

/// Breadth-first extension of `gens ↦ images` over the subgroup generated by
/// `gens`. Returns the map (with `usize::MAX` outside that subgroup) or `None`
/// on inconsistency.
pub(crate) fn extend_partial(source: &FiniteGroup, target: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[source.identity()] = target.identity();
    let mut queue = vec![source.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let y = source.mul(x, s);
            let v = target.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

fn extend_images(source: &FiniteGroup, target: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let map = extend_partial(source, target, gens, images)?;
    if map.iter().any(|&y| y == usize::MAX) {
        None
    } else {
        Some(map)
    }
}

/// Every homomorphism from `g` to `h`, found by backtracking on generator images.
pub fn homomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<GroupHom> {
    let gens: Vec<usize> = g.generators().to_vec();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            h.elements().filter(|&y| o % h.element_order(y) == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    hom_search(g, h, &gens, &cands, &mut chosen, &mut out);
    out
}

fn hom_search(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], cands: &[Vec<usize>], chosen: &mut Vec<usize>, out: &mut Vec<GroupHom>) {
    let k = chosen.len();
    if k > 0 && extend_partial(g, h, &gens[..k], chosen).is_none() {
        return;
    }
    if k == gens.len() {
        let map = extend_images(g, h, gens, chosen).expect("consistent full assignment");
        out.push(GroupHom::trusted(g, h, map));
        return;
    }
    for &y in &cands[k] {
        chosen.push(y);
        hom_search(g, h, gens, cands, chosen, out);
        chosen.pop();
    }
}
