//! Subgroups stable under a set of operator permutations.
//!
//! With the operators set to conjugation by the generators, stable subgroups
//! are the normal subgroups; adding the Γ-action gives normal Γ-subgroups;
//! an empty operator set gives all subgroups.

use std::collections::HashMap;

use super::{FiniteGroup, GammaGroup};
use crate::bitset::ElemSet;
use crate::{Error, Limits, Result};

/// Smallest subgroup containing `seeds` and mapped into itself by every operator.
///
/// Operators must be automorphisms of `g`.
pub fn op_closure(g: &FiniteGroup, ops: &[Vec<u32>], seeds: &[usize]) -> ElemSet {
    let (set, _, _) = op_closure_parts(g, ops, seeds);
    set
}

fn op_closure_parts(g: &FiniteGroup, ops: &[Vec<u32>], seeds: &[usize]) -> (ElemSet, Vec<usize>, Vec<usize>) {
    let mut set = ElemSet::singleton(g.order(), g.identity());
    let mut elems = vec![g.identity()];
    let mut gens = Vec::new();
    let mut pending: Vec<usize> = seeds.to_vec();
    let mut checked = 0;
    loop {
        while let Some(x) = pending.pop() {
            g.extend_closure(&mut set, &mut elems, &mut gens, x);
        }
        while checked < gens.len() {
            let x = gens[checked];
            checked += 1;
            for op in ops {
                let y = op[x] as usize;
                if !set.contains(y) {
                    pending.push(y);
                }
            }
        }
        if pending.is_empty() {
            return (set, elems, gens);
        }
    }
}

/// Orbit of `x` under the group generated by the operators.
fn op_orbit(n: usize, ops: &[Vec<u32>], x: usize) -> Vec<usize> {
    let mut seen = ElemSet::singleton(n, x);
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        let y = orbit[i];
        i += 1;
        for op in ops {
            let z = op[y] as usize;
            if seen.insert(z) {
                orbit.push(z);
            }
        }
    }
    orbit
}

/// The distinct closures of single elements of `within`, excluding the trivial one.
/// Each entry carries a generating list.
pub(crate) fn op_atoms(g: &FiniteGroup, ops: &[Vec<u32>], within: &ElemSet) -> Vec<(ElemSet, Vec<usize>)> {
    let mut done = ElemSet::empty(g.order());
    done.insert(g.identity());
    let mut atoms: Vec<(ElemSet, Vec<usize>)> = Vec::new();
    let mut seen: HashMap<ElemSet, ()> = HashMap::new();
    for x in within.iter() {
        if done.contains(x) {
            continue;
        }
        // Every operator image of x, and every generator of <x>, yields the same closure.
        for y in op_orbit(g.order(), ops, x) {
            let ord = g.element_order(y);
            let mut p = y;
            for k in 1..ord {
                if super::finite::gcd(k, ord) == 1 {
                    done.insert(p);
                }
                p = g.mul(p, y);
            }
        }
        let (set, _, gens) = op_closure_parts(g, ops, &[x]);
        if seen.insert(set.clone(), ()).is_none() {
            atoms.push((set, gens));
        }
    }
    atoms
}

/// All operator-stable subgroups contained in `within` (which must itself be
/// such a subgroup), sorted by order and then by element set.
pub fn op_lattice(g: &FiniteGroup, ops: &[Vec<u32>], within: &ElemSet, limits: &Limits) -> Result<Vec<ElemSet>> {
    let atoms = op_atoms(g, ops, within);
    let trivial = ElemSet::singleton(g.order(), g.identity());
    let mut found: HashMap<ElemSet, usize> = HashMap::new();
    let mut list: Vec<ElemSet> = vec![trivial.clone()];
    found.insert(trivial, 0);
    let mut head = 0;
    while head < list.len() {
        let s = list[head].clone();
        head += 1;
        let base_elems = s.to_vec();
        let base_gens = g.small_generating_set(&s);
        for (a, agens) in &atoms {
            if a.is_subset(&s) {
                continue;
            }
            let mut set = s.clone();
            let mut elems = base_elems.clone();
            let mut gens = base_gens.clone();
            for &x in agens {
                g.extend_closure(&mut set, &mut elems, &mut gens, x);
            }
            if !found.contains_key(&set) {
                if list.len() >= limits.lattice_size {
                    return Err(Error::capacity("subgroup lattice size", list.len() + 1, limits.lattice_size));
                }
                found.insert(set.clone(), list.len());
                list.push(set);
            }
        }
    }
    list.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    Ok(list)
}

/// Minimal nontrivial operator-stable subgroups of `within`.
pub fn op_minimal(g: &FiniteGroup, ops: &[Vec<u32>], within: &ElemSet) -> Vec<ElemSet> {
    let atoms: Vec<ElemSet> = op_atoms(g, ops, within).into_iter().map(|(s, _)| s).collect();
    let mut out: Vec<ElemSet> = atoms
        .iter()
        .filter(|a| !atoms.iter().any(|b| b != *a && b.is_subset(a)))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    out
}

/// Members of `lattice` that are maximal among those strictly inside `top`.
pub fn maximal_below(lattice: &[ElemSet], top: &ElemSet) -> Vec<ElemSet> {
    let proper: Vec<&ElemSet> = lattice.iter().filter(|s| s.is_subset(top) && *s != top).collect();
    proper
        .iter()
        .filter(|s| !proper.iter().any(|t| *t != **s && s.is_subset(t)))
        .map(|s| (*s).clone())
        .collect()
}

/// All normal subgroups of `g`.
pub fn normal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<ElemSet>> {
    op_lattice(g, &g.conjugation_perms(), &ElemSet::full(g.order()), limits)
}

/// All subgroups of `g`.
pub fn all_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<ElemSet>> {
    op_lattice(g, &[], &ElemSet::full(g.order()), limits)
}

/// Minimal nontrivial normal subgroups, Γ-stable ones when `under_gamma` is given.
pub fn minimal_normal_subgroups(g: &FiniteGroup, under_gamma: Option<&GammaGroup>) -> Result<Vec<ElemSet>> {
    match under_gamma {
        None => Ok(op_minimal(g, &g.conjugation_perms(), &ElemSet::full(g.order()))),
        Some(h) if h.group().same_table(g) => Ok(h.minimal_gamma_normal_subgroups()),
        Some(_) => Err(Error::Precondition("Γ-group is over a different group".into())),
    }
}

/// The socle of `g`: the product of all minimal normal subgroups.
pub fn socle(g: &FiniteGroup) -> ElemSet {
    let ops = g.conjugation_perms();
    let mins = op_minimal(g, &ops, &ElemSet::full(g.order()));
    let seeds: Vec<usize> = mins.iter().flat_map(|m| g.small_generating_set(m)).collect();
    g.closure(&seeds)
}
