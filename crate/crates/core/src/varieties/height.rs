//! Heights: the shortest normal chain whose steps are direct products of
//! minimal normal subgroups, and its maximum over subquotients.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VarietySpec;
use crate::group::lattice::{all_subgroups, normal_subgroups, op_minimal, socle};
use crate::group::FiniteGroup;
use crate::{ElemSet, Error, Limits, Result};

/// Normal subgroups of `g` minimal among those properly containing `n`.
fn minimal_above(g: &FiniteGroup, n: &ElemSet) -> Result<Vec<ElemSet>> {
    let (q, coset) = g.quotient(n)?;
    let mins = op_minimal(&q, &q.conjugation_perms(), &ElemSet::full(q.order()));
    Ok(mins
        .iter()
        .map(|m| ElemSet::from_indices(g.order(), g.elements().filter(|&x| m.contains(coset[x]))))
        .collect())
}

/// True when `m/n` is a direct product of minimal normal subgroups of `g/n`,
/// checked by assembling such a product greedily.
fn is_socle_step(g: &FiniteGroup, n: &ElemSet, m: &ElemSet, mins: &[ElemSet]) -> bool {
    if !n.is_subset(m) || n == m {
        return false;
    }
    let mut prod = n.clone();
    for k in mins.iter().filter(|k| k.is_subset(m)) {
        if k.intersection(&prod) == *n {
            let mut seeds = g.small_generating_set(&prod);
            seeds.extend(g.small_generating_set(k));
            prod = g.closure(&seeds);
        }
    }
    prod == *m
}

/// The greedy chain: each step adds the full socle of the current quotient.
pub fn height_chain(g: &FiniteGroup, limits: &Limits) -> Result<Vec<ElemSet>> {
    limits.check_order("group order for heights", g.order(), limits.group_order)?;
    let mut chain = vec![ElemSet::singleton(g.order(), g.identity())];
    while chain.last().unwrap().count() < g.order() {
        let k = chain.last().unwrap();
        let (q, coset) = g.quotient(k)?;
        let s = socle(&q);
        chain.push(ElemSet::from_indices(g.order(), g.elements().filter(|&x| s.contains(coset[x]))));
    }
    Ok(chain)
}

/// ℌ(g) from the greedy socle chain.
pub fn height(g: &FiniteGroup, limits: &Limits) -> Result<usize> {
    Ok(height_chain(g, limits)?.len() - 1)
}

/// Checks that `chain` starts at 1, ends at `g`, consists of normal subgroups
/// and that every step is a direct product of minimal normal subgroups.
pub fn is_valid_height_chain(g: &FiniteGroup, chain: &[ElemSet]) -> bool {
    let (Some(first), Some(last)) = (chain.first(), chain.last()) else {
        return false;
    };
    if first.count() != 1 || last.count() != g.order() {
        return false;
    }
    if chain.iter().any(|s| !g.is_normal(s)) {
        return false;
    }
    chain.windows(2).all(|w| match minimal_above(g, &w[0]) {
        Ok(mins) => is_socle_step(g, &w[0], &w[1], &mins),
        Err(_) => false,
    })
}

/// ℌ(g) by breadth-first search over all normal chains.
pub fn exhaustive_height(g: &FiniteGroup, limits: &Limits) -> Result<usize> {
    limits.check_order("group order for exhaustive heights", g.order(), limits.exhaustive_height_order)?;
    let lattice = normal_subgroups(g, limits)?;
    let pos = |s: &ElemSet| lattice.iter().position(|t| t == s).unwrap();
    let start = 0;
    let top = pos(&ElemSet::full(g.order()));
    let mut dist = vec![usize::MAX; lattice.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        if i == top {
            return Ok(dist[i]);
        }
        let mins = minimal_above(g, &lattice[i])?;
        for (j, m) in lattice.iter().enumerate() {
            if dist[j] == usize::MAX && is_socle_step(g, &lattice[i], m, &mins) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    Err(Error::InvalidData("no normal chain reaches the group".into()))
}

/// One subgroup from each conjugacy class.
fn subgroup_class_reps(g: &FiniteGroup, limits: &Limits) -> Result<Vec<ElemSet>> {
    let subs = all_subgroups(g, limits)?;
    let perms = g.conjugation_perms();
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut reps = Vec::new();
    for s in subs {
        if seen.contains(&s) {
            continue;
        }
        let mut stack = vec![s.clone()];
        seen.insert(s.clone());
        while let Some(t) = stack.pop() {
            for p in &perms {
                let c = ElemSet::from_indices(g.order(), t.iter().map(|x| p[x] as usize));
                if seen.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
        reps.push(s);
    }
    Ok(reps)
}

/// ĥ(g): the maximum of ℌ over subgroups up to conjugacy. Quotients never
/// raise ℌ, so subgroups suffice.
pub fn height_hat(g: &FiniteGroup, limits: &Limits) -> Result<usize> {
    limits.check_order("group order for subquotient scans", g.order(), limits.subquotient_order)?;
    let reps = subgroup_class_reps(g, limits)?;
    let hs: Result<Vec<usize>> = reps
        .par_iter()
        .map(|s| {
            let (sub, _) = g.subgroup(s)?;
            height(&sub, limits)
        })
        .collect();
    Ok(hs?.into_iter().max().unwrap_or(0))
}

/// ĥ(g) by exhaustive chain search over every quotient of every subgroup class.
pub fn exhaustive_height_hat(g: &FiniteGroup, limits: &Limits) -> Result<usize> {
    limits.check_order("group order for exhaustive heights", g.order(), limits.exhaustive_height_order)?;
    let reps = subgroup_class_reps(g, limits)?;
    let hs: Result<Vec<usize>> = reps
        .par_iter()
        .map(|s| {
            let (sub, _) = g.subgroup(s)?;
            let mut best = 0;
            for n in normal_subgroups(&sub, limits)? {
                let (q, _) = sub.quotient(&n)?;
                best = best.max(exhaustive_height(&q, limits)?);
            }
            Ok(best)
        })
        .collect();
    Ok(hs?.into_iter().max().unwrap_or(0))
}

/// max ĥ over the members of a variety.
pub fn height_hat_of_variety(c: &VarietySpec, limits: &Limits) -> Result<usize> {
    let mut best = 0;
    for m in &c.members {
        best = best.max(height_hat(m.group(), limits)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightReport {
    pub order: usize,
    pub h_value: usize,
    /// Elements of each subgroup of the greedy chain.
    pub witness_chain: Vec<Vec<usize>>,
    pub witness_valid: bool,
    pub h_exhaustive: Option<usize>,
    pub hhat_value: Option<usize>,
    pub hhat_exhaustive: Option<usize>,
    /// False when an exhaustive value disagrees with the greedy one.
    pub greedy_confirmed: bool,
}

/// ℌ with its witness chain, optionally ĥ, and exhaustive checks where the
/// order is small enough.
pub fn height_report(g: &FiniteGroup, with_hat: bool, limits: &Limits) -> Result<HeightReport> {
    let chain = height_chain(g, limits)?;
    let h_value = chain.len() - 1;
    let witness_valid = is_valid_height_chain(g, &chain);
    let small = g.order() <= limits.exhaustive_height_order;
    let h_exhaustive = if small { Some(exhaustive_height(g, limits)?) } else { None };
    let (hhat_value, hhat_exhaustive) = if with_hat {
        let v = height_hat(g, limits)?;
        let e = if small { Some(exhaustive_height_hat(g, limits)?) } else { None };
        (Some(v), e)
    } else {
        (None, None)
    };
    let greedy_confirmed = h_exhaustive.is_none_or(|e| e == h_value)
        && hhat_exhaustive.is_none_or(|e| Some(e) == hhat_value);
    Ok(HeightReport {
        order: g.order(),
        h_value,
        witness_chain: chain.iter().map(|s| s.to_vec()).collect(),
        witness_valid,
        h_exhaustive,
        hhat_value,
        hhat_exhaustive,
        greedy_confirmed,
    })
}
