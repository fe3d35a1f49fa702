use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::bitset::ElemSet;
use crate::{Error, Result};

/// A finite group stored as a dense multiplication table.
///
/// Cloning is cheap; the table is shared.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupData>,
}

struct GroupData {
    name: Option<String>,
    order: usize,
    table: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
    inverses: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.inner.name)
            .field("order", &self.inner.order)
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a nested table, validating every axiom.
    pub fn from_table(name: Option<String>, table: &[Vec<usize>], generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            flat.extend(row.iter().map(|&x| x as u32));
        }
        Self::from_flat_table(name, n, flat, generators)
    }

    /// Builds a group from a row-major table, validating every axiom.
    pub fn from_flat_table(name: Option<String>, order: usize, table: Vec<u32>, generators: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(Error::InvalidGroup(format!("table has {} entries, expected {}", table.len(), order * order)));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::InvalidGroup(format!("table entry {bad} out of range")));
        }
        if let Some(&bad) = generators.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidGroup(format!("generator {bad} out of range")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let c = table[a * order + b] as usize;
                if seen[c] {
                    return Err(Error::InvalidGroup(format!("row {a} repeats element {c}")));
                }
                seen[c] = true;
            }
        }
        for b in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..order {
                let c = table[a * order + b] as usize;
                if seen[c] {
                    return Err(Error::InvalidGroup(format!("column {b} repeats element {c}")));
                }
                seen[c] = true;
            }
        }
        let g = Self::assemble(name, order, table, identity, generators);
        if g.closure(g.generators()).count() != order {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        // Light's test: associativity on all (x, s, y) with s a generator
        // implies associativity, since the set of such middle elements is
        // closed under multiplication.
        for &s in g.generators() {
            for x in 0..order {
                let xs = g.mul(x, s);
                for y in 0..order {
                    if g.mul(xs, y) != g.mul(x, g.mul(s, y)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({x}, {s}, {y})")));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Builds a group whose axioms hold by construction.
    pub(crate) fn from_trusted(name: Option<String>, order: usize, table: Vec<u32>, generators: Vec<usize>) -> Self {
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x))
            .expect("trusted table has an identity");
        let g = Self::assemble(name, order, table, identity, generators);
        debug_assert_eq!(g.closure(g.generators()).count(), order);
        g
    }

    fn assemble(name: Option<String>, order: usize, table: Vec<u32>, identity: usize, generators: Vec<usize>) -> Self {
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&c| c as usize == identity).expect("latin row");
            inverses[a] = b as u32;
        }
        FiniteGroup {
            inner: Arc::new(GroupData { name, order, table, identity, generators, inverses }),
        }
    }

    /// Expands permutation generators on `0..degree` into a table.
    ///
    /// Elements are numbered in breadth-first order from the identity, and the
    /// product `a·b` applies `a` first. Generator positions are preserved.
    pub fn from_permutations(name: Option<String>, degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        for (i, p) in gens.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::InvalidGroup(format!("permutation {i} has length {}, expected {degree}", p.len())));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidGroup(format!("generator {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let ident: Vec<u32> = (0..degree as u32).collect();
        let gens32: Vec<Vec<u32>> = gens.iter().map(|p| p.iter().map(|&x| x as u32).collect()).collect();
        let mut elems: Vec<Vec<u32>> = vec![ident.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        index.insert(ident, 0);
        let mut head = 0;
        while head < elems.len() {
            let a = elems[head].clone();
            head += 1;
            for s in &gens32 {
                let prod: Vec<u32> = a.iter().map(|&i| s[i as usize]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::capacity("permutation group order", elems.len() + 1, cap));
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0u32; order * order];
        let mut buf = vec![0u32; degree];
        for (ai, a) in elems.iter().enumerate() {
            for (bi, b) in elems.iter().enumerate() {
                for (k, &x) in a.iter().enumerate() {
                    buf[k] = b[x as usize];
                }
                table[ai * order + bi] = index[&buf] as u32;
            }
        }
        let generators = gens32.iter().map(|p| index[p]).collect();
        Ok(Self::from_trusted(name, order, table, generators))
    }

    pub fn name(&self) -> Option<&str> {
        self.inner.name.as_deref()
    }

    /// Returns a copy carrying a different label.
    pub fn renamed(&self, name: impl Into<String>) -> FiniteGroup {
        let d = &self.inner;
        FiniteGroup {
            inner: Arc::new(GroupData {
                name: Some(name.into()),
                order: d.order,
                table: d.table.clone(),
                identity: d.identity,
                generators: d.generators.clone(),
                inverses: d.inverses.clone(),
            }),
        }
    }

    /// Returns a copy with a different generator list, which must generate.
    pub fn with_generators(&self, generators: Vec<usize>) -> Result<FiniteGroup> {
        if generators.iter().any(|&x| x >= self.order()) {
            return Err(Error::InvalidGroup("generator out of range".into()));
        }
        if self.closure(&generators).count() != self.order() {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        let d = &self.inner;
        Ok(FiniteGroup {
            inner: Arc::new(GroupData {
                name: d.name.clone(),
                order: d.order,
                table: d.table.clone(),
                identity: d.identity,
                generators,
                inverses: d.inverses.clone(),
            }),
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.inner.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.inner.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.inner.table[a * self.inner.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inner.inverses[a] as usize
    }

    /// `by · x · by⁻¹`.
    #[inline]
    pub fn conj(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(by, x), self.inv(by))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, x| lcm(acc, self.element_order(x)))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table_row(&self, a: usize) -> &[u32] {
        let n = self.inner.order;
        &self.inner.table[a * n..(a + 1) * n]
    }

    pub fn flat_table(&self) -> &[u32] {
        &self.inner.table
    }

    /// True when both groups share the same element numbering and table.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.order() == other.order() && self.inner.table == other.inner.table)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// The subgroup generated by `seeds`.
    pub fn closure(&self, seeds: &[usize]) -> ElemSet {
        let mut set = ElemSet::singleton(self.order(), self.identity());
        let mut elems = vec![self.identity()];
        let mut gens = Vec::new();
        for &s in seeds {
            self.extend_closure(&mut set, &mut elems, &mut gens, s);
        }
        set
    }

    /// Grows the subgroup `set` (listed in `elems`, generated by `gens`) by `x`.
    pub(crate) fn extend_closure(&self, set: &mut ElemSet, elems: &mut Vec<usize>, gens: &mut Vec<usize>, x: usize) {
        if set.contains(x) {
            return;
        }
        gens.push(x);
        let old = elems.len();
        // Old elements are closed under old generators; new products come from
        // multiplying old elements by x, then new elements by every generator.
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..old {
            let y = self.mul(elems[i], x);
            if set.insert(y) {
                elems.push(y);
                queue.push_back(y);
            }
        }
        while let Some(y) = queue.pop_front() {
            for &s in gens.iter() {
                let z = self.mul(y, s);
                if set.insert(z) {
                    elems.push(z);
                    queue.push_back(z);
                }
            }
        }
    }

    pub fn is_subgroup(&self, s: &ElemSet) -> bool {
        if !s.contains(self.identity()) {
            return false;
        }
        let v = s.to_vec();
        v.iter().all(|&a| v.iter().all(|&b| s.contains(self.mul(a, b))))
    }

    /// Checks that the subgroup `s` is normal.
    pub fn is_normal(&self, s: &ElemSet) -> bool {
        self.is_subgroup(s) && s.iter().all(|x| self.generators().iter().all(|&g| s.contains(self.conj(x, g))))
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[usize]) -> ElemSet {
        let ops = self.conjugation_perms();
        super::lattice::op_closure(self, &ops, seeds)
    }

    /// Permutations of the element set given by conjugation with each generator.
    pub fn conjugation_perms(&self) -> Vec<Vec<u32>> {
        self.generators()
            .iter()
            .map(|&g| (0..self.order()).map(|x| self.conj(x, g) as u32).collect())
            .collect()
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![x];
            class_of[x] = id;
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                i += 1;
                for &g in self.generators() {
                    let z = self.conj(y, g);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        members.push(z);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// A short generating list for the subgroup `s`, preferring high-order elements.
    pub fn small_generating_set(&self, s: &ElemSet) -> Vec<usize> {
        let mut cand: Vec<usize> = s.iter().collect();
        cand.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let target = s.count();
        let mut set = ElemSet::singleton(self.order(), self.identity());
        let mut elems = vec![self.identity()];
        let mut gens = Vec::new();
        for x in cand {
            if elems.len() == target {
                break;
            }
            self.extend_closure(&mut set, &mut elems, &mut gens, x);
        }
        gens
    }

    /// The subgroup `s` as a group in its own right, with the embedding.
    pub fn subgroup(&self, s: &ElemSet) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(s) {
            return Err(Error::InvalidGroup("subset is not a subgroup".into()));
        }
        let embed: Vec<usize> = s.to_vec();
        let mut local = vec![u32::MAX; self.order()];
        for (i, &x) in embed.iter().enumerate() {
            local[x] = i as u32;
        }
        let m = embed.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in embed.iter().enumerate() {
            for (j, &b) in embed.iter().enumerate() {
                table[i * m + j] = local[self.mul(a, b)];
            }
        }
        let gens = self.small_generating_set(s).into_iter().map(|x| local[x] as usize).collect();
        Ok((FiniteGroup::from_trusted(None, m, table, gens), embed))
    }

    /// The quotient by a normal subgroup, with the projection map.
    pub fn quotient(&self, n: &ElemSet) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let order = self.order();
        let mut coset = vec![usize::MAX; order];
        let mut reps = Vec::new();
        let nel = n.to_vec();
        // Identity coset first so the quotient identity is index 0.
        let mut starts = vec![self.identity()];
        starts.extend(0..order);
        for x in starts {
            if coset[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &k in &nel {
                coset[self.mul(x, k)] = id;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = coset[self.mul(a, b)] as u32;
            }
        }
        let mut gens: Vec<usize> = Vec::new();
        for &g in self.generators() {
            let c = coset[g];
            if c != 0 && !gens.contains(&c) {
                gens.push(c);
            }
        }
        Ok((FiniteGroup::from_trusted(None, m, table, gens), coset))
    }

    /// Direct product with elements numbered `a·|h| + b`.
    pub fn direct_product(&self, h: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), h.order());
        let order = n * m;
        let mut table = vec![0u32; order * order];
        for a1 in 0..n {
            for b1 in 0..m {
                let x = a1 * m + b1;
                for a2 in 0..n {
                    let a = self.mul(a1, a2) * m;
                    let hrow = h.table_row(b1);
                    let base = x * order + a2 * m;
                    for b2 in 0..m {
                        table[base + b2] = (a + hrow[b2] as usize) as u32;
                    }
                }
            }
        }
        let mut gens: Vec<usize> = self.generators().iter().map(|&g| g * m + h.identity()).collect();
        gens.extend(h.generators().iter().map(|&g| self.identity() * m + g));
        let name = match (self.name(), h.name()) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        FiniteGroup::from_trusted(name, order, table, gens)
    }

    /// Derived subgroup of the subgroup `s`.
    pub fn derived_subgroup_of(&self, s: &ElemSet) -> ElemSet {
        let gens = self.small_generating_set(s);
        let mut seeds = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                seeds.push(self.commutator(a, b));
            }
        }
        // Normal closure inside s: close under conjugation by generators of s.
        let ops: Vec<Vec<u32>> = gens
            .iter()
            .map(|&g| (0..self.order()).map(|x| self.conj(x, g) as u32).collect())
            .collect();
        super::lattice::op_closure(self, &ops, &seeds)
    }

    pub fn derived_series(&self) -> Vec<ElemSet> {
        let mut series = vec![ElemSet::full(self.order())];
        loop {
            let last = series.last().unwrap();
            let next = self.derived_subgroup_of(last);
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    /// Derived length, or `None` for non-solvable groups.
    pub fn derived_length(&self) -> Option<usize> {
        let series = self.derived_series();
        if series.last().unwrap().count() == 1 {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
