//! H⁰, H¹, H² of a group given by its multiplication table.
//!
//! Cochains are parametrised along a breadth-first spanning tree of the
//! Cayley graph: a 1-cocycle is fixed by its values on generators, and a
//! normalised 2-cocycle by its values f(x, s) for generators s.

use serde::{Deserialize, Serialize};

use crate::flmod::{FpModule, Matrix, RowReducer};
use crate::group::FiniteGroup;
use crate::{Error, Limits, Result};

/// Dimensions of cocycles, coboundaries and cohomology in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub degree: u8,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_cohomology: usize,
    pub prime: u32,
    pub group_order: usize,
    pub module_dim: usize,
}

/// A group acting on F_p^d through one matrix per element.
pub(crate) struct Action<'a> {
    pub g: &'a FiniteGroup,
    pub p: u32,
    pub d: usize,
    pub mats: Vec<&'a Matrix>,
}

impl<'a> Action<'a> {
    pub fn of_module(a: &'a FpModule) -> Self {
        let g = a.group();
        Action { g, p: a.prime(), d: a.dim(), mats: g.elements().map(|x| a.matrix(x)).collect() }
    }
}

/// Breadth-first spanning tree of the Cayley graph for distinct non-identity generators.
pub(crate) struct Tree {
    pub gens: Vec<usize>,
    /// BFS order of elements, identity first.
    pub order: Vec<usize>,
    /// For each element other than the identity, (parent, generator slot).
    pub parent: Vec<(usize, usize)>,
}

impl Tree {
    pub fn new(g: &FiniteGroup) -> Self {
        let mut gens: Vec<usize> = Vec::new();
        for &s in g.generators() {
            if s != g.identity() && !gens.contains(&s) {
                gens.push(s);
            }
        }
        let n = g.order();
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut seen = vec![false; n];
        seen[g.identity()] = true;
        let mut order = vec![g.identity()];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = (x, j);
                    order.push(y);
                }
            }
        }
        Tree { gens, order, parent }
    }

    #[inline]
    pub fn is_tree_edge(&self, g: &FiniteGroup, x: usize, j: usize) -> bool {
        let y = g.mul(x, self.gens[j]);
        self.parent[y] == (x, j)
    }
}

pub fn h0_dim(a: &FpModule) -> usize {
    a.h0_dim()
}

pub fn h0_report(a: &FpModule) -> CocycleReport {
    let z = a.h0_dim();
    report(0, z, 0, a)
}

fn report(degree: u8, z: usize, b: usize, a: &FpModule) -> CocycleReport {
    CocycleReport {
        degree,
        dim_cocycles: z,
        dim_coboundaries: b,
        dim_cohomology: z - b,
        prime: a.prime(),
        group_order: a.group().order(),
        module_dim: a.dim(),
    }
}

/// Linear forms L(x) (d × kd) with f(x) = L(x)·(f(s₁), …, f(s_k)) for crossed homomorphisms f.
pub(crate) fn h1_labels(act: &Action, tree: &Tree) -> Vec<Vec<u32>> {
    let (p, d) = (act.p, act.d);
    let cols = tree.gens.len() * d;
    let n = act.g.order();
    let mut labels = vec![Vec::new(); n];
    labels[act.g.identity()] = vec![0u32; d * cols];
    for &y in &tree.order[1..] {
        let (x, j) = tree.parent[y];
        let mut l = labels[x].clone();
        add_block(&mut l, cols, act.mats[x], j * d, 1, p);
        labels[y] = l;
    }
    labels
}

/// l += c·M placed at columns `col0..col0+d` of a d-row form.
#[inline]
pub(crate) fn add_block(l: &mut [u32], cols: usize, m: &Matrix, col0: usize, c: u32, p: u32) {
    let d = m.rows();
    for i in 0..d {
        for k in 0..d {
            let v = m.get(i, k);
            if v != 0 {
                let e = &mut l[i * cols + col0 + k];
                *e = (*e + c * v) % p;
            }
        }
    }
}

/// Pushes the d rows of a d × cols form; returns false once the reducer is full.
pub(crate) fn push_form(red: &mut RowReducer, form: &[u32], cols: usize, d: usize) -> bool {
    for i in 0..d {
        red.push(&form[i * cols..(i + 1) * cols]);
        if red.rank() == cols {
            return false;
        }
    }
    true
}

/// Reducer holding the cocycle conditions on (f(s₁), …, f(s_k)).
pub(crate) fn z1_system(act: &Action, tree: &Tree, labels: &[Vec<u32>]) -> RowReducer {
    let (p, d) = (act.p, act.d);
    let cols = tree.gens.len() * d;
    let g = act.g;
    let mut red = RowReducer::new(p, cols);
    let mut row = vec![0u32; d * cols];
    'outer: for &x in &tree.order {
        for j in 0..tree.gens.len() {
            if tree.is_tree_edge(g, x, j) {
                continue;
            }
            let y = g.mul(x, tree.gens[j]);
            for (r, (&a, &b)) in row.iter_mut().zip(labels[x].iter().zip(&labels[y])) {
                *r = a + p - b;
            }
            add_block(&mut row, cols, act.mats[x], j * d, 1, p);
            if !push_form(&mut red, &row, cols, d) {
                break 'outer;
            }
        }
    }
    red
}

pub(crate) fn z1_dim_action(act: &Action) -> usize {
    let tree = Tree::new(act.g);
    let labels = h1_labels(act, &tree);
    z1_system(act, &tree, &labels).nullity()
}

pub fn h1_report(a: &FpModule, limits: &Limits) -> Result<CocycleReport> {
    limits.check_order("group order for degree 1", a.group().order(), limits.h1_order)?;
    let z = z1_dim_action(&Action::of_module(a));
    let b = a.dim() - a.h0_dim();
    Ok(report(1, z, b, a))
}

pub fn h1_dim(a: &FpModule, limits: &Limits) -> Result<usize> {
    Ok(h1_report(a, limits)?.dim_cohomology)
}

/// Column of the unknown f(x, s_j) in the gauge-fixed degree-2 system, if any.
pub(crate) struct H2Layout {
    pub index: Vec<u32>,
    pub unknowns: usize,
}

pub(crate) const NO_COL: u32 = u32::MAX;

impl H2Layout {
    /// `gauge` fixes f to zero on tree edges.
    pub fn new(g: &FiniteGroup, tree: &Tree, d: usize, gauge: bool) -> Self {
        let k = tree.gens.len();
        let mut index = vec![NO_COL; g.order() * k];
        let mut next = 0u32;
        for x in g.elements() {
            if x == g.identity() {
                continue;
            }
            for j in 0..k {
                if gauge && tree.is_tree_edge(g, x, j) {
                    continue;
                }
                index[x * k + j] = next;
                next += d as u32;
            }
        }
        H2Layout { index, unknowns: next as usize }
    }

    #[inline]
    pub fn col(&self, k: usize, x: usize, j: usize) -> Option<usize> {
        let c = self.index[x * k + j];
        (c != NO_COL).then_some(c as usize)
    }
}

/// For a fixed x, the forms F_x(y) = f(x, y) for all y, given f(x, ·) on generators.
///
/// Calls `edge(y, j, residual)` for every non-tree edge with the d × U residual
/// F_x(y) + f(xy, s_j) − x·f(y, s_j) − F_x(y s_j), which vanishes on cocycles.
pub(crate) fn h2_forms_for(
    act: &Action,
    tree: &Tree,
    lay: &H2Layout,
    x: usize,
    forms: &mut [Vec<u32>],
    mut edge: impl FnMut(usize, usize, &[u32]) -> bool,
) -> bool {
    let (p, d, g) = (act.p, act.d, act.g);
    let k = tree.gens.len();
    let u = lay.unknowns;
    let id = Matrix::identity(p, d);
    forms[g.identity()].iter_mut().for_each(|v| *v = 0);
    let step = |base: &[u32], y: usize, j: usize, out: &mut Vec<u32>| {
        out.clear();
        out.extend_from_slice(base);
        if let Some(c) = lay.col(k, g.mul(x, y), j) {
            add_block(out, u, &id, c, 1, p);
        }
        if let Some(c) = lay.col(k, y, j) {
            add_block(out, u, act.mats[x], c, p - 1, p);
        }
    };
    for &y in &tree.order[1..] {
        let (par, j) = tree.parent[y];
        let mut out = std::mem::take(&mut forms[y]);
        step(&forms[par], par, j, &mut out);
        forms[y] = out;
    }
    let mut buf = Vec::with_capacity(d * u);
    for &y in &tree.order {
        for j in 0..k {
            if tree.is_tree_edge(g, y, j) {
                continue;
            }
            step(&forms[y], y, j, &mut buf);
            let z = g.mul(y, tree.gens[j]);
            for (b, &f) in buf.iter_mut().zip(&forms[z]) {
                *b = (*b + p - f) % p;
            }
            if !edge(y, j, &buf) {
                return false;
            }
        }
    }
    true
}

pub fn h2_report(a: &FpModule, limits: &Limits) -> Result<CocycleReport> {
    let g = a.group();
    limits.check_order("group order for degree 2", g.order(), limits.h2_order)?;
    let act = Action::of_module(a);
    let (z2, b2) = h2_dims_action(&act);
    Ok(report(2, z2, b2, a))
}

/// (dim Z², dim B²) in the gauge-fixed parametrisation.
pub(crate) fn h2_dims_action(act: &Action) -> (usize, usize) {
    let g = act.g;
    let d = act.d;
    let tree = Tree::new(g);
    let lay = H2Layout::new(g, &tree, d, true);
    let u = lay.unknowns;
    let z1 = z1_dim_action(act);
    let b_fixed = tree.gens.len() * d - z1;
    if u == 0 {
        return (b_fixed, b_fixed);
    }
    let mut red = RowReducer::new(act.p, u);
    let mut forms = vec![vec![0u32; d * u]; g.order()];
    for x in g.elements() {
        if x == g.identity() {
            continue;
        }
        let more = h2_forms_for(act, &tree, &lay, x, &mut forms, |_, _, row| push_form(&mut red, row, u, d));
        if !more {
            break;
        }
    }
    (red.nullity(), b_fixed)
}

pub fn h2_dim(a: &FpModule, limits: &Limits) -> Result<usize> {
    Ok(h2_report(a, limits)?.dim_cohomology)
}

/// Report for degree 0, 1 or 2.
pub fn cohomology(a: &FpModule, degree: u8, limits: &Limits) -> Result<CocycleReport> {
    match degree {
        0 => Ok(h0_report(a)),
        1 => h1_report(a, limits),
        2 => h2_report(a, limits),
        _ => Err(Error::Precondition(format!("degree {degree} is not supported"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;

    #[test]
    fn cyclic_trivial() {
        let l = Limits::default();
        for p in [2u32, 3, 5] {
            for k in [1u32, 2] {
                let g = cyclic(p.pow(k) as usize);
                let a = FpModule::trivial(&g, p, 1);
                assert_eq!(h1_dim(&a, &l).unwrap(), 1);
                assert_eq!(h2_dim(&a, &l).unwrap(), 1);
            }
        }
    }

    #[test]
    fn elementary_abelian_trivial() {
        let l = Limits::default();
        for n in 1..=3 {
            let g = elementary_abelian(2, n);
            let a = FpModule::trivial(&g, 2, 1);
            assert_eq!(h1_dim(&a, &l).unwrap(), n);
            assert_eq!(h2_dim(&a, &l).unwrap(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn coprime_vanishing() {
        let l = Limits::default();
        let g = symmetric(3);
        let r = FpModule::regular(&g, 5);
        assert_eq!(h1_dim(&r, &l).unwrap(), 0);
        assert_eq!(h2_dim(&r, &l).unwrap(), 0);
    }

    #[test]
    fn sign_module_of_s3() {
        let l = Limits::default();
        let g = symmetric(3);
        // Generators: 3-cycle then transposition.
        let sign = FpModule::character(&g, 3, &[1, 2]).unwrap();
        assert_eq!(h1_dim(&sign, &l).unwrap(), 1);
        assert_eq!(h2_dim(&sign, &l).unwrap(), 1);
    }
}
