//! Cohomology of G ⋊ Γ computed directly and as Γ-invariants of the cohomology of G.

use serde::{Deserialize, Serialize};

use super::table::{add_block, h1_labels, h2_forms_for, push_form, z1_system, Action, H2Layout, Tree};
use crate::flmod::{FpModule, Matrix, RowReducer};
use crate::group::{GammaGroup, SemidirectProduct};
use crate::{Error, Limits, Result};

/// Both computations of dim H^i(G ⋊ Γ, A) for i = 1, 2; `None` where a cap was exceeded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectCohomology {
    pub h1_direct: Option<usize>,
    pub h2_direct: Option<usize>,
    pub h1_gamma_fixed: Option<usize>,
    pub h2_gamma_fixed: Option<usize>,
    pub h1: usize,
    pub h2: usize,
    /// True when every pair of computed values agrees.
    pub consistent: bool,
}

/// `a` must be a module over the group of `h.semidirect_product(limits)`.
pub fn semidirect_cohomology(h: &GammaGroup, a: &FpModule, limits: &Limits) -> Result<SemidirectCohomology> {
    let p = a.prime();
    if h.gamma().order() % p as usize == 0 {
        return Err(Error::Precondition(format!("ℓ = {p} divides |Γ| = {}", h.gamma().order())));
    }
    let sd = h.semidirect_product(limits)?;
    if !sd.group.same_table(a.group()) {
        return Err(Error::InvalidModule("module is not over the semidirect product".into()));
    }
    let direct1 = super::table::h1_dim(a, limits).ok();
    let direct2 = super::table::h2_dim(a, limits).ok();
    let n = h.order();
    let (fixed1, fixed2) = if n <= limits.h2_order {
        let (f1, f2) = gamma_fixed(h, &sd, a);
        (Some(f1), Some(f2))
    } else if n <= limits.h1_order {
        (Some(gamma_fixed_h1(h, &sd, a).0), None)
    } else {
        (None, None)
    };
    let pick = |x: Option<usize>, y: Option<usize>| x.or(y);
    let h1 = pick(direct1, fixed1).ok_or_else(|| Error::capacity("group order for degree 1", n, limits.h1_order))?;
    let h2 = pick(direct2, fixed2).ok_or_else(|| Error::capacity("group order for degree 2", n, limits.h2_order))?;
    let agree = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    Ok(SemidirectCohomology {
        h1_direct: direct1,
        h2_direct: direct2,
        h1_gamma_fixed: fixed1,
        h2_gamma_fixed: fixed2,
        h1,
        h2,
        consistent: agree(direct1, fixed1) && agree(direct2, fixed2),
    })
}

struct Restricted<'a> {
    act: Action<'a>,
    gamma_mats: Vec<&'a Matrix>,
}

fn restrict<'a>(h: &'a GammaGroup, sd: &SemidirectProduct, a: &'a FpModule) -> Restricted<'a> {
    let g = h.group();
    let mats = g.elements().map(|x| a.matrix(sd.pair(x, h.gamma().identity()))).collect();
    let gamma_mats = h.gamma().elements().map(|t| a.matrix(sd.pair(g.identity(), t))).collect();
    Restricted { act: Action { g, p: a.prime(), d: a.dim(), mats }, gamma_mats }
}

fn fixed_dim(p: u32, d: usize, mats: &[&Matrix]) -> usize {
    if mats.is_empty() {
        return d;
    }
    let id = Matrix::identity(p, d);
    let parts: Vec<Matrix> = mats.iter().map(|m| m.sub(&id)).collect();
    Matrix::vstack(p, d, &parts).nullspace().len()
}

/// (dim H¹(G, A)^Γ, dim Z¹(G, A)^Γ).
fn gamma_fixed_h1(h: &GammaGroup, sd: &SemidirectProduct, a: &FpModule) -> (usize, usize) {
    let r = restrict(h, sd, a);
    let act = &r.act;
    let (p, d) = (act.p, act.d);
    let gm = h.gamma();
    let tree = Tree::new(act.g);
    let labels = h1_labels(act, &tree);
    let mut red = z1_system(act, &tree, &labels);
    let cols = tree.gens.len() * d;
    let id = Matrix::identity(p, d);
    'outer: for &t in gm.generators() {
        let tinv = gm.inv(t);
        for (j, &s) in tree.gens.iter().enumerate() {
            // ρ(γ)·L(γ⁻¹(s)) − E_s.
            let lab = &labels[h.act(tinv, s)];
            let mut form = mat_times_form(r.gamma_mats[t], lab, cols, p);
            add_block(&mut form, cols, &id, j * d, p - 1, p);
            if !push_form(&mut red, &form, cols, d) {
                break 'outer;
            }
        }
    }
    let z1 = red.nullity();
    let gamma_gen_mats: Vec<&Matrix> = gm.generators().iter().map(|&t| r.gamma_mats[t]).collect();
    let mut all: Vec<&Matrix> = gamma_gen_mats.clone();
    all.extend(act.g.generators().iter().map(|&x| act.mats[x]));
    let b1 = fixed_dim(p, d, &gamma_gen_mats) - fixed_dim(p, d, &all);
    (z1 - b1, z1)
}

/// M·F for a d × cols form F.
fn mat_times_form(m: &Matrix, form: &[u32], cols: usize, p: u32) -> Vec<u32> {
    let d = m.rows();
    let mut out = vec![0u32; d * cols];
    for i in 0..d {
        for k in 0..d {
            let c = m.get(i, k);
            if c == 0 {
                continue;
            }
            let src = &form[k * cols..(k + 1) * cols];
            let dst = &mut out[i * cols..(i + 1) * cols];
            for (o, &v) in dst.iter_mut().zip(src) {
                *o = (*o + c * v) % p;
            }
        }
    }
    out
}

/// (dim H¹(G, A)^Γ, dim H²(G, A)^Γ).
fn gamma_fixed(h: &GammaGroup, sd: &SemidirectProduct, a: &FpModule) -> (usize, usize) {
    let (h1, z1) = gamma_fixed_h1(h, sd, a);
    let r = restrict(h, sd, a);
    let act = &r.act;
    let (p, d, g) = (act.p, act.d, act.g);
    let gm = h.gamma();
    let tree = Tree::new(g);
    let k = tree.gens.len();
    let lay = H2Layout::new(g, &tree, d, false);
    let u = lay.unknowns;
    let id = Matrix::identity(p, d);
    let mut red = RowReducer::new(p, u.max(1));
    let mut forms = vec![vec![0u32; d * u]; g.order()];
    if u > 0 {
        for x in g.elements() {
            if x == g.identity() {
                continue;
            }
            let more = h2_forms_for(act, &tree, &lay, x, &mut forms, |_, _, row| push_form(&mut red, row, u, d));
            if !more {
                break;
            }
            let mut full = false;
            'gam: for &t in gm.generators() {
                let tinv = gm.inv(t);
                let tx = h.act(t, x);
                for (j, &s) in tree.gens.iter().enumerate() {
                    // ρ(γ)·f(x, γ⁻¹(s)) − f(γ(x), s), with x = γ⁻¹ of the row's first argument.
                    let y = h.act(tinv, s);
                    let mut form = mat_times_form(r.gamma_mats[t], &forms[y], u, p);
                    let c = lay.col(k, tx, j).expect("non-identity rows carry unknowns");
                    add_block(&mut form, u, &id, c, p - 1, p);
                    if !push_form(&mut red, &form, u, d) {
                        full = true;
                        break 'gam;
                    }
                }
            }
            if full {
                break;
            }
        }
    }
    let z2 = if u == 0 { 0 } else { red.nullity() };
    // (C¹_norm)^Γ: one copy of A^{Stab(x)} per Γ-orbit on G ∖ {1}.
    let mut seen = vec![false; g.order()];
    let mut c1 = 0;
    for x in g.elements() {
        if x == g.identity() || seen[x] {
            continue;
        }
        let mut stab: Vec<&Matrix> = Vec::new();
        for t in gm.elements() {
            let y = h.act(t, x);
            seen[y] = true;
            if y == x {
                stab.push(r.gamma_mats[t]);
            }
        }
        c1 += fixed_dim(p, d, &stab);
    }
    let b2 = c1 - z1;
    (h1, z2 - b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;

    #[test]
    fn elementary_abelian_with_inversion() {
        let l = Limits::default();
        let h = abelian_with_inversion(&[3, 3]);
        let sd = h.semidirect_product(&l).unwrap();
        // Sign character: G acts trivially, Γ by −1.
        let vals: Vec<u32> = sd.group.generators().iter().map(|&x| if sd.split(x).1 == 0 { 1 } else { 2 }).collect();
        let sign = FpModule::character(&sd.group, 3, &vals).unwrap();
        let r = semidirect_cohomology(&h, &sign, &l).unwrap();
        assert!(r.consistent, "{r:?}");
        assert_eq!(r.h1, 2);
        for a in crate::flmod::simple_modules(&sd.group, 3, &l).unwrap() {
            let r = semidirect_cohomology(&h, &a, &l).unwrap();
            assert!(r.consistent, "{r:?}");
        }
    }

    #[test]
    fn nonabelian_cases() {
        let l = Limits::default();
        for (h, p) in [(cyclic_semidirect(7, 3, 2).unwrap(), 7u32), (GammaGroup::without_gamma(symmetric(3)), 3), (cyclic_with_inversion(5), 5)] {
            let sd = h.semidirect_product(&l).unwrap();
            for a in crate::flmod::simple_modules(&sd.group, p, &l).unwrap() {
                let r = semidirect_cohomology(&h, &a, &l).unwrap();
                assert!(r.consistent, "{r:?}");
            }
        }
    }
}
