//! Multiplicities read off directly from kernels of finite covers.

use serde::{Deserialize, Serialize};

use super::formula::check_over_semidirect;
use super::truncation::check_module_surjection;
use crate::cohom::{h2_dim, semidirect_cohomology};
use crate::flmod::{endomorphism_dim, hom_dim, meataxe::split_action, hom_dim_raw, FpModule, Matrix};
use crate::group::{GammaGroup, GroupHom, SemidirectProduct};
use crate::{ElemSet, Error, Limits, Result};

/// Checks that `omega` is a Γ-equivariant surjection from `f` onto `h`.
pub fn check_cover(f: &GammaGroup, h: &GammaGroup, omega: &GroupHom) -> Result<()> {
    if !f.same_gamma(h) {
        return Err(Error::Precondition("cover and target have different Γ".into()));
    }
    if !omega.source().same_table(f.group()) || !omega.target().same_table(h.group()) {
        return Err(Error::InvalidHom("map does not match the Γ-groups".into()));
    }
    if !omega.is_surjective() {
        return Err(Error::InvalidHom("map is not surjective".into()));
    }
    for &t in f.gamma().generators() {
        for x in f.group().elements() {
            if omega.apply(f.act(t, x)) != h.act(t, omega.apply(x)) {
                return Err(Error::InvalidHom("map is not Γ-equivariant".into()));
            }
        }
    }
    Ok(())
}

/// The map F ⋊ Γ → G ⋊ Γ induced by an equivariant map F → G.
pub fn semidirect_map(beta: &GroupHom, f_sd: &SemidirectProduct, g_sd: &SemidirectProduct) -> GroupHom {
    let map = f_sd
        .group
        .elements()
        .map(|x| {
            let (y, t) = f_sd.split(x);
            g_sd.pair(beta.apply(y), t)
        })
        .collect();
    GroupHom::trusted(&f_sd.group, &g_sd.group, map)
}

fn lifts(omega: &GroupHom) -> Vec<usize> {
    let mut lift = vec![usize::MAX; omega.target().order()];
    for x in omega.source().elements() {
        let y = omega.apply(x);
        if lift[y] == usize::MAX {
            lift[y] = x;
        }
    }
    lift
}

fn exact_log(mut value: usize, base: usize) -> Option<usize> {
    let mut k = 0;
    while value > 1 {
        if value % base != 0 {
            return None;
        }
        value /= base;
        k += 1;
    }
    Some(k)
}

/// N/U as a module over H ⋊ Γ when it is an elementary abelian ℓ-group;
/// `lift` sends each element of H to a preimage in F.
pub(crate) fn quotient_module(
    f: &GammaGroup,
    sd: &SemidirectProduct,
    lift: &[usize],
    n: &ElemSet,
    u: &ElemSet,
    p: u32,
) -> Result<Option<FpModule>> {
    let g = f.group();
    let Some(d) = exact_log(n.count() / u.count(), p as usize) else {
        return Ok(None);
    };
    let ngens = g.small_generating_set(n);
    for &x in &ngens {
        if !u.contains(g.pow(x, p as u64)) {
            return Ok(None);
        }
        for &y in &ngens {
            if !u.contains(g.commutator(x, y)) {
                return Ok(None);
            }
        }
    }
    let uel = u.to_vec();
    let mut label = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in n.iter() {
        if label[x] == usize::MAX {
            for &y in &uel {
                label[g.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
    }
    let mut coords: Vec<Option<Vec<u8>>> = vec![None; reps.len()];
    coords[label[g.identity()]] = Some(vec![0; d]);
    let mut known = vec![label[g.identity()]];
    let mut basis = Vec::new();
    for &x in &ngens {
        if coords[label[x]].is_some() {
            continue;
        }
        let i = basis.len();
        basis.push(x);
        let mut fresh = Vec::new();
        for &c in &known {
            let mut y = reps[c];
            let base = coords[c].clone().unwrap();
            for k in 1..p {
                y = g.mul(y, x);
                let mut v = base.clone();
                v[i] = k as u8;
                let l = label[y];
                coords[l] = Some(v);
                fresh.push(l);
            }
        }
        known.extend(fresh);
    }
    let coord = |x: usize| coords[label[x]].clone().expect("cosets are spanned by generators");
    let mats = sd
        .group
        .generators()
        .iter()
        .map(|&s| {
            let (hh, t) = sd.split(s);
            let by = lift[hh];
            let cols: Vec<Vec<u8>> = basis.iter().map(|&b| coord(g.conj(f.act(t, b), by))).collect();
            Matrix::from_columns(p, d, &cols)
        })
        .collect();
    Ok(Some(FpModule::with_dim(&sd.group, p, d, mats)?))
}

/// Number of copies of `a` in the head of ker ω: with M the intersection of the
/// maximal proper F ⋊ Γ-normal subgroups U of N = ker ω with N/U ≅ A, returns
/// log_{|A|} |N/M|.
///
/// `a` must be a module over the group of `h.semidirect_product(limits)`.
pub fn multiplicity_oracle(f: &GammaGroup, h: &GammaGroup, omega: &GroupHom, a: &FpModule, limits: &Limits) -> Result<usize> {
    check_cover(f, h, omega)?;
    let sd = h.semidirect_product(limits)?;
    check_over_semidirect(&sd, a)?;
    let n = omega.kernel();
    if n.count() == 1 {
        return Ok(0);
    }
    let lift = lifts(omega);
    let mut meet = n.clone();
    let mut hits = 0;
    for u in f.maximal_proper_gnormal_subgroups_of(&n, limits)? {
        if let Some(q) = quotient_module(f, &sd, &lift, &n, &u, a.prime())? {
            if q.dim() == a.dim() && hom_dim(&q, a)? > 0 {
                meet = meet.intersection(&u);
                hits += 1;
            }
        }
    }
    if hits == 0 {
        return Ok(0);
    }
    let size = (a.prime() as usize).pow(a.dim() as u32);
    exact_log(n.count() / meet.count(), size)
        .ok_or_else(|| Error::InvalidData("isotypic head is not a power of the module".into()))
}

/// Multiplicity of `a` in the head of the kernel of a Γ-module surjection
/// `map: f → target`, as dim Hom_Γ(kernel, a) / dim End_Γ(a).
pub fn abelian_multiplicity_oracle(f: &FpModule, target: &FpModule, map: &Matrix, a: &FpModule) -> Result<usize> {
    check_module_surjection(f, target, map)?;
    f.check_compatible(a)?;
    let p = f.prime();
    let basis = map.nullspace();
    let basis = crate::flmod::echelon(p, f.dim(), &basis);
    let (kgens, _) = split_action(p, f.dim(), f.generator_matrices(), &basis);
    let homs = hom_dim_raw(p, basis.len(), a.dim(), &kgens, a.generator_matrices());
    let endo = endomorphism_dim(a);
    if homs % endo != 0 {
        return Err(Error::NonIntegralMultiplicity { numerator: homs as i64, denominator: endo as i64 });
    }
    Ok(homs / endo)
}

/// The three multiplicities of a tower E → F → G, where the first map has a
/// Γ-equivariant section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsumReport {
    pub m_alpha: usize,
    pub m_beta: usize,
    pub m_pi: usize,
    /// Some(true) when H²(F ⋊ Γ, A) = 0, so every extension of F by A splits.
    pub extensions_split: Option<bool>,
    pub bound_holds: bool,
    pub equality: bool,
}

/// `a` is a module over G ⋊ Γ.
#[allow(clippy::too_many_arguments)]
pub fn msum_decompose(
    e: &GammaGroup,
    f: &GammaGroup,
    g: &GammaGroup,
    alpha: &GroupHom,
    section: &GroupHom,
    beta: &GroupHom,
    a: &FpModule,
    limits: &Limits,
) -> Result<MsumReport> {
    check_cover(e, f, alpha)?;
    check_cover(f, g, beta)?;
    if !section.source().same_table(f.group()) || !section.target().same_table(e.group()) {
        return Err(Error::InvalidHom("section does not match the groups".into()));
    }
    for x in f.group().elements() {
        if alpha.apply(section.apply(x)) != x {
            return Err(Error::InvalidHom("section is not a right inverse".into()));
        }
        for &t in f.gamma().generators() {
            if section.apply(f.act(t, x)) != e.act(t, section.apply(x)) {
                return Err(Error::InvalidHom("section is not Γ-equivariant".into()));
            }
        }
    }
    let pi = alpha.then(beta)?;
    let f_sd = f.semidirect_product(limits)?;
    let g_sd = g.semidirect_product(limits)?;
    let a_f = a.pullback(&semidirect_map(beta, &f_sd, &g_sd))?;
    let m_alpha = multiplicity_oracle(e, f, alpha, &a_f, limits)?;
    let m_beta = multiplicity_oracle(f, g, beta, a, limits)?;
    let m_pi = multiplicity_oracle(e, g, &pi, a, limits)?;
    let h2 = if f.gamma().order() % a.prime() as usize != 0 {
        semidirect_cohomology(f, &a_f, limits).map(|c| c.h2).ok()
    } else {
        h2_dim(&a_f, limits).ok()
    };
    Ok(MsumReport {
        m_alpha,
        m_beta,
        m_pi,
        extensions_split: h2.map(|d| d == 0),
        bound_holds: m_pi <= m_alpha + m_beta,
        equality: m_pi == m_alpha + m_beta,
    })
}
