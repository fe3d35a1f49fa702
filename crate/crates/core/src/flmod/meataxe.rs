//! Submodule search and composition factors by the Holt–Rees refinement of
//! Norton's irreducibility test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fp::{Matrix, RowReducer};
use super::module::{echelon, hom_dim, spin, FpModule};
use super::poly::{char_poly, irreducible_factors};
use crate::group::FiniteGroup;
use crate::{Error, Limits, Result};

/// Default seed for chops that are not handed a generator.
pub const CHOP_SEED: u64 = 0x6d65_6174_6178_6521;

const EXHAUSTIVE_SPIN_LIMIT: u64 = 1 << 20;

/// A proper nonzero invariant subspace, or `None` when the action is irreducible.
pub fn find_submodule<R: Rng>(p: u32, dim: usize, gens: &[Matrix], rng: &mut R, retries: usize) -> Result<Option<Vec<Vec<u8>>>> {
    if dim <= 1 {
        return Ok(None);
    }
    if gens.iter().all(|m| m.is_identity()) {
        let mut v = vec![0u8; dim];
        v[0] = 1;
        return Ok(Some(vec![v]));
    }
    let transposes: Vec<Matrix> = gens.iter().map(|m| m.transpose()).collect();
    let mut words: Vec<Matrix> = gens.to_vec();
    for _ in 0..retries {
        for _ in 0..2 {
            let a = words.choose(rng).unwrap().clone();
            let b = gens.choose(rng).unwrap();
            words.push(a.mul(b));
        }
        if words.len() > 12 {
            let drop = words.len() - 12;
            words.drain(gens.len()..gens.len() + drop);
        }
        let mut theta = Matrix::zero(p, dim, dim);
        for w in &words {
            theta = theta.lincomb(1, w, rng.gen_range(0..p));
        }
        let f = char_poly(&theta);
        for q in irreducible_factors(&f, rng) {
            let qt = q.eval_matrix(&theta);
            let null = qt.nullspace();
            let s = spin(p, dim, gens, &null[..1]);
            if s.len() < dim {
                return Ok(Some(s));
            }
            if null.len() == q.degree() {
                let wnull = qt.transpose().nullspace();
                let st = spin(p, dim, &transposes, &wnull[..1]);
                if st.len() < dim {
                    return Ok(Some(annihilator(p, dim, &st)));
                }
                return Ok(None);
            }
            for v in &null[1..] {
                let s = spin(p, dim, gens, std::slice::from_ref(v));
                if s.len() < dim {
                    return Ok(Some(s));
                }
            }
        }
    }
    exhaustive_submodule(p, dim, gens)
}

/// Spins every projective point; decisive but only feasible for small modules.
fn exhaustive_submodule(p: u32, dim: usize, gens: &[Matrix]) -> Result<Option<Vec<Vec<u8>>>> {
    let total = (p as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    if total > EXHAUSTIVE_SPIN_LIMIT {
        return Err(Error::ChopFailed(format!("no decision for a {dim}-dimensional module over F_{p}")));
    }
    let mut v = vec![0u8; dim];
    for lead in 0..dim {
        // Vectors whose first nonzero entry is a 1 at position `lead`.
        let free = dim - lead - 1;
        let count = (p as u64).pow(free as u32);
        for k in 0..count {
            v.iter_mut().for_each(|x| *x = 0);
            v[lead] = 1;
            let mut r = k;
            for x in v[lead + 1..].iter_mut() {
                *x = (r % p as u64) as u8;
                r /= p as u64;
            }
            let s = spin(p, dim, gens, std::slice::from_ref(&v));
            if s.len() < dim {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// {v : w·v = 0 for all w in `rows`}.
fn annihilator(p: u32, dim: usize, rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let data: Vec<u8> = rows.iter().flatten().copied().collect();
    let m = Matrix::from_vecs(p, rows.len(), dim, data);
    echelon(p, dim, &m.nullspace())
}

/// Actions on an invariant subspace and on the quotient by it.
///
/// `basis` must be a reduced echelon basis of an invariant subspace.
pub fn split_action(p: u32, dim: usize, gens: &[Matrix], basis: &[Vec<u8>]) -> (Vec<Matrix>, Vec<Matrix>) {
    let k = basis.len();
    let pivots: Vec<usize> = basis.iter().map(|v| v.iter().position(|&x| x != 0).unwrap()).collect();
    let mut is_pivot = vec![false; dim];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..dim).filter(|&c| !is_pivot[c]).collect();
    let mut subs = Vec::with_capacity(gens.len());
    let mut quots = Vec::with_capacity(gens.len());
    for m in gens {
        let mut sm = Matrix::zero(p, k, k);
        for (j, v) in basis.iter().enumerate() {
            let w = m.mul_vec(v);
            for (i, &c) in pivots.iter().enumerate() {
                sm.set(i, j, w[c] as u32);
            }
        }
        let mut qm = Matrix::zero(p, free.len(), free.len());
        for (j, &c) in free.iter().enumerate() {
            let mut w: Vec<u32> = (0..dim).map(|i| m.get(i, c)).collect();
            for (v, &pc) in basis.iter().zip(&pivots) {
                let f = w[pc] % p;
                if f != 0 {
                    for (x, &y) in w.iter_mut().zip(v) {
                        *x = (*x + (p - f) * y as u32) % p;
                    }
                }
            }
            for (i, &fc) in free.iter().enumerate() {
                qm.set(i, j, w[fc]);
            }
        }
        subs.push(sm);
        quots.push(qm);
    }
    (subs, quots)
}

/// Irreducible actions occurring in a composition series, with repetition.
pub fn chop_raw<R: Rng>(p: u32, dim: usize, gens: &[Matrix], rng: &mut R, retries: usize) -> Result<Vec<(usize, Vec<Matrix>)>> {
    let mut out = Vec::new();
    let mut stack = vec![(dim, gens.to_vec())];
    while let Some((d, gs)) = stack.pop() {
        if d == 0 {
            continue;
        }
        match find_submodule(p, d, &gs, rng, retries)? {
            None => out.push((d, gs)),
            Some(basis) => {
                let k = basis.len();
                let (s, q) = split_action(p, d, &gs, &basis);
                stack.push((d - k, q));
                stack.push((k, s));
            }
        }
    }
    Ok(out)
}

/// Composition factors up to isomorphism with multiplicities, in order of first appearance.
pub fn composition_factors(a: &FpModule) -> Result<Vec<(FpModule, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(CHOP_SEED);
    composition_factors_with(a, &mut rng, &Limits::default())
}

pub fn composition_factors_with<R: Rng>(a: &FpModule, rng: &mut R, limits: &Limits) -> Result<Vec<(FpModule, usize)>> {
    limits.check_order("module dimension", a.dim(), limits.module_dim)?;
    let raw = chop_raw(a.prime(), a.dim(), a.generator_matrices(), rng, limits.chop_retries)?;
    let mut out: Vec<(FpModule, usize)> = Vec::new();
    for (d, gens) in raw {
        let m = if gens.is_empty() {
            FpModule::with_dim(a.group(), a.prime(), d, gens)?
        } else {
            FpModule::new(a.group(), a.prime(), gens)?
        };
        match out.iter_mut().find(|(s, _)| simple_isomorphic(s, &m)) {
            Some((_, c)) => *c += 1,
            None => out.push((m, 1)),
        }
    }
    Ok(out)
}

/// For simple modules of equal dimension, a nonzero homomorphism is an isomorphism.
pub fn simple_isomorphic(a: &FpModule, b: &FpModule) -> bool {
    a.dim() == b.dim() && hom_dim(a, b).map(|h| h > 0).unwrap_or(false)
}

pub fn is_simple(a: &FpModule) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(CHOP_SEED);
    Ok(a.dim() > 0 && find_submodule(a.prime(), a.dim(), a.generator_matrices(), &mut rng, Limits::default().chop_retries)?.is_none())
}

/// All simple F_ℓ[G]-modules up to isomorphism, from the regular module,
/// sorted by dimension.
pub fn simple_modules(g: &FiniteGroup, prime: u32, limits: &Limits) -> Result<Vec<FpModule>> {
    limits.check_order("regular module dimension", g.order(), limits.module_dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHOP_SEED ^ prime as u64);
    let reg = FpModule::regular(g, prime);
    let mut out: Vec<FpModule> = composition_factors_with(&reg, &mut rng, limits)?.into_iter().map(|(m, _)| m).collect();
    // Trivial module first, then by dimension; stable otherwise.
    out.sort_by_key(|m| (m.dim(), !m.is_trivial_action()));
    Ok(out)
}

/// An isomorphism a → b found among random elements of Hom_G(a, b), if any.
pub fn isomorphism(a: &FpModule, b: &FpModule) -> Option<Matrix> {
    if a.check_compatible(b).is_err() || a.dim() != b.dim() {
        return None;
    }
    let basis = hom_basis(a, b);
    if basis.is_empty() {
        return if a.dim() == 0 { Some(Matrix::zero(a.prime(), 0, 0)) } else { None };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CHOP_SEED);
    let p = a.prime();
    for t in 0..96 {
        let mut x = Matrix::zero(p, b.dim(), a.dim());
        if t < basis.len() {
            x = basis[t].clone();
        } else {
            for m in &basis {
                x = x.lincomb(1, m, rng.gen_range(0..p));
            }
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

/// A basis of Hom_G(a, b) as db×da matrices.
pub fn hom_basis(a: &FpModule, b: &FpModule) -> Vec<Matrix> {
    let (da, db, p) = (a.dim(), b.dim(), a.prime());
    let unknowns = da * db;
    if unknowns == 0 {
        return vec![];
    }
    let gens = a.generator_matrices().len();
    let mut sys = Matrix::zero(p, gens * unknowns, unknowns);
    let mut r = 0;
    for (ma, mb) in a.generator_matrices().iter().zip(b.generator_matrices()) {
        for i in 0..db {
            for j in 0..da {
                for k in 0..da {
                    let c = ma.get(k, j);
                    let col = i * da + k;
                    sys.set(r, col, sys.get(r, col) + c);
                }
                for k in 0..db {
                    let c = mb.get(i, k);
                    let col = k * da + j;
                    sys.set(r, col, sys.get(r, col) + p - c);
                }
                r += 1;
            }
        }
    }
    sys.nullspace().into_iter().map(|v| Matrix::from_vecs(p, db, da, v)).collect()
}

/// Rank of the span of `vectors`.
pub fn span_dim(p: u32, dim: usize, vectors: &[Vec<u8>]) -> usize {
    let mut red = RowReducer::new(p, dim);
    vectors.iter().filter(|v| red.push_u8(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;
    use crate::flmod::module::endomorphism_dim;

    #[test]
    fn simple_modules_small() {
        let l = Limits::default();
        assert_eq!(simple_modules(&cyclic(2), 3, &l).unwrap().len(), 2);
        let s = simple_modules(&cyclic(3), 2, &l).unwrap();
        assert_eq!(s.iter().map(|m| m.dim()).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(endomorphism_dim(&s[1]), 2);
        assert_eq!(simple_modules(&cyclic(5), 5, &l).unwrap().len(), 1);
        let s3 = simple_modules(&symmetric(3), 5, &l).unwrap();
        assert_eq!(s3.iter().map(|m| m.dim()).collect::<Vec<_>>(), vec![1, 1, 2]);
    }

    #[test]
    fn regular_p_group_is_unipotent() {
        let f = composition_factors(&FpModule::regular(&cyclic(3), 3)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 3);
        assert!(f[0].0.is_trivial_action());
    }

    #[test]
    fn a5_over_two() {
        let l = Limits::default();
        // The two 2-dimensional F_4-modules form one 4-dimensional F_2-module with End = F_4.
        let s = simple_modules(&alternating(5), 2, &l).unwrap();
        let mut dims: Vec<(usize, usize)> = s.iter().map(|m| (m.dim(), endomorphism_dim(m))).collect();
        dims.sort();
        assert_eq!(dims, vec![(1, 1), (4, 1), (4, 2)]);
    }
}
