//! Finite abelian stand-ins for free Γ-groups: F_ℓ[Γ]ⁿ, the augmentation
//! ideal Jⁿ, and modules viewed as elementary abelian Γ-groups.

use crate::flmod::{meataxe::split_action, FpModule, Matrix};
use crate::group::{FiniteGroup, GammaGroup};
use crate::{Error, Limits, Result};

/// F_ℓ[Γ]ⁿ as a Γ-module.
pub fn group_algebra_power(gamma: &FiniteGroup, p: u32, n: usize) -> FpModule {
    FpModule::regular(gamma, p).power(n)
}

/// The augmentation ideal J of F_ℓ[Γ], with basis e_γ − e_1 for γ ≠ 1.
pub fn augmentation_ideal(gamma: &FiniteGroup, p: u32) -> FpModule {
    let e = gamma.identity();
    let others: Vec<usize> = gamma.elements().filter(|&x| x != e).collect();
    let d = others.len();
    let mut pos = vec![usize::MAX; gamma.order()];
    for (i, &x) in others.iter().enumerate() {
        pos[x] = i;
    }
    let gens = gamma
        .generators()
        .iter()
        .map(|&s| {
            // s·(e_x − e_1) = (e_{sx} − e_1) − (e_s − e_1)
            let mut m = Matrix::zero(p, d, d);
            for (col, &x) in others.iter().enumerate() {
                let sx = gamma.mul(s, x);
                if sx != e {
                    m.set(pos[sx], col, (m.get(pos[sx], col) + 1) % p);
                }
                if s != e {
                    let r = pos[s];
                    m.set(r, col, (m.get(r, col) + p - 1) % p);
                }
            }
            m
        })
        .collect();
    FpModule::with_dim(gamma, p, d, gens).expect("augmentation ideal is a submodule")
}

/// Jⁿ as a Γ-module.
pub fn augmentation_power(gamma: &FiniteGroup, p: u32, n: usize) -> FpModule {
    augmentation_ideal(gamma, p).power(n)
}

/// Index of a vector in the elementary abelian group on F_ℓ^d (little-endian digits).
pub fn encode(p: u32, v: &[u8]) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * p as usize + c as usize)
}

pub fn decode(p: u32, d: usize, mut x: usize) -> Vec<u8> {
    let mut v = vec![0u8; d];
    for c in v.iter_mut() {
        *c = (x % p as usize) as u8;
        x /= p as usize;
    }
    v
}

/// The underlying additive group of a Γ-module, with Γ acting linearly.
pub fn module_as_gamma_group(v: &FpModule, limits: &Limits) -> Result<GammaGroup> {
    let p = v.prime();
    let d = v.dim();
    let order = (p as u128).pow(d as u32);
    if order > limits.group_order as u128 {
        return Err(Error::Capacity { what: "module order", size: order, cap: limits.group_order as u128 });
    }
    let n = order as usize;
    let vecs: Vec<Vec<u8>> = (0..n).map(|x| decode(p, d, x)).collect();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let s: Vec<u8> = vecs[a].iter().zip(&vecs[b]).map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8).collect();
            table[a * n + b] = encode(p, &s) as u32;
        }
    }
    let gens = (0..d).map(|i| (p as usize).pow(i as u32)).collect();
    let g = FiniteGroup::from_trusted(None, n, table, gens);
    let gamma = v.group().clone();
    let action = gamma
        .elements()
        .map(|t| {
            let m = v.matrix(t);
            vecs.iter().map(|x| encode(p, &m.mul_vec(x)) as u32).collect()
        })
        .collect();
    Ok(GammaGroup::trusted(g, gamma, action))
}

/// Quotient of `f` by the submodule spanned (after spinning) by `vectors`,
/// with the projection matrix (quotient dim × dim f).
pub fn quotient_by_submodule(f: &FpModule, vectors: &[Vec<u8>]) -> Result<(FpModule, Matrix)> {
    let p = f.prime();
    let d = f.dim();
    let basis = f.spin(vectors);
    let (_, qgens) = split_action(p, d, f.generator_matrices(), &basis);
    let q = FpModule::with_dim(f.group(), p, d - basis.len(), qgens)?;
    let mut is_pivot = vec![false; d];
    for v in &basis {
        is_pivot[v.iter().position(|&x| x != 0).unwrap()] = true;
    }
    let free: Vec<usize> = (0..d).filter(|&c| !is_pivot[c]).collect();
    // reduce each unit vector modulo the submodule and read the free coordinates
    let mut map = Matrix::zero(p, free.len(), d);
    for j in 0..d {
        let mut v = vec![0u8; d];
        v[j] = 1;
        for b in &basis {
            let c = b.iter().position(|&x| x != 0).unwrap();
            let coef = v[c] as u32;
            if coef != 0 {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = ((*vi as u32 + (p - coef) * bi as u32) % p) as u8;
                }
            }
        }
        for (r, &c) in free.iter().enumerate() {
            map.set(r, j, v[c] as u32);
        }
    }
    Ok((q, map))
}

/// Checks that `map` is a surjective Γ-map from `f` onto `target`.
pub fn check_module_surjection(f: &FpModule, target: &FpModule, map: &Matrix) -> Result<()> {
    f.check_compatible(target)?;
    if map.rows() != target.dim() || map.cols() != f.dim() {
        return Err(Error::InvalidHom("projection has the wrong shape".into()));
    }
    for (mf, mt) in f.generator_matrices().iter().zip(target.generator_matrices()) {
        if map.mul(mf) != mt.mul(map) {
            return Err(Error::InvalidHom("projection is not equivariant".into()));
        }
    }
    if map.rank() != target.dim() {
        return Err(Error::InvalidHom("projection is not surjective".into()));
    }
    Ok(())
}
