use std::fmt;
use std::sync::Arc;

use super::fp::{is_prime, Matrix, RowReducer};
use crate::bitset::ElemSet;
use crate::group::{FiniteGroup, GroupHom};
use crate::{Error, Result};

/// A finite F_ℓ[G]-module: one invertible matrix per generator of `G`,
/// acting on column vectors.
#[derive(Clone)]
pub struct FpModule {
    inner: Arc<ModuleData>,
}

struct ModuleData {
    prime: u32,
    dim: usize,
    group: FiniteGroup,
    gens: Vec<Matrix>,
    elems: Vec<Matrix>,
}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FpModule")
            .field("prime", &self.inner.prime)
            .field("dim", &self.inner.dim)
            .field("group", &self.inner.group)
            .field("gens", &self.inner.gens)
            .finish()
    }
}

impl FpModule {
    /// Validates the generator matrices against every relation of the group.
    pub fn new(group: &FiniteGroup, prime: u32, gens: Vec<Matrix>) -> Result<Self> {
        if !is_prime(prime as u64) || prime >= 256 {
            return Err(Error::InvalidModule(format!("{prime} is not a prime below 256")));
        }
        if gens.len() != group.generators().len() {
            return Err(Error::InvalidModule(format!("{} matrices for {} generators", gens.len(), group.generators().len())));
        }
        let dim = gens.first().map_or(0, |m| m.rows());
        for (i, m) in gens.iter().enumerate() {
            if m.prime() != prime || m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!("matrix {i} is not {dim}×{dim} over F_{prime}")));
            }
            if !m.is_invertible() {
                return Err(Error::InvalidModule(format!("matrix {i} is singular")));
            }
        }
        let elems = expand(group, prime, dim, &gens)
            .ok_or_else(|| Error::InvalidModule("matrices violate a relation of the group".into()))?;
        Ok(Self::assemble(group, prime, dim, gens, elems))
    }

    /// Module of dimension `dim` (needed when the group has no generators).
    pub fn with_dim(group: &FiniteGroup, prime: u32, dim: usize, gens: Vec<Matrix>) -> Result<Self> {
        if gens.is_empty() {
            if !is_prime(prime as u64) || prime >= 256 {
                return Err(Error::InvalidModule(format!("{prime} is not a prime below 256")));
            }
            if group.order() != 1 {
                return Err(Error::InvalidModule("generator matrices missing".into()));
            }
            return Ok(Self::assemble(group, prime, dim, vec![], vec![Matrix::identity(prime, dim)]));
        }
        if gens[0].rows() != dim {
            return Err(Error::InvalidModule(format!("matrices are not of dimension {dim}")));
        }
        Self::new(group, prime, gens)
    }

    pub(crate) fn trusted(group: &FiniteGroup, prime: u32, dim: usize, gens: Vec<Matrix>) -> Self {
        let elems = expand(group, prime, dim, &gens).expect("trusted module is consistent");
        Self::assemble(group, prime, dim, gens, elems)
    }

    fn assemble(group: &FiniteGroup, prime: u32, dim: usize, gens: Vec<Matrix>, elems: Vec<Matrix>) -> Self {
        FpModule { inner: Arc::new(ModuleData { prime, dim, group: group.clone(), gens, elems }) }
    }

    pub fn trivial(group: &FiniteGroup, prime: u32, dim: usize) -> Self {
        let gens = vec![Matrix::identity(prime, dim); group.generators().len()];
        Self::trusted(group, prime, dim, gens)
    }

    /// One-dimensional module where generator `i` acts by the scalar `values[i]`.
    pub fn character(group: &FiniteGroup, prime: u32, values: &[u32]) -> Result<Self> {
        let gens = values.iter().map(|&v| Matrix::scalar(prime, 1, v)).collect();
        Self::with_dim(group, prime, 1, gens)
    }

    /// Permutation module on the points of a right-free action: `perms[i]` is
    /// the permutation of generator `i` of `group`, sending e_x to e_{perms[i][x]}.
    pub fn permutation(group: &FiniteGroup, prime: u32, perms: &[Vec<usize>]) -> Result<Self> {
        let n = perms.first().map_or(1, |p| p.len());
        let gens = perms
            .iter()
            .map(|perm| {
                let mut m = Matrix::zero(prime, n, n);
                for (x, &y) in perm.iter().enumerate() {
                    m.set(y, x, 1);
                }
                m
            })
            .collect();
        Self::with_dim(group, prime, n, gens)
    }

    /// The regular module F_ℓ[G] with basis indexed by elements, g·e_x = e_{gx}.
    pub fn regular(group: &FiniteGroup, prime: u32) -> Self {
        let n = group.order();
        let gens = group
            .generators()
            .iter()
            .map(|&s| {
                let mut m = Matrix::zero(prime, n, n);
                for x in group.elements() {
                    m.set(group.mul(s, x), x, 1);
                }
                m
            })
            .collect();
        Self::trusted(group, prime, n, gens)
    }

    #[inline]
    pub fn prime(&self) -> u32 {
        self.inner.prime
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.inner.group
    }

    pub fn generator_matrices(&self) -> &[Matrix] {
        &self.inner.gens
    }

    /// The matrix of element `x`.
    pub fn matrix(&self, x: usize) -> &Matrix {
        &self.inner.elems[x]
    }

    /// |A| as a power of ℓ, returned as the exponent.
    pub fn order_log(&self) -> usize {
        self.dim()
    }

    pub fn is_trivial_action(&self) -> bool {
        self.inner.gens.iter().all(|m| m.is_identity())
    }

    /// Kernel of the action as a set of group elements.
    pub fn kernel(&self) -> ElemSet {
        ElemSet::from_indices(self.group().order(), self.group().elements().filter(|&x| self.matrix(x).is_identity()))
    }

    /// The module restricted along a homomorphism into the acting group.
    pub fn pullback(&self, hom: &GroupHom) -> Result<FpModule> {
        if !hom.target().same_table(self.group()) {
            return Err(Error::InvalidHom("homomorphism target is not the acting group".into()));
        }
        let src = hom.source();
        let gens = src.generators().iter().map(|&s| self.matrix(hom.apply(s)).clone()).collect();
        let elems = src.elements().map(|x| self.matrix(hom.apply(x)).clone()).collect();
        Ok(Self::assemble(src, self.prime(), self.dim(), gens, elems))
    }

    /// Contragredient module: g acts by the inverse transpose.
    pub fn dual(&self) -> FpModule {
        let g = self.group();
        let gens = g.generators().iter().map(|&s| self.matrix(g.inv(s)).transpose()).collect();
        let elems = g.elements().map(|x| self.matrix(g.inv(x)).transpose()).collect();
        Self::assemble(g, self.prime(), self.dim(), gens, elems)
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        self.check_compatible(other)?;
        let (a, b) = (self.dim(), other.dim());
        let p = self.prime();
        let block = |x: &Matrix, y: &Matrix| {
            let mut m = Matrix::zero(p, a + b, a + b);
            for i in 0..a {
                for j in 0..a {
                    m.set(i, j, x.get(i, j));
                }
            }
            for i in 0..b {
                for j in 0..b {
                    m.set(a + i, a + j, y.get(i, j));
                }
            }
            m
        };
        let g = self.group();
        let gens = self.inner.gens.iter().zip(&other.inner.gens).map(|(x, y)| block(x, y)).collect();
        let elems = g.elements().map(|x| block(self.matrix(x), other.matrix(x))).collect();
        Ok(Self::assemble(g, p, a + b, gens, elems))
    }

    pub fn power(&self, n: usize) -> FpModule {
        let p = self.prime();
        let g = self.group();
        let z = Matrix::zero(p, 0, 0);
        let zero = Self::assemble(g, p, 0, vec![z.clone(); g.generators().len()], vec![z; g.order()]);
        (0..n).fold(zero, |m, _| m.direct_sum(self).expect("same group"))
    }

    pub(crate) fn check_compatible(&self, other: &FpModule) -> Result<()> {
        if self.prime() != other.prime() {
            return Err(Error::InvalidModule("modules over different primes".into()));
        }
        if !self.group().same_table(other.group()) || self.group().generators() != other.group().generators() {
            return Err(Error::InvalidModule("modules over different groups".into()));
        }
        Ok(())
    }

    /// Basis of the vectors fixed by every element of `subgroup`.
    pub fn invariant_subspace(&self, subgroup: &ElemSet) -> Vec<Vec<u8>> {
        let gens = self.group().small_generating_set(subgroup);
        self.fixed_by(&gens)
    }

    /// Basis of the common fixed space of the listed elements.
    pub fn fixed_by(&self, elems: &[usize]) -> Vec<Vec<u8>> {
        let d = self.dim();
        let p = self.prime();
        if elems.is_empty() {
            return (0..d).map(|i| unit(d, i)).collect();
        }
        let id = Matrix::identity(p, d);
        let parts: Vec<Matrix> = elems.iter().map(|&x| self.matrix(x).sub(&id)).collect();
        Matrix::vstack(p, d, &parts).nullspace()
    }

    pub fn invariant_dim(&self, subgroup: &ElemSet) -> usize {
        self.invariant_subspace(subgroup).len()
    }

    /// dim A^G.
    pub fn h0_dim(&self) -> usize {
        self.fixed_by(self.group().generators()).len()
    }

    /// ξ: dim A^{Γ-part} − dim A^{full}.
    pub fn xi(&self, gamma_part: &ElemSet, full: &ElemSet) -> Result<usize> {
        if !gamma_part.is_subset(full) {
            return Err(Error::Precondition("Γ part is not contained in the full acting subgroup".into()));
        }
        Ok(self.invariant_dim(gamma_part) - self.invariant_dim(full))
    }

    /// ℓ^(dim A − dim A^Γ).
    pub fn y_size(&self, gamma: &ElemSet) -> u128 {
        let e = self.dim() - self.invariant_dim(gamma);
        (self.prime() as u128).pow(e as u32)
    }

    /// The smallest submodule containing `vectors`, as a reduced echelon basis.
    pub fn spin(&self, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
        spin(self.prime(), self.dim(), &self.inner.gens, vectors)
    }

    /// Checks that two modules are isomorphic.
    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        if self.check_compatible(other).is_err() || self.dim() != other.dim() {
            return false;
        }
        super::meataxe::isomorphism(self, other).is_some()
    }
}

fn unit(d: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; d];
    v[i] = 1;
    v
}

/// Expands generator matrices to every element, or `None` on inconsistency.
fn expand(group: &FiniteGroup, prime: u32, dim: usize, gens: &[Matrix]) -> Option<Vec<Matrix>> {
    let n = group.order();
    let mut elems: Vec<Option<Matrix>> = vec![None; n];
    elems[group.identity()] = Some(Matrix::identity(prime, dim));
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, m) in group.generators().iter().zip(gens) {
            let y = group.mul(x, s);
            let prod = elems[x].as_ref().unwrap().mul(m);
            match &elems[y] {
                Some(e) => {
                    if *e != prod {
                        return None;
                    }
                }
                None => {
                    elems[y] = Some(prod);
                    queue.push(y);
                }
            }
        }
    }
    elems.into_iter().collect()
}

/// Spins `vectors` under `gens`; returns a reduced echelon basis of the span.
pub(crate) fn spin(p: u32, dim: usize, gens: &[Matrix], vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut red = RowReducer::new(p, dim);
    let mut basis: Vec<Vec<u8>> = Vec::new();
    for v in vectors {
        if red.push_u8(v) {
            basis.push(v.clone());
        }
    }
    let mut i = 0;
    while i < basis.len() && basis.len() < dim {
        let v = basis[i].clone();
        i += 1;
        for m in gens {
            let w = m.mul_vec(&v);
            if red.push_u8(&w) {
                basis.push(w);
                if basis.len() == dim {
                    break;
                }
            }
        }
    }
    echelon(p, dim, &basis)
}

/// Reduced echelon basis of the span of `vectors`.
pub(crate) fn echelon(p: u32, dim: usize, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    if vectors.is_empty() {
        return vec![];
    }
    let data: Vec<u8> = vectors.iter().flatten().copied().collect();
    let mut m = Matrix::from_vecs(p, vectors.len(), dim, data);
    let r = m.rref().len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Dimension of Hom_G(a, b): matrices X with X·ρ_a(s) = ρ_b(s)·X for every generator s.
pub fn hom_dim(a: &FpModule, b: &FpModule) -> Result<usize> {
    a.check_compatible(b)?;
    Ok(hom_dim_raw(a.prime(), a.dim(), b.dim(), a.generator_matrices(), b.generator_matrices()))
}

pub(crate) fn hom_dim_raw(p: u32, da: usize, db: usize, ga: &[Matrix], gb: &[Matrix]) -> usize {
    let unknowns = da * db;
    if unknowns == 0 {
        return 0;
    }
    let mut red = RowReducer::new(p, unknowns);
    let mut row: Vec<(usize, u32)> = Vec::with_capacity(da + db);
    for (ma, mb) in ga.iter().zip(gb) {
        for i in 0..db {
            for j in 0..da {
                row.clear();
                for k in 0..da {
                    let c = ma.get(k, j);
                    if c != 0 {
                        row.push((i * da + k, c));
                    }
                }
                for k in 0..db {
                    let c = mb.get(i, k);
                    if c != 0 {
                        row.push((k * da + j, p - c));
                    }
                }
                red.push_sparse(&row);
                if red.rank() == unknowns {
                    return 0;
                }
            }
        }
    }
    red.nullity()
}

/// h_G(A) = dim End_G(A).
pub fn endomorphism_dim(a: &FpModule) -> usize {
    hom_dim(a, a).expect("module is compatible with itself")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::*;

    #[test]
    fn rejects_bad_relation() {
        let g = cyclic(3);
        // A matrix of order 2 cannot represent a generator of order 3.
        let m = Matrix::from_rows(5, &[vec![-1]]).unwrap();
        assert!(FpModule::new(&g, 5, vec![m]).is_err());
    }

    #[test]
    fn invariants_and_homs() {
        let g = cyclic(2);
        let sign = FpModule::character(&g, 3, &[2]).unwrap();
        let triv = FpModule::trivial(&g, 3, 1);
        let all = ElemSet::full(2);
        assert_eq!(sign.invariant_dim(&all), 0);
        assert_eq!(triv.invariant_dim(&all), 1);
        assert_eq!(hom_dim(&sign, &triv).unwrap(), 0);
        assert_eq!(hom_dim(&triv, &triv).unwrap(), 1);
        assert_eq!(FpModule::regular(&g, 3).h0_dim(), 1);
        assert_eq!(sign.y_size(&all), 3);
    }

    #[test]
    fn dual_of_dual() {
        let g = symmetric(3);
        let r = FpModule::regular(&g, 2);
        let dd = r.dual().dual();
        for x in g.elements() {
            assert_eq!(r.matrix(x), dd.matrix(x));
        }
    }
}
