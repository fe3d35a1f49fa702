//! Degree-1 cohomology from a finite presentation by Fox calculus.
//!
//! This handles groups far too large for a multiplication table, such as
//! V ⋊ Γ with V a large F_ℓ[Γ]-module.

use serde::{Deserialize, Serialize};

use super::table::Tree;
use crate::flmod::{FpModule, Matrix, RowReducer};
use crate::group::FiniteGroup;
use crate::{Error, Result};

/// Generators 1..=gens; a relator is a word of nonzero letters, −i meaning the inverse of generator i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub gens: usize,
    pub relators: Vec<Vec<i32>>,
}

impl Presentation {
    /// Presentation on the group's generators with one relator per non-tree
    /// edge of a breadth-first Cayley tree.
    pub fn from_group(g: &FiniteGroup) -> Presentation {
        let tree = Tree::new(g);
        let n = g.order();
        let mut word: Vec<Vec<i32>> = vec![Vec::new(); n];
        for &y in &tree.order[1..] {
            let (x, j) = tree.parent[y];
            let mut w = word[x].clone();
            w.push(j as i32 + 1);
            word[y] = w;
        }
        let mut relators = Vec::new();
        for &x in &tree.order {
            for (j, &s) in tree.gens.iter().enumerate() {
                if tree.is_tree_edge(g, x, j) {
                    continue;
                }
                let y = g.mul(x, s);
                let mut r = word[x].clone();
                r.push(j as i32 + 1);
                r.extend(word[y].iter().rev().map(|&l| -l));
                relators.push(free_reduce(&r));
            }
        }
        relators.retain(|r| !r.is_empty());
        Presentation { gens: tree.gens.len(), relators }
    }

    /// Presentation of V ⋊ Γ for an F_ℓ[Γ]-module V: the generators of Γ
    /// (distinct, non-identity, as in [`Presentation::from_group`]) followed by a basis of V.
    pub fn semidirect_with_module(v: &FpModule) -> Presentation {
        let gamma = v.group();
        let base = Presentation::from_group(gamma);
        let k = base.gens as i32;
        let m = v.dim();
        let p = v.prime() as i32;
        let b = |i: usize| k + 1 + i as i32;
        let mut relators = base.relators.clone();
        for i in 0..m {
            relators.push(vec![b(i); p as usize]);
            for j in i + 1..m {
                relators.push(vec![b(i), b(j), -b(i), -b(j)]);
            }
        }
        let tree = Tree::new(gamma);
        for (si, &s) in tree.gens.iter().enumerate() {
            let ms = v.matrix(s);
            for i in 0..m {
                // s b_i s⁻¹ = ∏_j b_j^{M_s[j][i]}.
                let mut r = vec![si as i32 + 1, b(i), -(si as i32 + 1)];
                for j in (0..m).rev() {
                    for _ in 0..ms.get(j, i) {
                        r.push(-b(j));
                    }
                }
                relators.push(r);
            }
        }
        Presentation { gens: base.gens + m, relators }
    }
}

fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// (dim Z¹, dim B¹) for the presented group acting through `mats` (one per generator).
pub fn h1_from_presentation(pres: &Presentation, p: u32, d: usize, mats: &[Matrix]) -> Result<(usize, usize)> {
    if mats.len() != pres.gens {
        return Err(Error::InvalidModule(format!("{} matrices for {} generators", mats.len(), pres.gens)));
    }
    let invs: Vec<Matrix> = mats
        .iter()
        .map(|m| m.inverse().ok_or_else(|| Error::InvalidModule("singular generator matrix".into())))
        .collect::<Result<_>>()?;
    let cols = pres.gens * d;
    let mut red = RowReducer::new(p, cols);
    let mut form = vec![0u32; d * cols];
    for r in &pres.relators {
        form.iter_mut().for_each(|x| *x = 0);
        let mut mu = Matrix::identity(p, d);
        for &l in r {
            let s = l.unsigned_abs() as usize - 1;
            if s >= pres.gens {
                return Err(Error::InvalidData(format!("relator letter {l} out of range")));
            }
            if l > 0 {
                super::table::add_block(&mut form, cols, &mu, s * d, 1, p);
                mu = mu.mul(&mats[s]);
            } else {
                mu = mu.mul(&invs[s]);
                super::table::add_block(&mut form, cols, &mu, s * d, p - 1, p);
            }
        }
        if !mu.is_identity() {
            return Err(Error::InvalidModule("a relator acts nontrivially".into()));
        }
        if !super::table::push_form(&mut red, &form, cols, d) {
            break;
        }
    }
    let id = Matrix::identity(p, d);
    let fixed = if mats.is_empty() {
        d
    } else {
        let parts: Vec<Matrix> = mats.iter().map(|m| m.sub(&id)).collect();
        Matrix::vstack(p, d, &parts).nullspace().len()
    };
    Ok((red.nullity(), d - fixed))
}

/// dim H¹ of the presented group.
pub fn h1_dim_presented(pres: &Presentation, p: u32, d: usize, mats: &[Matrix]) -> Result<usize> {
    let (z, b) = h1_from_presentation(pres, p, d, mats)?;
    Ok(z - b)
}

/// dim H¹(V ⋊ Γ, A) where V acts trivially on the F_ℓ[Γ]-module A.
pub fn h1_semidirect_trivial_on_v(v: &FpModule, a: &FpModule) -> Result<usize> {
    if v.prime() != a.prime() || !v.group().same_table(a.group()) {
        return Err(Error::InvalidModule("V and A must be modules over the same Γ and prime".into()));
    }
    let pres = Presentation::semidirect_with_module(v);
    let tree = Tree::new(a.group());
    let mut mats: Vec<Matrix> = tree.gens.iter().map(|&s| a.matrix(s).clone()).collect();
    mats.extend(std::iter::repeat(Matrix::identity(a.prime(), a.dim())).take(v.dim()));
    h1_dim_presented(&pres, a.prime(), a.dim(), &mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::table::h1_dim;
    use crate::group::catalog::*;
    use crate::Limits;

    #[test]
    fn agrees_with_table() {
        let g = symmetric(3);
        let pres = Presentation::from_group(&g);
        for a in crate::flmod::simple_modules(&g, 3, &Limits::default()).unwrap() {
            let tree = Tree::new(&g);
            let mats: Vec<Matrix> = tree.gens.iter().map(|&s| a.matrix(s).clone()).collect();
            let fox = h1_dim_presented(&pres, 3, a.dim(), &mats).unwrap();
            assert_eq!(fox, h1_dim(&a, &Limits::default()).unwrap());
        }
    }

    #[test]
    fn regular_module_semidirect() {
        // H¹(F_3[Z/2] ⋊ Z/2, sign) = dim sign = 1.
        let gamma = cyclic(2);
        let v = FpModule::regular(&gamma, 3);
        let sign = FpModule::character(&gamma, 3, &[2]).unwrap();
        assert_eq!(h1_semidirect_trivial_on_v(&v, &sign).unwrap(), 1);
    }
}
