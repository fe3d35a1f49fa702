//! Standard small groups and Γ-groups.

use super::{FiniteGroup, GammaGroup};
use crate::{Error, Result};

const CATALOG_CAP: usize = 1 << 16;

pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_trusted(Some("1".into()), 1, vec![0], vec![])
}

/// Z/n with element `i` the residue `i` and generator 1.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group order must be positive");
    if n == 1 {
        return trivial();
    }
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u32;
        }
    }
    FiniteGroup::from_trusted(Some(format!("C{n}")), n, table, vec![1])
}

/// Z/n₁ × … × Z/n_k with mixed-radix element indices (last factor fastest).
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    let mut g = trivial();
    for &n in orders {
        g = g.direct_product(&cyclic(n));
    }
    let name = orders.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("x");
    if orders.is_empty() {
        g
    } else {
        g.renamed(name)
    }
}

/// (Z/p)^k, elements indexed by base-p digits.
pub fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    abelian(&vec![p; k])
}

/// The dihedral group of order 2n.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(Some(format!("D{}", 2 * n)), n, &[rot, refl], CATALOG_CAP).expect("dihedral group")
}

/// The symmetric group on n letters.
pub fn symmetric(n: usize) -> FiniteGroup {
    if n <= 1 {
        return trivial();
    }
    let mut cycle: Vec<usize> = (1..n).collect();
    cycle.push(0);
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let gens = if n == 2 { vec![swap] } else { vec![cycle, swap] };
    FiniteGroup::from_permutations(Some(format!("S{n}")), n, &gens, CATALOG_CAP).expect("symmetric group")
}

/// The alternating group on n ≥ 3 letters, generated by 3-cycles (0 1 k).
pub fn alternating(n: usize) -> FiniteGroup {
    if n < 3 {
        return trivial();
    }
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(Some(format!("A{n}")), n, &gens, CATALOG_CAP).expect("alternating group")
}

/// The quaternion group of order 8 as permutations of {±1, ±i, ±j, ±k}.
pub fn quaternion() -> FiniteGroup {
    dicyclic(2).renamed("Q8")
}

/// The dicyclic group of order 4n, ⟨a, x | a^{2n}, x² = aⁿ, x a x⁻¹ = a⁻¹⟩,
/// realised as a regular permutation group on pairs (i, e) ↦ aⁱxᵉ.
pub fn dicyclic(n: usize) -> FiniteGroup {
    let m = 2 * n;
    let idx = |i: usize, e: usize| e * m + (i % m);
    // Right multiplication by a: aⁱxᵉ·a = a^{i + (-1)^e} xᵉ.
    let ra: Vec<usize> = (0..2 * m)
        .map(|k| {
            let (e, i) = (k / m, k % m);
            if e == 0 { idx(i + 1, 0) } else { idx(i + m - 1, 1) }
        })
        .collect();
    // Right multiplication by x: aⁱ·x = aⁱx, aⁱx·x = a^{i+n}.
    let rx: Vec<usize> = (0..2 * m)
        .map(|k| {
            let (e, i) = (k / m, k % m);
            if e == 0 { idx(i, 1) } else { idx(i + n, 0) }
        })
        .collect();
    FiniteGroup::from_permutations(Some(format!("Dic{}", 4 * n)), 2 * m, &[ra, rx], CATALOG_CAP).expect("dicyclic group")
}

/// The Heisenberg group of upper unitriangular 3×3 matrices over Z/p.
pub fn heisenberg(p: usize) -> FiniteGroup {
    // (a, b, c)·(a', b', c') = (a + a', b + b', c + c' + a b').
    let n = p * p * p;
    let enc = |a: usize, b: usize, c: usize| (a % p) * p * p + (b % p) * p + (c % p);
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, b, c) = (x / (p * p), (x / p) % p, x % p);
        for y in 0..n {
            let (a2, b2, c2) = (y / (p * p), (y / p) % p, y % p);
            table[x * n + y] = enc(a + a2, b + b2, c + c2 + a * b2) as u32;
        }
    }
    FiniteGroup::from_trusted(Some(format!("Heis{p}")), n, table, vec![enc(1, 0, 0), enc(0, 1, 0)])
}

/// Z/n ⋊ Z/m where the generator of Z/m acts by multiplication by `r`
/// (requires rᵐ ≡ 1 mod n, gcd(r, n) = 1).
pub fn cyclic_semidirect(n: usize, m: usize, r: usize) -> Result<GammaGroup> {
    let mut pow = 1usize;
    let mut action = Vec::with_capacity(m);
    for _ in 0..m {
        action.push((0..n).map(|x| x * pow % n).collect::<Vec<usize>>());
        pow = pow * r % n;
    }
    if pow != 1 % n {
        return Err(Error::InvalidAction(format!("{r}^{m} is not 1 mod {n}")));
    }
    GammaGroup::new(cyclic(n), cyclic(m), action)
}

/// Z/n with Z/2 acting by inversion.
pub fn cyclic_with_inversion(n: usize) -> GammaGroup {
    cyclic_semidirect(n, 2, n - 1).expect("inversion is an involution")
}

/// An abelian group with Z/2 acting by inversion on every factor.
pub fn abelian_with_inversion(orders: &[usize]) -> GammaGroup {
    let g = abelian(orders);
    let inv: Vec<usize> = g.elements().map(|x| g.inv(x)).collect();
    let id: Vec<usize> = g.elements().collect();
    GammaGroup::new(g, cyclic(2), vec![id, inv]).expect("inversion is an automorphism of an abelian group")
}

/// Looks up a catalog group by name: `C6`, `S3`, `A4`, `D8`, `Q8`, `Dic12`, `Heis3`, `1`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidGroup(format!("unknown catalog group {name}")));
    let g = if name == "1" {
        trivial()
    } else if name == "Q8" {
        quaternion()
    } else if let Some(r) = name.strip_prefix("Dic") {
        dicyclic(num(r)? / 4)
    } else if let Some(r) = name.strip_prefix("Heis") {
        heisenberg(num(r)?)
    } else if let Some(r) = name.strip_prefix('C') {
        if r.contains('x') {
            let parts = r.split("xC").map(num).collect::<Result<Vec<_>>>()?;
            abelian(&parts)
        } else {
            cyclic(num(r)?)
        }
    } else if let Some(r) = name.strip_prefix('S') {
        symmetric(num(r)?)
    } else if let Some(r) = name.strip_prefix('A') {
        alternating(num(r)?)
    } else if let Some(r) = name.strip_prefix('D') {
        let k = num(r)?;
        if k % 2 != 0 || k < 4 {
            return Err(Error::InvalidGroup(format!("dihedral order {k} must be even and at least 4")));
        }
        dihedral(k / 2)
    } else {
        return Err(Error::InvalidGroup(format!("unknown catalog group {name}")));
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(cyclic(7).order(), 7);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(heisenberg(3).order(), 27);
        assert_eq!(abelian(&[2, 3]).order(), 6);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        assert_eq!(q.elements().filter(|&x| q.element_order(x) == 2).count(), 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("C2xC4").unwrap().order(), 8);
        assert_eq!(by_name("D10").unwrap().order(), 10);
        assert!(by_name("X9").is_err());
    }
}
