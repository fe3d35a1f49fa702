//! Univariate polynomials over F_p, characteristic polynomials and factoring.

use rand::Rng;

use super::fp::{inv_mod, Matrix};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { p, c }
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, c: vec![] }
    }

    pub fn one(p: u32) -> Self {
        Poly { p, c: vec![1] }
    }

    pub fn x(p: u32) -> Self {
        Poly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        Poly::new(self.p, self.c.iter().map(|&x| x * inv % self.p).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)).collect();
        Poly::new(self.p, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.c.get(i).unwrap_or(&0) + p - o.c.get(i).unwrap_or(&0)).collect();
        Poly::new(p, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::new(self.p, c.into_iter().map(|x| x as u32).collect())
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return (Poly::zero(p), self.clone());
        }
        let dl = d.c.len();
        let inv = inv_mod(d.lead(), p);
        let mut q = vec![0u32; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let coef = r[i + dl - 1] * inv % p;
            q[i] = coef;
            if coef != 0 {
                for j in 0..dl {
                    r[i + j] = (r[i + j] + (p - coef) * d.c[j]) % p;
                }
            }
        }
        (Poly::new(p, q), Poly::new(p, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut r = Poly::one(self.p).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        r
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut r = Matrix::zero(self.p, n, n);
        for &coef in self.c.iter().rev() {
            r = r.mul(a).add(&Matrix::scalar(self.p, n, coef));
        }
        r
    }
}

/// Characteristic polynomial det(xI − A) via reduction to Hessenberg form.
pub fn char_poly(a: &Matrix) -> Poly {
    let p = a.prime();
    let n = a.rows();
    let mut h: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let sub = |x: u32, y: u32| (x + p - y) % p;
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p);
        for i in m + 1..n {
            let u = h[i][m - 1] * inv % p;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = sub(h[i][j], u * h[m][j] % p);
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p;
            }
        }
    }
    // Recurrence over leading principal submatrices of the Hessenberg form.
    let mut polys: Vec<Poly> = vec![Poly::one(p)];
    for m in 1..=n {
        let xm = Poly::new(p, vec![(p - h[m - 1][m - 1]) % p, 1]);
        let mut pm = xm.mul(&polys[m - 1]);
        let mut t = 1u32;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % p;
            let coef = t * h[m - i - 1][m - 1] % p;
            if coef != 0 {
                pm = pm.sub(&polys[m - i - 1].mul(&Poly::new(p, vec![coef])));
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

/// The distinct monic irreducible factors of `f`, sorted by degree then coefficients.
pub fn irreducible_factors<R: Rng>(f: &Poly, rng: &mut R) -> Vec<Poly> {
    let p = f.p;
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let x = Poly::x(p);
    let mut rest = f.clone();
    let mut frob = x.clone();
    let mut e = 0;
    while rest.degree() > 0 {
        e += 1;
        if 2 * e > rest.degree() {
            // What is left has a single irreducible factor, possibly repeated.
            let sq = squarefree_single(&rest);
            out.push(sq);
            break;
        }
        frob = frob.powmod(p as u64, &f);
        let g = rest.gcd(&frob.rem(&rest).sub(&x));
        if g.degree() == 0 {
            continue;
        }
        while rest.degree() > 0 {
            let gg = rest.gcd(&g);
            if gg.degree() == 0 {
                break;
            }
            rest = rest.divrem(&gg).0;
        }
        equal_degree_split(&g, e, rng, &mut out);
    }
    out.sort_by(|a, b| (a.degree(), &a.c).cmp(&(b.degree(), &b.c)));
    out
}

/// The radical of a power of one irreducible polynomial.
fn squarefree_single(f: &Poly) -> Poly {
    let p = f.p;
    let d = derivative(f);
    if d.is_zero() {
        // f = g(x^p) = g̃(x)^p with g̃ the coefficientwise p-th root; over F_p that is the identity.
        let c: Vec<u32> = f.c.iter().step_by(p as usize).copied().collect();
        return squarefree_single(&Poly::new(p, c));
    }
    let g = f.gcd(&d);
    if g.degree() == 0 {
        f.monic()
    } else {
        squarefree_single(&f.divrem(&g).0)
    }
}

fn derivative(f: &Poly) -> Poly {
    let p = f.p;
    let c = f.c.iter().enumerate().skip(1).map(|(i, &a)| (i as u32 % p) * a % p).collect();
    Poly::new(p, c)
}

fn equal_degree_split<R: Rng>(g: &Poly, e: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let p = g.p;
    if g.degree() == e {
        out.push(g.monic());
        return;
    }
    loop {
        let a = Poly::new(p, (0..g.degree()).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a² + … + a^{2^{e−1}}.
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..e {
                t = t.mulmod(&t, g);
                s = s.add(&t);
            }
            s
        } else {
            // a^{(p^e−1)/2} = (a·a^p·…·a^{p^{e−1}})^{(p−1)/2}.
            let mut t = a.rem(g);
            let mut prod = t.clone();
            for _ in 1..e {
                t = t.powmod(p as u64, g);
                prod = prod.mulmod(&t, g);
            }
            prod.powmod(((p - 1) / 2) as u64, g).sub(&Poly::one(p))
        };
        let d = g.gcd(&b);
        if d.degree() > 0 && d.degree() < g.degree() {
            let (q, _) = g.divrem(&d);
            equal_degree_split(&d, e, rng, out);
            equal_degree_split(&q.monic(), e, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn char_poly_companion() {
        // Companion matrix of x³ + 2x + 1 over F_5.
        let m = Matrix::from_rows(5, &[vec![0, 0, -1], vec![1, 0, -2], vec![0, 1, 0]]).unwrap();
        assert_eq!(char_poly(&m), Poly::new(5, vec![1, 2, 0, 1]));
        assert!(char_poly(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn factors_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x+1)² (x²+1) (x³+x+1) over F_2; since x²+1 = (x+1)², the distinct factors are x+1 and x³+x+1.
        let f = Poly::new(2, vec![1, 1]).mul(&Poly::new(2, vec![1, 1])).mul(&Poly::new(2, vec![1, 0, 1])).mul(&Poly::new(2, vec![1, 1, 0, 1]));
        let fs = irreducible_factors(&f, &mut rng);
        assert_eq!(fs, vec![Poly::new(2, vec![1, 1]), Poly::new(2, vec![1, 1, 0, 1])]);
        // x⁴ − 1 over F_5 splits into four linear factors.
        let g = Poly::new(5, vec![4, 0, 0, 0, 1]);
        assert_eq!(irreducible_factors(&g, &mut rng).len(), 4);
        // x² + 1 over F_3 is irreducible; its square too.
        let h = Poly::new(3, vec![1, 0, 1]);
        assert_eq!(irreducible_factors(&h.mul(&h), &mut rng), vec![h]);
    }
}
