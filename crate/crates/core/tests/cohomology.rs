use std::collections::HashSet;

use gammapres_core::cohom::{h1_dim, h2_dim};
use gammapres_core::group::catalog::*;
use gammapres_core::{FiniteGroup, FpModule, Limits};

/// Scalar action of each element on a 1-dimensional module.
fn scalars(a: &FpModule) -> Vec<u32> {
    a.group().elements().map(|x| a.matrix(x).get(0, 0)).collect()
}

fn log(mut x: usize, p: usize) -> usize {
    let mut k = 0;
    while x > 1 {
        assert_eq!(x % p, 0);
        x /= p;
        k += 1;
    }
    k
}

/// dim H¹ and dim H² of a 1-dimensional module by enumerating every cochain.
fn brute(g: &FiniteGroup, a: &FpModule) -> (usize, usize) {
    let p = a.prime() as usize;
    let n = g.order();
    let s = scalars(a);
    let act = |x: usize, v: usize| s[x] as usize * v % p;
    let digits = |mut code: usize, len: usize| {
        let mut out = vec![0usize; len];
        for d in out.iter_mut() {
            *d = code % p;
            code /= p;
        }
        out
    };
    let ones = p.pow(n as u32);
    let mut z1 = 0;
    let mut b2 = HashSet::new();
    for code in 0..ones {
        let phi = digits(code, n);
        let d: Vec<usize> = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                (act(x, phi[y]) + phi[x] + p - phi[g.mul(x, y)]) % p
            })
            .collect();
        if d.iter().all(|&v| v == 0) {
            z1 += 1;
        }
        b2.insert(d);
    }
    let b1: HashSet<Vec<usize>> = (0..p).map(|v| (0..n).map(|x| (act(x, v) + p - v) % p).collect()).collect();
    let mut z2 = 0;
    for code in 0..p.pow((n * n) as u32) {
        let f = digits(code, n * n);
        let ok = (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let lhs = act(x, f[y * n + z]) + f[x * n + g.mul(y, z)];
                    let rhs = f[g.mul(x, y) * n + z] + f[x * n + y];
                    lhs % p == rhs % p
                })
            })
        });
        if ok {
            z2 += 1;
        }
    }
    (log(z1, p) - log(b1.len(), p), log(z2, p) - log(b2.len(), p))
}

#[test]
fn solver_matches_cochain_enumeration() {
    let l = Limits::default();
    let cases: Vec<(FiniteGroup, u32, Vec<u32>)> = vec![
        (cyclic(2), 2, vec![1]),
        (cyclic(2), 3, vec![1]),
        (cyclic(2), 3, vec![2]),
        (cyclic(3), 3, vec![1]),
        (cyclic(3), 2, vec![1]),
        (cyclic(4), 2, vec![1]),
        (elementary_abelian(2, 2), 2, vec![1, 1]),
    ];
    for (g, p, vals) in cases {
        let a = FpModule::character(&g, p, &vals).unwrap();
        let (h1, h2) = brute(&g, &a);
        assert_eq!(h1_dim(&a, &l).unwrap(), h1, "H1 of order {} over F_{p}", g.order());
        assert_eq!(h2_dim(&a, &l).unwrap(), h2, "H2 of order {} over F_{p}", g.order());
    }
}
