//! Dense matrices and row reduction over prime fields F_p with p < 256.

use std::fmt;

/// Multiplicative inverse modulo a prime.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a % p, p as u64 - 2, p)
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u64 % p as u64;
    let mut b = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    a = r as u32;
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense `rows × cols` matrix over F_p acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F{}>{:?}", self.p, self.to_rows())
    }
}

impl Matrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        assert!((2..256).contains(&p), "prime must be below 256");
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = (c % p) as u8;
        }
        m
    }

    /// Builds from rows of integers, reducing each entry mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return None;
        }
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = v.rem_euclid(p as i64) as u8;
            }
        }
        Some(m)
    }

    pub fn from_vecs(p: u32, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| (x as u32) < p));
        Matrix { p, rows, cols, data }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, dim: usize, cols: &[Vec<u8>]) -> Self {
        let mut m = Self::zero(p, dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..dim {
                m.data[i * cols.len() + j] = v[i];
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i64).collect()).collect()
    }

    #[inline]
    pub fn prime(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j] as u32
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = (v % self.p) as u8;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p, "prime mismatch");
        let p = self.p;
        let (n, m) = (self.rows, other.cols);
        let mut out = Matrix::zero(p, n, m);
        let mut acc = vec![0u32; m];
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u32;
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x += a * b as u32;
                }
            }
            for (j, &x) in acc.iter().enumerate() {
                out.data[i * m + j] = (x % p) as u8;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u32 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                (s % self.p) as u8
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.lincomb(1, other, 1)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.lincomb(1, other, self.p - 1)
    }

    /// a·self + b·other.
    pub fn lincomb(&self, a: u32, other: &Matrix, b: u32) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&x, &y)| ((a * x as u32 + b * y as u32) % p) as u8)
            .collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let p = self.p;
        Matrix { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| ((x as u32 * c) % p) as u8).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut r = Matrix::identity(self.p, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let (n, m) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(pr) = (r..n).find(|&i| self.data[i * m + c] != 0) else { continue };
            if pr != r {
                for j in 0..m {
                    self.data.swap(pr * m + j, r * m + j);
                }
            }
            let inv = inv_mod(self.data[r * m + c] as u32, p);
            for j in c..m {
                self.data[r * m + j] = ((self.data[r * m + j] as u32 * inv) % p) as u8;
            }
            for i in 0..n {
                if i == r {
                    continue;
                }
                let f = self.data[i * m + c] as u32;
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in c..m {
                    let v = self.data[i * m + j] as u32 + neg * self.data[r * m + j] as u32;
                    self.data[i * m + j] = (v % p) as u8;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.p == 2 {
            let mut red = RowReducer::new(2, self.cols);
            for i in 0..self.rows {
                red.push_u8(self.row(i));
            }
            return red.rank();
        }
        self.clone().rref().len()
    }

    /// Basis of the right kernel {v : M v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let p = self.p;
        let m = self.cols;
        let mut is_pivot = vec![false; m];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..m).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; m];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let x = a.data[r * m + free] as u32;
                v[c] = ((p - x) % p) as u8;
            }
            basis.push(v);
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.data[i * n + j];
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(self.p, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(p: u32, cols: usize, parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
        }
        Matrix { p, rows, cols, data }
    }
}

/// Incremental rank computation over F_p.
///
/// Rows are kept in semi-echelon form: each stored row is normalised to 1 at
/// its pivot column and is zero before it.
pub struct RowReducer {
    p: u32,
    cols: usize,
    inner: Backend,
}

enum Backend {
    Bytes { pivot_of: Vec<u32>, rows: Vec<Vec<u8>>, acc: Vec<u32> },
    Bits { pivot_of: Vec<u32>, rows: Vec<Vec<u64>>, buf: Vec<u64> },
}

const NONE: u32 = u32::MAX;

impl RowReducer {
    pub fn new(p: u32, cols: usize) -> Self {
        let inner = if p == 2 {
            Backend::Bits { pivot_of: vec![NONE; cols], rows: Vec::new(), buf: vec![0; cols.div_ceil(64)] }
        } else {
            Backend::Bytes { pivot_of: vec![NONE; cols], rows: Vec::new(), acc: vec![0; cols] }
        };
        RowReducer { p, cols, inner }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Backend::Bytes { rows, .. } => rows.len(),
            Backend::Bits { rows, .. } => rows.len(),
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn push_u8(&mut self, row: &[u8]) -> bool {
        self.push_with(|j| row[j] as u32)
    }

    /// Adds a row of arbitrary nonnegative integers; returns true if it raised the rank.
    pub fn push(&mut self, row: &[u32]) -> bool {
        self.push_with(|j| row[j])
    }

    /// Adds a sparse row given as (column, value) pairs; repeated columns accumulate.
    pub fn push_sparse(&mut self, entries: &[(usize, u32)]) -> bool {
        let p = self.p;
        match &mut self.inner {
            Backend::Bytes { acc, .. } => {
                acc.iter_mut().for_each(|x| *x = 0);
                for &(j, v) in entries {
                    acc[j] = (acc[j] + v % p) % p;
                }
            }
            Backend::Bits { buf, .. } => {
                buf.iter_mut().for_each(|x| *x = 0);
                for &(j, v) in entries {
                    if v % 2 == 1 {
                        buf[j / 64] ^= 1u64 << (j % 64);
                    }
                }
            }
        }
        self.reduce_loaded()
    }

    fn push_with(&mut self, f: impl Fn(usize) -> u32) -> bool {
        let p = self.p;
        let cols = self.cols;
        match &mut self.inner {
            Backend::Bytes { acc, .. } => {
                for (j, x) in acc.iter_mut().enumerate() {
                    *x = f(j) % p;
                }
            }
            Backend::Bits { buf, .. } => {
                buf.iter_mut().for_each(|x| *x = 0);
                for j in 0..cols {
                    if f(j) % 2 == 1 {
                        buf[j / 64] |= 1u64 << (j % 64);
                    }
                }
            }
        }
        self.reduce_loaded()
    }

    fn reduce_loaded(&mut self) -> bool {
        let p = self.p;
        let cols = self.cols;
        match &mut self.inner {
            Backend::Bytes { pivot_of, rows, acc } => {
                let step = (p - 1) * (p - 1);
                let limit = (u32::MAX - p) / step.max(1) - 1;
                let mut adds = 0u32;
                for j in 0..cols {
                    let c = acc[j] % p;
                    if c == 0 {
                        continue;
                    }
                    let r = pivot_of[j];
                    if r == NONE {
                        let inv = inv_mod(c, p);
                        let mut row = vec![0u8; cols];
                        for k in j..cols {
                            row[k] = ((acc[k] % p) * inv % p) as u8;
                        }
                        pivot_of[j] = rows.len() as u32;
                        rows.push(row);
                        return true;
                    }
                    if adds >= limit {
                        for x in acc[j..].iter_mut() {
                            *x %= p;
                        }
                        adds = 0;
                    }
                    let neg = p - c;
                    let prow = &rows[r as usize];
                    for k in j..cols {
                        acc[k] += neg * prow[k] as u32;
                    }
                    adds += 1;
                }
                false
            }
            Backend::Bits { pivot_of, rows, buf } => {
                let words = buf.len();
                let mut w = 0;
                while w < words {
                    let word = buf[w];
                    if word == 0 {
                        w += 1;
                        continue;
                    }
                    let j = w * 64 + word.trailing_zeros() as usize;
                    let r = pivot_of[j];
                    if r == NONE {
                        pivot_of[j] = rows.len() as u32;
                        rows.push(buf.clone());
                        return true;
                    }
                    let prow = &rows[r as usize];
                    for k in w..words {
                        buf[k] ^= prow[k];
                    }
                }
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(5, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn nullspace_is_kernel() {
        let m = Matrix::from_rows(3, &[vec![1, 1, 1, 0], vec![0, 1, 2, 1]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn reducer_matches_rref() {
        for p in [2u32, 3, 7] {
            let rows: Vec<Vec<i64>> = (0..9).map(|i| (0..70).map(|j| ((i * 7 + j * j * 3 + i * j) % 5) as i64).collect()).collect();
            let m = Matrix::from_rows(p, &rows).unwrap();
            let mut red = RowReducer::new(p, 70);
            for i in 0..9 {
                red.push_u8(m.row(i));
            }
            assert_eq!(red.rank(), m.clone().rref().len());
        }
    }
}
