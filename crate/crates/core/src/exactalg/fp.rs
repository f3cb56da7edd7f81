use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::IntMatrix;
use crate::numtheory::is_prime;
use crate::{Error, Result};

/// Dense matrix over `F_p`, entries kept in `0..p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        debug_assert!(is_prime(p));
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_int(m: &IntMatrix, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let mut out = Self::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r = ((m.get(i, j) % &pb) + &pb) % &pb;
                out.data[i * m.cols() + j] = r.to_u64().expect("residue fits");
            }
        }
        Ok(out)
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let m = IntMatrix::from_rows(rows)?;
        Self::from_int(&m, p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value.rem_euclid(self.p as i64) as u64;
    }

    /// Adds `value` (taken mod p) to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, value: i64) {
        let v = value.rem_euclid(self.p as i64) as u64;
        let e = &mut self.data[i * self.cols + j];
        *e = (*e + v) % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b) % p;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.p != other.p {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                m.data[r * m.cols + j] = m.data[r * m.cols + j] * inv % p;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let sub = f * m.data[r * m.cols + j] % p;
                    let e = &mut m.data[i * m.cols + j];
                    *e = (*e + p - sub) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace `{v : M v = 0}`, one vector per free
    /// column, in increasing order of the free column.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, f)) % p;
                }
                v
            })
            .collect()
    }

    /// Some solution `x` of `M x = b`, free variables set to zero.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j);
            }
            aug.data[i * (self.cols + 1) + self.cols] = b[i] % self.p;
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = x % p;
            }
        }
        m
    }
}

/// Dimension over `F_p` of `ker(boundary_out) / im(boundary_in)`.
///
/// `boundary_out: C_n -> C_{n-1}` and `boundary_in: C_{n+1} -> C_n`, written as
/// matrices acting on column vectors.
pub fn fp_homology(boundary_out: &FpMatrix, boundary_in: &FpMatrix) -> Result<usize> {
    if boundary_out.cols() != boundary_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "middle term: {} vs {}",
            boundary_out.cols(),
            boundary_in.rows()
        )));
    }
    if boundary_out.prime() != boundary_in.prime() {
        return Err(Error::Mismatch("different primes".into()));
    }
    if !boundary_out.mul(boundary_in)?.is_zero() {
        return Err(Error::NotAComplex {
            p: boundary_out.prime(),
        });
    }
    let nullity = boundary_out.cols() - boundary_out.rank();
    Ok(nullity - boundary_in.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_homology() {
        let z = FpMatrix::zeros(2, 0, 1);
        let z_in = FpMatrix::zeros(2, 1, 0);
        assert_eq!(fp_homology(&z, &z_in).unwrap(), 1);
        let id = FpMatrix::identity(2, 1);
        assert_eq!(fp_homology(&z, &id).unwrap(), 0);
    }

    #[test]
    fn not_a_complex() {
        let id = FpMatrix::identity(3, 2);
        assert_eq!(fp_homology(&id, &id), Err(Error::NotAComplex { p: 3 }));
    }

    #[test]
    fn nullspace_and_solve() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        assert_eq!(m.rank(), 1);
        for v in m.nullspace() {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
        assert_eq!(m.nullspace().len(), 2);
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.apply(&x), vec![1, 2]);
        assert!(m.solve(&[1, 0]).is_none());
    }

    proptest! {
        // rank-nullity on random complexes built as A then B = (kernel basis of A)
        #[test]
        fn rank_nullity(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                        n in 1usize..6, k in 0usize..6,
                        entries in proptest::collection::vec(0u64..7, 36)) {
            let mut out = FpMatrix::zeros(p, k, n);
            for i in 0..k { for j in 0..n { out.set(i, j, entries[i * 6 + j] as i64); } }
            let kernel = out.nullspace();
            // boundary_in spans a subset of the kernel
            let keep: Vec<Vec<u64>> = kernel.iter().enumerate().filter(|(i, _)| entries[i + 30] % 2 == 0).map(|(_, v)| v.clone()).collect();
            let inn = FpMatrix::from_columns(p, n, &keep);
            let h = fp_homology(&out, &inn).unwrap();
            prop_assert_eq!(h + out.rank() + inn.rank(), n);
        }
    }
}
