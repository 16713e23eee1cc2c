use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactnum::arith::{mod_inverse, mod_inverse_u64, mul_mod};
use crate::exactnum::{rat, rat_int, trailing_valuation, Rational};
use crate::quatalg::{determinant, RationalField};

/// A square matrix over `Z / modulus`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMatrix {
    modulus: u64,
    dim: usize,
    entries: Vec<u64>,
}

impl FiniteMatrix {
    pub fn new(modulus: u64, dim: usize, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        assert!(modulus >= 1);
        let entries = entries.into_iter().map(|x| x % modulus).collect();
        FiniteMatrix { modulus, dim, entries }
    }

    pub fn from_rows(modulus: u64, rows: &[[u64; 4]; 4]) -> Self {
        Self::new(modulus, 4, rows.iter().flatten().copied().collect())
    }

    pub fn identity(modulus: u64, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % modulus;
        }
        FiniteMatrix { modulus, dim, entries }
    }

    /// `I + value * E_{row,col}`.
    pub fn elementary(modulus: u64, dim: usize, row: usize, col: usize, value: u64) -> Self {
        let mut m = Self::identity(modulus, dim);
        m.entries[row * dim + col] = (m.entries[row * dim + col] + value) % modulus;
        m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim;
        (0..n).all(|r| (0..n).all(|c| self.get(r, c) == if r == c { 1 % self.modulus } else { 0 }))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        debug_assert_eq!(self.dim, other.dim);
        let (n, q) = (self.dim, self.modulus);
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = (out[r * n + c] + mul_mod(a, other.entries[k * n + c], q)) % q;
                }
            }
        }
        FiniteMatrix { modulus: q, dim: n, entries: out }
    }

    /// Laplace expansion; valid for any modulus.
    pub fn det(&self) -> u64 {
        fn rec(m: &[u64], n: usize, q: u64) -> u64 {
            if n == 1 {
                return m[0] % q;
            }
            let mut acc = 0u64;
            for c in 0..n {
                let a = m[c];
                if a == 0 {
                    continue;
                }
                let minor: Vec<u64> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| m[r * n + cc]))
                    .collect();
                let term = mul_mod(a, rec(&minor, n - 1, q), q);
                acc = if c % 2 == 0 { (acc + term) % q } else { (acc + q - term) % q };
            }
            acc
        }
        rec(&self.entries, self.dim, self.modulus)
    }

    /// Inverse over a prime field, by Gauss-Jordan.
    pub fn inverse(&self) -> Option<Self> {
        let (n, q) = (self.dim, self.modulus);
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|r| {
                let mut row: Vec<u64> = self.entries[r * n..(r + 1) * n].to_vec();
                row.extend((0..n).map(|c| u64::from(c == r)));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0 && mod_inverse_u64(a[r][col], q).is_some())?;
            a.swap(piv, col);
            let inv = mod_inverse_u64(a[col][col], q)?;
            for x in a[col].iter_mut() {
                *x = mul_mod(*x, inv, q);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x = (*x + q - mul_mod(f, y, q)) % q;
                    }
                }
            }
        }
        let entries = a.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        Some(FiniteMatrix { modulus: q, dim: n, entries })
    }

    /// Entry-wise reduction to a divisor of the modulus.
    pub fn reduce(&self, modulus: u64) -> Self {
        assert_eq!(self.modulus % modulus, 0, "new modulus must divide the old one");
        Self::new(modulus, self.dim, self.entries.clone())
    }

    /// Short content digest (first 8 bytes of SHA-256 over the entries).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.modulus.to_le_bytes());
        for x in &self.entries {
            h.update(x.to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }
}

impl fmt::Debug for FiniteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u64]> = self.entries.chunks(self.dim).collect();
        write!(f, "{rows:?} mod {}", self.modulus)
    }
}

/// An element of `SL(4, Z[1/p])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SMatrix {
    p: u64,
    entries: [[Rational; 4]; 4],
}

impl SMatrix {
    pub fn new(p: u64, entries: [[Rational; 4]; 4]) -> Result<Self> {
        for x in entries.iter().flatten() {
            let (_, rest) = trailing_valuation(x.denom(), p);
            if !rest.is_one() {
                return Err(Error::InvalidArgument(format!(
                    "entry {x} has a denominator prime to p = {p}"
                )));
            }
        }
        let rows = entries.iter().map(|r| r.to_vec()).collect();
        let det = determinant(&RationalField, rows);
        if !det.is_one() {
            return Err(Error::InvalidArgument(format!("determinant {det}, expected 1")));
        }
        Ok(SMatrix { p, entries })
    }

    pub fn identity(p: u64) -> Self {
        SMatrix {
            p,
            entries: std::array::from_fn(|r| {
                std::array::from_fn(|c| if r == c { Rational::one() } else { Rational::zero() })
            }),
        }
    }

    /// `I + value * E_{row,col}`, `row != col`.
    pub fn elementary(p: u64, row: usize, col: usize, value: Rational) -> Result<Self> {
        if row == col {
            return Err(Error::InvalidArgument("elementary matrix needs row != col".into()));
        }
        let mut m = Self::identity(p);
        m.entries[row][col] = value;
        Self::new(p, m.entries)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[[Rational; 4]; 4] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        SMatrix {
            p: self.p,
            entries: std::array::from_fn(|r| {
                std::array::from_fn(|c| {
                    (0..4).fold(Rational::zero(), |acc, k| {
                        acc + &self.entries[r][k] * &other.entries[k][c]
                    })
                })
            }),
        }
    }
}

/// `phi_n`: reduce entries mod `n`, inverting `p`.
pub fn reduce_mod(m: &SMatrix, n: u64) -> Result<FiniteMatrix> {
    if n == 0 || n.gcd(&m.p) != 1 {
        return Err(Error::ModulusNotCoprime { modulus: n, p: m.p });
    }
    let nb = BigInt::from(n);
    let mut entries = Vec::with_capacity(16);
    for x in m.entries.iter().flatten() {
        let num = x.numer().mod_floor(&nb);
        let inv = mod_inverse(x.denom(), &nb).expect("denominator is a power of p");
        entries.push(((num * inv) % &nb).to_u64().unwrap());
    }
    Ok(FiniteMatrix::new(n, 4, entries))
}

/// Membership in the principal congruence subgroup of level `n`.
pub fn in_principal_congruence(m: &SMatrix, n: u64) -> Result<bool> {
    Ok(reduce_mod(m, n)?.is_identity())
}

/// `e_ij(1)` and `e_ij(1/p)` for all `i != j`.
pub fn delta_generators(p: u64) -> Vec<SMatrix> {
    let mut out = Vec::with_capacity(24);
    for value in [rat_int(1), rat(1, p as i64)] {
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    out.push(SMatrix::elementary(p, r, c, value.clone()).expect("elementary"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        let id = SMatrix::identity(7);
        assert!(reduce_mod(&id, 10).unwrap().is_identity());
        let e = SMatrix::elementary(7, 0, 1, rat(1, 7)).unwrap();
        assert_eq!(reduce_mod(&e, 2).unwrap(), FiniteMatrix::elementary(2, 4, 0, 1, 1));
        let e = SMatrix::elementary(3, 0, 1, rat(1, 3)).unwrap();
        assert_eq!(reduce_mod(&e, 5).unwrap(), FiniteMatrix::elementary(5, 4, 0, 1, 2));
        assert_eq!(
            reduce_mod(&e, 6),
            Err(Error::ModulusNotCoprime { modulus: 6, p: 3 })
        );
    }

    #[test]
    fn principal_congruence() {
        assert!(in_principal_congruence(&SMatrix::identity(5), 12).unwrap());
        let e = SMatrix::elementary(5, 2, 3, rat_int(12)).unwrap();
        assert!(in_principal_congruence(&e, 12).unwrap());
        let e = SMatrix::elementary(5, 0, 1, rat_int(1)).unwrap();
        assert!(!in_principal_congruence(&e, 2).unwrap());
    }

    #[test]
    fn generators() {
        let gens = delta_generators(5);
        assert_eq!(gens.len(), 24);
        for g in &gens {
            let rows = g.entries().iter().map(|r| r.to_vec()).collect();
            assert!(determinant(&RationalField, rows).is_one());
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        let mut e = SMatrix::identity(3).entries().clone();
        e[0][0] = rat_int(2);
        assert!(SMatrix::new(3, e).is_err());
        assert!(SMatrix::elementary(3, 0, 1, rat(1, 2)).is_err());
    }

    #[test]
    fn finite_inverse_and_det() {
        let m = FiniteMatrix::from_rows(5, &[[1, 2, 0, 0], [3, 4, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]);
        assert_eq!(m.det(), (4 + 5 - 6));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }
}
