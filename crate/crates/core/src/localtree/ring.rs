//! Truncated local rings: `Z_p` for the split baseline and the maximal
//! order `O_p = K + K j` of the local division algebra, `K = Q_p(i)`
//! unramified, with uniformizer `pi = j`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::arith::{mod_inverse_u64, mul_mod};
use crate::exactnum::{is_prime, Rational};
use crate::quatalg::{reduce_rational, QuaternionAlgebra};

/// Largest `N` with `p^N < 2^62`.
pub fn max_tree_precision(p: u64) -> u32 {
    let mut n = 0;
    let mut q: u64 = 1;
    while let Some(next) = q.checked_mul(p).filter(|&x| x < 1 << 62) {
        q = next;
        n += 1;
    }
    n
}

/// Elements are stored modulo a fixed power of `p`; `precision` is the
/// number of known pi-adic digits of a freshly built element.
pub trait LocalRing {
    type Elem: Copy + Eq + fmt::Debug;

    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    /// Size of the residue ring `O / pi O`.
    fn residue_size(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem;
    fn neg(&self, x: Self::Elem) -> Self::Elem;
    fn mul(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem;

    fn sub(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem {
        self.add(x, self.neg(y))
    }

    /// pi-adic valuation; `None` when `x` vanishes at storage precision.
    fn val(&self, x: Self::Elem) -> Option<u32>;
    /// `pi^{-1} x` for `val(x) >= 1`.
    fn div_pi_left(&self, x: Self::Elem) -> Self::Elem;
    /// `x pi^{-1}` for `val(x) >= 1`.
    fn div_pi_right(&self, x: Self::Elem) -> Self::Elem;
    /// `pi x pi^{-1}`.
    fn frob(&self, x: Self::Elem) -> Self::Elem;
    fn pi_pow(&self, k: u32) -> Self::Elem;
    fn unit_inverse(&self, u: Self::Elem) -> Self::Elem;
    /// Index of the residue class of `x` among the digit representatives.
    fn digit_of(&self, x: Self::Elem) -> u32;
    fn digit(&self, d: u32) -> Self::Elem;

    fn div_pi_right_pow(&self, mut x: Self::Elem, k: u32) -> Self::Elem {
        for _ in 0..k {
            x = self.div_pi_right(x);
        }
        x
    }

    fn div_pi_left_pow(&self, mut x: Self::Elem, k: u32) -> Self::Elem {
        for _ in 0..k {
            x = self.div_pi_left(x);
        }
        x
    }

    fn frob_pow(&self, x: Self::Elem, k: u32) -> Self::Elem {
        if k.is_multiple_of(2) { x } else { self.frob(x) }
    }
}

#[derive(Debug, Clone, Copy)]
struct Zq {
    p: u64,
    n: u32,
    q: u64,
}

impl Zq {
    fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        let cap = max_tree_precision(p);
        if n == 0 || n > cap {
            return Err(Error::InvalidArgument(format!(
                "tree precision must lie in 1..={cap} for p = {p}, got {n}"
            )));
        }
        Ok(Zq { p, n, q: p.pow(n) })
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.q
    }

    fn neg(&self, x: u64) -> u64 {
        (self.q - x) % self.q
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.q)
    }

    fn val(&self, mut x: u64) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    fn div_p(&self, x: u64) -> u64 {
        debug_assert_eq!(x % self.p, 0);
        x / self.p
    }

    fn pow(&self, x: u64, mut e: u32) -> u64 {
        let (mut acc, mut base) = (1 % self.q, x);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, x: u64) -> u64 {
        mod_inverse_u64(x, self.q).expect("unit")
    }
}

/// `Z_p` mod `p^N`; the baseline tree of `SL(2, Q_p)`.
#[derive(Debug, Clone, Copy)]
pub struct SplitRing {
    z: Zq,
}

impl SplitRing {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        Ok(SplitRing { z: Zq::new(p, precision)? })
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.z.q as i64) as u64
    }
}

impl LocalRing for SplitRing {
    type Elem = u64;

    fn prime(&self) -> u64 {
        self.z.p
    }
    fn precision(&self) -> u32 {
        self.z.n
    }
    fn residue_size(&self) -> u64 {
        self.z.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, x: u64, y: u64) -> u64 {
        self.z.add(x, y)
    }
    fn neg(&self, x: u64) -> u64 {
        self.z.neg(x)
    }
    fn mul(&self, x: u64, y: u64) -> u64 {
        self.z.mul(x, y)
    }
    fn val(&self, x: u64) -> Option<u32> {
        self.z.val(x)
    }
    fn div_pi_left(&self, x: u64) -> u64 {
        self.z.div_p(x)
    }
    fn div_pi_right(&self, x: u64) -> u64 {
        self.z.div_p(x)
    }
    fn frob(&self, x: u64) -> u64 {
        x
    }
    fn pi_pow(&self, k: u32) -> u64 {
        if k >= self.z.n { 0 } else { self.z.p.pow(k) }
    }
    fn unit_inverse(&self, u: u64) -> u64 {
        self.z.inv(u)
    }
    fn digit_of(&self, x: u64) -> u32 {
        (x % self.z.p) as u32
    }
    fn digit(&self, d: u32) -> u64 {
        u64::from(d)
    }
}

/// `x + w j` with `x, w` in `K = Z_p[i]`, stored as coefficient pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivElem {
    pub x: [u64; 2],
    pub w: [u64; 2],
}

/// Maximal order of the local division algebra `(a, b)_p` with `a` a
/// non-square unit and `v_p(b) = 1`.
#[derive(Debug, Clone, Copy)]
pub struct DivisionRing {
    z: Zq,
    a: u64,
    b: u64,
    // (b / p)^{-1}
    b_unit_inv: u64,
}

impl DivisionRing {
    pub fn new(alg: &QuaternionAlgebra, precision: u32) -> Result<Self> {
        let p = alg.p();
        let z = Zq::new(p, precision)?;
        let bad = |what: &str| Error::InvalidArgument(format!("local algebra at {p}: {what}"));
        let a = reduce_rational(alg.a(), z.q).ok_or_else(|| bad("a is not a p-adic unit"))?;
        if !alg.a_is_nonresidue() {
            return Err(bad("a is a square mod p"));
        }
        let b_over_p = alg.b() / Rational::from_integer((p as i64).into());
        let bu = reduce_rational(&b_over_p, z.q).ok_or_else(|| bad("v_p(b) != 1"))?;
        if bu % p == 0 {
            return Err(bad("v_p(b) != 1"));
        }
        Ok(DivisionRing { z, a, b: z.mul(bu, p), b_unit_inv: z.inv(bu) })
    }

    fn kmul(&self, u: [u64; 2], v: [u64; 2]) -> [u64; 2] {
        let z = &self.z;
        [
            z.add(z.mul(u[0], v[0]), z.mul(self.a, z.mul(u[1], v[1]))),
            z.add(z.mul(u[0], v[1]), z.mul(u[1], v[0])),
        ]
    }

    fn kadd(&self, u: [u64; 2], v: [u64; 2]) -> [u64; 2] {
        [self.z.add(u[0], v[0]), self.z.add(u[1], v[1])]
    }

    fn kconj(&self, u: [u64; 2]) -> [u64; 2] {
        [u[0], self.z.neg(u[1])]
    }

    fn kval(&self, u: [u64; 2]) -> Option<u32> {
        match (self.z.val(u[0]), self.z.val(u[1])) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    fn knorm(&self, u: [u64; 2]) -> u64 {
        let z = &self.z;
        z.add(z.mul(u[0], u[0]), z.neg(z.mul(self.a, z.mul(u[1], u[1]))))
    }

    /// `x / b` for `x` divisible by `p`.
    fn kdiv_b(&self, u: [u64; 2]) -> [u64; 2] {
        [
            self.z.mul(self.z.div_p(u[0]), self.b_unit_inv),
            self.z.mul(self.z.div_p(u[1]), self.b_unit_inv),
        ]
    }

    /// Coefficients of `1, i, j, k` (residues mod `p^N`).
    pub fn from_coeffs(&self, c: [u64; 4]) -> DivElem {
        let q = self.z.q;
        DivElem { x: [c[0] % q, c[1] % q], w: [c[2] % q, c[3] % q] }
    }

    /// Rational coefficients with denominators prime to `p`.
    pub fn from_rational_coeffs(&self, c: &[Rational; 4]) -> Option<DivElem> {
        let mut out = [0u64; 4];
        for (o, x) in out.iter_mut().zip(c) {
            *o = reduce_rational(x, self.z.q)?;
        }
        Some(self.from_coeffs(out))
    }

    pub fn to_coeffs(&self, e: DivElem) -> [u64; 4] {
        [e.x[0], e.x[1], e.w[0], e.w[1]]
    }

    pub fn modulus(&self) -> u64 {
        self.z.q
    }
}

impl LocalRing for DivisionRing {
    type Elem = DivElem;

    fn prime(&self) -> u64 {
        self.z.p
    }
    fn precision(&self) -> u32 {
        2 * self.z.n
    }
    fn residue_size(&self) -> u64 {
        self.z.p * self.z.p
    }
    fn zero(&self) -> DivElem {
        DivElem { x: [0, 0], w: [0, 0] }
    }
    fn one(&self) -> DivElem {
        DivElem { x: [1, 0], w: [0, 0] }
    }
    fn add(&self, s: DivElem, t: DivElem) -> DivElem {
        DivElem { x: self.kadd(s.x, t.x), w: self.kadd(s.w, t.w) }
    }
    fn neg(&self, s: DivElem) -> DivElem {
        let z = &self.z;
        DivElem { x: [z.neg(s.x[0]), z.neg(s.x[1])], w: [z.neg(s.w[0]), z.neg(s.w[1])] }
    }
    // (x + w j)(x' + w' j) = (x x' + b w conj(w')) + (x w' + w conj(x')) j
    fn mul(&self, s: DivElem, t: DivElem) -> DivElem {
        let bw = self.kmul(s.w, self.kconj(t.w));
        DivElem {
            x: self.kadd(self.kmul(s.x, t.x), [self.z.mul(self.b, bw[0]), self.z.mul(self.b, bw[1])]),
            w: self.kadd(self.kmul(s.x, t.w), self.kmul(s.w, self.kconj(t.x))),
        }
    }
    // nrd = N(x) - b N(w); the two terms have valuations of opposite parity
    fn val(&self, s: DivElem) -> Option<u32> {
        match (self.kval(s.x), self.kval(s.w)) {
            (None, None) => None,
            (Some(vx), None) => Some(2 * vx),
            (None, Some(vw)) => Some(2 * vw + 1),
            (Some(vx), Some(vw)) => Some((2 * vx).min(2 * vw + 1)),
        }
    }
    // j^{-1} (x + w j) = conj(w) + (conj(x) / b) j
    fn div_pi_left(&self, s: DivElem) -> DivElem {
        DivElem { x: self.kconj(s.w), w: self.kdiv_b(self.kconj(s.x)) }
    }
    // (x + w j) j^{-1} = w + (x / b) j
    fn div_pi_right(&self, s: DivElem) -> DivElem {
        DivElem { x: s.w, w: self.kdiv_b(s.x) }
    }
    fn frob(&self, s: DivElem) -> DivElem {
        DivElem { x: self.kconj(s.x), w: self.kconj(s.w) }
    }
    fn pi_pow(&self, k: u32) -> DivElem {
        let bt = self.z.pow(self.b, k / 2);
        if k.is_multiple_of(2) {
            DivElem { x: [bt, 0], w: [0, 0] }
        } else {
            DivElem { x: [0, 0], w: [bt, 0] }
        }
    }
    fn unit_inverse(&self, s: DivElem) -> DivElem {
        let z = &self.z;
        let nrd = z.add(self.knorm(s.x), z.neg(z.mul(self.b, self.knorm(s.w))));
        let inv = z.inv(nrd);
        let c = self.kconj(s.x);
        DivElem {
            x: [z.mul(c[0], inv), z.mul(c[1], inv)],
            w: [z.mul(z.neg(s.w[0]), inv), z.mul(z.neg(s.w[1]), inv)],
        }
    }
    fn digit_of(&self, s: DivElem) -> u32 {
        let p = self.z.p;
        ((s.x[0] % p) + p * (s.x[1] % p)) as u32
    }
    fn digit(&self, d: u32) -> DivElem {
        let p = self.z.p as u32;
        DivElem { x: [u64::from(d % p), u64::from(d / p)], w: [0, 0] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatalg::{choose_algebra, QuaternionAlgebra};

    fn ring(p: u64) -> DivisionRing {
        DivisionRing::new(&choose_algebra(p).unwrap(), 8).unwrap()
    }

    #[test]
    fn precision_cap() {
        assert_eq!(max_tree_precision(2), 61);
        assert_eq!(max_tree_precision(7), 22);
        assert!(SplitRing::new(7, 23).is_err());
        assert!(SplitRing::new(9, 4).is_err());
    }

    #[test]
    fn pi_relations() {
        for p in [3, 5, 7] {
            let r = ring(p);
            let pi = r.pi_pow(1);
            assert_eq!(r.val(pi), Some(1));
            assert_eq!(r.val(r.from_coeffs([p, 0, 0, 0])), Some(2));
            assert_eq!(r.mul(pi, pi), r.pi_pow(2));
            let x = r.from_coeffs([1, 2, 3, 4]);
            // one p-adic digit is lost by dividing out b
            let low = |e: DivElem| r.to_coeffs(e).map(|c| c % (r.modulus() / p));
            assert_eq!(low(r.div_pi_left(r.mul(pi, x))), low(x));
            assert_eq!(low(r.div_pi_right(r.mul(x, pi))), low(x));
            assert_eq!(r.mul(pi, x), r.mul(r.frob(x), pi));
        }
    }

    #[test]
    fn matches_rational_multiplication() {
        let alg = choose_algebra(5).unwrap();
        let r = DivisionRing::new(&alg, 6).unwrap();
        let x = crate::quatalg::Quaternion::from_ints([1, -2, 3, 4]);
        let y = crate::quatalg::Quaternion::from_ints([0, 5, -1, 2]);
        let xy = alg.mul(&x, &y);
        let lift = |q: &crate::quatalg::Quaternion| r.from_rational_coeffs(q.coeffs()).unwrap();
        assert_eq!(r.mul(lift(&x), lift(&y)), lift(&xy));
    }

    #[test]
    fn unit_inverses() {
        let r = ring(7);
        for c in [[1, 0, 0, 0], [3, 5, 1, 2], [0, 1, 6, 6]] {
            let u = r.from_coeffs(c);
            assert_eq!(r.val(u), Some(0));
            assert_eq!(r.mul(u, r.unit_inverse(u)), r.one());
            assert_eq!(r.mul(r.unit_inverse(u), u), r.one());
        }
    }

    #[test]
    fn rejects_split_or_unramified_data() {
        let alg = QuaternionAlgebra::from_constants_unchecked(
            crate::exactnum::rat_int(-1),
            crate::exactnum::rat_int(-1),
            3,
        );
        assert!(DivisionRing::new(&alg, 4).is_err());
    }
}
