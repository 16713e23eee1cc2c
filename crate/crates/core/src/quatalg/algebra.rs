use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::arith::legendre;
use crate::exactnum::{
    is_prime, rat_int, valuation_of_rational, verify_product_formula, Place, Rational,
};

/// An element `x0 + x1 i + x2 j + x3 k` of a quaternion algebra over Q.
///
/// The structure constants live in [`QuaternionAlgebra`]; products go
/// through it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quaternion(pub [Rational; 4]);

impl Quaternion {
    pub fn new(x0: Rational, x1: Rational, x2: Rational, x3: Rational) -> Self {
        Quaternion([x0, x1, x2, x3])
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion(c.map(rat_int))
    }

    pub fn scalar(x: Rational) -> Self {
        Quaternion([x, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn zero() -> Self {
        Self::scalar(Rational::zero())
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn i() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn j() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    pub fn k() -> Self {
        Self::from_ints([0, 0, 0, 1])
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Quaternion(self.0.clone().map(|x| x * c))
    }

    pub fn conj(&self) -> Self {
        let [x0, x1, x2, x3] = self.0.clone();
        Quaternion([x0, -x1, -x2, -x3])
    }

    pub fn trd(&self) -> Rational {
        &self.0[0] * rat_int(2)
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|m| &self.0[m] + &rhs.0[m]))
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|m| &self.0[m] - &rhs.0[m]))
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion(std::array::from_fn(|m| -&self.0[m]))
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, name) in self.0.iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            let mag = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}{name}")?;
            } else {
                write!(f, "({mag}){name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `A = (a, b | Q)` with `i^2 = a`, `j^2 = b`, `ij = -ji = k`, normalized so
/// that `a < 0` is a non-residue unit at `p` and `b = -p m` with `p ∤ m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionAlgebra {
    #[serde(with = "crate::serde_rational")]
    a: Rational,
    #[serde(with = "crate::serde_rational")]
    b: Rational,
    p: u64,
}

impl QuaternionAlgebra {
    /// Validates the normalization and that the ramification set is exactly
    /// `{inf, p}`.
    pub fn new(a: Rational, b: Rational, p: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
        }
        if !a.is_negative() || !b.is_negative() {
            return Err(Error::InvalidArgument("a and b must both be negative".into()));
        }
        if !a.is_integer() || !b.is_integer() {
            return Err(Error::InvalidArgument("a and b must be integers".into()));
        }
        if valuation_of_rational(&a, p) != Some(0) || valuation_of_rational(&b, p) != Some(1) {
            return Err(Error::InvalidArgument(format!(
                "need v_p(a) = 0 and v_p(b) = 1 at p = {p}"
            )));
        }
        let alg = QuaternionAlgebra { a, b, p };
        if !alg.a_is_nonresidue() {
            return Err(Error::InvalidArgument(format!("a is a square mod {p}")));
        }
        let ram = alg.ramification()?;
        if ram != vec![Place::Infinite, Place::Prime(p)] {
            return Err(Error::InvalidArgument(format!(
                "ramification set is {ram:?}, expected {{inf, {p}}}"
            )));
        }
        Ok(alg)
    }

    /// Skips every check; for split or auxiliary algebras in tests and
    /// sanity paths.
    pub fn from_constants_unchecked(a: Rational, b: Rational, p: u64) -> Self {
        QuaternionAlgebra { a, b, p }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `m` in `b = -p m`.
    pub fn m(&self) -> Rational {
        -&self.b / rat_int(self.p as i64)
    }

    pub(crate) fn a_is_nonresidue(&self) -> bool {
        self.a.is_integer() && legendre(self.a.numer(), self.p) == -1
    }

    /// Places where the algebra is a division algebra.
    pub fn ramification(&self) -> Result<Vec<Place>> {
        Ok(verify_product_formula(&self.a, &self.b)?.ramified)
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        Quaternion([
            x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - &ab * (x3 * y3),
            x0 * y1 + x1 * y0 - b * (x2 * y3) + b * (x3 * y2),
            x0 * y2 + x2 * y0 + a * (x1 * y3) - a * (x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn nrd(&self, x: &Quaternion) -> Rational {
        let [x0, x1, x2, x3] = &x.0;
        x0 * x0 - &self.a * (x1 * x1) - &self.b * (x2 * x2) + &self.a * &self.b * (x3 * x3)
    }

    pub fn inv(&self, x: &Quaternion) -> Result<Quaternion> {
        let n = self.nrd(x);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(x.conj().scale(&n.recip()))
    }

    pub fn pow(&self, x: &Quaternion, e: u32) -> Quaternion {
        (0..e).fold(Quaternion::one(), |acc, _| self.mul(&acc, x))
    }
}

/// Reduced norm `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
pub fn nrd_quat(alg: &QuaternionAlgebra, x: &Quaternion) -> Rational {
    alg.nrd(x)
}

const SEARCH_BOUND: i64 = 2000;

/// The normalized definite algebra ramified exactly at `{inf, p}`: smallest
/// `|a|`, then smallest `|b|`, among `a < 0` non-residue mod `p` and
/// `b = -p m`.
pub fn choose_algebra(p: u64) -> Result<QuaternionAlgebra> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
    }
    let pi = p as i64;
    for abs_a in 1..SEARCH_BOUND {
        if abs_a % pi == 0 {
            continue;
        }
        let a = rat_int(-abs_a);
        let probe = QuaternionAlgebra::from_constants_unchecked(a.clone(), rat_int(-pi), p);
        if !probe.a_is_nonresidue() {
            continue;
        }
        for m in 1..SEARCH_BOUND {
            if m % pi == 0 {
                continue;
            }
            let b = rat_int(-pi * m);
            let report = verify_product_formula(&a, &b)?;
            if report.ramified == [Place::Infinite, Place::Prime(p)] {
                return QuaternionAlgebra::new(a, b, p);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no (a, b) with |a|, m < {SEARCH_BOUND} for p = {p}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let a3 = choose_algebra(3).unwrap();
        assert_eq!((a3.a(), a3.b()), (&rat_int(-1), &rat_int(-3)));
        let a7 = choose_algebra(7).unwrap();
        assert_eq!((a7.a(), a7.b()), (&rat_int(-1), &rat_int(-7)));
        let a5 = choose_algebra(5).unwrap();
        assert_eq!((a5.a(), a5.b()), (&rat_int(-2), &rat_int(-5)));
        let a13 = choose_algebra(13).unwrap();
        assert_eq!(a13.ramification().unwrap(), vec![Place::Infinite, Place::Prime(13)]);
    }

    #[test]
    fn rejects_even_and_composite() {
        assert!(choose_algebra(2).is_err());
        assert!(choose_algebra(9).is_err());
    }

    #[test]
    fn nrd_examples() {
        let a3 = choose_algebra(3).unwrap();
        assert_eq!(nrd_quat(&a3, &Quaternion::one()), rat_int(1));
        assert_eq!(nrd_quat(&a3, &Quaternion::i()), rat_int(1));
        let a7 = choose_algebra(7).unwrap();
        assert_eq!(nrd_quat(&a7, &Quaternion::from_ints([1, 1, 1, 1])), rat_int(16));
    }

    #[test]
    fn norm_is_x_times_conjugate() {
        let alg = choose_algebra(5).unwrap();
        let x = Quaternion::from_ints([3, -1, 2, 5]);
        let prod = alg.mul(&x, &x.conj());
        assert_eq!(prod, Quaternion::scalar(alg.nrd(&x)));
    }

    #[test]
    fn multiplication_table() {
        let alg = choose_algebra(7).unwrap();
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        assert_eq!(alg.mul(&i, &i), Quaternion::scalar(alg.a().clone()));
        assert_eq!(alg.mul(&j, &j), Quaternion::scalar(alg.b().clone()));
        assert_eq!(alg.mul(&i, &j), k);
        assert_eq!(alg.mul(&j, &i), -&k);
    }

    #[test]
    fn display() {
        let x = Quaternion::new(rat_int(1), rat_int(-2), Rational::new(1.into(), 2.into()), rat_int(0));
        assert_eq!(x.to_string(), "1 - 2i + (1/2)j");
        assert_eq!(Quaternion::zero().to_string(), "0");
    }
}
