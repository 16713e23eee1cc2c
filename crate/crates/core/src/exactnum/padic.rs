use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::arith::{is_prime, sqrt_mod_prime, trailing_valuation};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Default number of significant l-adic digits.
pub const DEFAULT_PRECISION: u32 = 32;

/// A truncated l-adic number `l^valuation * unit`, where `unit` is known
/// modulo `l^precision`.
///
/// `valuation == None` is the exact zero. Units are stored in a `u128`, so
/// the precision is capped at the largest `N` with `l^N < 2^127`; the cap is
/// applied at construction and visible through [`PadicNumber::precision`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    valuation: Option<i64>,
    unit: u128,
    precision: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Result of [`hensel_sqrt`]. `NotASquare` carries the failed criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SqrtOutcome {
    Root(PadicNumber),
    NotASquare(String),
}

fn max_precision(p: u64) -> u32 {
    let mut n = 0u32;
    let mut acc: u128 = 1;
    while let Some(next) = acc.checked_mul(p as u128) {
        if next >= 1u128 << 127 {
            break;
        }
        acc = next;
        n += 1;
    }
    n
}

#[inline]
fn modulus(p: u64, n: u32) -> u128 {
    (p as u128).pow(n)
}

#[inline]
fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    match a.checked_mul(b) {
        Some(prod) => prod % m,
        None => {
            let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
            r.to_u128().unwrap()
        }
    }
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m < 2^127, so the sum cannot overflow.
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn inv_mod(a: u128, m: u128) -> Option<u128> {
    let inv = super::arith::mod_inverse(&BigInt::from(a), &BigInt::from(m))?;
    inv.to_u128()
}

fn strip(mut s: u128, p: u64) -> (u32, u128) {
    let p = p as u128;
    let mut t = 0;
    while s.is_multiple_of(p) {
        s /= p;
        t += 1;
    }
    (t, s)
}

fn bigint_mod(x: &BigInt, m: u128) -> u128 {
    x.mod_floor(&BigInt::from(m)).to_u128().unwrap()
}

impl PadicNumber {
    fn check_prime(prime: u64) -> Result<()> {
        if !is_prime(prime) {
            return Err(Error::InvalidArgument(format!("{prime} is not prime")));
        }
        Ok(())
    }

    fn clamp(prime: u64, precision: u32) -> Result<u32> {
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        Ok(precision.min(max_precision(prime)))
    }

    /// The exact zero.
    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::check_prime(prime)?;
        Ok(PadicNumber {
            prime,
            valuation: None,
            unit: 0,
            precision: Self::clamp(prime, precision)?,
        })
    }

    /// `prime^valuation * unit`; `unit` must be coprime to the prime.
    pub fn from_parts(prime: u64, valuation: i64, unit: &BigInt, precision: u32) -> Result<Self> {
        Self::check_prime(prime)?;
        let precision = Self::clamp(prime, precision)?;
        let m = modulus(prime, precision);
        let u = bigint_mod(unit, m);
        if u.is_multiple_of(prime as u128) {
            return Err(Error::InvalidArgument(format!(
                "unit part {unit} is divisible by {prime}"
            )));
        }
        Ok(PadicNumber {
            prime,
            valuation: Some(valuation),
            unit: u,
            precision,
        })
    }

    pub fn from_integer(prime: u64, n: &BigInt, precision: u32) -> Result<Self> {
        Self::from_rational(prime, &Rational::from_integer(n.clone()), precision)
    }

    pub fn from_i64(prime: u64, n: i64, precision: u32) -> Result<Self> {
        Self::from_integer(prime, &BigInt::from(n), precision)
    }

    /// Image of a rational number in Q_l; zero maps to the exact zero.
    pub fn from_rational(prime: u64, x: &Rational, precision: u32) -> Result<Self> {
        if x.is_zero() {
            return Self::zero(prime, precision);
        }
        Self::check_prime(prime)?;
        let precision = Self::clamp(prime, precision)?;
        let m = modulus(prime, precision);
        let (vn, n) = trailing_valuation(x.numer(), prime);
        let (vd, d) = trailing_valuation(x.denom(), prime);
        let d_inv = inv_mod(bigint_mod(&d, m), m).expect("denominator coprime to prime");
        let unit = mul_mod(bigint_mod(&n, m), d_inv, m);
        Ok(PadicNumber {
            prime,
            valuation: Some(vn as i64 - vd as i64),
            unit,
            precision,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `None` exactly for the exact zero.
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    /// Number of significant digits of the unit part.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn unit(&self) -> BigUint {
        BigUint::from(self.unit)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// `valuation + precision`: the number is known modulo `l^abs`.
    /// `None` for the exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation.map(|v| v + self.precision as i64)
    }

    /// Rational `l^v * unit` representing this number to its precision.
    pub fn to_rational(&self) -> Rational {
        match self.valuation {
            None => Rational::zero(),
            Some(v) => {
                let u = Rational::from_integer(BigInt::from(self.unit));
                let p = Rational::from_integer(BigInt::from(self.prime));
                if v >= 0 {
                    u * num_traits::pow(p, v as usize)
                } else {
                    u / num_traits::pow(p, (-v) as usize)
                }
            }
        }
    }

    /// Residue modulo `l` of an integral number.
    pub fn residue(&self) -> Result<u64> {
        match self.valuation {
            None => Ok(0),
            Some(v) if v > 0 => Ok(0),
            Some(0) => Ok((self.unit % self.prime as u128) as u64),
            Some(v) => Err(Error::InvalidArgument(format!(
                "residue of a non-integral number (valuation {v})"
            ))),
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if self.valuation.is_some() {
            let m = modulus(self.prime, self.precision);
            out.unit = m - self.unit;
        }
        out
    }

    /// Sum; fails with `PrecisionExhausted` when every known digit cancels.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.add_inner(other)?
            .ok_or_else(|| Error::PrecisionExhausted("all significant digits cancelled".into()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Sum where total cancellation yields zero. The answer is then only
    /// known to be zero modulo `l^A`, with `A` the smaller absolute precision
    /// of the operands; callers use this when such a zero is meaningful at
    /// the working precision.
    pub fn add_flush(&self, other: &Self) -> Result<Self> {
        Ok(self.add_inner(other)?.unwrap_or_else(|| PadicNumber {
            prime: self.prime,
            valuation: None,
            unit: 0,
            precision: self.precision.max(other.precision),
        }))
    }

    pub fn sub_flush(&self, other: &Self) -> Result<Self> {
        self.add_flush(&other.neg())
    }

    fn add_inner(&self, other: &Self) -> Result<Option<Self>> {
        self.same_prime(other)?;
        let (v1, v2) = match (self.valuation, other.valuation) {
            (None, _) => return Ok(Some(other.clone())),
            (_, None) => return Ok(Some(self.clone())),
            (Some(a), Some(b)) => (a, b),
        };
        let a1 = v1 + self.precision as i64;
        let a2 = v2 + other.precision as i64;
        let abs = a1.min(a2);
        let v = v1.min(v2);
        let width = (abs - v) as u32;
        let m = modulus(self.prime, width);
        let term = |unit: u128, shift: i64| -> u128 {
            if shift >= width as i64 {
                0
            } else {
                mul_mod(unit % m, modulus(self.prime, shift as u32) % m, m)
            }
        };
        let s = add_mod(term(self.unit, v1 - v), term(other.unit, v2 - v), m);
        if s == 0 {
            return Ok(None);
        }
        let (t, unit) = strip(s, self.prime);
        Ok(Some(PadicNumber {
            prime: self.prime,
            valuation: Some(v + t as i64),
            unit,
            precision: width - t,
        }))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let precision = self.precision.min(other.precision);
        match (self.valuation, other.valuation) {
            (Some(v1), Some(v2)) => {
                let m = modulus(self.prime, precision);
                Ok(PadicNumber {
                    prime: self.prime,
                    valuation: Some(v1 + v2),
                    unit: mul_mod(self.unit % m, other.unit % m, m),
                    precision,
                })
            }
            _ => Ok(PadicNumber {
                prime: self.prime,
                valuation: None,
                unit: 0,
                precision: self.precision.max(other.precision),
            }),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation.ok_or(Error::DivisionByZero)?;
        let m = modulus(self.prime, self.precision);
        Ok(PadicNumber {
            prime: self.prime,
            valuation: Some(-v),
            unit: inv_mod(self.unit, m).expect("unit is invertible"),
            precision: self.precision,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplication by `l^k`, exact.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.valuation = self.valuation.map(|v| v + k);
        out
    }

    /// Equality of the digits both operands know.
    pub fn eq_at_shared_precision(&self, other: &Self) -> bool {
        match (self.valuation, other.valuation) {
            (None, None) => true,
            (Some(_), Some(_)) => matches!(self.add_inner(&other.neg()), Ok(None)),
            _ => false,
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0 (exact, Q_{})", self.prime),
            Some(v) => write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.prime,
                v,
                self.unit,
                self.prime,
                v + self.precision as i64
            ),
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One arithmetic operation on two l-adic numbers.
pub fn padic_arith(x: &PadicNumber, y: &PadicNumber, op: PadicOp) -> Result<PadicNumber> {
    match op {
        PadicOp::Add => x.checked_add(y),
        PadicOp::Sub => x.checked_sub(y),
        PadicOp::Mul => x.checked_mul(y),
        PadicOp::Div => x.checked_div(y),
    }
}

/// Square root in Q_l by Hensel lifting, or a proof by criterion that none
/// exists.
pub fn hensel_sqrt(a: &PadicNumber) -> Result<SqrtOutcome> {
    let v = a
        .valuation
        .ok_or_else(|| Error::InvalidArgument("square root of zero is not supported".into()))?;
    let l = a.prime;
    let n = a.precision;
    if v.rem_euclid(2) == 1 {
        return Ok(SqrtOutcome::NotASquare(format!("odd valuation {v}")));
    }
    let root = if l == 2 {
        if n < 3 {
            return Err(Error::PrecisionExhausted(format!(
                "need at least 3 binary digits to decide squareness, have {n}"
            )));
        }
        if a.unit % 8 != 1 {
            return Ok(SqrtOutcome::NotASquare(format!(
                "unit part {} is not 1 mod 8",
                a.unit % 8
            )));
        }
        // r^2 = u mod 2^k  =>  r or r + 2^(k-1) works mod 2^(k+1).
        let m = modulus(2, n);
        let mut r: u128 = 1;
        for k in 3..n {
            let next = 1u128 << (k + 1);
            if mul_mod(r, r, m) % next != a.unit % next {
                r += 1u128 << (k - 1);
            }
        }
        PadicNumber {
            prime: 2,
            valuation: Some(v / 2),
            unit: r % modulus(2, n - 1),
            precision: n - 1,
        }
    } else {
        let u0 = (a.unit % l as u128) as u64;
        let r0 = match sqrt_mod_prime(u0, l) {
            Some(r) => r,
            None => {
                return Ok(SqrtOutcome::NotASquare(format!(
                    "unit part {u0} is a non-residue mod {l}"
                )))
            }
        };
        // Newton: r <- r - (r^2 - u) / (2r), doubling the known digits.
        let m = modulus(l, n);
        let mut r = r0 as u128;
        let mut known = 1u32;
        while known < n {
            let f = (mul_mod(r, r, m) + m - a.unit) % m;
            let inv = inv_mod(mul_mod(2, r, m), m).expect("2r is a unit");
            r = (r + m - mul_mod(f, inv, m)) % m;
            known *= 2;
        }
        PadicNumber {
            prime: l,
            valuation: Some(v / 2),
            unit: r,
            precision: n,
        }
    };
    Ok(SqrtOutcome::Root(root))
}

impl PadicNumber {
    /// Signed integer representative of the unit part in `(-l^N/2, l^N/2]`.
    pub fn unit_signed(&self) -> BigInt {
        let m = BigInt::from(modulus(self.prime, self.precision));
        let u = BigInt::from(self.unit);
        if &u * 2 > m {
            u - m
        } else {
            u
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn pn(p: u64, x: i64) -> PadicNumber {
        PadicNumber::from_i64(p, x, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn product_adds_valuations() {
        let x = PadicNumber::from_parts(5, 1, &BigInt::from(1), 32).unwrap();
        let y = PadicNumber::from_parts(5, 1, &BigInt::from(4), 32).unwrap();
        let z = padic_arith(&x, &y, PadicOp::Mul).unwrap();
        assert_eq!(z.valuation(), Some(2));
        assert_eq!(z.unit(), BigUint::from(4u32));
    }

    #[test]
    fn zero_is_additive_identity() {
        let one = pn(3, 1);
        let zero = PadicNumber::zero(3, 32).unwrap();
        assert_eq!(padic_arith(&one, &zero, PadicOp::Add).unwrap(), one);
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let x = PadicNumber::from_rational(7, &rat(1, 7), 32).unwrap();
        assert_eq!(x.valuation(), Some(-1));
        let y = pn(7, 7);
        let z = padic_arith(&x, &y, PadicOp::Mul).unwrap();
        assert_eq!(z.valuation(), Some(0));
        assert_eq!(z.unit(), BigUint::from(1u32));
    }

    #[test]
    fn division_by_zero() {
        let zero = PadicNumber::zero(3, 8).unwrap();
        assert_eq!(
            padic_arith(&pn(3, 2), &zero, PadicOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn total_cancellation_exhausts_precision() {
        let x = PadicNumber::from_rational(5, &rat(1, 3), 4).unwrap();
        let err = padic_arith(&x, &x, PadicOp::Sub).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted(_)));
        assert!(x.sub_flush(&x).unwrap().is_zero());
    }

    #[test]
    fn cancellation_lowers_relative_precision() {
        // 1 - 26 = -25 in Q_5: valuation 2, two digits lost.
        let x = pn(5, 1);
        let y = pn(5, 26);
        let z = x.checked_sub(&y).unwrap();
        assert_eq!(z.valuation(), Some(2));
        assert_eq!(z.precision(), 30);
        assert_eq!(z.to_rational(), {
            let m = BigInt::from(5u32).pow(30);
            Rational::from_integer((BigInt::from(-1) % &m + &m) % &m * 25)
        });
    }

    #[test]
    fn precision_cap_for_large_primes() {
        let x = PadicNumber::from_i64(1_000_003, 5, 32).unwrap();
        assert!(x.precision() < 32);
        assert!(x.precision() >= 6);
    }

    #[test]
    fn sqrt_of_two_mod_seven() {
        let a = pn(7, 2);
        let SqrtOutcome::Root(r) = hensel_sqrt(&a).unwrap() else {
            panic!("2 is a square in Q_7")
        };
        assert_eq!(r.residue().unwrap() * r.residue().unwrap() % 7, 2);
        let sq = r.checked_mul(&r).unwrap();
        assert!(sq.eq_at_shared_precision(&a));
    }

    #[test]
    fn sqrt_rejections() {
        assert!(matches!(
            hensel_sqrt(&pn(5, 5)).unwrap(),
            SqrtOutcome::NotASquare(_)
        ));
        assert!(matches!(
            hensel_sqrt(&pn(2, -1)).unwrap(),
            SqrtOutcome::NotASquare(_)
        ));
        let low = PadicNumber::from_i64(2, 17, 2).unwrap();
        assert!(matches!(
            hensel_sqrt(&low),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn two_adic_root_of_17() {
        let a = pn(2, 17);
        let SqrtOutcome::Root(r) = hensel_sqrt(&a).unwrap() else {
            panic!("17 = 1 mod 8 is a 2-adic square")
        };
        assert!(r.checked_mul(&r).unwrap().eq_at_shared_precision(&a));
    }

    #[test]
    fn minus_one_mod_eight_is_never_a_square() {
        // Brute force: squares mod 8 are {0, 1, 4}.
        let squares: Vec<u32> = (0..8u32).map(|x| x * x % 8).collect();
        assert!(!squares.contains(&7));
    }
}
