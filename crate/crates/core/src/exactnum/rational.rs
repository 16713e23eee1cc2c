use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::arith::trailing_valuation;

/// Rationals are `num_rational::BigRational`: always reduced with a positive
/// denominator, so equality is structural.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `v_p(x)`, or `None` for zero.
pub fn valuation_of_rational(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (vn, _) = trailing_valuation(x.numer(), p);
    let (vd, _) = trailing_valuation(x.denom(), p);
    Some(vn as i64 - vd as i64)
}
