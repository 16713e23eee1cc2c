use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::arith::{factor_small, legendre, trailing_valuation};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Prime(l) => write!(f, "{l}"),
        }
    }
}

/// `n * d` lies in the same square class as `n / d`.
fn integral_representative(x: &Rational) -> BigInt {
    x.numer() * x.denom()
}

/// The local Hilbert symbol `(a, b)_place`: `+1` iff `z^2 = a x^2 + b y^2`
/// has a nontrivial solution over the completion.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument(
            "Hilbert symbol needs nonzero arguments".into(),
        ));
    }
    let a = integral_representative(a);
    let b = integral_representative(b);
    Ok(match place {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => symbol_at_two(&a, &b),
        Place::Prime(l) => symbol_at_odd(&a, &b, l),
    })
}

fn symbol_at_odd(a: &BigInt, b: &BigInt, l: u64) -> i8 {
    let (alpha, u) = trailing_valuation(a, l);
    let (beta, v) = trailing_valuation(b, l);
    let mut s: i8 = 1;
    if alpha % 2 == 1 && beta % 2 == 1 && (l - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(&u, l);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, l);
    }
    s
}

/// `(u - 1) / 2 mod 2` for odd `u`.
fn eps(u: &BigInt) -> u32 {
    let r = u.mod_floor(&BigInt::from(4)).to_u32().unwrap();
    if r == 3 {
        1
    } else {
        0
    }
}

/// `(u^2 - 1) / 8 mod 2` for odd `u`.
fn omega(u: &BigInt) -> u32 {
    let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap();
    if r == 3 || r == 5 {
        1
    } else {
        0
    }
}

fn symbol_at_two(a: &BigInt, b: &BigInt) -> i8 {
    let (alpha, u) = trailing_valuation(a, 2);
    let (beta, v) = trailing_valuation(b, 2);
    let e = eps(&u) * eps(&v) + (alpha % 2) * omega(&v) + (beta % 2) * omega(&u);
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Symbols of `(a, b)` at every place where one can be `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFormulaReport {
    /// Places with symbol `-1`, sorted (`inf` first).
    pub ramified: Vec<Place>,
    /// Every place evaluated, with its symbol.
    pub symbols: Vec<(Place, i8)>,
}

impl ProductFormulaReport {
    pub fn product(&self) -> i8 {
        self.symbols.iter().map(|(_, s)| *s).product()
    }
}

/// Evaluates `(a, b)` at infinity and at every prime dividing `2ab`; errors
/// if the product of the symbols is not `+1`.
pub fn verify_product_formula(a: &Rational, b: &Rational) -> Result<ProductFormulaReport> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument(
            "product formula needs nonzero arguments".into(),
        ));
    }
    let mut places = BTreeSet::new();
    places.insert(Place::Infinite);
    places.insert(Place::Prime(2));
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        if !n.abs().is_one() {
            for l in factor_small(n) {
                places.insert(Place::Prime(l));
            }
        }
    }
    let mut symbols = Vec::with_capacity(places.len());
    for place in places {
        symbols.push((place, hilbert_symbol(a, b, place)?));
    }
    let report = ProductFormulaReport {
        ramified: symbols
            .iter()
            .filter(|(_, s)| *s == -1)
            .map(|(p, _)| *p)
            .collect(),
        symbols,
    };
    if report.product() != 1 || !report.ramified.len().is_multiple_of(2) {
        return Err(Error::ReciprocityViolation {
            a: a.to_string(),
            b: b.to_string(),
            symbols: format!("{:?}", report.symbols),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn h(a: i64, b: i64, place: Place) -> i8 {
        hilbert_symbol(&rat_int(a), &rat_int(b), place).unwrap()
    }

    #[test]
    fn minus_one_minus_one() {
        assert_eq!(h(-1, -1, Place::Infinite), -1);
        assert_eq!(h(-1, -1, Place::Prime(2)), -1);
        assert_eq!(h(-1, -1, Place::Prime(3)), 1);
        let r = verify_product_formula(&rat_int(-1), &rat_int(-1)).unwrap();
        assert_eq!(r.ramified, vec![Place::Infinite, Place::Prime(2)]);
    }

    #[test]
    fn square_first_argument_is_unramified() {
        for b in [-7, -3, 2, 5, 11] {
            let r = verify_product_formula(&rat_int(1), &rat_int(b)).unwrap();
            assert!(r.ramified.is_empty());
        }
    }

    #[test]
    fn minus_one_minus_three() {
        let r = verify_product_formula(&rat_int(-1), &rat_int(-3)).unwrap();
        assert_eq!(r.ramified, vec![Place::Infinite, Place::Prime(3)]);
    }

    #[test]
    fn rationals_use_square_class() {
        // (-1/4, -3/25) has the same square classes as (-1, -3).
        for place in [Place::Infinite, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(
                hilbert_symbol(&rat(-1, 4), &rat(-3, 25), place).unwrap(),
                h(-1, -3, place)
            );
        }
        assert_eq!(
            hilbert_symbol(&rat(2, 3), &rat(5, 7), Place::Prime(3)).unwrap(),
            h(6, 35, Place::Prime(3))
        );
    }

    #[test]
    fn zero_argument_rejected() {
        assert!(hilbert_symbol(&rat_int(0), &rat_int(3), Place::Prime(3)).is_err());
    }
}
