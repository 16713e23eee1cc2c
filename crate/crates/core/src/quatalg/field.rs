use num_traits::{One, Zero};

use crate::exactnum::Rational;

/// Minimal field interface for exact Gaussian elimination.
pub trait FieldOps {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), x)
    }
    /// `None` only for zero.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
}

/// Determinant of a square matrix by Gaussian
/// elimination over an exact field.
pub fn determinant<F: FieldOps>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !field.is_zero(&m[r][col])) else {
            return field.zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[col][col]);
        let inv = field.inv(&m[col][col]).expect("pivot is nonzero");
        for r in col + 1..n {
            if field.is_zero(&m[r][col]) {
                continue;
            }
            let factor = field.mul(&m[r][col], &inv);
            for c in col..n {
                let t = field.mul(&factor, &m[col][c]);
                m[r][c] = field.sub(&m[r][c], &t);
            }
        }
    }
    det
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

impl FieldOps for RationalField {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, x: &Rational) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Rational, y: &Rational) -> Rational {
        x + y
    }
    fn sub(&self, x: &Rational, y: &Rational) -> Rational {
        x - y
    }
    fn mul(&self, x: &Rational, y: &Rational) -> Rational {
        x * y
    }
    fn inv(&self, x: &Rational) -> Option<Rational> {
        (!x.is_zero()).then(|| x.recip())
    }
}

/// `r + s * sqrt(d)` in `Q(sqrt d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub r: Rational,
    pub s: Rational,
}

impl QuadElem {
    pub fn new(r: Rational, s: Rational) -> Self {
        QuadElem { r, s }
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.r.clone(), -&self.s)
    }
}

/// The quadratic field `Q(sqrt d)`, `d` a non-square.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    pub d: Rational,
}

impl FieldOps for QuadraticField {
    type Elem = QuadElem;
    fn zero(&self) -> QuadElem {
        QuadElem::new(Rational::zero(), Rational::zero())
    }
    fn one(&self) -> QuadElem {
        QuadElem::new(Rational::one(), Rational::zero())
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.r.is_zero() && x.s.is_zero()
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.r + &y.r, &x.s + &y.s)
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.r - &y.r, &x.s - &y.s)
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(
            &x.r * &y.r + &self.d * (&x.s * &y.s),
            &x.r * &y.s + &x.s * &y.r,
        )
    }
    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        let norm = &x.r * &x.r - &self.d * (&x.s * &x.s);
        if norm.is_zero() {
            return None;
        }
        Some(QuadElem::new(&x.r / &norm, -&x.s / &norm))
    }
}
