use num_traits::One;

use super::algebra::{Quaternion, QuaternionAlgebra};
use super::mat2::{nrd_mat, Mat2Quat};
use super::order::QuaternionOrder;
use super::splitting::SplittingData;
use crate::congruence::FiniteMatrix;
use crate::error::{Error, Result};
use crate::exactnum::{rat_int, trailing_valuation};

/// An element of `SL(2, O[1/p])`: reduced norm exactly one and every entry in
/// the maximal order after clearing a power of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaElement {
    matrix: Mat2Quat,
    denominator_exponent: u32,
}

impl GammaElement {
    pub fn new(alg: &QuaternionAlgebra, order: &QuaternionOrder, matrix: Mat2Quat) -> Result<Self> {
        let norm = nrd_mat(alg, &matrix)?;
        if !norm.is_one() {
            return Err(Error::InvalidArgument(format!("Nrd = {norm}, expected 1")));
        }
        let mut exponent = 0u32;
        for x in matrix.entries() {
            for c in order.coordinates(x) {
                let (e, rest) = trailing_valuation(c.denom(), alg.p());
                if !rest.is_one() {
                    return Err(Error::NotInOrder(format!(
                        "{x} has a denominator prime to p = {}",
                        alg.p()
                    )));
                }
                exponent = exponent.max(e);
            }
        }
        Ok(GammaElement { matrix, denominator_exponent: exponent })
    }

    pub fn matrix(&self) -> &Mat2Quat {
        &self.matrix
    }

    /// Least `e` with `p^e * entries` inside the order.
    pub fn denominator_exponent(&self) -> u32 {
        self.denominator_exponent
    }

    pub fn mul(&self, alg: &QuaternionAlgebra, order: &QuaternionOrder, other: &Self) -> Result<Self> {
        Self::new(alg, order, self.matrix.mul(alg, &other.matrix))
    }
}

/// `diag(x, x^{-1})` with `x` of reduced norm `p` in the order: `x = j` when
/// `b = -p`, otherwise the first norm-`p` element found by enumeration, and
/// `diag(p, 1/p)` if there is none.
pub fn hyperbolic_generator(alg: &QuaternionAlgebra, order: &QuaternionOrder) -> Result<GammaElement> {
    let p = alg.p();
    let target = rat_int(p as i64);
    let x = if alg.nrd(&Quaternion::j()) == target {
        Some(Quaternion::j())
    } else {
        norm_p_element(alg, order)
    };
    let (x, xinv) = match x {
        Some(x) => {
            let inv = alg.inv(&x)?;
            (x, inv)
        }
        None => (
            Quaternion::scalar(target.clone()),
            Quaternion::scalar(target.recip()),
        ),
    };
    GammaElement::new(alg, order, Mat2Quat::diag(x, xinv))
}

/// Norm form of the order is positive definite; search coordinates in a
/// growing box.
fn norm_p_element(alg: &QuaternionAlgebra, order: &QuaternionOrder) -> Option<Quaternion> {
    let target = rat_int(alg.p() as i64);
    let bound = 6i64;
    for c0 in -bound..=bound {
        for c1 in -bound..=bound {
            for c2 in -bound..=bound {
                for c3 in -bound..=bound {
                    let x = order.element(&[c0, c1, c2, c3]);
                    if alg.nrd(&x) == target {
                        return Some(x);
                    }
                }
            }
        }
    }
    None
}

/// Upper and lower unipotents over the order basis, then the hyperbolic
/// diagonal element: nine generators.
pub fn gamma_generators(alg: &QuaternionAlgebra, order: &QuaternionOrder) -> Result<Vec<GammaElement>> {
    let mut out = Vec::with_capacity(9);
    for x in order.basis() {
        out.push(GammaElement::new(alg, order, Mat2Quat::upper(x.clone()))?);
    }
    for x in order.basis() {
        out.push(GammaElement::new(alg, order, Mat2Quat::lower(x.clone()))?);
    }
    out.push(hyperbolic_generator(alg, order)?);
    Ok(out)
}

/// Image of `g` in `SL(4, Z / l^k)` through the splitting.
pub fn reduce_gamma(g: &GammaElement, split: &SplittingData) -> Result<FiniteMatrix> {
    let q = split.modulus();
    let mut m = [[0u64; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            let block = split.reduce(g.matrix().entry(r, c))?;
            for br in 0..2 {
                for bc in 0..2 {
                    m[2 * r + br][2 * c + bc] = block.m[br][bc];
                }
            }
        }
    }
    let out = FiniteMatrix::from_rows(q, &m);
    let det = out.det();
    if det != 1 % q {
        return Err(Error::DeterminantNotOne { det, modulus: q });
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::quatalg::{choose_algebra, maximal_order, split_mod};

    #[test]
    fn generator_shapes() {
        for p in [3, 5, 7] {
            let alg = choose_algebra(p).unwrap();
            let o = maximal_order(&alg).unwrap();
            let gens = gamma_generators(&alg, &o).unwrap();
            assert_eq!(gens.len(), 9);
            for g in &gens[..8] {
                assert_eq!(g.denominator_exponent(), 0);
                assert!(nrd_mat(&alg, g.matrix()).unwrap().is_one());
            }
            assert_eq!(gens[8].denominator_exponent(), 1);
            let jinv = Quaternion::j().scale(&rat(-1, p as i64));
            assert_eq!(gens[8].matrix(), &Mat2Quat::diag(Quaternion::j(), jinv));
        }
    }

    #[test]
    fn non_unit_norm_rejected() {
        let alg = choose_algebra(3).unwrap();
        let o = maximal_order(&alg).unwrap();
        let g = Mat2Quat::diag(Quaternion::j(), Quaternion::one());
        assert!(GammaElement::new(&alg, &o, g).is_err());
        let half = Quaternion::scalar(rat(1, 2));
        let g = Mat2Quat::upper(half);
        assert!(matches!(GammaElement::new(&alg, &o, g), Err(Error::NotInOrder(_))));
    }

    #[test]
    fn reductions_have_unit_determinant() {
        let alg = choose_algebra(7).unwrap();
        let o = maximal_order(&alg).unwrap();
        let gens = gamma_generators(&alg, &o).unwrap();
        for l in [2u64, 3, 5] {
            let s = split_mod(&alg, &o, l, 3, 0).unwrap();
            for g in &gens {
                let m = reduce_gamma(g, &s).unwrap();
                assert_eq!(m.det(), 1);
            }
            let id = GammaElement::new(&alg, &o, Mat2Quat::identity()).unwrap();
            assert_eq!(reduce_gamma(&id, &s).unwrap(), FiniteMatrix::identity(s.modulus(), 4));
        }
    }
}
