use std::fmt;

use num_traits::Zero;

use super::algebra::{Quaternion, QuaternionAlgebra};
use super::field::{determinant, FieldOps, QuadElem, QuadraticField};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// A 2x2 matrix over the quaternion algebra, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2Quat(pub [[Quaternion; 2]; 2]);

impl Mat2Quat {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        Mat2Quat([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::diag(Quaternion::one(), Quaternion::one())
    }

    pub fn diag(x: Quaternion, y: Quaternion) -> Self {
        Mat2Quat([[x, Quaternion::zero()], [Quaternion::zero(), y]])
    }

    pub fn upper(x: Quaternion) -> Self {
        Mat2Quat([[Quaternion::one(), x], [Quaternion::zero(), Quaternion::one()]])
    }

    pub fn lower(x: Quaternion) -> Self {
        Mat2Quat([[Quaternion::one(), Quaternion::zero()], [x, Quaternion::one()]])
    }

    pub fn entry(&self, r: usize, c: usize) -> &Quaternion {
        &self.0[r][c]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Quaternion> {
        self.0.iter().flatten()
    }

    pub fn mul(&self, alg: &QuaternionAlgebra, other: &Mat2Quat) -> Mat2Quat {
        let e = |r: usize, c: usize| {
            &alg.mul(&self.0[r][0], &other.0[0][c]) + &alg.mul(&self.0[r][1], &other.0[1][c])
        };
        Mat2Quat([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl fmt::Debug for Mat2Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mat2Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// `z + w j -> [[z, w], [b conj(w), conj(z)]]` with `z = x0 + x1 sqrt(a)`,
/// `w = x2 + x3 sqrt(a)`.
pub fn embed_quaternion(alg: &QuaternionAlgebra, x: &Quaternion) -> [[QuadElem; 2]; 2] {
    let [x0, x1, x2, x3] = x.coeffs().clone();
    let z = QuadElem::new(x0, x1);
    let w = QuadElem::new(x2, x3);
    let bw = w.conj();
    let bw = QuadElem::new(alg.b() * &bw.r, alg.b() * &bw.s);
    [[z.clone(), w], [bw, z.conj()]]
}

/// Reduced norm on `M(2, A)`: the determinant of the 4x4 image over
/// `F = Q(sqrt a)`.
pub fn nrd_mat(alg: &QuaternionAlgebra, g: &Mat2Quat) -> Result<Rational> {
    let field = QuadraticField { d: alg.a().clone() };
    let mut big = vec![vec![field.zero(); 4]; 4];
    for (r, row) in g.0.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            let block = embed_quaternion(alg, x);
            for (br, brow) in block.into_iter().enumerate() {
                for (bc, v) in brow.into_iter().enumerate() {
                    big[2 * r + br][2 * c + bc] = v;
                }
            }
        }
    }
    let det = determinant(&field, big);
    if !det.s.is_zero() {
        return Err(Error::NonRationalNorm(format!("{} + {} sqrt({})", det.r, det.s, alg.a())));
    }
    Ok(det.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;
    use crate::quatalg::choose_algebra;

    #[test]
    fn identity_and_unipotents() {
        let alg = choose_algebra(7).unwrap();
        assert_eq!(nrd_mat(&alg, &Mat2Quat::identity()).unwrap(), rat_int(1));
        let x = Quaternion::from_ints([2, -3, 1, 4]);
        assert_eq!(nrd_mat(&alg, &Mat2Quat::upper(x.clone())).unwrap(), rat_int(1));
        assert_eq!(nrd_mat(&alg, &Mat2Quat::lower(x)).unwrap(), rat_int(1));
    }

    #[test]
    fn diagonal_is_product_of_norms() {
        let alg = choose_algebra(5).unwrap();
        let x = Quaternion::from_ints([1, 2, 0, -1]);
        let y = Quaternion::from_ints([0, 1, 3, 2]);
        assert_eq!(
            nrd_mat(&alg, &Mat2Quat::diag(x.clone(), y.clone())).unwrap(),
            alg.nrd(&x) * alg.nrd(&y)
        );
    }

    #[test]
    fn embedding_is_multiplicative() {
        let alg = choose_algebra(3).unwrap();
        let field = QuadraticField { d: alg.a().clone() };
        let x = Quaternion::from_ints([1, 2, -1, 3]);
        let y = Quaternion::from_ints([-2, 0, 5, 1]);
        let (ex, ey, exy) = (
            embed_quaternion(&alg, &x),
            embed_quaternion(&alg, &y),
            embed_quaternion(&alg, &alg.mul(&x, &y)),
        );
        for r in 0..2 {
            for c in 0..2 {
                let v = field.add(
                    &field.mul(&ex[r][0], &ey[0][c]),
                    &field.mul(&ex[r][1], &ey[1][c]),
                );
                assert_eq!(v, exy[r][c]);
            }
        }
    }
}
