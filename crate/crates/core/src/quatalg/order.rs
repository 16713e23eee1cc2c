use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::algebra::{Quaternion, QuaternionAlgebra};
use super::field::{determinant, RationalField};
use crate::error::{Error, Result};
use crate::exactnum::{factor_small, Rational};

/// A Z-order of the algebra, given by a basis whose first element is `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionOrder {
    basis: [Quaternion; 4],
    /// Row `m` holds the coordinates of the standard basis element `m`
    /// (`1, i, j, k`) in the order basis.
    inverse: [[Rational; 4]; 4],
    /// `e_m e_n = sum_r structure[m][n][r] e_r`.
    structure: [[[i64; 4]; 4]; 4],
    discriminant: u64,
}

fn coords_matrix(basis: &[Quaternion; 4]) -> Vec<Vec<Rational>> {
    basis.iter().map(|q| q.coeffs().to_vec()).collect()
}

fn invert4(m: &[Vec<Rational>]) -> Option<[[Rational; 4]; 4]> {
    let n = 4;
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut row = row.clone();
            row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    Some(std::array::from_fn(|r| std::array::from_fn(|c| a[r][n + c].clone())))
}

/// Reduced discriminant `sqrt|det(trd(e_m e_n))|`, if it is an integer.
fn reduced_discriminant(alg: &QuaternionAlgebra, basis: &[Quaternion; 4]) -> Option<BigInt> {
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| alg.mul(x, y).trd()).collect())
        .collect();
    let det = determinant(&RationalField, gram).abs();
    if !det.is_integer() {
        return None;
    }
    let det = det.to_integer();
    let root = det.sqrt();
    (&root * &root == det).then_some(root)
}

/// Hermite basis of the Z-lattice spanned by `rows` (integer vectors),
/// upper triangular in the given column order.
fn hnf(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..width {
        // Euclid on column `col` across the remaining rows.
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&r| rows[r][col].abs());
            let piv = nz[0];
            for &r in &nz[1..] {
                let q = rows[r][col].div_floor(&rows[piv][col]);
                let prow = rows[piv].clone();
                for (x, y) in rows[r].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(r) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            let mut row = rows.swap_remove(r);
            if row[col].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            basis.push(row);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // Reduce entries above each pivot.
    for i in 0..basis.len() {
        let col = basis[i].iter().position(|x| !x.is_zero()).unwrap();
        for r in 0..i {
            let q = basis[r][col].div_floor(&basis[i][col]);
            if !q.is_zero() {
                let prow = basis[i].clone();
                for (x, y) in basis[r].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

/// Z-basis of the lattice spanned by rational quaternions, ordered so that
/// the last Hermite row (pure scalar part) comes first.
fn lattice_basis(gens: &[Quaternion]) -> Option<[Quaternion; 4]> {
    let denom = gens
        .iter()
        .flat_map(|q| q.coeffs().iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // Column order (k, j, i, 1) puts the scalar direction last.
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|q| {
            (0..4)
                .rev()
                .map(|m| (&q.coeffs()[m] * Rational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let h = hnf(rows);
    if h.len() != 4 {
        return None;
    }
    let to_quat = |row: &Vec<BigInt>| {
        Quaternion(std::array::from_fn(|m| {
            Rational::new(row[3 - m].clone(), denom.clone())
        }))
    };
    Some([to_quat(&h[3]), to_quat(&h[0]), to_quat(&h[1]), to_quat(&h[2])])
}

impl QuaternionOrder {
    /// Builds the order with the given basis, checking closure under
    /// multiplication and that `1` is the first basis element.
    pub fn from_basis(alg: &QuaternionAlgebra, basis: [Quaternion; 4]) -> Result<Self> {
        if basis[0] != Quaternion::one() {
            return Err(Error::InvalidArgument("first basis element must be 1".into()));
        }
        let inverse = invert4(&coords_matrix(&basis))
            .ok_or_else(|| Error::InvalidArgument("basis is not linearly independent".into()))?;
        let mut structure = [[[0i64; 4]; 4]; 4];
        for m in 0..4 {
            for n in 0..4 {
                let prod = alg.mul(&basis[m], &basis[n]);
                let c = coordinates_with(&inverse, &prod);
                for r in 0..4 {
                    if !c[r].is_integer() {
                        return Err(Error::InvalidArgument(format!(
                            "basis is not closed under multiplication: e{m} e{n} = {prod}"
                        )));
                    }
                    structure[m][n][r] = c[r].to_integer().to_i64().ok_or_else(|| {
                        Error::InvalidArgument("structure constant overflow".into())
                    })?;
                }
            }
        }
        let disc = reduced_discriminant(alg, &basis)
            .and_then(|d| d.to_u64())
            .ok_or_else(|| Error::InvalidArgument("discriminant is not an integer".into()))?;
        Ok(QuaternionOrder {
            basis,
            inverse,
            structure,
            discriminant: disc,
        })
    }

    pub fn basis(&self) -> &[Quaternion; 4] {
        &self.basis
    }

    pub fn discriminant(&self) -> u64 {
        self.discriminant
    }

    pub fn structure_constants(&self) -> &[[[i64; 4]; 4]; 4] {
        &self.structure
    }

    /// Coordinates of `x` in the order basis.
    pub fn coordinates(&self, x: &Quaternion) -> [Rational; 4] {
        coordinates_with(&self.inverse, x)
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.coordinates(x).iter().all(Rational::is_integer)
    }

    pub fn element(&self, coords: &[i64; 4]) -> Quaternion {
        (0..4).fold(Quaternion::zero(), |acc, m| {
            &acc + &self.basis[m].scale(&Rational::from_integer(coords[m].into()))
        })
    }

    /// `trd` of each basis element.
    pub fn traces(&self) -> [i64; 4] {
        std::array::from_fn(|m| self.basis[m].trd().to_integer().to_i64().unwrap())
    }
}

fn coordinates_with(inverse: &[[Rational; 4]; 4], x: &Quaternion) -> [Rational; 4] {
    std::array::from_fn(|n| {
        (0..4).fold(Rational::zero(), |acc, m| acc + &x.coeffs()[m] * &inverse[m][n])
    })
}

impl Serialize for QuaternionOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|q| q.coeffs().iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("QuaternionOrder", 2)?;
        st.serialize_field("basis", &basis)?;
        st.serialize_field("discriminant", &self.discriminant)?;
        st.end()
    }
}

/// Smallest ring containing the lattice spanned by `gens`, or `None` as soon
/// as the lattice is provably not inside any order.
fn ring_closure(alg: &QuaternionAlgebra, gens: &[Quaternion]) -> Option<[Quaternion; 4]> {
    let p = BigInt::from(alg.p());
    let mut basis = lattice_basis(gens)?;
    for _ in 0..16 {
        let disc = reduced_discriminant(alg, &basis)?;
        if disc.is_zero() || !(&disc % &p).is_zero() {
            return None;
        }
        let mut all: Vec<Quaternion> = basis.to_vec();
        for x in &basis {
            for y in &basis {
                all.push(alg.mul(x, y));
            }
        }
        let next = lattice_basis(&all)?;
        if next == basis {
            return (basis[0] == Quaternion::one()).then_some(basis);
        }
        basis = next;
    }
    None
}

/// A maximal order: saturate `Z<1, i, j, k>` one prime at a time by
/// adjoining integral elements of `(1/l) O` until the reduced discriminant
/// equals `p`.
pub fn maximal_order(alg: &QuaternionAlgebra) -> Result<QuaternionOrder> {
    let p = alg.p();
    let mut order = QuaternionOrder::from_basis(
        alg,
        [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()],
    )?;
    loop {
        let disc = BigInt::from(order.discriminant());
        let excess = factor_small(&disc).into_iter().find(|&l| {
            let l2 = BigInt::from(l * l);
            l != p || (&disc % &l2).is_zero()
        });
        let Some(l) = excess else { break };
        let li = l as i64;
        let mut grown = None;
        'search: for c0 in 0..li {
            for c1 in 0..li {
                for c2 in 0..li {
                    for c3 in 0..li {
                        if c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0 {
                            continue;
                        }
                        let x = order
                            .element(&[c0, c1, c2, c3])
                            .scale(&Rational::new(1.into(), l.into()));
                        if !x.trd().is_integer() || !alg.nrd(&x).is_integer() {
                            continue;
                        }
                        let mut gens = order.basis().to_vec();
                        gens.push(x);
                        if let Some(b) = ring_closure(alg, &gens) {
                            grown = Some(b);
                            break 'search;
                        }
                    }
                }
            }
        }
        let basis = grown.ok_or_else(|| {
            Error::SaturationFailed(format!(
                "no integral overorder at l = {l} (discriminant {disc})"
            ))
        })?;
        let next = QuaternionOrder::from_basis(alg, basis)?;
        if next.discriminant() >= order.discriminant() {
            return Err(Error::SaturationFailed("discriminant did not decrease".into()));
        }
        order = next;
    }
    if order.discriminant() != p {
        return Err(Error::SaturationFailed(format!(
            "final discriminant {} != {p}",
            order.discriminant()
        )));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::quatalg::choose_algebra;

    #[test]
    fn standard_order_discriminant() {
        let alg = choose_algebra(3).unwrap();
        let o = QuaternionOrder::from_basis(
            &alg,
            [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()],
        )
        .unwrap();
        // 4 |ab| = 12
        assert_eq!(o.discriminant(), 12);
        let max = maximal_order(&alg).unwrap();
        assert_eq!(max.discriminant(), 3);
        assert!(max.discriminant() < o.discriminant());
    }

    #[test]
    fn maximal_order_for_seven() {
        let alg = choose_algebra(7).unwrap();
        let o = maximal_order(&alg).unwrap();
        assert_eq!(o.discriminant(), 7);
        assert_eq!(o.basis()[0], Quaternion::one());
        for x in o.basis() {
            for y in o.basis() {
                assert!(o.contains(&alg.mul(x, y)));
            }
        }
        for q in [Quaternion::i(), Quaternion::j(), Quaternion::k()] {
            assert!(o.contains(&q));
        }
        assert!(!o.contains(&Quaternion::scalar(rat(1, 2))));
    }

    #[test]
    fn non_closed_basis_rejected() {
        let alg = choose_algebra(3).unwrap();
        let half_i = Quaternion::i().scale(&rat(1, 2));
        assert!(QuaternionOrder::from_basis(
            &alg,
            [Quaternion::one(), half_i, Quaternion::j(), Quaternion::k()]
        )
        .is_err());
    }

    #[test]
    fn hnf_spans_same_lattice() {
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(3), BigInt::from(5)],
            vec![BigInt::from(1), BigInt::from(1)],
        ];
        let h = hnf(rows);
        // (3,5) - 3(1,1) = (0,2) and (2,4) - 2(1,1) = (0,2): index 2 in Z^2.
        assert_eq!(h, vec![vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(0), BigInt::from(2)]]);
    }
}
