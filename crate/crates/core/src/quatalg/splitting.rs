use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::algebra::{Quaternion, QuaternionAlgebra};
use super::order::QuaternionOrder;
use crate::error::{Error, Result};
use crate::exactnum::arith::{mod_inverse, mul_mod};
use crate::exactnum::{is_prime, Rational};

/// A 2x2 matrix over `Z / modulus`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2Mod {
    pub modulus: u64,
    pub m: [[u64; 2]; 2],
}

impl Mat2Mod {
    pub fn zero(modulus: u64) -> Self {
        Mat2Mod { modulus, m: [[0; 2]; 2] }
    }

    pub fn identity(modulus: u64) -> Self {
        Mat2Mod { modulus, m: [[1 % modulus, 0], [0, 1 % modulus]] }
    }

    pub fn add(&self, o: &Self) -> Self {
        let q = self.modulus;
        let mut m = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = (self.m[r][c] + o.m[r][c]) % q;
            }
        }
        Mat2Mod { modulus: q, m }
    }

    pub fn scale(&self, s: u64) -> Self {
        let q = self.modulus;
        Mat2Mod { modulus: q, m: self.m.map(|row| row.map(|x| mul_mod(x, s % q, q))) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = self.modulus;
        let mut m = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = (mul_mod(self.m[r][0], o.m[0][c], q) + mul_mod(self.m[r][1], o.m[1][c], q)) % q;
            }
        }
        Mat2Mod { modulus: q, m }
    }

    pub fn det(&self) -> u64 {
        let q = self.modulus;
        (mul_mod(self.m[0][0], self.m[1][1], q) + q - mul_mod(self.m[0][1], self.m[1][0], q)) % q
    }

    /// Entry-wise reduction to a smaller modulus dividing this one.
    pub fn reduce(&self, modulus: u64) -> Self {
        Mat2Mod { modulus, m: self.m.map(|row| row.map(|x| x % modulus)) }
    }
}

impl fmt::Debug for Mat2Mod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.m, self.modulus)
    }
}

/// An explicit isomorphism `O / l^k O -> M(2, Z / l^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingData {
    prime: u64,
    exponent: u32,
    modulus: u64,
    /// Images of `1, i, j, k`.
    images: [Mat2Mod; 4],
    /// Images of the order basis.
    order_images: [Mat2Mod; 4],
    /// Coordinates of `1, i, j, k` in the order basis are needed to reduce
    /// general elements; kept alongside for self-containment.
    order: QuaternionOrder,
}

impl SplittingData {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn images(&self) -> &[Mat2Mod; 4] {
        &self.images
    }

    pub fn order_images(&self) -> &[Mat2Mod; 4] {
        &self.order_images
    }

    /// Image of an element of `O[1/m]` for any `m` prime to `l`.
    pub fn reduce(&self, x: &Quaternion) -> Result<Mat2Mod> {
        let coords = self.order.coordinates(x);
        let mut acc = Mat2Mod::zero(self.modulus);
        for (c, img) in coords.iter().zip(&self.order_images) {
            let r = reduce_rational(c, self.modulus).ok_or_else(|| {
                Error::NotInOrder(format!("{x} has a coordinate {c} not integral at {}", self.prime))
            })?;
            acc = acc.add(&img.scale(r));
        }
        Ok(acc)
    }
}

impl Serialize for SplittingData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let images: Vec<[[u64; 2]; 2]> = self.images.iter().map(|m| m.m).collect();
        let order_images: Vec<[[u64; 2]; 2]> = self.order_images.iter().map(|m| m.m).collect();
        let mut st = s.serialize_struct("SplittingData", 4)?;
        st.serialize_field("prime", &self.prime)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("images", &images)?;
        st.serialize_field("order_images", &order_images)?;
        st.end()
    }
}

/// `x mod q` for a rational whose denominator is prime to `q`.
pub(crate) fn reduce_rational(x: &Rational, q: u64) -> Option<u64> {
    let qb = BigInt::from(q);
    let n = x.numer().mod_floor(&qb);
    let d = mod_inverse(x.denom(), &qb)?;
    ((n * d) % &qb).to_u64()
}

type Coords = [u64; 4];

/// Arithmetic of `O / q O` in order-basis coordinates.
struct ResidueOrder<'a> {
    q: u64,
    structure: &'a [[[i64; 4]; 4]; 4],
    traces: [i64; 4],
}

impl ResidueOrder<'_> {
    fn red(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        let q = self.q;
        let mut out = [0u64; 4];
        for m in 0..4 {
            if x[m] == 0 {
                continue;
            }
            for n in 0..4 {
                if y[n] == 0 {
                    continue;
                }
                let xy = mul_mod(x[m], y[n], q);
                for r in 0..4 {
                    let s = self.red(self.structure[m][n][r]);
                    out[r] = (out[r] + mul_mod(xy, s, q)) % q;
                }
            }
        }
        out
    }

    fn trd(&self, x: &Coords) -> u64 {
        (0..4).fold(0, |acc, m| (acc + mul_mod(x[m], self.red(self.traces[m]), self.q)) % self.q)
    }

    /// `nrd(x) = x * conj(x) = trd(x) x - x^2`, read off the scalar part.
    fn nrd(&self, x: &Coords) -> u64 {
        let sq = self.mul(x, x);
        let t = self.trd(x);
        // x^2 - trd(x) x + nrd(x) = 0, and e_0 = 1.
        let lin: Coords = std::array::from_fn(|m| (mul_mod(t, x[m], self.q) + self.q - sq[m]) % self.q);
        lin[0]
    }

    fn lin(&self, a: u64, x: &Coords, b: u64, y: &Coords) -> Coords {
        std::array::from_fn(|m| (mul_mod(a, x[m], self.q) + mul_mod(b, y[m], self.q)) % self.q)
    }
}

const EXHAUSTIVE_LIMIT: u64 = 13;

/// Finds `O / l O` zero divisor, builds a rank-one idempotent from it, lifts
/// the idempotent to `l^k`, and represents `O / l^k O` on the left ideal it
/// generates.
pub fn split_mod(
    alg: &QuaternionAlgebra,
    order: &QuaternionOrder,
    l: u64,
    k: u32,
    seed: u64,
) -> Result<SplittingData> {
    if !is_prime(l) || alg.p().is_multiple_of(l) || order.discriminant().is_multiple_of(l) {
        return Err(Error::InvalidArgument(format!(
            "splitting needs a prime l not dividing the discriminant, got {l}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("exponent k must be at least 1".into()));
    }
    let q = l
        .checked_pow(k)
        .filter(|q| *q < 1 << 62)
        .ok_or_else(|| Error::InvalidArgument(format!("{l}^{k} is too large")))?;
    let ro_l = ResidueOrder { q: l, structure: order.structure_constants(), traces: order.traces() };
    let zd = find_zero_divisor(&ro_l, l, seed).ok_or(Error::NoZeroDivisor(l))?;

    // e = x y / trd(x y) for a basis element y with trd(x y) a unit.
    let mut idem = None;
    for n in 0..4 {
        let mut y = [0u64; 4];
        y[n] = 1;
        let xy = ro_l.mul(&zd, &y);
        let t = ro_l.trd(&xy);
        if t != 0 {
            let inv = mod_inverse(&BigInt::from(t), &BigInt::from(l)).unwrap().to_u64().unwrap();
            idem = Some(xy.map(|c| mul_mod(c, inv, l)));
            break;
        }
    }
    let e1 = idem.ok_or(Error::NoZeroDivisor(l))?;
    debug_assert_eq!(ro_l.mul(&e1, &e1), e1);

    // Lift: e <- 3e^2 - 2e^3 converges quadratically to an idempotent.
    let ro = ResidueOrder { q, structure: order.structure_constants(), traces: order.traces() };
    let mut e = e1;
    let mut known = 1;
    while known < k {
        let e2 = ro.mul(&e, &e);
        let e3 = ro.mul(&e2, &e);
        e = ro.lin(3, &e2, q - 2 % q, &e3);
        known *= 2;
    }
    if ro.mul(&e, &e) != e {
        return Err(Error::NoZeroDivisor(l));
    }

    // Basis of the left ideal (O/qO) e from the products e_n e.
    let gens: Vec<Coords> = (0..4)
        .map(|n| {
            let mut b = [0u64; 4];
            b[n] = 1;
            ro.mul(&b, &e)
        })
        .collect();
    let (v1, v2, rows) = ideal_basis(&gens, l).ok_or(Error::NoZeroDivisor(l))?;

    let represent = |x: &Coords| -> Result<Mat2Mod> {
        let mut m = [[0u64; 2]; 2];
        for (col, v) in [v1, v2].iter().enumerate() {
            let w = ro.mul(x, v);
            let (c1, c2) = solve2(&v1, &v2, &w, rows, q).ok_or(Error::NoZeroDivisor(l))?;
            m[0][col] = c1;
            m[1][col] = c2;
        }
        Ok(Mat2Mod { modulus: q, m })
    };
    let mut order_images = [Mat2Mod::zero(q); 4];
    for n in 0..4 {
        let mut b = [0u64; 4];
        b[n] = 1;
        order_images[n] = represent(&b)?;
    }
    let standard = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
    let mut images = [Mat2Mod::zero(q); 4];
    for (img, x) in images.iter_mut().zip(&standard) {
        let coords = order.coordinates(x);
        let mut acc = Mat2Mod::zero(q);
        for (c, oi) in coords.iter().zip(&order_images) {
            let r = reduce_rational(c, q).ok_or_else(|| Error::NotInOrder(x.to_string()))?;
            acc = acc.add(&oi.scale(r));
        }
        *img = acc;
    }
    let data = SplittingData {
        prime: l,
        exponent: k,
        modulus: q,
        images,
        order_images,
        order: order.clone(),
    };
    check_relations(alg, &data)?;
    Ok(data)
}

fn find_zero_divisor(ro: &ResidueOrder<'_>, l: u64, seed: u64) -> Option<Coords> {
    let nonzero_divisor = |x: &Coords| x.iter().any(|&c| c != 0) && ro.nrd(x) == 0;
    if l <= EXHAUSTIVE_LIMIT {
        for c in 1..l.pow(4) {
            let x: Coords = std::array::from_fn(|m| c / l.pow(m as u32) % l);
            if nonzero_divisor(&x) {
                return Some(x);
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..200 * l * l).find_map(|_| {
            let x: Coords = std::array::from_fn(|_| rng.gen_range(0..l));
            nonzero_divisor(&x).then_some(x)
        })
    }
}

/// Two generators independent mod `l`, plus a pair of coordinates whose 2x2
/// minor is a unit.
fn ideal_basis(gens: &[Coords], l: u64) -> Option<(Coords, Coords, (usize, usize))> {
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            for r1 in 0..4 {
                for r2 in r1 + 1..4 {
                    let minor = (mul_mod(gens[a][r1] % l, gens[b][r2] % l, l) + l
                        - mul_mod(gens[a][r2] % l, gens[b][r1] % l, l))
                        % l;
                    if minor != 0 {
                        return Some((gens[a], gens[b], (r1, r2)));
                    }
                }
            }
        }
    }
    None
}

/// Solves `w = c1 v1 + c2 v2` mod `q`, checking all four coordinates.
fn solve2(v1: &Coords, v2: &Coords, w: &Coords, rows: (usize, usize), q: u64) -> Option<(u64, u64)> {
    let (r1, r2) = rows;
    let det = (mul_mod(v1[r1], v2[r2], q) + q - mul_mod(v1[r2], v2[r1], q)) % q;
    let inv = mod_inverse(&BigInt::from(det), &BigInt::from(q))?.to_u64()?;
    let c1 = mul_mod(inv, (mul_mod(w[r1], v2[r2], q) + q - mul_mod(w[r2], v2[r1], q)) % q, q);
    let c2 = mul_mod(inv, (mul_mod(v1[r1], w[r2], q) + q - mul_mod(v1[r2], w[r1], q)) % q, q);
    let ok = (0..4).all(|m| (mul_mod(c1, v1[m], q) + mul_mod(c2, v2[m], q)) % q == w[m]);
    ok.then_some((c1, c2))
}

fn check_relations(alg: &QuaternionAlgebra, s: &SplittingData) -> Result<()> {
    let q = s.modulus;
    let [one, i, j, k] = &s.images;
    let a = reduce_rational(alg.a(), q).unwrap();
    let b = reduce_rational(alg.b(), q).unwrap();
    let bad = |what: &str| {
        Err(Error::InvalidArgument(format!("splitting mod {q} violates {what}")))
    };
    if *one != Mat2Mod::identity(q) {
        return bad("1 -> identity");
    }
    if i.mul(i) != one.scale(a) {
        return bad("i^2 = a");
    }
    if j.mul(j) != one.scale(b) {
        return bad("j^2 = b");
    }
    if i.mul(j) != *k || j.mul(i).add(k) != Mat2Mod::zero(q) {
        return bad("ij = -ji = k");
    }
    // The order basis must map onto a Z/q-basis of M(2, Z/q).
    let rows: Vec<Vec<Rational>> = s
        .order_images
        .iter()
        .map(|m| m.m.iter().flatten().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    let det = super::field::determinant(&super::field::RationalField, rows);
    if det.to_integer().mod_floor(&BigInt::from(s.prime)) == BigInt::from(0) {
        return bad("order basis spans M(2, Z/q)");
    }
    Ok(())
}
