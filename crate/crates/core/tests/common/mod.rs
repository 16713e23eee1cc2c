//! Independent oracles shared by the integration and acceptance tests.
//! None of them call into the library's algorithms under test.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use profin_core::exactnum::Rational;

/// Brute-force Hilbert symbol at `l` (0 means the real place): does
/// `z^2 = a x^2 + b y^2` have a nontrivial solution over `Q_l`?
///
/// After removing square factors `l^2` from `a` and `b`, a primitive
/// solution mod `l^k` lifts (Hensel, one variable at a time) when
/// `f = 0 mod l^{2e+1}` with `e` the valuation of some partial derivative;
/// for `v(a), v(b) <= 1` every genuine solution has `e <= 1` (odd `l`) or
/// `e <= 2` (`l = 2`), so `k = 3` resp. `k = 6` decides solubility. A
/// primitive solution has `(x, y)` primitive, and scaling by a unit puts it
/// in the form `(1, y)` or `(x, 1)` with `l | x`.
pub fn hilbert_brute(a: i64, b: i64, l: u64) -> i8 {
    assert!(a != 0 && b != 0);
    if l == 0 {
        return if a < 0 && b < 0 { -1 } else { 1 };
    }
    let strip = |mut n: i64| {
        let sq = (l * l) as i64;
        while n % sq == 0 {
            n /= sq;
        }
        n
    };
    let (a, b) = (strip(a), strip(b));
    let k = if l == 2 { 6 } else { 3 };
    let q = l.pow(k);
    let qi = q as i64;
    let (am, bm) = (a.rem_euclid(qi) as u64, b.rem_euclid(qi) as u64);

    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); q as usize];
    for z in 0..q {
        roots[(z * z % q) as usize].push(z);
    }
    let val = |n: u64| -> u32 {
        if n.is_multiple_of(q) {
            return k;
        }
        let mut n = n % q;
        let mut v = 0;
        while n.is_multiple_of(l) {
            n /= l;
            v += 1;
        }
        v
    };
    let lifts = |x: u64, y: u64, z: u64| -> bool {
        let e = [2 * am % q * x % q, 2 * bm % q * y % q, 2 * z % q]
            .into_iter()
            .map(val)
            .min()
            .unwrap();
        2 * e < k
    };
    let mut candidates: Vec<(u64, u64)> = (0..q).map(|y| (1, y)).collect();
    candidates.extend((0..q).step_by(l as usize).map(|x| (x, 1)));
    for (x, y) in candidates {
        let t = (am * (x * x % q) % q + bm * (y * y % q) % q) % q;
        if roots[t as usize].iter().any(|&z| lifts(x, y, z)) {
            return 1;
        }
    }
    -1
}

/// `x mod q` for a rational with denominator prime to `q`.
pub fn rational_mod(x: &Rational, q: u64) -> u64 {
    let qb = BigInt::from(q);
    let d = x.denom().mod_floor(&qb);
    let inv = (1..q)
        .find(|&t| (BigInt::from(t) * &d).mod_floor(&qb) == BigInt::from(1))
        .expect("denominator invertible");
    let n = x.numer().mod_floor(&qb);
    (n * inv).mod_floor(&qb).to_u64().unwrap()
}

pub type M2 = [u64; 4];

pub fn m2_mul(x: &M2, y: &M2, l: u64) -> M2 {
    [
        (x[0] * y[0] + x[1] * y[2]) % l,
        (x[0] * y[1] + x[1] * y[3]) % l,
        (x[2] * y[0] + x[3] * y[2]) % l,
        (x[2] * y[1] + x[3] * y[3]) % l,
    ]
}

/// Order of the group generated by 2x2 matrices over `F_l`, by closing
/// the identity under right multiplication.
pub fn closure_size(gens: &[M2], l: u64) -> usize {
    let id = [1, 0, 0, 1];
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = m2_mul(&g, s, l);
            if seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    seen.len()
}

/// All of `SL(2, F_l)`, by enumeration.
pub fn sl2_elements(l: u64) -> Vec<M2> {
    let mut out = Vec::new();
    for a in 0..l {
        for b in 0..l {
            for c in 0..l {
                for d in 0..l {
                    if (a * d + l * l - b * c) % l == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Determinant of a square integer matrix mod `q` by Leibniz expansion.
pub fn det_leibniz(m: &[Vec<u64>], q: u64) -> u64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: i128 = 0;
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let prod = (0..n).fold(1i128, |acc, i| acc * m[i][p[i]] as i128 % q as i128);
        total += if inversions % 2 == 0 { prod } else { -prod };
    });
    total.rem_euclid(q as i128) as u64
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}


use profin_core::quatalg::{Quaternion, QuaternionAlgebra};

/// Study-type closed form for the reduced norm on `M(2, A)`:
/// `n(a) n(d) + n(b) n(c) - trd(conj(a) b conj(d) c)`.
pub fn nrd_closed_form(alg: &QuaternionAlgebra, m: &[Quaternion; 4]) -> Rational {
    let [a, b, c, d] = m;
    let cross = alg.mul(&alg.mul(&alg.mul(&a.conj(), b), &d.conj()), c);
    alg.nrd(a) * alg.nrd(d) + alg.nrd(b) * alg.nrd(c) - cross.trd()
}
