use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm on `i128`.
pub(crate) fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// Largest `t` with `p^t | n`, together with `n / p^t`. `n` must be nonzero.
pub fn trailing_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut t = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (t, rest);
        }
        rest = q;
        t += 1;
    }
}

/// Prime factors (without multiplicity) of `|n|` by trial division.
pub fn factor_small(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    loop {
        let db = BigInt::from(d);
        if &db * &db > n {
            break;
        }
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("cofactor exceeds 64 bits"));
    }
    out
}

/// Legendre symbol `(n / l)` for an odd prime `l`, as -1, 0 or 1.
pub(crate) fn legendre(n: &BigInt, l: u64) -> i8 {
    let r = n.mod_floor(&BigInt::from(l)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub(crate) fn sqrt_mod_prime(n: u64, l: u64) -> Option<u64> {
    let n = n % l;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (l - 1) / 2, l) != 1 {
        return None;
    }
    if l % 4 == 3 {
        return Some(pow_mod(n, (l + 1) / 4, l));
    }
    let mut q = l - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (l - 1) / 2, l) != l - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, l);
    let mut t = pow_mod(n, q, l);
    let mut r = pow_mod(n, q.div_ceil(2), l);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, l);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), l);
        m = i;
        c = mul_mod(b, b, l);
        t = mul_mod(t, c, l);
        r = mul_mod(r, b, l);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..2000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn tonelli_shanks_roots_square() {
        for l in [3u64, 5, 7, 13, 17, 41, 97, 257] {
            for n in 1..l {
                match sqrt_mod_prime(n, l) {
                    Some(r) => assert_eq!(mul_mod(r, r, l), n),
                    None => assert_eq!(legendre(&BigInt::from(n), l), -1),
                }
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_small(&BigInt::from(-360)), vec![2, 3, 5]);
        assert_eq!(factor_small(&BigInt::from(97)), vec![97]);
        assert!(factor_small(&BigInt::from(1)).is_empty());
    }
}
