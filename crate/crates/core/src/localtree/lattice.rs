use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::ring::LocalRing;
use crate::error::{Error, Result};

/// Homothety class of a left lattice, in the canonical form
/// `[[pi^e1, 0], [y, pi^e2]]` with `min(e1, e2, v(y)) = 0` and
/// `y = sum_{k < e1} digit_k pi^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeClass {
    e1: u32,
    e2: u32,
    digits: Vec<u32>,
}

impl LatticeClass {
    /// The class of the standard lattice `O^2`.
    pub fn standard() -> Self {
        LatticeClass { e1: 0, e2: 0, digits: Vec::new() }
    }

    pub fn exponents(&self) -> (u32, u32) {
        (self.e1, self.e2)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.e1, self.e2)?;
        if !self.digits.is_empty() {
            let ds: Vec<String> = self.digits.iter().map(u32::to_string).collect();
            write!(f, ":{}", ds.join("-"))?;
        }
        Ok(())
    }
}

pub type Rows<E> = [[E; 2]; 2];

/// A local ring together with its projective line over the residue ring.
#[derive(Debug, Clone)]
pub struct TreeContext<R: LocalRing> {
    ring: R,
    lines: Vec<(u32, u32)>,
}

fn exhausted(what: &str) -> Error {
    Error::PrecisionExhausted(what.to_string())
}

impl<R: LocalRing> TreeContext<R> {
    pub fn new(ring: R) -> Self {
        let lines = enumerate_lines(&ring);
        TreeContext { ring, lines }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Normalized representatives `(1:0)` and `(c:1)` of the residue lines.
    pub fn lines(&self) -> &[(u32, u32)] {
        &self.lines
    }

    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    /// Exact basis rows of a canonical class.
    pub fn basis(&self, v: &LatticeClass) -> Rows<R::Elem> {
        let r = &self.ring;
        let y = v
            .digits
            .iter()
            .enumerate()
            .fold(r.zero(), |acc, (k, &d)| r.add(acc, r.mul(r.digit(d), r.pi_pow(k as u32))));
        [[r.pi_pow(v.e1), r.zero()], [y, r.pi_pow(v.e2)]]
    }

    /// Hermite reduction by left row operations, then homothety
    /// normalization to minimal entry valuation zero.
    pub fn canonicalize(&self, rows: &Rows<R::Elem>) -> Result<LatticeClass> {
        let r = &self.ring;
        let prec = r.precision();
        let [[a1, b1], [a2, b2]] = *rows;
        let (v1, v2) = (r.val(b1), r.val(b2));
        let ((ap, bp, e2), (ao, bo)) = match (v1, v2) {
            (None, None) => return Err(exhausted("second column vanishes")),
            (Some(x), Some(y)) if x < y => ((a1, b1, x), (a2, b2)),
            (Some(x), None) => ((a1, b1, x), (a2, b2)),
            (_, Some(y)) => ((a2, b2, y), (a1, b1)),
        };
        // bp = u2 pi^e2; clear the other second-column entry with bo bp^{-1}
        let u2 = r.div_pi_right_pow(bp, e2);
        let u2_inv = r.unit_inverse(u2);
        let quot = r.mul(r.div_pi_right_pow(bo, e2), u2_inv);
        let x = r.sub(ao, r.mul(quot, ap));
        let e1 = r.val(x).ok_or_else(|| exhausted("basis is singular at working precision"))?;
        if e1 + e2 >= prec {
            return Err(exhausted("pivot exponents exceed working precision"));
        }
        let y = r.mul(u2_inv, ap);
        let m = match r.val(y) {
            Some(vy) => vy.min(e1).min(e2),
            None => e1.min(e2),
        };
        let y = r.div_pi_left_pow(y, m);
        let (e1, e2) = (e1 - m, e2 - m);
        let mut digits = Vec::with_capacity(e1 as usize);
        let mut t = y;
        for _ in 0..e1 {
            let d = r.digit_of(t);
            digits.push(d);
            t = r.div_pi_right(r.sub(t, r.digit(d)));
        }
        Ok(LatticeClass { e1, e2, digits })
    }

    /// Lattices `pi L < L' < L` with `L / L'` simple, one per residue line.
    pub fn neighbors(&self, v: &LatticeClass) -> Result<Vec<LatticeClass>> {
        let r = &self.ring;
        let [r1, r2] = self.basis(v);
        let pi = r.pi_pow(1);
        let lmul = |c: R::Elem, row: [R::Elem; 2]| [r.mul(c, row[0]), r.mul(c, row[1])];
        let radd = |x: [R::Elem; 2], y: [R::Elem; 2]| [r.add(x[0], y[0]), r.add(x[1], y[1])];
        self.lines
            .iter()
            .map(|&(c, d)| {
                let rows = if d == 0 {
                    [r1, lmul(pi, r2)]
                } else {
                    [radd(lmul(r.digit(c), r1), r2), lmul(pi, r1)]
                };
                self.canonicalize(&rows)
            })
            .collect()
    }

    /// Right action of a matrix with entries in `O` (assumed invertible in
    /// `GL(2, H)`).
    pub fn act_matrix(&self, g: &Rows<R::Elem>, v: &LatticeClass) -> Result<LatticeClass> {
        self.canonicalize(&self.mat_mul(&self.basis(v), g))
    }

    pub fn mat_mul(&self, x: &Rows<R::Elem>, y: &Rows<R::Elem>) -> Rows<R::Elem> {
        let r = &self.ring;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| r.add(r.mul(x[i][0], y[0][j]), r.mul(x[i][1], y[1][j])))
        })
    }

    /// `|a - c|` for the invariant factors `pi^a, pi^c` of `B_v B_u^{-1}`.
    pub fn distance(&self, u: &LatticeClass, v: &LatticeClass) -> Result<u32> {
        if u == v {
            return Ok(0);
        }
        let r = &self.ring;
        let (e1, e2) = (u.e1, u.e2);
        // b^t B_u^{-1} = [[pi^{2t-e1}, 0], [-pi^s frob^{e1}(y), pi^{2t-e2}]]
        let t = (e1 + e2).div_ceil(2);
        let s = 2 * t - e1 - e2;
        let [_, [y, _]] = self.basis(u);
        let inv = [
            [r.pi_pow(2 * t - e1), r.zero()],
            [r.neg(r.mul(r.pi_pow(s), r.frob_pow(y, e1))), r.pi_pow(2 * t - e2)],
        ];
        let m = self.mat_mul(&self.basis(v), &inv);
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                if let Some(val) = r.val(m[i][j]) {
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let (mu, i, j) = best.ok_or_else(|| exhausted("change of basis vanishes"))?;
        let (pv, rv, cv, other) = (m[i][j], m[1 - i][j], m[i][1 - j], m[1 - i][1 - j]);
        // Schur complement other - rv pv^{-1} cv, with pv = w pi^mu
        let w_inv = r.unit_inverse(r.div_pi_right_pow(pv, mu));
        let left = r.mul(r.div_pi_right_pow(rv, mu), w_inv);
        let schur = r.sub(other, r.mul(left, cv));
        let c = r.val(schur).ok_or_else(|| exhausted("invariant factor vanishes"))?;
        if c + mu >= r.precision() {
            return Err(exhausted("invariant factors exceed working precision"));
        }
        Ok(c - mu)
    }
}

/// Brute force over nonzero pairs of residues, grouped under left scalars.
fn enumerate_lines<R: LocalRing>(ring: &R) -> Vec<(u32, u32)> {
    let q = ring.residue_size() as u32;
    let dmul = |x: u32, y: u32| ring.digit_of(ring.mul(ring.digit(x), ring.digit(y)));
    let inverses: Vec<u32> = (0..q)
        .map(|x| if x == 0 { 0 } else { (1..q).find(|&y| dmul(x, y) == 1).expect("residue field") })
        .collect();
    let mut lines = BTreeSet::new();
    for c in 0..q {
        for d in 0..q {
            if (c, d) == (0, 0) {
                continue;
            }
            let line = if d == 0 { (1, 0) } else { (dmul(inverses[d as usize], c), 1) };
            lines.insert(line);
        }
    }
    lines.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localtree::ring::{DivisionRing, SplitRing};
    use crate::quatalg::choose_algebra;

    fn split(p: u64) -> TreeContext<SplitRing> {
        TreeContext::new(SplitRing::new(p, 12).unwrap())
    }

    fn division(p: u64) -> TreeContext<DivisionRing> {
        TreeContext::new(DivisionRing::new(&choose_algebra(p).unwrap(), 10).unwrap())
    }

    #[test]
    fn line_counts() {
        for p in [3, 5, 7] {
            assert_eq!(split(p).degree() as u64, p + 1);
            assert_eq!(division(p).degree() as u64, p * p + 1);
        }
    }

    #[test]
    fn standard_neighbors_split() {
        let ctx = split(3);
        let nbrs = ctx.neighbors(&LatticeClass::standard()).unwrap();
        assert_eq!(nbrs.len(), 4);
        let distinct: BTreeSet<_> = nbrs.iter().collect();
        assert_eq!(distinct.len(), 4);
        assert!(!nbrs.contains(&LatticeClass::standard()));
    }

    #[test]
    fn canonical_form_is_homothety_invariant() {
        let ctx = division(5);
        let r = ctx.ring();
        let rows = [
            [r.from_coeffs([2, 1, 3, 0]), r.from_coeffs([5, 0, 1, 1])],
            [r.from_coeffs([0, 0, 1, 0]), r.from_coeffs([1, 4, 0, 2])],
        ];
        let v = ctx.canonicalize(&rows).unwrap();
        let pi = r.pi_pow(1);
        let scaled = rows.map(|row| row.map(|x| r.mul(pi, x)));
        assert_eq!(ctx.canonicalize(&scaled).unwrap(), v);
        assert_eq!(ctx.canonicalize(&ctx.basis(&v)).unwrap(), v);
    }

    #[test]
    fn distances_from_standard() {
        let ctx = division(3);
        let r = ctx.ring();
        let o = LatticeClass::standard();
        let one_step = ctx.act_matrix(&[[r.pi_pow(1), r.zero()], [r.zero(), r.one()]], &o).unwrap();
        assert_eq!(ctx.distance(&o, &one_step).unwrap(), 1);
        // diag(pi, pi^{-1}) ~ diag(pi^2, 1)
        let two = ctx.act_matrix(&[[r.pi_pow(2), r.zero()], [r.zero(), r.one()]], &o).unwrap();
        assert_eq!(ctx.distance(&o, &two).unwrap(), 2);
        assert_eq!(ctx.distance(&two, &o).unwrap(), 2);
        for n in ctx.neighbors(&o).unwrap() {
            assert_eq!(ctx.distance(&o, &n).unwrap(), 1);
            assert_eq!(ctx.distance(&n, &o).unwrap(), 1);
        }
    }
}
