use crate::error::{Error, Result};
use crate::exactnum::PadicNumber;
use crate::quatalg::{Quaternion, QuaternionAlgebra};

/// An element of `H_p = A (x) Q_p` in the basis `1, i, j, k`.
#[derive(Debug, Clone)]
pub struct LocalQuaternion {
    coeffs: [PadicNumber; 4],
    a: PadicNumber,
    b: PadicNumber,
}

impl LocalQuaternion {
    pub fn from_quaternion(alg: &QuaternionAlgebra, x: &Quaternion, precision: u32) -> Result<Self> {
        let p = alg.p();
        let lift = |r| PadicNumber::from_rational(p, r, precision);
        let [c0, c1, c2, c3] = x.coeffs();
        Ok(LocalQuaternion {
            coeffs: [lift(c0)?, lift(c1)?, lift(c2)?, lift(c3)?],
            a: lift(alg.a())?,
            b: lift(alg.b())?,
        })
    }

    pub fn coeffs(&self) -> &[PadicNumber; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicNumber::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let [x0, x1, x2, x3] = &self.coeffs;
        let [y0, y1, y2, y3] = &other.coeffs;
        let (a, b) = (&self.a, &self.b);
        let ab = a.checked_mul(b)?;
        let m = |u: &PadicNumber, v: &PadicNumber| u.checked_mul(v);
        let sum = |terms: &[PadicNumber]| -> Result<PadicNumber> {
            let mut acc = PadicNumber::zero(a.prime(), a.precision())?;
            for t in terms {
                acc = acc.add_flush(t)?;
            }
            Ok(acc)
        };
        let c0 = sum(&[
            m(x0, y0)?,
            a.checked_mul(&m(x1, y1)?)?,
            b.checked_mul(&m(x2, y2)?)?,
            ab.checked_mul(&m(x3, y3)?)?.neg(),
        ])?;
        let c1 = sum(&[
            m(x0, y1)?,
            m(x1, y0)?,
            b.checked_mul(&m(x2, y3)?)?.neg(),
            b.checked_mul(&m(x3, y2)?)?,
        ])?;
        let c2 = sum(&[
            m(x0, y2)?,
            m(x2, y0)?,
            a.checked_mul(&m(x1, y3)?)?,
            a.checked_mul(&m(x3, y1)?)?.neg(),
        ])?;
        let c3 = sum(&[m(x0, y3)?, m(x3, y0)?, m(x1, y2)?, m(x2, y1)?.neg()])?;
        Ok(LocalQuaternion { coeffs: [c0, c1, c2, c3], a: a.clone(), b: b.clone() })
    }

    /// `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn nrd(&self) -> Result<PadicNumber> {
        let [x0, x1, x2, x3] = &self.coeffs;
        let (a, b) = (&self.a, &self.b);
        let sq = |u: &PadicNumber| u.checked_mul(u);
        let t0 = sq(x0)?;
        let t1 = a.checked_mul(&sq(x1)?)?;
        let t2 = b.checked_mul(&sq(x2)?)?;
        let t3 = a.checked_mul(b)?.checked_mul(&sq(x3)?)?;
        t0.sub_flush(&t1)?.sub_flush(&t2)?.add_flush(&t3)
    }
}

/// `alpha(x) = v_p(nrd x)`.
pub fn local_valuation(x: &LocalQuaternion) -> Result<i64> {
    let n = x.nrd()?;
    n.valuation().ok_or_else(|| {
        Error::PrecisionExhausted("reduced norm vanishes at working precision".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;
    use crate::quatalg::choose_algebra;

    #[test]
    fn spec_values() {
        for p in [3, 5, 7] {
            let alg = choose_algebra(p).unwrap();
            let lq = |x: Quaternion| LocalQuaternion::from_quaternion(&alg, &x, 20).unwrap();
            assert_eq!(local_valuation(&lq(Quaternion::one())).unwrap(), 0);
            assert_eq!(local_valuation(&lq(Quaternion::j())).unwrap(), 1);
            assert_eq!(local_valuation(&lq(Quaternion::scalar(rat_int(p as i64)))).unwrap(), 2);
            assert!(local_valuation(&lq(Quaternion::zero())).is_err());
        }
    }

    #[test]
    fn product_matches_global() {
        let alg = choose_algebra(7).unwrap();
        let x = Quaternion::from_ints([2, -1, 7, 3]);
        let y = Quaternion::from_ints([1, 4, 0, -5]);
        let lq = |x: &Quaternion| LocalQuaternion::from_quaternion(&alg, x, 20).unwrap();
        let prod = lq(&x).mul(&lq(&y)).unwrap();
        let expect = lq(&alg.mul(&x, &y));
        for (u, v) in prod.coeffs().iter().zip(expect.coeffs()) {
            assert!(u.eq_at_shared_precision(v));
        }
    }
}
