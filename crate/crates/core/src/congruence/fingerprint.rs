use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::matrix::{delta_generators, reduce_mod, FiniteMatrix};
use super::stabchain::stab_chain_order;
use crate::error::{Error, Result};
use crate::exactnum::is_prime;
use crate::quatalg::{gamma_generators, reduce_gamma, split_mod, QuaternionAlgebra, QuaternionOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Delta,
    Gamma,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Delta => "Delta",
            Side::Gamma => "Gamma",
        })
    }
}

/// Level-l image of a generator set with its certified order.
#[derive(Debug, Clone)]
pub struct Fingerprint {
    pub p: u64,
    pub level: u64,
    pub side: Side,
    pub generators: Vec<FiniteMatrix>,
    pub order: BigUint,
}

#[derive(Serialize)]
struct FingerprintJson {
    p: u64,
    level: u64,
    side: Side,
    order: String,
    generator_count: usize,
    generator_digests: Vec<String>,
}

impl Serialize for Fingerprint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FingerprintJson {
            p: self.p,
            level: self.level,
            side: self.side,
            order: self.order.to_string(),
            generator_count: self.generators.len(),
            generator_digests: self.generators.iter().map(FiniteMatrix::digest).collect(),
        }
        .serialize(s)
    }
}

/// `|SL(4, F_l)| = l^6 (l^2 - 1)(l^3 - 1)(l^4 - 1)`.
pub fn sl4_order(l: u64) -> BigUint {
    let l = BigUint::from(l);
    let one = BigUint::from(1u32);
    l.pow(6) * (l.pow(2) - &one) * (l.pow(3) - &one) * (l.pow(4) - &one)
}

/// Reduces the chosen generators of `side` modulo `l` and certifies the
/// order of the image.
pub fn fingerprint(
    side: Side,
    l: u64,
    alg: &QuaternionAlgebra,
    order: &QuaternionOrder,
    seed: u64,
) -> Result<Fingerprint> {
    let p = alg.p();
    if !is_prime(l) || l == p {
        return Err(Error::InvalidArgument(format!("level must be a prime other than p = {p}, got {l}")));
    }
    let generators = match side {
        Side::Delta => delta_generators(p)
            .iter()
            .map(|m| reduce_mod(m, l))
            .collect::<Result<Vec<_>>>()?,
        Side::Gamma => {
            let split = split_mod(alg, order, l, 1, seed)?;
            gamma_generators(alg, order)?
                .iter()
                .map(|g| reduce_gamma(g, &split))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let (certified, _) = stab_chain_order(&generators, l);
    Ok(Fingerprint { p, level: l, side, generators, order: certified })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub p: u64,
    pub level: u64,
    #[serde(serialize_with = "as_decimal")]
    pub expected: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub delta_order: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub gamma_order: BigUint,
    pub delta_generators: usize,
    pub gamma_generators: usize,
    pub pass: bool,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// PASS iff both images are all of `SL(4, F_l)`.
pub fn compare_fingerprints(f1: &Fingerprint, f2: &Fingerprint) -> Result<ComparisonReport> {
    if f1.level != f2.level {
        return Err(Error::InvalidArgument(format!(
            "fingerprint levels differ: {} vs {}",
            f1.level, f2.level
        )));
    }
    let expected = sl4_order(f1.level);
    let pass = f1.order == expected && f2.order == expected;
    Ok(ComparisonReport {
        p: f1.p,
        level: f1.level,
        expected,
        delta_order: f1.order.clone(),
        gamma_order: f2.order.clone(),
        delta_generators: f1.generators.len(),
        gamma_generators: f2.generators.len(),
        pass,
    })
}

impl ComparisonReport {
    pub fn table(reports: &[ComparisonReport]) -> String {
        let mut out = format!(
            "{:>3} {:>3} {:>14} {:>14} {:>14} {:>6}\n",
            "p", "l", "|SL4(F_l)|", "Delta", "Gamma", "result"
        );
        for r in reports {
            out.push_str(&format!(
                "{:>3} {:>3} {:>14} {:>14} {:>14} {:>6}\n",
                r.p,
                r.level,
                r.expected.to_string(),
                r.delta_order.to_string(),
                r.gamma_order.to_string(),
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}
