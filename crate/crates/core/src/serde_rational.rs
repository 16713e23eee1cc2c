//! Rationals as `"n"` or `"n/d"` strings in JSON.

use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

use crate::exactnum::Rational;

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    text.parse::<Rational>().map_err(D::Error::custom)
}
