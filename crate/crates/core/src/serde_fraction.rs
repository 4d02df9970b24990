//! Serde adapter writing rationals as reduced `"num/den"` strings.

use serde::{Deserialize, Deserializer, Serializer};

use crate::dist::{format_fraction, parse_fraction, Rational};

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_fraction(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_fraction(&s).map_err(serde::de::Error::custom)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_fraction(r))?;
        }
        seq.end()
    }
}
