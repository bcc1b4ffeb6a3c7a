//! Shared JSON conventions for the on-disk documents.
//!
//! Integers are written as JSON numbers when they fit in 64 bits and as
//! decimal strings otherwise. Readers accept either form, and strings may
//! also be hexadecimal with a `0x` prefix.

use crate::arith::Nat;
use crate::error::{Error, Result};
use num_traits::{Num, ToPrimitive};
use serde::de::DeserializeOwned;
use std::path::Path;

pub const SCHEMA: &str = "coverforge/1";

/// Parses a decimal or `0x`-prefixed hexadecimal natural number.
pub fn parse_nat(text: &str) -> Result<Nat> {
    let text = text.trim().replace('_', "");
    let parsed = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Nat::from_str_radix(hex, 16)
    } else {
        Nat::from_str_radix(&text, 10)
    };
    parsed.map_err(|_| Error::Invalid(format!("not a natural number: `{text}`")))
}

pub fn from_str<T: DeserializeOwned>(source_name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(source_name, e))
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_str(&path.display().to_string(), &text)
}

/// A structural problem in an otherwise well-formed JSON document.
pub(crate) fn field_error(source_name: &str, message: &str) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line: 0,
        column: 0,
        message: message.to_string(),
    }
}

/// Checks an optional `"schema"` tag.
pub(crate) fn check_schema(tag: &Option<String>) -> Result<()> {
    match tag.as_deref() {
        None | Some(SCHEMA) => Ok(()),
        Some(other) => Err(Error::Invalid(format!(
            "unsupported schema `{other}`, expected `{SCHEMA}`"
        ))),
    }
}

/// `#[serde(with = "crate::json::nat")]` for [`Nat`] fields.
pub mod nat {
    use super::*;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(value: &Nat, s: S) -> Result<S::Ok, S::Error> {
        match value.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&value.to_string()),
        }
    }

    struct NatVisitor;

    impl<'de> Visitor<'de> for NatVisitor {
        type Value = Nat;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a nonnegative integer or a decimal/hex string")
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Nat, E> {
            Ok(Nat::from(v))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Nat, E> {
            u64::try_from(v)
                .map(Nat::from)
                .map_err(|_| E::custom(format!("negative value {v}")))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Nat, E> {
            parse_nat(v).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        d.deserialize_any(NatVisitor)
    }
}

/// Same convention for `Vec<Nat>`.
pub mod nat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::nat")] Nat);

    pub fn serialize<S: Serializer>(values: &[Nat], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Wrap> = values.iter().cloned().map(Wrap).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?
            .into_iter()
            .map(|w| w.0)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder(#[serde(with = "nat")] Nat);

    #[test]
    fn nat_json_forms() {
        let small: Holder = serde_json::from_str("11184810").unwrap();
        assert_eq!(small.0, Nat::from(11184810u32));
        let hex: Holder = serde_json::from_str("\"0xFFFFFFFFFFFFFFFF\"").unwrap();
        assert_eq!(hex.0, Nat::from(u64::MAX));
        let big = Holder(Nat::from(u64::MAX) * 3u32);
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, "\"55340232221128654845\"");
        assert_eq!(serde_json::from_str::<Holder>(&text).unwrap(), big);
        assert!(serde_json::from_str::<Holder>("-3").is_err());
    }

    #[test]
    fn parse_nat_forms() {
        assert_eq!(parse_nat("0x10").unwrap(), Nat::from(16u32));
        assert_eq!(
            parse_nat("18446744073709551615").unwrap(),
            Nat::from(u64::MAX)
        );
        assert!(parse_nat("12a").is_err());
    }
}
