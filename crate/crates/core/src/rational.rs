//! Exact rationals and their string encoding.
//!
//! Every number that crosses a file boundary is a decimal string: integers as
//! `"-12"`, rationals as `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// The exact rational field used throughout the kernel.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
        None => BigInt::from_str(s).map(Q::from_integer).map_err(|_| err()),
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt, ParseRationalError> {
    BigInt::from_str(s.trim()).map_err(|_| ParseRationalError(s.to_string()))
}

/// `p/q` or `p`; reduced, sign on the numerator.
pub fn format_rational(x: &Q) -> String {
    x.to_string()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter: a [`Q`] as a decimal string. Plain JSON integers are
/// accepted on input.
pub mod q_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(q(i)),
        }
    }
}

/// Serde adapter: a [`BigInt`] as a decimal string. Plain JSON integers are
/// accepted on input.
pub mod int_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_bigint(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(BigInt::from(i)),
        }
    }
}

/// Serde adapter: a machine integer written as a decimal string; plain JSON
/// integers are accepted on input.
pub mod num_string {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn serialize<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr + TryFrom<i64>,
        <T as FromStr>::Err: Display,
        D: Deserializer<'de>,
    {
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
            Raw::Int(i) => T::try_from(i).map_err(|_| serde::de::Error::custom(format!("{i} is out of range"))),
        }
    }
}

/// [`num_string`] applied to each element of a list.
pub mod num_string_vec {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    #[derive(Deserialize)]
    #[serde(bound = "T: FromStr + TryFrom<i64>, <T as FromStr>::Err: Display")]
    struct W<T>(#[serde(with = "super::num_string")] T);

    pub fn serialize<T: Display, S: Serializer>(x: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr + TryFrom<i64>,
        <T as FromStr>::Err: Display,
        D: Deserializer<'de>,
    {
        Ok(Vec::<W<T>>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// A list of `[key, number]` pairs with [`num_string`] numbers.
pub mod keyed_num_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    #[derive(Deserialize)]
    #[serde(bound = "K: Deserialize<'de>, T: FromStr + TryFrom<i64>, <T as FromStr>::Err: Display")]
    struct W<K, T>(K, #[serde(with = "super::num_string")] T);

    pub fn serialize<K: Serialize, T: Display, S: Serializer>(x: &[(K, T)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|(k, v)| (k, v.to_string())))
    }

    pub fn deserialize<'de, K, T, D>(d: D) -> Result<Vec<(K, T)>, D::Error>
    where
        K: Deserialize<'de>,
        T: FromStr + TryFrom<i64>,
        <T as FromStr>::Err: Display,
        D: Deserializer<'de>,
    {
        Ok(Vec::<W<K, T>>::deserialize(d)?
            .into_iter()
            .map(|w| (w.0, w.1))
            .collect())
    }
}
