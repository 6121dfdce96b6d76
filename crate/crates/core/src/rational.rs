//! Exact rationals and their `"p/q"` string encoding.

use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

/// Arbitrary-precision rational used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() || s.len() > 4096 {
        return None;
    }
    Q::from_str(s).ok()
}

/// Canonical `"p/q"` rendering (integers render without a denominator).
pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

pub fn dot_int(u: &[i64], x: &[Q]) -> Q {
    u.iter()
        .zip(x)
        .fold(Q::zero(), |acc, (a, b)| acc + b * q(*a))
}

pub fn l1_norm(u: &[i64]) -> Q {
    q(u.iter().map(|a| a.abs()).sum())
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Serde adapter for a single rational as a string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
    }
}

/// Serde adapter for a vector of rationals as strings.
pub mod serde_qvec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| {
                parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6"), Some(frac(1, 2)));
        assert_eq!(parse_q("-4"), Some(q(-4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
        assert_eq!(fmt_q(&frac(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(7)), "7");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), q(1));
        assert_eq!(factorial(4), q(24));
    }
}
