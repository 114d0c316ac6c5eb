//! Exact rational scalars and their `"p/q"` wire format.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;

/// Rational from machine integers, mostly for literals in tests and fixtures.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` (or a bare integer `"p"`). Whitespace is trimmed; the
/// result is reduced with a positive denominator.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Formats as `"p/q"` with `q > 0` and `gcd(p,q)=1`, always including the
/// denominator (`"1/1"`, `"0/1"`).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

/// `#[serde(with = "...")]` adapter serializing a rational as `"p/q"`.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
