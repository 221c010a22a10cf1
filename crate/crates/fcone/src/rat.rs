//! Exact rational scalars and their string encoding.
//!
//! Rationals are serialized as lowest-terms `"p/q"` strings (plain `"p"`
//! when the denominator is one), never as decimals, so chamber walls
//! survive a round trip through JSON or CSV.

use num_bigint::BigInt;

pub type Rat = num_rational::BigRational;

/// Shorthand for the exact rational `p/q`.
///
/// Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for the exact integer `p` as a rational.
pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parse a `"p/q"` or `"p"` string into an exact rational.
pub fn parse(s: &str) -> Result<Rat, num_rational::ParseRatioError> {
    s.trim().parse()
}

/// Serde adapter mapping rationals to `"p/q"` strings.
///
/// Use as `#[serde(with = "crate::rat::rat_str")]`.
pub mod rat_str {
    use super::Rat;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(|e| de::Error::custom(format!("bad rational {s:?}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(rat(2, 4).to_string(), "1/2");
        assert_eq!(rat(13, 1).to_string(), "13");
        assert_eq!(rat(-8, 12).to_string(), "-2/3");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("9/12").unwrap(), rat(3, 4));
        assert_eq!(parse(" 13 ").unwrap(), int(13));
        assert_eq!(parse("-7/10").unwrap(), rat(-7, 10));
    }
}
