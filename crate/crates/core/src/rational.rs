//! Helpers around `BigRational`: parsing, formatting, integer parts and
//! the distance-to-nearest-integer used by the circle metric.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used everywhere in the library.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}` as a rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Q {
    ratio(1, 2)
}

/// Largest integer `<= x`, as a rational.
pub fn floor(x: &Q) -> Q {
    x.floor()
}

/// Largest integer `<= x`, as a `BigInt`.
pub fn floor_int(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest integer `>= x`, as a `BigInt`.
pub fn ceil_int(x: &Q) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Fractional part, always in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn dist_to_int(x: &Q) -> Q {
    let f = frac(x);
    let g = Q::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator exceeds f64 range; fall back to a scaled division
        let shift = x.denom().bits().max(x.numer().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Bits needed for the denominator; used as an orbit-complexity budget.
pub fn denom_bits(x: &Q) -> u64 {
    x.denom().bits()
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125`. The
/// result is exact in every case.
pub fn parse(s: &str) -> Result<Q, ParseRationalError> {
    let t = s.trim();
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    if t.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((whole, digits)) = t.split_once('.') {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal digits"));
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_int = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_abs).map_err(|_| err("bad integer part"))?
        };
        let frac_int = BigInt::from_str(digits).map_err(|_| err("bad decimal digits"))?;
        let scale = num_traits::pow(BigInt::from(10), digits.len());
        let mut q = Q::from_integer(whole_int) + Q::new(frac_int, scale);
        if negative {
            q = -q;
        }
        return Ok(q);
    }
    BigInt::from_str(t)
        .map(Q::from_integer)
        .map_err(|_| err("not a rational"))
}

/// Canonical text form: `p/q` in lowest terms, or `p` for integers.
pub fn format(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter writing rationals as canonical strings.
pub mod serde_str {
    use super::{format, parse, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}

/// Same as [`serde_str`] for optional values.
pub mod serde_opt_str {
    use super::{format, Q};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(q) => s.serialize_some(&format(q)),
            None => s.serialize_none(),
        }
    }
}

/// Same as [`serde_str`] for sequences.
pub mod serde_vec_str {
    use super::{format, Q};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("-1/8").unwrap(), ratio(-1, 8));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format(&ratio(4, 8)), "1/2");
        assert_eq!(format(&ratio(-6, 3)), "-2");
        assert_eq!(format(&int(0)), "0");
    }

    #[test]
    fn integer_parts() {
        assert_eq!(floor_int(&ratio(-1, 8)), BigInt::from(-1));
        assert_eq!(ceil_int(&ratio(-1, 8)), BigInt::from(0));
        assert_eq!(ceil_int(&int(3)), BigInt::from(3));
        assert_eq!(frac(&ratio(-1, 8)), ratio(7, 8));
        assert_eq!(dist_to_int(&ratio(7, 8)), ratio(1, 8));
        assert_eq!(dist_to_int(&ratio(5, 2)), ratio(1, 2));
    }
}
