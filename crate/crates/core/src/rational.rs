//! Exact rational numbers and their text encodings.
//!
//! Rationals are `num_rational::BigRational`, which is always kept in
//! lowest terms with a positive denominator. Text input accepts `a/b`,
//! plain integers and short decimal strings; output is always `a/b` or an
//! integer.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Longest decimal fraction accepted by [`parse_rational`].
pub const MAX_DECIMAL_DIGITS: usize = 12;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^(-k)`.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `a/b`, an integer, or a decimal with at most
/// [`MAX_DECIMAL_DIGITS`] fractional digits. Exponents, `inf` and `nan`
/// are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_integer(n.trim()).ok_or_else(err)?;
        let d: BigInt = parse_integer(d.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > MAX_DECIMAL_DIGITS || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut n: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    parse_integer(s).map(Rational::from_integer).ok_or_else(err)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.trim_start_matches(['-', '+']);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// Simplest rational (smallest denominator) in the half-open interval
/// `[lo, hi)`, found by walking the Stern–Brocot tree. Requires `lo < hi`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "simplest_in requires lo < hi");
    if lo.is_integer() {
        return lo.clone();
    }
    let fl = lo.floor();
    if fl.clone() + Rational::one() < *hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part; recurse on the reciprocals of the
    // fractional parts (the interval flips to (1/(hi-fl), 1/(lo-fl)]).
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_in_open_closed(&(Rational::one() / hi_frac), &(Rational::one() / lo_frac));
    fl + Rational::one() / inner
}

// simplest rational in (lo, hi]
fn simplest_in_open_closed(lo: &Rational, hi: &Rational) -> Rational {
    let candidate = lo.floor() + Rational::one();
    if candidate <= *hi {
        return candidate;
    }
    let fl = lo.floor();
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = if lo_frac.is_zero() {
        // reciprocal interval is [1/hi_frac, inf)
        (Rational::one() / hi_frac).ceil()
    } else {
        simplest_in(&(Rational::one() / hi_frac), &(Rational::one() / lo_frac))
    };
    fl + Rational::one() / inner
}

pub mod serde_rational {
    //! Serde adapters that encode rationals as `a/b` strings.
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| parse_rational(&t).map_err(D::Error::custom)).transpose()
        }
    }
}
