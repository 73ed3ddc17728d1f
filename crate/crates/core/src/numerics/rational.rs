use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumericError;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`. Decimal literals and whitespace inside the number are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, NumericError> {
    let t = text.trim();
    let bad = || NumericError::Parse(format!("not a rational literal: {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt, NumericError> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(NumericError::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // magnitudes beyond f64 range only show up in diagnostics
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// q^k for any integer k (q ≠ 0 when k < 0).
pub fn pow_int(q: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(q.clone(), k as usize)
    } else {
        num_traits::pow(q.recip(), (-k) as usize)
    }
}

/// Integer coefficients after clearing denominators: returns (integers, common denominator).
pub fn common_denominator(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for v in values {
        l = l.lcm(v.denom());
    }
    let ints = values.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    (ints, l)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapter storing a rational as its "p/q" text.
pub mod text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        parse_rational(&t).map_err(serde::de::Error::custom)
    }

    /// Same, for optional fields.
    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{parse_rational, Rational};

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&q.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
