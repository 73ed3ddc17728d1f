use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::NumericError;

/// Extra decimal digits carried beyond every requested target.
pub const GUARD_DIGITS: u32 = 20;

/// Fixed-point value `mant·2^(−bits)` whose true value lies within
/// `err·2^(−bits)` of it. Every operation rounds outward, so `err` only grows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigApprox {
    mant: BigInt,
    err: BigUint,
    bits: u32,
}

/// Binary precision for `digits` decimal digits plus guard digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    let d = (digits + GUARD_DIGITS) as f64;
    (d * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div_u(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn pow2(bits: u32) -> BigUint {
    BigUint::one() << bits
}

impl BigApprox {
    pub fn exact(mant: BigInt, bits: u32) -> Self {
        BigApprox { mant, err: BigUint::zero(), bits }
    }

    pub fn with_error(mant: BigInt, err: BigUint, bits: u32) -> Self {
        BigApprox { mant, err, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact(BigInt::zero(), bits)
    }

    pub fn from_integer(n: BigInt, bits: u32) -> Self {
        Self::exact(n << bits, bits)
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        let (m, r) = scaled.div_mod_floor(q.denom());
        let err = if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        BigApprox { mant: m, err, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn error_ulps(&self) -> &BigUint {
        &self.err
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Same value at a different precision (rounding outward when reducing).
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let d = bits - self.bits;
                BigApprox { mant: &self.mant << d, err: &self.err << d, bits }
            }
            Ordering::Less => {
                let d = self.bits - bits;
                let div = BigInt::from(pow2(d));
                let mant = floor_div(&self.mant, &div);
                let err = ceil_div_u(&self.err, &pow2(d)) + 1u32;
                BigApprox { mant, err, bits }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let b = self.bits.max(other.bits);
        (self.with_bits(b), other.with_bits(b))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        BigApprox { mant: a.mant + b.mant, err: a.err + b.err, bits: a.bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BigApprox { mant: -&self.mant, err: self.err.clone(), bits: self.bits }
    }

    pub fn abs(&self) -> Self {
        BigApprox { mant: self.mant.abs(), err: self.err.clone(), bits: self.bits }
    }

    /// Widens the error by `extra` ulps (used to fold in truncation bounds).
    pub fn widen(&self, extra: &BigUint) -> Self {
        BigApprox { mant: self.mant.clone(), err: &self.err + extra, bits: self.bits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let bits = a.bits;
        let prod = &a.mant * &b.mant;
        let mant = floor_div(&prod, &BigInt::from(pow2(bits)));
        let m1 = a.mant.magnitude();
        let m2 = b.mant.magnitude();
        let raw = m1 * &b.err + m2 * &a.err + &a.err * &b.err;
        let err = ceil_div_u(&raw, &pow2(bits)) + 1u32;
        BigApprox { mant, err, bits }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        BigApprox {
            mant: &self.mant * k,
            err: &self.err * k.magnitude(),
            bits: self.bits,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self, NumericError> {
        if k.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let mut mant = floor_div(&self.mant, k);
        if k.is_negative() {
            mant = floor_div(&-&self.mant, &-k);
        }
        let err = ceil_div_u(&self.err, k.magnitude()) + 1u32;
        Ok(BigApprox { mant, err, bits: self.bits })
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul_int(q.numer()).div_int(q.denom()).expect("denominator is positive")
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericError> {
        let (a, b) = self.aligned(other);
        let bits = a.bits;
        let m2 = b.mant.magnitude();
        if m2 <= &b.err {
            return Err(NumericError::DivisionByZero);
        }
        let scaled = &a.mant << bits;
        let mant = floor_div(&scaled, &b.mant);
        let m1 = a.mant.magnitude();
        let raw = (m2 * &a.err + m1 * &b.err) << bits;
        let den = m2 * (m2 - &b.err);
        let err = ceil_div_u(&raw, &den) + 1u32;
        Ok(BigApprox { mant, err, bits })
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        Self::from_integer(BigInt::one(), self.bits).div(self)
    }

    /// Square root; the enclosing interval must not lie below zero.
    pub fn sqrt(&self) -> Self {
        self.nth_root(2).expect("square root of a negative interval")
    }

    pub fn try_sqrt(&self) -> Result<Self, NumericError> {
        self.nth_root(2)
    }

    pub fn nth_root(&self, k: u32) -> Result<Self, NumericError> {
        let hi = &self.mant + BigInt::from(self.err.clone());
        if hi.is_negative() {
            return Err(NumericError::Domain("root of a negative value".into()));
        }
        let lo = (&self.mant - BigInt::from(self.err.clone())).max(BigInt::zero());
        let shift = self.bits * (k - 1);
        let lo = lo.to_biguint().unwrap() << shift;
        let hi = hi.to_biguint().unwrap() << shift;
        let r_lo = lo.nth_root(k);
        let r_hi = {
            let r = hi.nth_root(k);
            if num_traits::pow(r.clone(), k as usize) == hi {
                r
            } else {
                r + 1u32
            }
        };
        let sum = &r_lo + &r_hi;
        let mant = BigInt::from(&sum >> 1u32);
        let err = ((&r_hi - &r_lo) >> 1u32) + 1u32;
        Ok(BigApprox { mant, err, bits: self.bits })
    }

    pub fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_integer(BigInt::one(), self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Upper bound on |value|, in ulps.
    pub fn abs_upper_ulps(&self) -> BigUint {
        self.mant.magnitude() + &self.err
    }

    /// Lower bound on |value|, in ulps (zero if the interval straddles 0).
    pub fn abs_lower_ulps(&self) -> BigUint {
        let m = self.mant.magnitude();
        if m > &self.err {
            m - &self.err
        } else {
            BigUint::zero()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mant.magnitude() <= &self.err
    }

    /// Sign of the value when the enclosure determines it.
    pub fn sign(&self) -> Option<Ordering> {
        if self.contains_zero() {
            if self.err.is_zero() {
                Some(Ordering::Equal)
            } else {
                None
            }
        } else if self.mant.sign() == Sign::Minus {
            Some(Ordering::Less)
        } else {
            Some(Ordering::Greater)
        }
    }

    /// True when the enclosure radius is below 10^(−digits).
    pub fn error_below(&self, digits: u32) -> bool {
        let ten = num_traits::pow(BigUint::from(10u32), digits as usize);
        &self.err * ten < pow2(self.bits)
    }

    /// Certified |self − other| < 10^(−digits).
    pub fn agrees_with(&self, other: &Self, digits: u32) -> bool {
        let diff = self.sub(other);
        let ten = num_traits::pow(BigUint::from(10u32), digits as usize);
        diff.abs_upper_ulps() * ten < pow2(diff.bits)
    }

    /// Certified |self − other| > 10^(−digits).
    pub fn differs_from(&self, other: &Self, digits: u32) -> bool {
        let diff = self.sub(other);
        let ten = num_traits::pow(BigUint::from(10u32), digits as usize);
        diff.abs_lower_ulps() * ten > pow2(diff.bits)
    }

    /// Largest k ≤ cap with certified |self − other| < 10^(−k).
    pub fn digits_matched(&self, other: &Self, cap: u32) -> u32 {
        let diff = self.sub(other);
        let up = diff.abs_upper_ulps();
        if up.is_zero() {
            return cap;
        }
        let scale = pow2(diff.bits);
        let mut k = 0;
        let mut ten = BigUint::one();
        while k < cap {
            ten *= 10u32;
            if &up * &ten >= scale {
                break;
            }
            k += 1;
        }
        k
    }

    /// Decimal expansion truncated toward zero to `places` fractional digits.
    pub fn to_decimal(&self, places: u32) -> String {
        let ten = num_traits::pow(BigInt::from(10), places as usize);
        let scaled = (&self.mant * &ten).magnitude() >> self.bits;
        let neg = self.mant.is_negative() && !scaled.is_zero();
        let digits = scaled.to_string();
        let body = if places == 0 {
            digits
        } else {
            let p = places as usize;
            let padded = "0".repeat((p + 1).saturating_sub(digits.len())) + &digits;
            let (i, f) = padded.split_at(padded.len() - p);
            format!("{i}.{f}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.bits.saturating_sub(60);
        let m = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(-((self.bits - shift) as i32))
    }
}

impl fmt::Display for BigApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // digits that are certain given the error radius (at most ~ bits·log10 2)
        let places = ((self.bits as f64) * std::f64::consts::LOG10_2) as u32;
        let mut shown = places;
        let one = BigApprox::from_integer(BigInt::zero(), self.bits).widen(&self.err);
        while shown > 0 && !one.error_below(shown) {
            shown -= 1;
        }
        write!(f, "{} ± 1e-{}", self.to_decimal(shown.max(1)), shown)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn approx(q: Rational) -> BigApprox {
        BigApprox::from_rational(&q, 200)
    }

    #[test]
    fn rational_embedding_is_tight() {
        let x = approx(rat(1, 3));
        let y = approx(rat(2, 3));
        assert!(x.add(&y).agrees_with(&BigApprox::from_integer(1.into(), 200), 55));
        assert_eq!(x.to_decimal(5), "0.33333");
        assert_eq!(approx(rat(-1, 8)).to_decimal(3), "-0.125");
    }

    #[test]
    fn arithmetic_errors_contain_the_truth() {
        let x = approx(rat(2, 7));
        let y = approx(rat(-5, 11));
        let expect = approx(rat(2, 7) * rat(-5, 11) / (rat(2, 7) + rat(-5, 11)));
        let got = x.mul(&y).div(&x.add(&y)).unwrap();
        assert!(got.agrees_with(&expect, 50));
    }

    #[test]
    fn roots_bracket_the_exact_value() {
        let two = approx(rat(2, 1));
        let r = two.sqrt();
        assert!(r.mul(&r).agrees_with(&two, 55));
        let c = approx(rat(27, 8)).nth_root(3).unwrap();
        assert!(c.agrees_with(&approx(rat(3, 2)), 55));
        assert!(approx(rat(-1, 2)).try_sqrt().is_err());
    }

    #[test]
    fn reducing_precision_keeps_enclosure() {
        let x = approx(rat(1, 7));
        let y = x.with_bits(64);
        assert!(y.agrees_with(&approx(rat(1, 7)), 17));
        assert_eq!(y.with_bits(200).bits(), 200);
    }

    #[test]
    fn matched_digit_count() {
        let a = approx(rat(1, 3));
        let b = approx(rat(1, 3) + rat(1, 1_000_000));
        assert_eq!(a.digits_matched(&b, 40), 5);
    }
}
