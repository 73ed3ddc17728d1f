use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::approx::{bits_for_digits, BigApprox};
use super::pi::pi_agm_bits;
use super::radconst::RadConst;
use super::rational::{rat, Rational};
use super::NumericError;

/// sin(sπ): exact when s lands on a classical angle, numeric otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SinValue {
    Exact(RadConst),
    Numeric(BigApprox),
}

impl SinValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, SinValue::Exact(_))
    }

    pub fn to_approx(&self, bits: u32) -> BigApprox {
        match self {
            SinValue::Exact(c) => c.magnitude_approx(bits),
            SinValue::Numeric(a) => a.with_bits(bits),
        }
    }
}

fn exact_sin(s: &Rational) -> Option<RadConst> {
    let table: [(Rational, &str); 7] = [
        (rat(1, 2), "1"),
        (rat(1, 3), "1/2*sqrt(3)"),
        (rat(2, 3), "1/2*sqrt(3)"),
        (rat(1, 4), "1/2*sqrt(2)"),
        (rat(3, 4), "1/2*sqrt(2)"),
        (rat(1, 6), "1/2"),
        (rat(5, 6), "1/2"),
    ];
    table
        .iter()
        .find(|(q, _)| q == s)
        .map(|(_, v)| v.parse().expect("table constants are well formed"))
}

/// sin(sπ) for 0 < s < 1.
pub fn sin_pi(s: &Rational, digits: u32) -> Result<SinValue, NumericError> {
    if !s.is_positive() || s >= &Rational::one() {
        return Err(NumericError::Domain(format!("sin_pi needs 0 < s < 1, got {s}")));
    }
    match exact_sin(s) {
        Some(c) => Ok(SinValue::Exact(c)),
        None => Ok(SinValue::Numeric(sin_pi_numeric(s, digits)?)),
    }
}

/// Taylor evaluation of sin(sπ) on the reduced angle min(s, 1−s)·π ≤ π/2.
pub fn sin_pi_numeric(s: &Rational, digits: u32) -> Result<BigApprox, NumericError> {
    if !s.is_positive() || s >= &Rational::one() {
        return Err(NumericError::Domain(format!("sin_pi needs 0 < s < 1, got {s}")));
    }
    let bits = bits_for_digits(digits);
    let reduced = if s > &rat(1, 2) { Rational::one() - s } else { s.clone() };
    let x = pi_agm_bits(bits).mul_rational(&reduced);
    let x2 = x.mul(&x);
    let mut term = x.clone();
    let mut sum = BigApprox::zero(bits);
    let mut j: i64 = 0;
    loop {
        sum = sum.add(&term);
        let next = term.mul(&x2).div_int(&BigInt::from((2 * j + 2) * (2 * j + 3)))?.neg();
        j += 1;
        // alternating with decreasing magnitudes (x² < 6): tail ≤ |next|
        if next.abs_upper_ulps() <= num_bigint::BigUint::from(4u32) || next.mantissa().is_zero()
        {
            return Ok(sum.widen(&next.abs_upper_ulps()));
        }
        term = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_angles_are_exact() {
        assert_eq!(sin_pi(&rat(1, 2), 10).unwrap(), SinValue::Exact(RadConst::one()));
        assert_eq!(
            sin_pi(&rat(1, 4), 10).unwrap(),
            SinValue::Exact("1/2*sqrt(2)".parse().unwrap())
        );
    }

    #[test]
    fn fifth_is_numeric() {
        let v = sin_pi(&rat(1, 5), 30).unwrap();
        assert!(!v.is_exact());
        let a = v.to_approx(bits_for_digits(30));
        assert_eq!(a.to_decimal(7), "0.5877852");
    }

    #[test]
    fn exact_branch_agrees_with_taylor() {
        for (p, q) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 6), (5, 6)] {
            let s = rat(p, q);
            let bits = bits_for_digits(60);
            let exact = sin_pi(&s, 60).unwrap().to_approx(bits);
            assert!(exact.agrees_with(&sin_pi_numeric(&s, 60).unwrap(), 60), "{s}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(sin_pi(&rat(0, 1), 10).is_err());
        assert!(sin_pi(&rat(1, 1), 10).is_err());
    }
}
