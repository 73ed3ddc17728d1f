//! Two independent π evaluations: Gauss–Legendre AGM (the oracle) and a
//! Machin arctangent formula in plain fixed-point integers (the cross-check).
//! Neither touches any series from the catalog.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::approx::{bits_for_digits, BigApprox};
use super::rational::rat;

/// Smallest iteration count n whose truncation bound 2^(n+4)·14·e^(−π·2^(n+1))
/// (times a safety factor 4) is below 2^(−bits−2).
fn agm_iterations(bits: u32) -> u32 {
    let mut n = 0u32;
    loop {
        let log2_bound = (n + 4) as f64 + 14f64.log2() + 2.0
            - std::f64::consts::PI * 2f64.powi(n as i32 + 1) * std::f64::consts::LOG2_E;
        if log2_bound < -(bits as f64) - 2.0 {
            return n;
        }
        n += 1;
    }
}

/// π with certified error below 10^(−digits).
pub fn pi_oracle(digits: u32) -> BigApprox {
    pi_agm_bits(bits_for_digits(digits.max(1)))
}

pub fn pi_agm_bits(bits: u32) -> BigApprox {
    let half = rat(1, 2);
    let mut a = BigApprox::from_integer(BigInt::one(), bits);
    let mut b = BigApprox::from_rational(&half, bits).sqrt();
    let mut t = BigApprox::from_rational(&rat(1, 4), bits);
    let mut p = BigInt::one();
    for _ in 0..agm_iterations(bits) {
        let a_next = a.add(&b).mul_rational(&half);
        let b_next = a.mul(&b).sqrt();
        let d = a.sub(&a_next);
        t = t.sub(&d.mul(&d).mul_int(&p));
        p <<= 1u32;
        a = a_next;
        b = b_next;
    }
    let s = a.add(&b);
    let num = s.mul(&s);
    let den = t.mul_int(&BigInt::from(4));
    // truncation of the iteration is below one ulp by choice of count
    num.div(&den).expect("t stays near 1/π·…, far from zero").widen(&BigUint::one())
}

/// atan(1/k)·2^bits as a fixed-point integer, with an error bound in ulps.
fn atan_inv(k: u64, bits: u32) -> (BigInt, BigUint) {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << bits) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        j += 1;
    }
    // each power and each quotient truncates by < 1 ulp; the dropped tail is < 1 ulp
    (sum, BigUint::from(2 * j + 1))
}

/// π = 16·atan(1/5) − 4·atan(1/239), entirely in integer arithmetic.
pub fn machin_pi(digits: u32) -> BigApprox {
    let bits = bits_for_digits(digits.max(1));
    let (a, ea) = atan_inv(5, bits);
    let (b, eb) = atan_inv(239, bits);
    let mant = a * 16 - b * 4;
    let err = ea * 16u32 + eb * 4u32;
    BigApprox::with_error(mant, err, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_digits() {
        assert_eq!(pi_oracle(10).to_decimal(10), "3.1415926535");
        assert_eq!(pi_oracle(1).to_decimal(1), "3.1");
        assert!(pi_oracle(10).error_below(10));
    }

    #[test]
    fn agm_matches_machin() {
        for d in [10, 100, 1000] {
            assert!(pi_oracle(d).agrees_with(&machin_pi(d), d), "{d} digits");
        }
    }

    #[test]
    fn fifty_digits() {
        assert_eq!(
            pi_oracle(50).to_decimal(50),
            "3.14159265358979323846264338327950288419716939937510"
        );
    }
}
