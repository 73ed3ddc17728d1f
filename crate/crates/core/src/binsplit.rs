//! π digits from a ₃F₂ catalog entry by binary splitting.
//!
//! With term ratio p(n)/q(n), the partial sum over [l, r) of (a + bn)·Π p/q
//! is T/Q where, for a leaf, P = p(n), Q = q(n), T = (a + bn)·q(n), and
//! adjacent ranges merge as P = P₁P₂, Q = Q₁Q₂, T = T₁Q₂ + P₁T₂.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::catalog::CatalogEntry;
use crate::hyper::CoeffFamily;
use crate::numerics::pi::pi_oracle;
use crate::numerics::rational::{common_denominator, Rational};

/// Ranges shorter than this are split sequentially.
const PAR_THRESHOLD: u64 = 256;
const GUARD_DIGITS: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("binary splitting needs a hyper3F2 entry, got {0}")]
    UnsupportedFamily(String),
    #[error("the constant {0} is not real")]
    NonExactConstant(String),
    #[error("z = {0} is not inside the unit disc")]
    NotConvergent(String),
    #[error("digits must be at least 1")]
    NoDigits,
}

/// tₙ₊₁zⁿ⁺¹/(tₙzⁿ) = p(n)/q(n), integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermRatio {
    pub p: Vec<BigInt>,
    pub q: Vec<BigInt>,
}

fn poly_mul(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn ints(cs: &[i64]) -> Vec<BigInt> {
    cs.iter().map(|&c| BigInt::from(c)).collect()
}

impl TermRatio {
    /// (n + 1/2)(n + s)(n + 1 − s)/(n + 1)³ · z with s = u/v and z = zn/zd.
    pub fn hyper3f2(s: &Rational, z: &Rational) -> TermRatio {
        let (u, v) = (s.numer().clone(), s.denom().clone());
        let p = poly_mul(
            &poly_mul(&ints(&[1, 2]), &[u.clone(), v.clone()]),
            &[&v - &u, v.clone()],
        );
        let p: Vec<BigInt> = p.into_iter().map(|c| c * z.numer()).collect();
        let q: Vec<BigInt> = ints(&[1, 3, 3, 1])
            .into_iter()
            .map(|c| c * BigInt::from(2) * &v * &v * z.denom())
            .collect();
        TermRatio { p, q }
    }

    pub fn eval_p(&self, n: u64) -> BigInt {
        horner(&self.p, n)
    }

    pub fn eval_q(&self, n: u64) -> BigInt {
        horner(&self.q, n)
    }

    /// t₀…t_{count−1} (with zⁿ folded in), from the ratio.
    pub fn terms(&self, count: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(count);
        let mut t = Rational::one();
        for n in 0..count as u64 {
            out.push(t.clone());
            t *= Rational::new(self.eval_p(n), self.eval_q(n));
        }
        out
    }
}

fn horner(cs: &[BigInt], n: u64) -> BigInt {
    let x = BigInt::from(n);
    cs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

pub fn term_ratio(entry: &CatalogEntry) -> Result<TermRatio, SplitError> {
    match &entry.spec.family {
        CoeffFamily::Hyper3F2(s) => Ok(TermRatio::hyper3f2(s, &entry.spec.z)),
        other => Err(SplitError::UnsupportedFamily(other.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitNode {
    pub p: BigInt,
    pub q: BigInt,
    pub t: BigInt,
}

/// (a + bn) is passed as integers A + Bn (over a common denominator kept by the caller).
pub fn split(ratio: &TermRatio, a: &BigInt, b: &BigInt, l: u64, r: u64) -> SplitNode {
    debug_assert!(l < r);
    if r - l == 1 {
        let q = ratio.eval_q(l);
        let t = (a + b * BigInt::from(l)) * &q;
        return SplitNode { p: ratio.eval_p(l), q, t };
    }
    let m = l + (r - l) / 2;
    let (left, right) = if r - l >= PAR_THRESHOLD {
        rayon::join(|| split(ratio, a, b, l, m), || split(ratio, a, b, m, r))
    } else {
        (split(ratio, a, b, l, m), split(ratio, a, b, m, r))
    };
    SplitNode {
        t: &left.t * &right.q + &left.p * &right.t,
        p: left.p * right.p,
        q: left.q * right.q,
    }
}

/// Number of terms so that the tail is below 10^(−digits): the terms shrink
/// like |z|ⁿ, so digits/log₁₀(1/|z|) plus slack for the polynomial factors.
pub fn terms_needed(z: &Rational, digits: u64) -> u64 {
    let num = z.numer().abs().to_f64().unwrap_or(f64::INFINITY);
    let den = z.denom().to_f64().unwrap_or(f64::INFINITY);
    let per_term = if num.is_finite() && den.is_finite() {
        (den / num).log10()
    } else {
        // 1/|z| beyond f64 range
        (z.denom().bits() as f64 - z.numer().bits() as f64) * std::f64::consts::LOG10_2
    };
    (digits as f64 / per_term).ceil() as u64 + 10
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub digits: u64,
    pub terms: u64,
    pub split_time: Duration,
    pub recombine_time: Duration,
    pub total: Duration,
    pub output: String,
}

/// The first `digits` decimal digits of π ("31415…"), computed as
/// π = c·Q/T with √m by integer Newton iteration.
pub fn pi_digits(entry: &CatalogEntry, digits: u64) -> Result<String, SplitError> {
    bench(entry, digits).map(|r| r.output)
}

pub fn bench(entry: &CatalogEntry, digits: u64) -> Result<BenchReport, SplitError> {
    if digits == 0 {
        return Err(SplitError::NoDigits);
    }
    let spec = &entry.spec;
    let ratio = term_ratio(entry)?;
    if spec.c.is_imaginary() {
        return Err(SplitError::NonExactConstant(spec.c.to_string()));
    }
    let z_abs = spec.z.abs();
    if z_abs >= Rational::one() {
        return Err(SplitError::NotConvergent(spec.z.to_string()));
    }
    let start = Instant::now();
    let work = digits + GUARD_DIGITS;
    let n = terms_needed(&spec.z, work);
    let (ab, den) = common_denominator(&[spec.a.clone(), spec.b.clone()]);
    let node = split(&ratio, &ab[0], &ab[1], 0, n);
    let split_time = start.elapsed();

    // Σ = T/(Q·den), π = c/Σ = r·√m·Q·den/T
    let scale = num_traits::pow(BigUint::from(10u32), work as usize);
    let m = spec.c.m();
    let root = (m * &scale * &scale).sqrt();
    let r = spec.c.r();
    let num = BigInt::from(root) * r.numer() * &node.q * &den;
    let dnm = r.denom() * &node.t;
    let value = (num / dnm).abs();
    let mut text = value.to_string();
    text.truncate(digits as usize);
    let total = start.elapsed();
    Ok(BenchReport {
        digits,
        terms: n,
        split_time,
        recombine_time: total - split_time,
        total,
        output: text,
    })
}

/// The first `digits` digits of π from the AGM oracle, in the same form.
pub fn oracle_digits(digits: u64) -> String {
    let d = digits as u32;
    let text = pi_oracle(d + 10).to_decimal(d + 5).replace('.', "");
    text[..digits as usize].to_string()
}

/// "3." followed by the remaining digits.
pub fn format_digits(digits: &str) -> String {
    format!("{}.{}", &digits[..1], &digits[1..])
}
