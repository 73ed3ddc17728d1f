//! Truncated power series with exact rational coefficients. A series of
//! order N knows its coefficients of x⁰…x^N; every operation states the order
//! of its result.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::rational::{common_denominator, Rational};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpsError {
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("base series does not start with 1")]
    NonUnitConstantTerm,
    #[error("denominator vanishes at zero")]
    DenominatorVanishesAtZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Series of order `coeffs.len() − 1`; an empty list becomes 0 + O(x).
    pub fn new(coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            return Series { coeffs: vec![Rational::zero()] };
        }
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Series {
        let n = order.min(self.order());
        Series { coeffs: self.coeffs[..=n].to_vec() }
    }

    /// Index of the first nonzero coefficient, if any within the known order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series { coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series { coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, q: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Cauchy product at the shared order. Denominators are cleared first so
    /// the convolution runs over integers and each coefficient is reduced once.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let (a, da) = common_denominator(&self.coeffs[..=n]);
        let (b, db) = common_denominator(&other.coeffs[..=n]);
        let den = da * db;
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = BigInt::zero();
                for i in 0..=k {
                    if !a[i].is_zero() && !b[k - i].is_zero() {
                        acc += &a[i] * &b[k - i];
                    }
                }
                Rational::new(acc, den.clone())
            })
            .collect();
        Series { coeffs }
    }

    pub fn pow_int(&self, k: u32) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// outer∘inner. With inner of valuation v ≥ 1 and order M, the result is
    /// exact to order min(M, v·(N+1) − 1) where N is outer's order.
    pub fn compose(&self, inner: &Series) -> Result<Series, FpsError> {
        if !inner.coeffs[0].is_zero() {
            return Err(FpsError::NonzeroConstantTerm);
        }
        let v = match inner.valuation() {
            Some(v) => v,
            // inner ≡ 0 to its order: only the constant survives
            None => return Ok(Series::constant(self.coeffs[0].clone(), inner.order())),
        };
        let target = inner.order().min(v * (self.order() + 1) - 1);
        let inner = inner.truncate(target);
        let top = self.order().min(target / v);
        let mut acc = Series::constant(self.coeffs[top].clone(), target);
        for k in (0..top).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// (base)^e by the recurrence n·fₙ = Σₖ ((e+1)k − n)·gₖ·fₙ₋ₖ; requires g₀ = 1.
    pub fn pow_rational(&self, e: &Rational) -> Result<Series, FpsError> {
        if !self.coeffs[0].is_one() {
            return Err(FpsError::NonUnitConstantTerm);
        }
        let n_max = self.order();
        let mut f: Vec<Rational> = Vec::with_capacity(n_max + 1);
        f.push(Rational::one());
        let e1 = e + Rational::one();
        for n in 1..=n_max {
            let nn = Rational::from_integer(BigInt::from(n));
            let mut acc = Rational::zero();
            for k in 1..=n {
                let g = &self.coeffs[k];
                if g.is_zero() {
                    continue;
                }
                let w = &e1 * Rational::from_integer(BigInt::from(k)) - &nn;
                acc += w * g * &f[n - k];
            }
            f.push(acc / nn);
        }
        Ok(Series { coeffs: f })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Series, FpsError> {
        Series::expand_series_quotient(&Series::one(self.order()), self)
    }

    /// θ = x·d/dx.
    pub fn theta(&self) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// Expansion of num/den to the given order.
    pub fn expand_ratfun(num: &Poly, den: &Poly, order: usize) -> Result<Series, FpsError> {
        Self::expand_series_quotient(&num.to_series(order), &den.to_series(order))
    }

    fn expand_series_quotient(num: &Series, den: &Series) -> Result<Series, FpsError> {
        let d0 = den.coeffs[0].clone();
        if d0.is_zero() {
            return Err(FpsError::DenominatorVanishesAtZero);
        }
        let order = num.order().min(den.order());
        let inv0 = d0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = num.coeffs[n].clone();
            for k in 1..=n {
                if !den.coeffs[k].is_zero() {
                    acc -= &den.coeffs[k] * &q[n - k];
                }
            }
            q.push(acc * &inv0);
        }
        Ok(Series { coeffs: q })
    }

    /// First index below the shared order where the two series differ.
    pub fn first_mismatch(&self, other: &Series) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}
