//! Dense univariate polynomials and rational functions over the rationals.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::fps::{FpsError, Series};
use crate::numerics::rational::{common_denominator, Rational};

/// Polynomial with coefficients listed constant term first. The zero
/// polynomial is the empty list; otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes a polynomial for the variable.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::new(vec![]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Truncated power series of this polynomial.
    pub fn to_series(&self, order: usize) -> Series {
        Series::new((0..=order).map(|i| self.coeff(i)).collect())
    }

    /// Primitive integer polynomial with positive leading coefficient and the
    /// same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let (ints, _) = common_denominator(&self.coeffs);
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
        ints.iter().map(|c| c / &g * sign).collect()
    }

    /// Divides by (x − r); returns the quotient when r is a root.
    pub fn deflate(&self, r: &Rational) -> Option<Poly> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * r;
            q[i - 1] = carry.clone();
        }
        let rem = &self.coeffs[0] + carry * r;
        rem.is_zero().then(|| Poly::new(q))
    }

    /// All rational roots with multiplicity, plus the count of remaining
    /// (non-rational) roots, via the rational root theorem.
    pub fn rational_roots(&self) -> (Vec<(Rational, usize)>, usize) {
        let mut p = self.clone();
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        if p.is_zero() {
            return (roots, 0);
        }
        let mut zero_mult = 0;
        while p.coeffs.len() > 1 && p.coeffs[0].is_zero() {
            p = Poly::new(p.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Rational::zero(), zero_mult));
        }
        if p.degree().unwrap_or(0) == 0 {
            return (roots, 0);
        }
        let ints = p.primitive_integer();
        let lead = ints.last().unwrap().magnitude().clone();
        let cst = ints[0].magnitude().clone();
        let mut candidates: Vec<Rational> = Vec::new();
        for num in divisors(&cst) {
            for den in divisors(&lead) {
                let q = Rational::new(BigInt::from(num.clone()), BigInt::from(den));
                candidates.push(q.clone());
                candidates.push(-q);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let mut mult = 0;
            while let Some(q) = p.deflate(&c) {
                p = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((c, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, p.degree().unwrap_or(0))
    }
}

/// Positive divisors of n (n > 0), by trial-division factorization.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while BigUint::from(p) * BigUint::from(p) <= rest && p < 10_000_000 {
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((BigUint::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        // prime, or a product of primes above the scan bound
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &f;
            }
        }
        divs = next;
    }
    divs
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl TryFrom<Vec<String>> for Poly {
    type Error = String;

    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        v.iter()
            .map(|s| crate::numerics::parse_rational(s).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(Poly::new)
    }
}

impl From<Poly> for Vec<String> {
    fn from(p: Poly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// num/den with den ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Self {
        RatFun { num, den }
    }

    pub fn poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn identity() -> Self {
        Self::poly(Poly::x())
    }

    /// Value at x, or `None` where the denominator vanishes.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> RatFun {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFun { num: n, den: self.den.mul(&self.den) }
    }

    /// x·f′(x)/f(x) at a point where f and its denominator are nonzero.
    pub fn log_derivative_at(&self, x: &Rational) -> Option<Rational> {
        let f = self.eval(x)?;
        if f.is_zero() {
            return None;
        }
        let fp = self.derivative().eval(x)?;
        Some(x * fp / f)
    }

    pub fn to_series(&self, order: usize) -> Result<Series, FpsError> {
        Series::expand_ratfun(&self.num, &self.den, order)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    #[test]
    fn evaluation_and_derivative() {
        let p = Poly::from_ints(&[0, 4, -4]); // 4x(1−x)
        assert_eq!(p.eval(&rat(-1, 8)), rat(-9, 16));
        assert_eq!(p.derivative().eval(&rat(-1, 8)), int(5));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x − 1/4)(x − 4)·(x² + 1)
        let p = Poly::from_ints(&[-1, 4])
            .mul(&Poly::from_ints(&[-4, 1]))
            .mul(&Poly::from_ints(&[1, 0, 1]));
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![(rat(1, 4), 1), (int(4), 1)]);
        assert_eq!(rest, 2);
        let sq = Poly::from_ints(&[1, -2]).pow(3).mul(&Poly::x());
        assert_eq!(sq.rational_roots().0, vec![(int(0), 1), (rat(1, 2), 3)]);
    }

    #[test]
    fn ratfun_log_derivative() {
        // x/(x − 1) at 1/2: x·C′/C = −1/(x−1) = 2
        let c = RatFun::new(Poly::x(), Poly::from_ints(&[-1, 1]));
        assert_eq!(c.log_derivative_at(&rat(1, 2)), Some(int(2)));
        assert_eq!(c.eval(&int(1)), None);
    }

    #[test]
    fn serde_text_form() {
        let p = Poly::new(vec![rat(-9, 40), int(0), int(3)]);
        let v: Vec<String> = p.clone().into();
        assert_eq!(v, vec!["-9/40", "0", "3"]);
        assert_eq!(Poly::try_from(v).unwrap(), p);
    }
}
