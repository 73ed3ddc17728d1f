use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::approx::BigApprox;
use super::rational::{parse_rational, Rational};
use super::NumericError;

/// Trial-division bound for squarefree extraction. A cofactor left over after
/// dividing out every prime below this bound is provably squarefree when it is
/// not a perfect square and smaller than the bound cubed.
const TRIAL_BOUND: u64 = 1_000_000;

/// Splits `n` as `k²·m` with `m` squarefree.
pub fn squarefree_decompose(n: &BigUint) -> Result<(BigUint, BigUint), NumericError> {
    if n.is_zero() {
        return Err(NumericError::Domain("squarefree part of zero".into()));
    }
    let mut rest = n.clone();
    let mut k = BigUint::one();
    let mut m = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            k *= num_traits::pow(bp.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                m *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok((k, m));
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        k *= r;
        return Ok((k, m));
    }
    let bound = BigUint::from(TRIAL_BOUND);
    let below_cube = rest < &bound * &bound * &bound;
    let fully_scanned = {
        let bp = BigUint::from(p);
        &bp * &bp > rest
    };
    if fully_scanned || below_cube {
        m *= rest;
        Ok((k, m))
    } else {
        Err(NumericError::Unrepresentable(format!(
            "cannot certify squarefree part of {n}"
        )))
    }
}

/// Exact constant r·√m·iᵗ with m squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RadConst {
    r: Rational,
    m: BigUint,
    imaginary: bool,
}

impl RadConst {
    pub fn zero() -> Self {
        RadConst { r: Rational::zero(), m: BigUint::one(), imaginary: false }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        RadConst { r: Rational::one(), m: BigUint::one(), imaginary: true }
    }

    pub fn from_rational(r: Rational) -> Self {
        RadConst { r, m: BigUint::one(), imaginary: false }.canonical()
    }

    /// r·√m·iᵗ for arbitrary positive m; square factors of m are folded into r.
    pub fn new(r: Rational, m: BigUint, imaginary: bool) -> Result<Self, NumericError> {
        let (k, sf) = squarefree_decompose(&m)?;
        let r = r * Rational::from_integer(BigInt::from(k));
        Ok(RadConst { r, m: sf, imaginary }.canonical())
    }

    /// Principal square root of a rational (imaginary for negative input).
    pub fn sqrt_of(q: &Rational) -> Result<Self, NumericError> {
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let num = q.numer().magnitude().clone();
        let den = q.denom().magnitude().clone();
        // √(p/q) = √(p·q)/q
        let (k, m) = squarefree_decompose(&(&num * &den))?;
        let r = Rational::new(BigInt::from(k), BigInt::from(den));
        Ok(RadConst { r, m, imaginary: q.is_negative() }.canonical())
    }

    /// Principal-branch power `base^e` for half-integer `e`:
    /// a negative base contributes e^{iπe}, so (−u)^{k/2} = u^{k/2}·iᵏ.
    pub fn pow_half_integer(base: &Rational, e: &Rational) -> Result<Self, NumericError> {
        let two_e = e * Rational::from_integer(BigInt::from(2));
        if !two_e.is_integer() {
            return Err(NumericError::Unrepresentable(format!(
                "exponent {e} is not a half-integer"
            )));
        }
        if base.is_zero() {
            return if e.is_positive() {
                Ok(Self::zero())
            } else {
                Err(NumericError::DivisionByZero)
            };
        }
        let k = two_e.to_integer().to_i64().ok_or_else(|| {
            NumericError::Unrepresentable(format!("exponent {e} too large"))
        })?;
        let mag = base.abs();
        let whole = super::rational::pow_int(&mag, k.div_euclid(2));
        let mut out = Self::from_rational(whole);
        if k.rem_euclid(2) == 1 {
            out = out.mul(&Self::sqrt_of(&mag)?);
        }
        if base.is_negative() {
            // iᵏ
            let phase = match k.rem_euclid(4) {
                0 => Self::one(),
                1 => Self::i(),
                2 => Self::from_rational(-Rational::one()),
                _ => Self::i().neg(),
            };
            out = out.mul(&phase);
        }
        Ok(out)
    }

    fn canonical(mut self) -> Self {
        if self.r.is_zero() {
            self.m = BigUint::one();
            self.imaginary = false;
        }
        self
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn is_imaginary(&self) -> bool {
        self.imaginary
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.m.is_one() && !self.imaginary
    }

    /// The unit radical √m·iᵗ carried by this constant.
    pub fn radical(&self) -> RadConst {
        RadConst { r: Rational::one(), m: self.m.clone(), imaginary: self.imaginary }
    }

    pub fn same_radical(&self, other: &RadConst) -> bool {
        self.m == other.m && self.imaginary == other.imaginary
    }

    pub fn mul(&self, other: &RadConst) -> RadConst {
        let g = self.m.gcd(&other.m);
        let m = (&self.m / &g) * (&other.m / &g);
        let mut r = &self.r * &other.r * Rational::from_integer(BigInt::from(g));
        let imaginary = self.imaginary ^ other.imaginary;
        if self.imaginary && other.imaginary {
            r = -r;
        }
        RadConst { r, m, imaginary }.canonical()
    }

    pub fn scale(&self, q: &Rational) -> RadConst {
        RadConst { r: &self.r * q, m: self.m.clone(), imaginary: self.imaginary }.canonical()
    }

    pub fn neg(&self) -> RadConst {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &RadConst) -> Result<RadConst, NumericError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if !self.same_radical(other) {
            return Err(NumericError::IncompatibleRadicals {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(RadConst { r: &self.r + &other.r, m: self.m.clone(), imaginary: self.imaginary }
            .canonical())
    }

    pub fn sub(&self, other: &RadConst) -> Result<RadConst, NumericError> {
        self.add(&other.neg())
    }

    /// 1/(r√m iᵗ) = (±1/(r·m))·√m·iᵗ.
    pub fn inv(&self) -> Result<RadConst, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let mut r = self.r.recip() / Rational::from_integer(BigInt::from(self.m.clone()));
        if self.imaginary {
            r = -r;
        }
        Ok(RadConst { r, m: self.m.clone(), imaginary: self.imaginary })
    }

    pub fn div(&self, other: &RadConst) -> Result<RadConst, NumericError> {
        Ok(self.mul(&other.inv()?))
    }

    /// |value|² as an exact rational.
    pub fn norm_squared(&self) -> Rational {
        &self.r * &self.r * Rational::from_integer(BigInt::from(self.m.clone()))
    }

    /// Numeric value of r·√m (the factor i, if any, is left to the caller).
    pub fn magnitude_approx(&self, bits: u32) -> BigApprox {
        let root = BigApprox::from_integer(BigInt::from(self.m.clone()), bits).sqrt();
        root.mul_rational(&self.r)
    }
}

impl fmt::Display for RadConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        if !self.m.is_one() {
            write!(f, "*sqrt({})", self.m)?;
        }
        if self.imaginary {
            write!(f, "*i")?;
        }
        Ok(())
    }
}

impl FromStr for RadConst {
    type Err = NumericError;

    /// Accepts a `*`-separated product of rational literals, `sqrt(m)` and `i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.is_empty() {
            return Err(NumericError::Parse("empty constant".into()));
        }
        let (negate, body) = match text.strip_prefix('-') {
            Some(rest) if rest.starts_with("sqrt") || rest.starts_with('i') => (true, rest),
            _ => (false, text),
        };
        let mut acc = RadConst::one();
        for token in body.split('*') {
            let token = token.trim();
            let factor = if token == "i" {
                RadConst::i()
            } else if let Some(inner) =
                token.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')'))
            {
                let m: BigUint = inner
                    .trim()
                    .parse()
                    .map_err(|_| NumericError::Parse(format!("bad radicand in {s:?}")))?;
                if m.is_zero() {
                    RadConst::zero()
                } else {
                    RadConst::new(Rational::one(), m, false)?
                }
            } else {
                RadConst::from_rational(parse_rational(token)?)
            };
            acc = acc.mul(&factor);
        }
        Ok(if negate { acc.neg() } else { acc })
    }
}

impl TryFrom<String> for RadConst {
    type Error = NumericError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<RadConst> for String {
    fn from(c: RadConst) -> Self {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn rc(s: &str) -> RadConst {
        s.parse().unwrap()
    }

    #[test]
    fn products_fold_radicals_and_i() {
        assert_eq!(rc("sqrt(2)").mul(&rc("sqrt(2)")), rc("2"));
        assert_eq!(RadConst::i().mul(&RadConst::i()), rc("-1"));
        assert_eq!(rc("3*sqrt(2)").mul(&rc("2*sqrt(6)")), rc("12*sqrt(3)"));
    }

    #[test]
    fn sums_require_a_shared_radical() {
        assert_eq!(rc("sqrt(2)").add(&rc("2*sqrt(2)")).unwrap(), rc("3*sqrt(2)"));
        assert_eq!(rc("5*sqrt(3)").add(&RadConst::zero()).unwrap(), rc("5*sqrt(3)"));
        assert!(matches!(
            rc("sqrt(2)").add(&rc("sqrt(3)")),
            Err(NumericError::IncompatibleRadicals { .. })
        ));
    }

    #[test]
    fn square_factors_are_extracted() {
        assert_eq!(RadConst::new(int(1), BigUint::from(72u32), false).unwrap(), rc("6*sqrt(2)"));
        assert_eq!(RadConst::sqrt_of(&rat(256, 3969)).unwrap(), rc("16/63"));
        assert_eq!(RadConst::sqrt_of(&rat(1, 3)).unwrap(), rc("1/3*sqrt(3)"));
        let big = BigUint::from(640320u32).pow(3);
        assert_eq!(RadConst::new(int(1), big, false).unwrap(), rc("5122560*sqrt(10005)"));
    }

    #[test]
    fn negative_bases_follow_the_principal_branch() {
        // (1 − u)^(−1/2) with u = 5: −i/2
        let v = RadConst::pow_half_integer(&int(-4), &rat(-1, 2)).unwrap();
        assert_eq!(v, rc("-1/2*i"));
        let w = RadConst::pow_half_integer(&int(-15), &rat(1, 2)).unwrap();
        assert_eq!(w, rc("sqrt(15)*i"));
        let cube = RadConst::pow_half_integer(&int(-4), &rat(-3, 2)).unwrap();
        // |−4|^(−3/2)·i^(−3) = (1/8)·i
        assert_eq!(cube, rc("1/8*i"));
    }

    #[test]
    fn inverse_and_display() {
        let x = rc("2*sqrt(3)*i");
        assert_eq!(x.mul(&x.inv().unwrap()), RadConst::one());
        assert_eq!(x.to_string(), "2*sqrt(3)*i");
        assert_eq!(rc("-1/2*i").to_string(), "-1/2*i");
        assert_eq!(RadConst::zero().to_string(), "0");
        assert_eq!(rc("-sqrt(5)"), rc("-1*sqrt(5)"));
    }
}
