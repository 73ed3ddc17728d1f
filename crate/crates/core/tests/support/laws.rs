//! Randomized algebraic laws, shared by the property suite and the
//! acceptance runner; each target uses a subset.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use rpv::fps::Series;
use rpv::hyper::{binomial, gen_binomial, pochhammer, CoeffFamily};
use rpv::numerics::{int, rat, RadConst, Rational};

pub const ORDER: usize = 10;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

pub fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rational(), ORDER + 1).prop_map(Series::new)
}

pub fn unit_series() -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rational(), ORDER).prop_map(|mut cs| {
        cs.insert(0, int(1));
        Series::new(cs)
    })
}

/// Series without constant term, for composition.
pub fn inner_series() -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rational(), ORDER).prop_map(|mut cs| {
        cs.insert(0, int(0));
        Series::new(cs)
    })
}

pub fn radconst() -> impl Strategy<Value = RadConst> {
    (nonzero_rational(), 1u32..=60, any::<bool>())
        .prop_map(|(r, m, i)| RadConst::new(r, BigUint::from(m), i).expect("valid radicand"))
}

/// s with small denominator in (0, 1).
pub fn unit_interval_s() -> impl Strategy<Value = Rational> {
    (2i64..=12)
        .prop_flat_map(|d| (1..d).prop_map(move |n| rat(n, d)))
}

pub fn ring_laws(f: &Series, g: &Series, h: &Series) -> Result<(), TestCaseError> {
    prop_assert_eq!(f.add(g), g.add(f));
    prop_assert_eq!(f.mul(g), g.mul(f));
    prop_assert_eq!(f.add(g).add(h), f.add(&g.add(h)));
    prop_assert_eq!(f.mul(g).mul(h), f.mul(&g.mul(h)));
    prop_assert_eq!(f.mul(&g.add(h)), f.mul(g).add(&f.mul(h)));
    prop_assert_eq!(f.mul(&Series::one(ORDER)), f.clone());
    prop_assert_eq!(f.add(&Series::zero(ORDER)), f.clone());
    prop_assert_eq!(f.sub(f), Series::zero(ORDER));
    Ok(())
}

/// θ(fg) = θf·g + f·θg and θ is linear.
pub fn theta_laws(f: &Series, g: &Series, q: &Rational) -> Result<(), TestCaseError> {
    prop_assert_eq!(f.mul(g).theta(), f.theta().mul(g).add(&f.mul(&g.theta())));
    prop_assert_eq!(f.add(g).theta(), f.theta().add(&g.theta()));
    prop_assert_eq!(f.scale(q).theta(), f.theta().scale(q));
    Ok(())
}

/// Binomial-series powers of a unit series behave like exponents.
pub fn power_laws(u: &Series, e1: &Rational, e2: &Rational, k: u32) -> Result<(), TestCaseError> {
    let p1 = u.pow_rational(e1).unwrap();
    let p2 = u.pow_rational(e2).unwrap();
    prop_assert_eq!(p1.mul(&p2), u.pow_rational(&(e1 + e2)).unwrap());
    prop_assert_eq!(u.pow_rational(&int(k as i64)).unwrap(), u.pow_int(k));
    prop_assert_eq!(u.recip().unwrap().mul(u), Series::one(ORDER));
    Ok(())
}

/// (f∘g)∘h = f∘(g∘h) for g, h without constant term.
pub fn compose_law(f: &Series, g: &Series, h: &Series) -> Result<(), TestCaseError> {
    let left = f.compose(g).unwrap().compose(h).unwrap();
    let right = f.compose(&g.compose(h).unwrap()).unwrap();
    prop_assert_eq!(left, right);
    Ok(())
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).map(BigInt::from).product())
}

/// Pochhammer recurrence, integer case and the generalized binomial identity.
pub fn pochhammer_laws(a: &Rational, n: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(pochhammer(a, n + 1), pochhammer(a, n) * (a + int(n as i64)));
    prop_assert_eq!(pochhammer(&int(1), n), factorial(n));
    // (a)ₙ = Π (a + j), computed directly
    let direct: Rational = (0..n).map(|j| a + int(j as i64)).fold(Rational::one(), |p, t| p * t);
    prop_assert_eq!(pochhammer(a, n), direct);
    // C(−a, n) = (−1)ⁿ(a)ₙ/n!
    let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
    prop_assert_eq!(gen_binomial(&-a, n), sign * pochhammer(a, n) / factorial(n));
    Ok(())
}

/// Family coefficients against their defining sums.
pub fn coeff_oracles(s: &Rational, n: usize) -> Result<(), TestCaseError> {
    let one_minus = int(1) - s;
    let h = CoeffFamily::Hyper3F2(s.clone()).coeff(n);
    let expect = pochhammer(&rat(1, 2), n) * pochhammer(s, n) * pochhammer(&one_minus, n)
        / factorial(n).pow(3);
    prop_assert_eq!(h, expect);

    let u = |k: usize| pochhammer(s, k) * pochhammer(&one_minus, k) / factorial(k).pow(2);
    let sq: Rational = (0..=n).map(|k| u(k) * u(n - k)).sum();
    prop_assert_eq!(CoeffFamily::Square2F1(s.clone()).coeff(n), sq);

    let c2 = |k: usize| Rational::from_integer(binomial(2 * k as u64, k as u64));
    let conv: Rational = (0..=n)
        .map(|k| c2(k) * gen_binomial(&-s, k) * c2(n - k) * gen_binomial(&-&one_minus, n - k))
        .sum();
    prop_assert_eq!(CoeffFamily::ConvCentral(s.clone()).coeff(n), conv);

    let nn = n as u64;
    let domb: BigInt = (0..=nn).map(|k| binomial(2 * k, k) * binomial(nn, k).pow(2)).sum();
    prop_assert_eq!(
        CoeffFamily::Domb.coeff(n),
        Rational::from_integer(binomial(2 * nn, nn) * domb)
    );
    Ok(())
}

pub fn radconst_laws(x: &RadConst, y: &RadConst, z: &RadConst, q: &Rational) -> Result<(), TestCaseError> {
    prop_assert_eq!(x.mul(y), y.mul(x));
    prop_assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
    prop_assert_eq!(x.mul(&RadConst::one()), x.clone());
    prop_assert_eq!(x.mul(&x.inv().unwrap()), RadConst::one());
    prop_assert_eq!(x.mul(y).norm_squared(), x.norm_squared() * y.norm_squared());
    prop_assert_eq!(x.scale(q).radical(), if q.is_zero() { RadConst::zero().radical() } else { x.radical() });
    prop_assert_eq!(x.to_string().parse::<RadConst>().unwrap(), x.clone());
    // same-radical sums stay on the radical
    let sum = x.add(&x.scale(q)).unwrap();
    prop_assert_eq!(sum, x.scale(&(int(1) + q)));
    prop_assert!(x.add(&x.neg()).unwrap().is_zero());
    Ok(())
}

/// Normalizing is idempotent and insensitive to a common rational factor.
pub fn normalization_laws(a: &Rational, b: &Rational, q: &Rational) -> Result<(), TestCaseError> {
    prop_assume!(!(a.is_zero() && b.is_zero()) && !q.is_zero());
    let spec = rpv::translate::SeriesSpec {
        id: "p".into(),
        family: CoeffFamily::Hyper3F2(rat(1, 2)),
        z: rat(1, 4),
        a: a.clone(),
        b: b.clone(),
        c: RadConst::one(),
        status: rpv::translate::Status::NumericOnly,
        note: String::new(),
    };
    let n = spec.normalized();
    prop_assert_eq!(n.normalized(), n.clone());
    prop_assert!(n.a.is_integer() && n.b.is_integer());
    prop_assert!(n.b > Rational::zero() || (n.b.is_zero() && n.a > Rational::zero()));
    let scaled = rpv::translate::SeriesSpec {
        a: a * q,
        b: b * q,
        c: spec.c.scale(q),
        ..spec.clone()
    };
    prop_assert!(scaled.projectively_equal(&spec));
    Ok(())
}

/// Translating through a rule and back through its inverse at the same
/// point returns the starting identity up to normalization.
pub fn inverse_round_trip(
    rule: &rpv::transforms::TransformRule,
    x0: &Rational,
    a: i64,
    b: i64,
) -> Result<(), TestCaseError> {
    use rpv::translate::{translate_exact, SeriesSpec, Status};
    prop_assume!(a != 0 || b != 0);
    let Some(z) = rule.a.eval(x0) else { return Err(TestCaseError::reject("pole")) };
    let source = SeriesSpec {
        id: "p".into(),
        family: rule.lhs.clone(),
        z,
        a: int(a),
        b: int(b),
        c: RadConst::one(),
        status: Status::NumericOnly,
        note: String::new(),
    };
    let Ok((_, there)) = translate_exact(&source, rule, x0) else {
        return Err(TestCaseError::reject("singular point"));
    };
    let Ok((_, back)) = translate_exact(&there, &rule.inverse(), x0) else {
        return Err(TestCaseError::reject("singular on the way back"));
    };
    prop_assert!(back.projectively_equal(&source), "{:?} vs {:?}", back, source);
    Ok(())
}

/// The starting-formula sum and the Gauss product at 1/2 agree.
pub fn start_matches_gauss(s: &Rational) -> Result<(), TestCaseError> {
    let digits = 20;
    let start = rpv::special::starting_formula(s, digits).unwrap();
    let gauss = rpv::hyper::gauss_half_check(s, digits).unwrap();
    prop_assert!(start.pass && gauss.pass);
    prop_assert!(start.lhs.agrees_with(&gauss.left, digits));
    Ok(())
}
