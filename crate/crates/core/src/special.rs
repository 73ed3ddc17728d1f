//! The starting formula, the limit formulas and the Sun checks.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hyper::{binomial, eval_numeric, CheckResult, CoeffFamily, HyperError, HyperParams};
use crate::numerics::approx::{bits_for_digits, BigApprox};
use crate::numerics::pi::pi_oracle;
use crate::numerics::radconst::RadConst;
use crate::numerics::rational::{int, pow_int, rat, to_f64, Rational};
use crate::numerics::trig::{sin_pi, SinValue};
use crate::numerics::NumericError;
use crate::poly::{Poly, RatFun};
use crate::transforms::{find_rule, rule_catalog, verify_rule_formal};
use crate::translate::{
    constant_over_pi, points_for_target, solve_for_x, spec, translate, translate_exact,
    TranslateError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("limit {id}: extrapolants still move by {change:e} at the last node")]
    NoConvergenceDetected { id: String, change: f64 },
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

impl From<crate::transforms::RuleError> for SpecialError {
    fn from(e: crate::transforms::RuleError) -> Self {
        SpecialError::Translate(e.into())
    }
}

fn over_pi(x: &BigApprox, digits: u32) -> Result<BigApprox, NumericError> {
    x.div(&pi_oracle(digits).with_bits(x.bits()))
}

// ---- starting formula ----

#[derive(Clone, Debug)]
pub struct StartReport {
    pub s: Rational,
    /// Σ n·cₙ·(1/2)ⁿ over the Cauchy square of (s)ₖ(1−s)ₖ/k!².
    pub lhs: BigApprox,
    /// 2·sin(sπ)/π.
    pub target: BigApprox,
    /// 2·sin(sπ) when it is a single-radical constant.
    pub exact: Option<RadConst>,
    pub digits_matched: u32,
    pub pass: bool,
}

pub fn starting_formula(s: &Rational, digits: u32) -> Result<StartReport, SpecialError> {
    let family = CoeffFamily::Square2F1(s.clone());
    family.validate()?;
    let lhs = eval_numeric(&family, &int(0), &int(1), &rat(1, 2), digits)?;
    let bits = bits_for_digits(digits);
    let sine = sin_pi(s, digits)?;
    let exact = match &sine {
        SinValue::Exact(c) => Some(c.scale(&int(2))),
        SinValue::Numeric(_) => None,
    };
    let target = over_pi(&sine.to_approx(bits).mul_int(&BigInt::from(2)), digits)?;
    Ok(StartReport {
        s: s.clone(),
        digits_matched: lhs.digits_matched(&target, digits + 10),
        pass: lhs.agrees_with(&target, digits),
        lhs,
        target,
        exact,
    })
}

// ---- central binomial forms ----

type BinomialTerm = fn(u64) -> BigInt;

/// (u(k), D) with (s)ₖ(1−s)ₖ/k!² = u(k)/Dᵏ.
fn binomial_form(s: &Rational) -> Option<(BinomialTerm, u64)> {
    let forms: [(Rational, BinomialTerm, u64); 4] = [
        (rat(1, 2), |k| binomial(2 * k, k).pow(2), 16),
        (rat(1, 3), |k| binomial(2 * k, k) * binomial(3 * k, k), 27),
        (rat(1, 4), |k| binomial(4 * k, 2 * k) * binomial(2 * k, k), 64),
        (rat(1, 6), |k| binomial(6 * k, 3 * k) * binomial(3 * k, k), 432),
    ];
    forms.into_iter().find(|(t, _, _)| t == s).map(|(_, u, d)| (u, d))
}

/// The base B such that cₙ/2ⁿ = B⁻ⁿ·Σₖ u(k)u(n−k).
pub fn corollary_base(s: &Rational) -> Option<u64> {
    binomial_form(s).map(|(_, d)| 2 * d)
}

/// cₙ·(1/2)ⁿ against Σₖ u(k)u(n−k)/baseⁿ for n ≤ n_max.
pub fn corollary_binomial_check_base(
    s: &Rational,
    n_max: usize,
    base: u64,
) -> Result<CheckResult, SpecialError> {
    let (u, _) = binomial_form(s)
        .ok_or_else(|| SpecialError::Unsupported(format!("no binomial form for s = {s}")))?;
    let us: Vec<BigInt> = (0..=n_max as u64).map(u).collect();
    let cs = CoeffFamily::Square2F1(s.clone()).coeffs(n_max);
    let half = rat(1, 2);
    let b = Rational::from_integer(BigInt::from(base));
    let first_mismatch = (0..=n_max).find(|&n| {
        let conv: BigInt = (0..=n).map(|k| &us[k] * &us[n - k]).sum();
        let lhs = &cs[n] * pow_int(&half, n as i64);
        lhs != Rational::from_integer(conv) / pow_int(&b, n as i64)
    });
    Ok(CheckResult { pass: first_mismatch.is_none(), first_mismatch })
}

pub fn corollary_binomial_check(s: &Rational, n_max: usize) -> Result<CheckResult, SpecialError> {
    let base = corollary_base(s)
        .ok_or_else(|| SpecialError::Unsupported(format!("no binomial form for s = {s}")))?;
    corollary_binomial_check_base(s, n_max, base)
}

// ---- limits ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

/// lim_{x → x*} w(x)·Σ n·tₙ·A(x)ⁿ = target/π.
#[derive(Clone, Debug)]
pub struct LimitSpec {
    pub id: String,
    pub family: CoeffFamily,
    pub weight: RatFun,
    pub argument: RatFun,
    pub x_star: Rational,
    pub direction: Direction,
    /// Largest step from x*; nodes sit at δ₀/(j+1), j < nodes.
    pub delta0: Rational,
    pub nodes: usize,
    pub target: RadConst,
}

fn rf(num: &[i64], den: &[i64]) -> RatFun {
    RatFun::new(Poly::from_ints(num), Poly::from_ints(den))
}

const NODES: usize = 8;

pub fn limit_specs() -> Vec<LimitSpec> {
    let kummer = |s: Rational, target: &str| LimitSpec {
        id: format!("limit-{s}"),
        family: CoeffFamily::Hyper3F2(s),
        weight: rf(&[1, -2], &[1, -1]),
        argument: rf(&[0, 4, -4], &[1]),
        x_star: rat(1, 2),
        direction: Direction::Left,
        delta0: rat(1, 16),
        nodes: NODES,
        target: target.parse().expect("constant literal"),
    };
    vec![
        kummer(rat(1, 2), "2"),
        kummer(rat(1, 3), "sqrt(3)"),
        kummer(rat(1, 4), "sqrt(2)"),
        kummer(rat(1, 6), "1"),
        LimitSpec {
            id: "limit-8x+1".into(),
            family: CoeffFamily::Hyper3F2(rat(1, 6)),
            weight: rf(&[1, 8], &[1]),
            argument: rf(&[0, 27], &[-1, 12, -48, 64]),
            x_star: rat(-1, 8),
            direction: Direction::Right,
            delta0: rat(1, 8),
            nodes: NODES,
            target: "1/2*sqrt(3)".parse().expect("constant literal"),
        },
        LimitSpec {
            id: "limit-x+1".into(),
            family: CoeffFamily::Hyper3F2(rat(1, 4)),
            weight: rf(&[1, 1], &[1]),
            argument: rf(&[0, -4], &[1, -2, 1]),
            x_star: int(-1),
            direction: Direction::Right,
            delta0: rat(1, 2),
            nodes: NODES,
            target: "sqrt(2)".parse().expect("constant literal"),
        },
        LimitSpec {
            id: "limit-x+8".into(),
            family: CoeffFamily::Hyper3F2(rat(1, 6)),
            weight: rf(&[8, 1], &[1]),
            argument: rf(&[0, 0, 27], &[64, -48, 12, -1]),
            x_star: int(-8),
            direction: Direction::Right,
            delta0: int(2),
            nodes: NODES,
            target: "4*sqrt(3)".parse().expect("constant literal"),
        },
    ]
}

pub fn find_limit(id: &str) -> Option<LimitSpec> {
    limit_specs().into_iter().find(|l| l.id == id)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub id: String,
    pub estimate: f64,
    pub target: f64,
    pub error: f64,
    /// Extrapolated values using the first 1, 2, … nodes.
    pub extrapolants: Vec<f64>,
    /// Σ|Lⱼ(0)|: how much node errors can grow under extrapolation.
    pub amplification: f64,
    pub pass: bool,
}

fn approx_to_rational(x: &BigApprox) -> Rational {
    Rational::new(x.mantissa().clone(), BigInt::one() << x.bits())
}

/// Neville's scheme at h = 0, returning the diagonal P₀…ₖ(0) for each k.
fn neville_at_zero(h: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let mut p = v.to_vec();
    let mut diag = vec![p[0].clone()];
    for m in 1..h.len() {
        for i in 0..h.len() - m {
            // P_{i..i+m}(0) = (h_{i+m}·P_{i..i+m−1} − h_i·P_{i+1..i+m}) / (h_{i+m} − h_i)
            p[i] = (&h[i + m] * &p[i] - &h[i] * &p[i + 1]) / (&h[i + m] - &h[i]);
        }
        diag.push(p[0].clone());
    }
    diag
}

fn lebesgue_at_zero(h: &[Rational]) -> f64 {
    (0..h.len())
        .map(|j| {
            let l: Rational = (0..h.len())
                .filter(|&i| i != j)
                .map(|i| &h[i] / (&h[i] - &h[j]))
                .product();
            to_f64(&l).abs()
        })
        .sum()
}

/// Evaluates the weighted sum at x* ∓ δ₀/(j+1) for j < nodes and
/// extrapolates polynomially to the limit point.
pub fn limit_eval(spec: &LimitSpec, tolerance: f64, digits: u32) -> Result<LimitReport, SpecialError> {
    let hs: Vec<Rational> = (1..=spec.nodes as i64).map(|j| &spec.delta0 / int(j)).collect();
    let values: Result<Vec<Rational>, SpecialError> = hs
        .par_iter()
        .map(|h| {
            let x = match spec.direction {
                Direction::Left => &spec.x_star - h,
                Direction::Right => &spec.x_star + h,
            };
            let bad = || SpecialError::Unsupported(format!("{}: pole at x = {x}", spec.id));
            let w = spec.weight.eval(&x).ok_or_else(bad)?;
            let z = spec.argument.eval(&x).ok_or_else(bad)?;
            let sum = eval_numeric(&spec.family, &int(0), &int(1), &z, digits)?;
            Ok(approx_to_rational(&sum) * w)
        })
        .collect();
    let values = values?;
    let diag = neville_at_zero(&hs, &values);
    let extrapolants: Vec<f64> = diag.iter().map(to_f64).collect();
    let estimate = *extrapolants.last().expect("nodes");
    let change = (estimate - extrapolants[extrapolants.len() - 2]).abs();
    if change > tolerance {
        return Err(SpecialError::NoConvergenceDetected { id: spec.id.clone(), change });
    }
    let target = constant_over_pi(&spec.target, digits)?;
    let est = BigApprox::from_rational(diag.last().expect("nodes"), target.bits());
    let error = est.sub(&target).to_f64().abs();
    Ok(LimitReport {
        id: spec.id.clone(),
        estimate,
        target: target.to_f64(),
        error,
        extrapolants,
        amplification: lebesgue_at_zero(&hs),
        pass: error < tolerance,
    })
}

// ---- Sun ----

#[derive(Clone, Debug, Serialize)]
pub struct S2IdentityReport {
    pub n_max: usize,
    /// First n where the convolution differs from 4ⁿC(2n,n)²·₃F₂(1/2,1/2,−n;1,1/2−n;1).
    pub first_failure_3f2: Option<usize>,
    /// First n where it differs from C(2n,n)C(4n,2n)·₄F₃(1/4,3/4,−n,−n;1,1/4−n,3/4−n;1).
    pub first_failure_4f3: Option<usize>,
    /// First n where C(2n,n)·Σₖ C(2k,k)C(2n−2k,n−k)4ⁿ⁻ᵏ differs from the convolution.
    pub printed_definition_failure: Option<usize>,
    pub printed_value_n1: String,
    pub convolution_n1: String,
    pub pass: bool,
}

fn terminating_sum(upper: Vec<Rational>, lower: Vec<Rational>, n: usize) -> Rational {
    HyperParams::new_unchecked(upper, lower).coeffs(n).into_iter().sum()
}

fn printed_s2(n: u64) -> BigInt {
    let inner: BigInt = (0..=n)
        .map(|k| binomial(2 * k, k) * binomial(2 * (n - k), n - k) * BigInt::from(4).pow((n - k) as u32))
        .sum();
    binomial(2 * n, n) * inner
}

/// C(2n,n)·S⁽²⁾ₙ(4) as the convolution, against both terminating forms.
pub fn sun_s2_identity(n_max: usize) -> S2IdentityReport {
    let conv = CoeffFamily::SunS2.coeffs(n_max);
    let checks: Vec<(bool, bool, bool)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let nn = n as u64;
            let m = -int(n as i64);
            let c2 = Rational::from_integer(binomial(2 * nn, nn));
            let f3 = terminating_sum(
                vec![rat(1, 2), rat(1, 2), m.clone()],
                vec![int(1), rat(1, 2) + &m],
                n,
            );
            let form3 = pow_int(&int(4), n as i64) * &c2 * &c2 * f3;
            let f4 = terminating_sum(
                vec![rat(1, 4), rat(3, 4), m.clone(), m.clone()],
                vec![int(1), rat(1, 4) + &m, rat(3, 4) + &m],
                n,
            );
            let form4 = &c2 * Rational::from_integer(binomial(4 * nn, 2 * nn)) * f4;
            let printed = Rational::from_integer(printed_s2(nn));
            (form3 == conv[n], form4 == conv[n], printed == conv[n])
        })
        .collect();
    let first = |f: fn(&(bool, bool, bool)) -> bool| checks.iter().position(|c| !f(c));
    let first_failure_3f2 = first(|c| c.0);
    let first_failure_4f3 = first(|c| c.1);
    S2IdentityReport {
        n_max,
        first_failure_3f2,
        first_failure_4f3,
        printed_definition_failure: first(|c| c.2),
        printed_value_n1: printed_s2(1).to_string(),
        convolution_n1: CoeffFamily::SunS2.coeff(1).to_string(),
        pass: first_failure_3f2.is_none() && first_failure_4f3.is_none(),
    }
}

#[derive(Clone, Debug)]
pub struct SunSumReport {
    pub name: &'static str,
    pub sum: BigApprox,
    pub target: BigApprox,
    pub digits_matched: u32,
    pub sum_pass: bool,
    /// The exact translation reproduces the stored data.
    pub transport_pass: bool,
    pub detail: String,
    pub pass: bool,
}

/// Σ (4k+1)·C(2k,k)S⁽²⁾ₖ(4)/(−192)ᵏ = √3/π.
pub fn sun_2_11(digits: u32) -> Result<SunSumReport, SpecialError> {
    let family = CoeffFamily::SunS2;
    let z = rat(-1, 192);
    let sum = eval_numeric(&family, &int(1), &int(4), &z, digits)?;
    let c: RadConst = "sqrt(3)".parse().expect("constant literal");
    let target = constant_over_pi(&c, digits)?;

    // (6n+1)(1/4)ⁿ = 4/π through the inverse Pfaff-squared rule at x0 = −1/3
    // lands on the (1/4)-square family at −1/3, which is the same series since
    // (1/4)ₖ(3/4)ₖ/k!² = C(2k,k)C(4k,2k)/64ᵏ.
    let rules = rule_catalog();
    let source = spec("s2-6n+1", CoeffFamily::Hyper3F2(rat(1, 2)), rat(1, 4), 1, 6, "4");
    let rule = find_rule(&rules, "pfaff-sq:inv")?;
    let cert = translate(&source, &rule, &rat(-1, 3))?;
    let d = &cert.derived;
    let same_series = CoeffFamily::Square2F1(rat(1, 4))
        .coeffs(40)
        .iter()
        .zip(family.coeffs(40))
        .enumerate()
        .all(|(n, (q, s))| q * pow_int(&int(64), n as i64) == s);
    let transport_pass = same_series
        && &d.z / int(64) == z
        && (d.a.clone(), d.b.clone()) == (int(1), int(4))
        && d.c == c;

    let sum_pass = sum.agrees_with(&target, digits);
    Ok(SunSumReport {
        name: "2.11",
        digits_matched: sum.digits_matched(&target, digits + 10),
        detail: format!("certificate pfaff-sq:inv @ -1/3 gives ({}, {}, {}, {})", d.a, d.b, d.z, d.c),
        pass: sum_pass && transport_pass,
        sum,
        target,
        sum_pass,
        transport_pass,
    })
}

/// Correct digits of the 2.11 series truncated after `terms` terms.
pub fn sun_2_11_truncated(terms: usize, digits: u32) -> Result<u32, SpecialError> {
    let cs = CoeffFamily::SunS2.coeffs(terms - 1);
    let z = rat(-1, 192);
    let partial: Rational = cs
        .iter()
        .enumerate()
        .map(|(n, t)| t * pow_int(&z, n as i64) * int(1 + 4 * n as i64))
        .sum();
    let target = constant_over_pi(&"sqrt(3)".parse().expect("constant literal"), digits)?;
    let p = BigApprox::from_rational(&partial, target.bits());
    Ok(p.digits_matched(&target, digits))
}

pub fn product_414_family() -> CoeffFamily {
    CoeffFamily::Product2F1([rat(1, 6), rat(1, 3), rat(2, 3), rat(5, 6)])
}

/// Σ (a+3n)/2ⁿ·Σₖ C(−1/3,k)C(−2/3,n−k)C(−1/6,k)C(−5/6,n−k) against 3√6/(2π).
pub fn sun_4_14_with(a: i64, digits: u32) -> Result<(BigApprox, BigApprox), SpecialError> {
    let sum = eval_numeric(&product_414_family(), &int(a), &int(3), &rat(1, 2), digits)?;
    let target = constant_over_pi(&"3/2*sqrt(6)".parse().expect("constant literal"), digits)?;
    Ok((sum, target))
}

pub fn sun_4_14(digits: u32) -> Result<SunSumReport, SpecialError> {
    let (sum, target) = sun_4_14_with(-1, digits)?;
    let (wrong, _) = sun_4_14_with(1, digits)?;
    let control_fails = wrong.differs_from(&target, digits.min(10));

    let rules = rule_catalog();
    let source = spec("s3-6n+1", CoeffFamily::Hyper3F2(rat(1, 3)), rat(1, 2), 1, 6, "3*sqrt(3)");
    let rule = find_rule(&rules, "sun-4.14:inv")?;
    let d = translate(&source, &rule, &rat(1, 2))?.derived;
    let transport_pass = d.family == product_414_family()
        && d.z == rat(1, 2)
        && (d.a.clone(), d.b.clone()) == (int(-1), int(3))
        && d.c == "3/2*sqrt(6)".parse::<RadConst>().expect("constant literal");
    let sum_pass = sum.agrees_with(&target, digits);
    Ok(SunSumReport {
        name: "4.14",
        digits_matched: sum.digits_matched(&target, digits + 10),
        detail: format!(
            "certificate sun-4.14:inv @ 1/2 gives ({}, {}, {}, {}); (1, 3) variant {}",
            d.a,
            d.b,
            d.z,
            d.c,
            if control_fails { "fails" } else { "does not fail" }
        ),
        pass: sum_pass && transport_pass && control_fails,
        sum,
        target,
        sum_pass,
        transport_pass,
    })
}

#[derive(Clone, Debug)]
pub struct DombReport {
    pub formal_order: usize,
    pub formal_pass: bool,
    pub sum: BigApprox,
    pub target: BigApprox,
    pub numeric_pass: bool,
    /// The point where the Rogers rule maps 1/49² to 1/100, if any.
    pub transport_x0: Option<Rational>,
    /// What the branch gate said about transporting the (40n+3) entry.
    pub transport: String,
    pub pass: bool,
}

/// (16n+3)(1/100)ⁿ·C(2n,n)Σₖ C(2k,k)C(n,k)² = 25/(√3π), plus the Rogers rule
/// to order 40 and an attempted transport from (40n+3)(1/49²)ⁿ.
pub fn rogers_domb_check(digits: u32) -> Result<DombReport, SpecialError> {
    let rules = rule_catalog();
    let rule = find_rule(&rules, "rogers-domb")?;
    let formal = verify_rule_formal(&rule, 40)?;
    let c: RadConst = "25/3*sqrt(3)".parse().expect("constant literal");
    let sum = eval_numeric(&CoeffFamily::Domb, &int(3), &int(16), &rat(1, 100), digits)?;
    let target = constant_over_pi(&c, digits)?;
    let numeric_pass = sum.agrees_with(&target, digits);

    let source = spec("s4-40n+3", CoeffFamily::Hyper3F2(rat(1, 4)), rat(1, 2401), 3, 40, "49/9*sqrt(3)");
    let x0 = points_for_target(&source, &rule, &rat(1, 100)).into_iter().next();
    let transport = match &x0 {
        None => "no rational point maps 1/49^2 to 1/100".to_string(),
        Some(x) => match translate(&source, &rule, x) {
            Ok(cert) => format!("accepted, constant {}", cert.derived.c),
            Err(e) => {
                let ungated = translate_exact(&source, &rule, x)
                    .map(|(_, d)| format!("({}, {}, {})", d.a, d.b, d.c))
                    .unwrap_or_else(|e| e.to_string());
                format!("refused ({e}); the ungated result would be {ungated}")
            }
        },
    };
    Ok(DombReport {
        formal_order: formal.order,
        formal_pass: formal.pass,
        pass: formal.pass && numeric_pass,
        sum,
        target,
        numeric_pass,
        transport_x0: x0,
        transport,
    })
}

/// Rational solutions of 64x/(64x − 1) = w for each w.
pub fn sun_arguments(targets: &[Rational]) -> Vec<(Rational, Vec<Rational>)> {
    let rules = rule_catalog();
    let rule = find_rule(&rules, "sun-s2").expect("shipped rule");
    targets.iter().map(|w| (w.clone(), solve_for_x(&rule.c, w).roots)).collect()
}

pub const SUN_TARGETS: [(i64, i64); 6] = [(-1, 1), (-1, 8), (1, 64), (4, 1), (-8, 1), (64, 1)];

pub fn sun_targets() -> Vec<Rational> {
    SUN_TARGETS.iter().map(|&(p, q)| rat(p, q)).collect()
}
