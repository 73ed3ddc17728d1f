//! Transformation rules Σ lhsₙ·A(x)ⁿ = B(x)·Σ rhsₙ·C(x)ⁿ as data, with exact
//! order-N coefficient checks and numeric point checks.

use std::collections::HashSet;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fps::{FpsError, Series};
use crate::hyper::{eval_numeric_bits, CoeffFamily, HyperError};
use crate::numerics::approx::{bits_for_digits, BigApprox};
use crate::numerics::radconst::RadConst;
use crate::numerics::rational::{int, Rational};
use crate::numerics::NumericError;
use crate::poly::{Poly, RatFun};

pub type PolyExpr = Poly;

/// Default truncation order for formal checks.
pub const DEFAULT_ORDER: usize = 64;

/// Transformation classes for which no rule is known.
pub const ABSENT_CLASSES: [u32; 4] = [2, 6, 9, 10];

const BUILTIN_RULES: &str = include_str!("../data/rules.toml");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule file: {0}")]
    Parse(String),
    #[error("rule {id}: {msg}")]
    Malformed { id: String, msg: String },
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("singular point x0 = {0}")]
    SingularPoint(String),
    #[error(transparent)]
    Series(#[from] FpsError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// scale·Π baseᵢ(x)^eᵢ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefactor {
    pub factors: Vec<(Poly, Rational)>,
    pub scale: Rational,
}

impl Prefactor {
    pub fn one() -> Self {
        Prefactor { factors: vec![], scale: Rational::one() }
    }

    pub fn value_at_zero(&self) -> Option<Rational> {
        let mut v = self.scale.clone();
        for (p, e) in &self.factors {
            let b0 = p.coeff(0);
            if b0.is_zero() {
                return None;
            }
            if !b0.is_one() {
                if !e.is_integer() {
                    return None;
                }
                v *= crate::numerics::rational::pow_int(&b0, e.to_integer().try_into().ok()?);
            }
        }
        Some(v)
    }

    /// Expansion at 0; every base must start with 1.
    pub fn series(&self, order: usize) -> Result<Series, FpsError> {
        let mut acc = Series::constant(self.scale.clone(), order);
        for (p, e) in &self.factors {
            acc = acc.mul(&p.to_series(order).pow_rational(e)?);
        }
        Ok(acc)
    }

    /// Exact principal-branch value at x0 (half-integer exponents only).
    pub fn value_at(&self, x0: &Rational) -> Result<RadConst, RuleError> {
        let mut v = RadConst::from_rational(self.scale.clone());
        for (p, e) in &self.factors {
            let base = p.eval(x0);
            if base.is_zero() {
                return Err(RuleError::SingularPoint(x0.to_string()));
            }
            v = v.mul(&RadConst::pow_half_integer(&base, e)?);
        }
        Ok(v)
    }

    /// x0·B′(x0)/B(x0) = x0·Σ eᵢ·pᵢ′(x0)/pᵢ(x0).
    pub fn log_derivative_at(&self, x0: &Rational) -> Result<Rational, RuleError> {
        let mut acc = Rational::zero();
        for (p, e) in &self.factors {
            let base = p.eval(x0);
            if base.is_zero() {
                return Err(RuleError::SingularPoint(x0.to_string()));
            }
            acc += e * p.derivative().eval(x0) / base;
        }
        Ok(x0 * acc)
    }

    pub fn inverse(&self) -> Prefactor {
        Prefactor {
            factors: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
            scale: self.scale.recip(),
        }
    }

    /// Whether every exponent is a half-integer, so point values stay in Q(√m)·{1, i}.
    pub fn is_quadratic(&self) -> bool {
        self.factors.iter().all(|(_, e)| (e * int(2)).is_integer())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformRule {
    pub id: String,
    pub lhs: CoeffFamily,
    pub rhs: CoeffFamily,
    pub a: RatFun,
    pub b: Prefactor,
    pub c: RatFun,
    pub note: String,
}

/// On-disk rule record.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RuleRecord {
    id: String,
    lhs_family: CoeffFamily,
    rhs_family: CoeffFamily,
    #[serde(rename = "A_num")]
    a_num: Poly,
    #[serde(rename = "A_den")]
    a_den: Poly,
    #[serde(rename = "C_num")]
    c_num: Poly,
    #[serde(rename = "C_den")]
    c_den: Poly,
    #[serde(rename = "B_factors", default)]
    b_factors: Vec<FactorRecord>,
    #[serde(rename = "B_scale", with = "crate::numerics::rational::text")]
    b_scale: Rational,
    #[serde(default)]
    validity_note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FactorRecord {
    base: Poly,
    #[serde(with = "crate::numerics::rational::text")]
    exp: Rational,
}

#[derive(Debug, Deserialize, Serialize)]
struct RuleFile {
    version: u32,
    rule: Vec<RuleRecord>,
}

impl TransformRule {
    fn from_record(r: RuleRecord) -> Result<Self, RuleError> {
        let rule = TransformRule {
            id: r.id,
            lhs: r.lhs_family,
            rhs: r.rhs_family,
            a: RatFun::new(r.a_num, r.a_den),
            b: Prefactor {
                factors: r.b_factors.into_iter().map(|f| (f.base, f.exp)).collect(),
                scale: r.b_scale,
            },
            c: RatFun::new(r.c_num, r.c_den),
            note: r.validity_note,
        };
        rule.validate()?;
        Ok(rule)
    }

    fn to_record(&self) -> RuleRecord {
        RuleRecord {
            id: self.id.clone(),
            lhs_family: self.lhs.clone(),
            rhs_family: self.rhs.clone(),
            a_num: self.a.num.clone(),
            a_den: self.a.den.clone(),
            c_num: self.c.num.clone(),
            c_den: self.c.den.clone(),
            b_factors: self
                .b
                .factors
                .iter()
                .map(|(p, e)| FactorRecord { base: p.clone(), exp: e.clone() })
                .collect(),
            b_scale: self.b.scale.clone(),
            validity_note: self.note.clone(),
        }
    }

    /// Normalization at the origin: A(0) = C(0) = 0, B(0) = 1, bases start with 1.
    pub fn validate(&self) -> Result<(), RuleError> {
        let bad = |msg: &str| RuleError::Malformed { id: self.id.clone(), msg: msg.into() };
        for (name, f) in [("A", &self.a), ("C", &self.c)] {
            if f.den.coeff(0).is_zero() {
                return Err(bad(&format!("{name} has a pole at 0")));
            }
            if !f.num.coeff(0).is_zero() {
                return Err(bad(&format!("{name}(0) ≠ 0")));
            }
            if f.num.is_zero() {
                return Err(bad(&format!("{name} vanishes identically")));
            }
        }
        if self.b.factors.iter().any(|(p, _)| !p.coeff(0).is_one()) {
            return Err(bad("prefactor bases must have constant term 1"));
        }
        if self.b.value_at_zero() != Some(Rational::one()) {
            return Err(bad("B(0) ≠ 1"));
        }
        Ok(())
    }

    /// The same identity read right to left.
    pub fn inverse(&self) -> TransformRule {
        TransformRule {
            id: format!("{}:inv", self.id),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            a: self.c.clone(),
            b: self.b.inverse(),
            c: self.a.clone(),
            note: self.note.clone(),
        }
    }

    /// Both sides expanded to order N.
    pub fn sides(&self, order: usize) -> Result<(Series, Series), RuleError> {
        let lhs = self.lhs.series(order).compose(&self.a.to_series(order)?)?;
        let inner = self.rhs.series(order).compose(&self.c.to_series(order)?)?;
        let rhs = self.b.series(order)?.mul(&inner);
        Ok((lhs, rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalReport {
    pub id: String,
    pub order: usize,
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

pub fn verify_rule_formal(rule: &TransformRule, order: usize) -> Result<FormalReport, RuleError> {
    let (lhs, rhs) = rule.sides(order)?;
    let first_mismatch = lhs.first_mismatch(&rhs);
    Ok(FormalReport {
        id: rule.id.clone(),
        order: lhs.order().min(rhs.order()),
        pass: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// Exact data of a rule at a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub a_val: Rational,
    pub c_val: Rational,
    pub b_val: RadConst,
    /// x0·A′/A
    pub lambda: Rational,
    /// x0·B′/B
    pub log_b: Rational,
    /// x0·C′/C
    pub log_c: Rational,
}

impl TransformRule {
    pub fn point_data(&self, x0: &Rational) -> Result<PointData, RuleError> {
        let singular = || RuleError::SingularPoint(x0.to_string());
        if x0.is_zero() {
            return Err(singular());
        }
        let a_val = self.a.eval(x0).ok_or_else(singular)?;
        let c_val = self.c.eval(x0).ok_or_else(singular)?;
        let lambda = self.a.log_derivative_at(x0).ok_or_else(singular)?;
        let log_c = self.c.log_derivative_at(x0).ok_or_else(singular)?;
        if lambda.is_zero() {
            return Err(singular());
        }
        Ok(PointData {
            a_val,
            c_val,
            b_val: self.b.value_at(x0)?,
            lambda,
            log_b: self.b.log_derivative_at(x0)?,
            log_c,
        })
    }
}

#[derive(Clone, Debug)]
pub struct NumericReport {
    pub id: String,
    pub x0: Rational,
    /// Σ lhsₙ·A(x0)ⁿ
    pub lhs: BigApprox,
    /// B(x0)·Σ rhsₙ·C(x0)ⁿ (modulus when B(x0) is imaginary)
    pub rhs: BigApprox,
    /// λ·S₁ − (μ·T₀ + ν·T₁), the differentiated identity's residual
    pub theta_residual: BigApprox,
    pub imaginary_prefactor: bool,
    pub pass: bool,
}

/// Evaluates both sides at x0 (and their θ-derivatives) and compares to `digits`.
pub fn verify_rule_numeric(
    rule: &TransformRule,
    x0: &Rational,
    digits: u32,
) -> Result<NumericReport, RuleError> {
    let pd = rule.point_data(x0)?;
    let bits = bits_for_digits(digits);
    let one = int(1);
    let zero = int(0);
    let s0 = eval_numeric_bits(&rule.lhs, &one, &zero, &pd.a_val, bits)?;
    let s1 = eval_numeric_bits(&rule.lhs, &zero, &one, &pd.a_val, bits)?;
    let t0 = eval_numeric_bits(&rule.rhs, &one, &zero, &pd.c_val, bits)?;
    let t1 = eval_numeric_bits(&rule.rhs, &zero, &one, &pd.c_val, bits)?;
    let bmag = pd.b_val.magnitude_approx(bits);
    let rhs = bmag.mul(&t0);
    // λS₁ = B·(x0B′/B)·T₀ + B·(x0C′/C)·T₁
    let theta_rhs = bmag.mul(&t0.mul_rational(&pd.log_b).add(&t1.mul_rational(&pd.log_c)));
    let theta_residual = s1.mul_rational(&pd.lambda).sub(&theta_rhs);
    let imaginary = pd.b_val.is_imaginary();
    let zero_approx = BigApprox::zero(bits);
    let pass = !imaginary
        && s0.agrees_with(&rhs, digits)
        && theta_residual.agrees_with(&zero_approx, digits);
    Ok(NumericReport {
        id: rule.id.clone(),
        x0: x0.clone(),
        lhs: s0,
        rhs,
        theta_residual,
        imaginary_prefactor: imaginary,
        pass,
    })
}

pub fn parse_rules(text: &str) -> Result<Vec<TransformRule>, RuleError> {
    let file: RuleFile = toml::from_str(text).map_err(|e| RuleError::Parse(e.to_string()))?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(file.rule.len());
    for r in file.rule {
        if !seen.insert(r.id.clone()) {
            return Err(RuleError::Malformed { id: r.id, msg: "duplicate id".into() });
        }
        out.push(TransformRule::from_record(r)?);
    }
    Ok(out)
}

pub fn load_rules(path: &Path) -> Result<Vec<TransformRule>, RuleError> {
    let text = std::fs::read_to_string(path).map_err(|e| RuleError::Parse(e.to_string()))?;
    parse_rules(&text)
}

pub fn render_rules(rules: &[TransformRule]) -> String {
    let file = RuleFile { version: 1, rule: rules.iter().map(|r| r.to_record()).collect() };
    toml::to_string(&file).expect("rule records serialize")
}

/// The shipped rule set.
pub fn rule_catalog() -> Vec<TransformRule> {
    parse_rules(BUILTIN_RULES).expect("built-in rule file is well formed")
}

/// Looks up a rule by id; `ID:inv` yields the inverse of rule `ID`.
pub fn find_rule(rules: &[TransformRule], id: &str) -> Result<TransformRule, RuleError> {
    let (base, inverse) = match id.strip_suffix(":inv") {
        Some(b) => (b, true),
        None => (id, false),
    };
    let r = rules
        .iter()
        .find(|r| r.id == base)
        .ok_or_else(|| RuleError::UnknownRule(id.to_string()))?;
    Ok(if inverse { r.inverse() } else { r.clone() })
}

fn pfq2(a: &Rational, b: &Rational, c: &Rational) -> CoeffFamily {
    CoeffFamily::PFQ(crate::hyper::HyperParams::new_unchecked(
        vec![a.clone(), b.clone()],
        vec![c.clone()],
    ))
}

fn one_minus_x() -> Poly {
    Poly::from_ints(&[1, -1])
}

/// ₂F₁(a,b;c;x) = (1−x)^(−a)·₂F₁(a, c−b; c; x/(x−1)).
pub fn pfaff_rule(a: &Rational, b: &Rational, c: &Rational) -> TransformRule {
    TransformRule {
        id: format!("pfaff({a},{b};{c})"),
        lhs: pfq2(a, b, c),
        rhs: pfq2(a, &(c - b), c),
        a: RatFun::identity(),
        b: Prefactor { factors: vec![(one_minus_x(), -a)], scale: Rational::one() },
        c: RatFun::new(Poly::x(), Poly::from_ints(&[-1, 1])),
        note: String::new(),
    }
}

/// ₂F₁(a,b;c;x) = (1−x)^(c−a−b)·₂F₁(c−a, c−b; c; x).
pub fn euler_rule(a: &Rational, b: &Rational, c: &Rational) -> TransformRule {
    TransformRule {
        id: format!("euler({a},{b};{c})"),
        lhs: pfq2(a, b, c),
        rhs: pfq2(&(c - a), &(c - b), c),
        a: RatFun::identity(),
        b: Prefactor { factors: vec![(one_minus_x(), c - a - b)], scale: Rational::one() },
        c: RatFun::identity(),
        note: String::new(),
    }
}

/// Chains two rules with A₂ = x: the result maps lhs₁ through C₂∘C₁ with
/// prefactor B₁·(B₂∘C₁), all as series to order N.
pub fn chain_series(
    first: &TransformRule,
    second: &TransformRule,
    order: usize,
) -> Result<(Series, Series), RuleError> {
    let c1 = first.c.to_series(order)?;
    let b = first.b.series(order)?.mul(&second.b.series(order)?.compose(&c1)?);
    let c = second.c.to_series(order)?.compose(&c1)?;
    Ok((b, c))
}

/// Pfaff applied twice (second time on the other upper parameter) equals
/// Euler's transformation, compared coefficientwise to order N.
pub fn pfaff_twice_is_euler(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    order: usize,
) -> Result<bool, RuleError> {
    // Pfaff on b: F(a,b;c;x) = (1−x)^(−b)·F(c−a, b; c; x/(x−1))
    let first = {
        let mut r = pfaff_rule(b, a, c);
        r.lhs = pfq2(a, b, c);
        r.rhs = pfq2(&(c - a), b, c);
        r
    };
    // Pfaff on the remaining parameter: F(c−a,b;c;y) = (1−y)^(−(c−a))·F(c−a, c−b; c; y/(y−1))
    let second = pfaff_rule(&(c - a), b, c);
    let euler = euler_rule(a, b, c);
    if first.rhs != second.lhs || second.rhs != euler.rhs {
        return Ok(false);
    }
    for r in [&first, &second, &euler] {
        if !verify_rule_formal(r, order)?.pass {
            return Ok(false);
        }
    }
    let (b_chain, c_chain) = chain_series(&first, &second, order)?;
    let b_euler = euler.b.series(order)?;
    let c_euler = euler.c.to_series(order)?;
    Ok(b_chain.first_mismatch(&b_euler).is_none() && c_chain.first_mismatch(&c_euler).is_none())
}

/// Coefficient-level identity check helper for tests and reports.
pub fn integer_series(cs: &[i64]) -> Series {
    Series::new(cs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    #[test]
    fn catalog_loads_with_unique_ids() {
        let rules = rule_catalog();
        assert!(rules.len() >= 16);
        let ids: HashSet<_> = rules.iter().map(|r| r.id.clone()).collect();
        assert_eq!(ids.len(), rules.len());
    }

    #[test]
    fn pfaff_squared_rule_is_formally_valid() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "pfaff-sq").unwrap();
        assert!(verify_rule_formal(&r, 32).unwrap().pass);
        assert!(verify_rule_formal(&r.inverse(), 32).unwrap().pass);
    }

    #[test]
    fn identity_rule_passes_numerically() {
        let id = TransformRule {
            id: "identity".into(),
            lhs: CoeffFamily::Hyper3F2(rat(1, 2)),
            rhs: CoeffFamily::Hyper3F2(rat(1, 2)),
            a: RatFun::identity(),
            b: Prefactor::one(),
            c: RatFun::identity(),
            note: String::new(),
        };
        assert!(verify_rule_numeric(&id, &rat(1, 3), 20).unwrap().pass);
    }

    #[test]
    fn point_data_for_pfaff_squared() {
        let r = find_rule(&rule_catalog(), "pfaff-sq").unwrap();
        let pd = r.point_data(&rat(1, 2)).unwrap();
        assert_eq!(pd.lambda, int(1));
        assert_eq!(pd.b_val, "sqrt(2)".parse().unwrap());
        assert_eq!(pd.c_val, int(-1));
        assert_eq!(pd.log_b, rat(1, 2));
        assert_eq!(pd.log_c, int(2));
    }

    #[test]
    fn rule_file_round_trips() {
        let rules = rule_catalog();
        let again = parse_rules(&render_rules(&rules)).unwrap();
        assert_eq!(rules, again);
    }

    #[test]
    fn malformed_rules_are_rejected() {
        let text = r#"
version = 1
[[rule]]
id = "bad"
lhs_family = "hyper3F2(1/2)"
rhs_family = "hyper3F2(1/2)"
A_num = ["1", "1"]
A_den = ["1"]
C_num = ["0", "1"]
C_den = ["1"]
B_scale = "1"
"#;
        assert!(matches!(parse_rules(text), Err(RuleError::Malformed { .. })));
    }
}
