//! The translation method: differentiate a rule with θ = x·d/dx, evaluate it
//! exactly at a rational point, and carry Σ(a+bn)tₙzⁿ = c/π across it.
//!
//! From Σ aₙA(x)ⁿ = B(x)·Σ bₙC(x)ⁿ we get S₀ = B·T₀ and λ·S₁ = μ·T₀ + ν·T₁ at x0,
//! where S₀, S₁ (T₀, T₁) are the plain and n-weighted sums on each side,
//! λ = x0A′/A, μ = x0B′ and ν = x0·B·C′/C. A known a·S₀ + b·S₁ = c/π becomes
//! (a·B + b·μ/λ)·T₀ + (b·ν/λ)·T₁ = c/π.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyper::{eval_numeric, CoeffFamily, HyperError};
use crate::numerics::approx::{bits_for_digits, BigApprox};
use crate::numerics::pi::pi_oracle;
use crate::numerics::radconst::RadConst;
use crate::numerics::rational::{common_denominator, int, Rational};
use crate::numerics::NumericError;
use crate::poly::RatFun;
use crate::transforms::{find_rule, verify_rule_numeric, RuleError, TransformRule};

/// Precision of the numeric gates.
pub const GATE_DIGITS: u32 = 40;

/// Branch convention recorded in every certificate.
pub const BRANCH_CONVENTION: &str =
    "principal branch: (1-u)^(-1/2) = -i/sqrt(u-1) for u > 1; (-v)^(k/2) = v^(k/2)*i^k for v > 0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("rule {rule} expects family {expected}, source has {got}")]
    FamilyMismatch { rule: String, expected: String, got: String },
    #[error("A(x0) = {got} but the source has z = {expected}")]
    ArgumentMismatch { expected: String, got: String },
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("unrepresentable constant: {0}")]
    UnrepresentableConstant(String),
    #[error("transport coefficients lie in different radical fields: {0}")]
    IncompatibleRadicals(String),
    #[error("branch check failed for rule {rule} at x0 = {x0}: {detail}")]
    BranchCheckFailed { rule: String, x0: String, detail: String },
    #[error("invalid series: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Rule(RuleError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
}

impl From<RuleError> for TranslateError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::SingularPoint(x) => TranslateError::SingularPoint(x),
            RuleError::Numeric(n) => n.into(),
            RuleError::Hyper(h) => TranslateError::Hyper(h),
            other => TranslateError::Rule(other),
        }
    }
}

impl From<NumericError> for TranslateError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::IncompatibleRadicals { left, right } => {
                TranslateError::IncompatibleRadicals(format!("{left} vs {right}"))
            }
            NumericError::DivisionByZero => TranslateError::SingularPoint("division by zero".into()),
            other => TranslateError::UnrepresentableConstant(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedStart,
    ProvedTranslation,
    NumericOnly,
    DivergentCertificate,
}

/// Σ (a + b·n)·tₙ·zⁿ = c/π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub id: String,
    pub family: CoeffFamily,
    #[serde(with = "crate::numerics::rational::text")]
    pub z: Rational,
    #[serde(with = "crate::numerics::rational::text")]
    pub a: Rational,
    #[serde(with = "crate::numerics::rational::text")]
    pub b: Rational,
    pub c: RadConst,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// Whether the series can be summed at z: inside the disc of convergence, or
/// at the conditionally convergent point z = −1 of the ₃F₂ family.
pub fn summable(family: &CoeffFamily, z: &Rational) -> bool {
    family.converges_at(z) || (matches!(family, CoeffFamily::Hyper3F2(_)) && z == &int(-1))
}

impl SeriesSpec {
    pub fn validate(&self) -> Result<(), TranslateError> {
        if self.c.is_zero() {
            return Err(TranslateError::InvalidSpec(format!("{}: c = 0", self.id)));
        }
        if self.a.is_zero() && self.b.is_zero() {
            return Err(TranslateError::InvalidSpec(format!("{}: a = b = 0", self.id)));
        }
        if self.status != Status::DivergentCertificate && !summable(&self.family, &self.z) {
            return Err(TranslateError::InvalidSpec(format!(
                "{}: z = {} is outside the region of convergence",
                self.id, self.z
            )));
        }
        Ok(())
    }

    pub fn converges(&self) -> bool {
        summable(&self.family, &self.z)
    }

    /// Same identity with (a, b) coprime integers, b > 0 (or a > 0 if b = 0).
    pub fn normalized(&self) -> SeriesSpec {
        let (a, b, kappa) = normalize_pair(&self.a, &self.b);
        SeriesSpec { a, b, c: self.c.scale(&kappa), ..self.clone() }
    }

    /// (a, b, c) agree with `other` up to one common rational factor.
    pub fn projectively_equal(&self, other: &SeriesSpec) -> bool {
        let x = self.normalized();
        let y = other.normalized();
        x.family == y.family && x.z == y.z && x.a == y.a && x.b == y.b && x.c == y.c
    }

    /// |Σ − c/π| certified below 10^(−digits); requires real c.
    pub fn check_numeric(&self, digits: u32) -> Result<NumericCheck, TranslateError> {
        let sum = eval_numeric(&self.family, &self.a, &self.b, &self.z, digits)?;
        let target = constant_over_pi(&self.c, digits)?;
        let pass = !self.c.is_imaginary() && sum.agrees_with(&target, digits);
        Ok(NumericCheck {
            digits_matched: sum.digits_matched(&target, digits + 10),
            sum,
            target,
            pass,
        })
    }
}

#[derive(Clone, Debug)]
pub struct NumericCheck {
    pub sum: BigApprox,
    pub target: BigApprox,
    pub digits_matched: u32,
    pub pass: bool,
}

/// r·√m/π (the modulus, when c is imaginary).
pub fn constant_over_pi(c: &RadConst, digits: u32) -> Result<BigApprox, NumericError> {
    let bits = bits_for_digits(digits);
    c.magnitude_approx(bits).div(&pi_oracle(digits).with_bits(bits))
}

fn normalize_pair(a: &Rational, b: &Rational) -> (Rational, Rational, Rational) {
    let (ints, den) = common_denominator(&[a.clone(), b.clone()]);
    let g = ints[0].gcd(&ints[1]);
    let lead = if b.is_zero() { a } else { b };
    let sign = if lead.is_negative() { -1 } else { 1 };
    let kappa = Rational::new(den * BigInt::from(sign), g);
    (a * &kappa, b * &kappa, kappa)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCoefficients {
    pub lambda: RadConst,
    pub mu: RadConst,
    pub nu: RadConst,
    pub bval: RadConst,
}

pub fn theta_coefficients(
    rule: &TransformRule,
    x0: &Rational,
) -> Result<ThetaCoefficients, TranslateError> {
    let pd = rule.point_data(x0)?;
    Ok(ThetaCoefficients {
        lambda: RadConst::from_rational(pd.lambda),
        mu: pd.b_val.scale(&pd.log_b),
        nu: pd.b_val.scale(&pd.log_c),
        bval: pd.b_val,
    })
}

/// How a derivation was licensed at x0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    /// Both sides summable at x0 and the rule checked numerically there.
    NumericRule,
    /// The derived series diverges; the certificate defines its value.
    DivergentOutput,
    /// The source diverges; the derived series was summed and compared directly.
    DirectCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub rule: String,
    #[serde(with = "crate::numerics::rational::text")]
    pub x0: Rational,
    pub gate: Gate,
    pub convention: String,
    pub source: SeriesSpec,
    pub theta: ThetaCoefficients,
    pub derived: SeriesSpec,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("certificates serialize")
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

/// The exact part of a translation (no branch gate).
pub fn translate_exact(
    source: &SeriesSpec,
    rule: &TransformRule,
    x0: &Rational,
) -> Result<(ThetaCoefficients, SeriesSpec), TranslateError> {
    if source.family != rule.lhs {
        return Err(TranslateError::FamilyMismatch {
            rule: rule.id.clone(),
            expected: rule.lhs.to_string(),
            got: source.family.to_string(),
        });
    }
    let az = rule.a.eval(x0).ok_or_else(|| TranslateError::SingularPoint(x0.to_string()))?;
    if az != source.z {
        return Err(TranslateError::ArgumentMismatch {
            expected: source.z.to_string(),
            got: az.to_string(),
        });
    }
    let th = theta_coefficients(rule, x0)?;
    let z_new = rule.c.eval(x0).ok_or_else(|| TranslateError::SingularPoint(x0.to_string()))?;
    let lam = th.lambda.r().clone();
    let a_new = th.bval.scale(&source.a).add(&th.mu.scale(&(&source.b / &lam)))?;
    let b_new = th.nu.scale(&(&source.b / &lam));
    let carrier = if b_new.is_zero() { &a_new } else { &b_new };
    if carrier.is_zero() {
        return Err(TranslateError::SingularPoint(format!("transport vanishes at {x0}")));
    }
    if !a_new.is_zero() && !a_new.same_radical(&b_new) && !b_new.is_zero() {
        return Err(TranslateError::IncompatibleRadicals(format!("{a_new} vs {b_new}")));
    }
    let radical = carrier.radical();
    let c_new = source.c.div(&radical)?;
    let (a_n, b_n, kappa) = normalize_pair(a_new.r(), b_new.r());
    let family = rule.rhs.clone();
    let status = if summable(&family, &z_new) {
        Status::ProvedTranslation
    } else {
        Status::DivergentCertificate
    };
    let derived = SeriesSpec {
        id: format!("{}~{}@{}", source.id, rule.id, x0),
        family,
        z: z_new,
        a: a_n,
        b: b_n,
        c: c_new.scale(&kappa),
        status,
        note: String::new(),
    };
    Ok((th, derived))
}

/// Translation with the branch gate: refuses unless the rule checks out
/// numerically at x0, the output diverges, or the derived series can be
/// summed directly against its constant.
pub fn translate(
    source: &SeriesSpec,
    rule: &TransformRule,
    x0: &Rational,
) -> Result<Certificate, TranslateError> {
    let (theta, derived) = translate_exact(source, rule, x0)?;
    let gate = branch_gate(source, rule, x0, &derived)?;
    Ok(Certificate {
        rule: rule.id.clone(),
        x0: x0.clone(),
        gate,
        convention: BRANCH_CONVENTION.to_string(),
        source: source.clone(),
        theta,
        derived,
    })
}

fn branch_gate(
    source: &SeriesSpec,
    rule: &TransformRule,
    x0: &Rational,
    derived: &SeriesSpec,
) -> Result<Gate, TranslateError> {
    let refuse = |detail: String| TranslateError::BranchCheckFailed {
        rule: rule.id.clone(),
        x0: x0.to_string(),
        detail,
    };
    if source.converges() && derived.converges() {
        let rep = verify_rule_numeric(rule, x0, GATE_DIGITS)?;
        return if rep.pass {
            Ok(Gate::NumericRule)
        } else {
            Err(refuse(format!(
                "left side {} but right side {}{}",
                rep.lhs.to_decimal(12),
                if rep.imaginary_prefactor { "i·" } else { "" },
                rep.rhs.to_decimal(12)
            )))
        };
    }
    if !derived.converges() {
        return Ok(Gate::DivergentOutput);
    }
    let check = derived.check_numeric(GATE_DIGITS)?;
    if check.pass {
        Ok(Gate::DirectCheck)
    } else {
        Err(refuse(format!(
            "derived sum {} but c/π = {}",
            check.sum.to_decimal(12),
            check.target.to_decimal(12)
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub pass: bool,
    pub detail: String,
}

/// Recomputes the certificate from its source, rule and x0 and compares
/// every stored quantity exactly.
pub fn replay(cert: &Certificate, rules: &[TransformRule]) -> ReplayReport {
    let fail = |detail: String| ReplayReport { pass: false, detail };
    let rule = match find_rule(rules, &cert.rule) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let (theta, derived) = match translate_exact(&cert.source, &rule, &cert.x0) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    if theta != cert.theta {
        return fail("θ coefficients differ".into());
    }
    let d = &cert.derived;
    let same = d.family == derived.family
        && d.z == derived.z
        && d.a == derived.a
        && d.b == derived.b
        && d.c == derived.c
        && d.status == derived.status;
    if !same {
        return fail(format!(
            "stored ({}, {}, {}, {}) but recomputed ({}, {}, {}, {})",
            d.a, d.b, d.z, d.c, derived.a, derived.b, derived.z, derived.c
        ));
    }
    ReplayReport { pass: true, detail: "exact match".into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub roots: Vec<Rational>,
    pub non_rational: usize,
}

/// Rational solutions of C(x) = target (points where C has a pole excluded).
pub fn solve_for_x(c: &RatFun, target: &Rational) -> SolveResult {
    let p = c.num.sub(&c.den.scale(target));
    let (roots, non_rational) = p.rational_roots();
    let roots = roots
        .into_iter()
        .map(|(r, _)| r)
        .filter(|r| !c.den.eval(r).is_zero())
        .collect();
    SolveResult { roots, non_rational }
}

/// Points x0 with A(x0) = source.z and C(x0) = target.
pub fn points_for_target(
    source: &SeriesSpec,
    rule: &TransformRule,
    target: &Rational,
) -> Vec<Rational> {
    solve_for_x(&rule.c, target)
        .roots
        .into_iter()
        .filter(|x| rule.a.eval(x).as_ref() == Some(&source.z))
        .collect()
}

/// Runs a sequence of (rule id, x0) steps from a source.
pub fn translate_chain(
    source: &SeriesSpec,
    steps: &[(&str, Rational)],
    rules: &[TransformRule],
) -> Result<Vec<Certificate>, TranslateError> {
    let mut current = source.clone();
    let mut out = Vec::new();
    for (id, x0) in steps {
        let rule = find_rule(rules, id)?;
        let cert = translate(&current, &rule, x0)?;
        current = cert.derived.clone();
        out.push(cert);
    }
    Ok(out)
}

pub fn spec(id: &str, family: CoeffFamily, z: Rational, a: i64, b: i64, c: &str) -> SeriesSpec {
    SeriesSpec {
        id: id.to_string(),
        family,
        z,
        a: int(a),
        b: int(b),
        c: c.parse().expect("constant literal"),
        status: Status::ProvedStart,
        note: String::new(),
    }
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec {
            id: String::new(),
            family: CoeffFamily::Hyper3F2(Rational::new(BigInt::one(), BigInt::from(2))),
            z: Rational::zero(),
            a: Rational::zero(),
            b: Rational::one(),
            c: RadConst::one(),
            status: Status::NumericOnly,
            note: String::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;
    use crate::poly::Poly;
    use crate::transforms::rule_catalog;

    fn bauer_source() -> SeriesSpec {
        spec("start-1/4", CoeffFamily::Square2F1(rat(1, 4)), rat(1, 2), 0, 1, "sqrt(2)")
    }

    #[test]
    fn pfaff_squared_theta_data() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "pfaff-sq").unwrap();
        let th = theta_coefficients(&r, &rat(1, 2)).unwrap();
        assert_eq!(th.lambda, RadConst::one());
        assert_eq!(th.bval, "sqrt(2)".parse().unwrap());
        assert_eq!(th.mu, "1/2*sqrt(2)".parse().unwrap());
        assert_eq!(th.nu, "2*sqrt(2)".parse().unwrap());
    }

    #[test]
    fn lambda_is_one_for_identity_argument() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "kummer-sq").unwrap();
        for x0 in [rat(1, 3), rat(-2, 7)] {
            assert_eq!(theta_coefficients(&r, &x0).unwrap().lambda, RadConst::one());
        }
    }

    #[test]
    fn class7_lambda() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "class7").unwrap();
        let th = theta_coefficients(&r, &rat(-1, 8)).unwrap();
        // x0(4 − 8x0)/(4x0(1 − x0)) at −1/8 = (−5/8)/(−9/16)
        assert_eq!(th.lambda, RadConst::from_rational(rat(10, 9)));
    }

    #[test]
    fn bauer_certificate() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "pfaff-sq").unwrap();
        let cert = translate(&bauer_source(), &r, &rat(1, 2)).unwrap();
        let d = &cert.derived;
        assert_eq!((d.a.clone(), d.b.clone(), d.z.clone()), (int(1), int(4), int(-1)));
        assert_eq!(d.c, RadConst::from_rational(int(2)));
        assert_eq!(cert.gate, Gate::NumericRule);
        assert!(replay(&cert, &rules).pass);
        let back = Certificate::from_text(&cert.to_text()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "pfaff-sq").unwrap();
        let mut cert = translate(&bauer_source(), &r, &rat(1, 2)).unwrap();
        cert.derived.c = RadConst::from_rational(int(3));
        assert!(!replay(&cert, &rules).pass);
    }

    #[test]
    fn argument_mismatch() {
        let rules = rule_catalog();
        let r = find_rule(&rules, "pfaff-sq").unwrap();
        assert!(matches!(
            translate_exact(&bauer_source(), &r, &rat(1, 3)),
            Err(TranslateError::ArgumentMismatch { .. })
        ));
    }

    #[test]
    fn solving_for_points() {
        let c = RatFun::new(Poly::from_ints(&[0, -4]), Poly::from_ints(&[1, -2, 1]));
        assert_eq!(solve_for_x(&c, &rat(-16, 9)).roots, vec![rat(1, 4), int(4)]);
        let sun = RatFun::new(Poly::from_ints(&[0, 0, -4]), Poly::from_ints(&[1, 4]));
        assert_eq!(solve_for_x(&sun, &rat(-1, 8)).roots, vec![rat(-1, 8), rat(1, 4)]);
        let c4 = RatFun::new(Poly::from_ints(&[0, 27]), Poly::from_ints(&[-1, 12, -48, 64]));
        let s = solve_for_x(&c4, &rat(4, 125));
        assert_eq!(s.roots, vec![int(4)]);
        assert_eq!(s.non_rational, 2);
    }

    #[test]
    fn normalization() {
        let s = SeriesSpec { a: rat(2, 3), b: rat(-4, 9), c: RadConst::one(), ..bauer_source() };
        let n = s.normalized();
        assert_eq!((n.a, n.b), (int(-3), int(2)));
        assert_eq!(n.c, RadConst::from_rational(rat(-9, 2)));
    }
}
