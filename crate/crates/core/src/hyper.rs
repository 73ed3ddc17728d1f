//! Hypergeometric coefficient streams, the catalog's coefficient families and
//! certified numeric summation of Σ (a + b·n)·tₙ·zⁿ.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fps::Series;
use crate::numerics::approx::{bits_for_digits, BigApprox};
use crate::numerics::pi::pi_oracle;
use crate::numerics::rational::{int, parse_rational, rat, Rational};
use crate::numerics::trig::sin_pi;
use crate::numerics::NumericError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("series for {family} diverges at z = {z}")]
    DivergentInput { family: String, z: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// (a)ₙ = a(a+1)…(a+n−1).
pub fn pochhammer(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

/// C(x, k) for rational x: x(x−1)…(x−k+1)/k!.
pub fn gen_binomial(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * (x - int(j as i64)) / int(j as i64 + 1);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// C(2k, k) for k = 0..=n.
pub fn central_binomials(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        out.push(c.clone());
        c = c * BigInt::from(2 * (2 * k as u64 + 1)) / BigInt::from(k as u64 + 1);
    }
    out
}

/// Upper and lower parameters of Σ Π(uᵢ)ₙ / (Π(lⱼ)ₙ · n!) xⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperParams {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
}

fn is_nonpositive_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_positive()
}

impl HyperParams {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>) -> Result<Self, HyperError> {
        if let Some(bad) = lower.iter().find(|l| is_nonpositive_integer(l)) {
            return Err(HyperError::InvalidParams(format!("lower parameter {bad}")));
        }
        Ok(HyperParams { upper, lower })
    }

    /// Terminating or otherwise exceptional parameter sets used only in finite sums.
    pub fn new_unchecked(upper: Vec<Rational>, lower: Vec<Rational>) -> Self {
        HyperParams { upper, lower }
    }

    /// tₙ₊₁/tₙ as a rational function of n, evaluated at n.
    pub fn ratio(&self, n: usize) -> Rational {
        let nn = int(n as i64);
        let mut r = Rational::one() / (&nn + Rational::one());
        for u in &self.upper {
            r *= &nn + u;
        }
        for l in &self.lower {
            r /= &nn + l;
        }
        r
    }

    pub fn coeffs(&self, n_max: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut t = Rational::one();
        for n in 0..=n_max {
            out.push(t.clone());
            if n < n_max {
                if t.is_zero() {
                    continue;
                }
                t *= self.ratio(n);
            }
        }
        out
    }

    pub fn series(&self, order: usize) -> Series {
        Series::new(self.coeffs(order))
    }

    /// Limiting |tₙ₊₁/tₙ|: 1 when balanced (#upper = #lower + 1), 0 when fewer uppers.
    pub fn limiting_ratio(&self) -> Option<u32> {
        match self.upper.len().cmp(&(self.lower.len() + 1)) {
            std::cmp::Ordering::Equal => Some(1),
            std::cmp::Ordering::Less => Some(0),
            std::cmp::Ordering::Greater => None,
        }
    }
}

impl fmt::Display for HyperParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.upper.iter().map(|q| q.to_string()).collect();
        let l: Vec<String> = self.lower.iter().map(|q| q.to_string()).collect();
        write!(f, "{};{}", u.join(","), l.join(","))
    }
}

/// Coefficient streams tₙ of Σ (a + bn)·tₙ·zⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CoeffFamily {
    /// (1/2)ₙ(s)ₙ(1−s)ₙ/n!³
    Hyper3F2(Rational),
    /// Cauchy square of (s)ₖ(1−s)ₖ/k!²
    Square2F1(Rational),
    /// Σₖ C(2k,k)C(−s,k)·C(2m,m)C(s−1,m), m = n−k
    ConvCentral(Rational),
    /// C(2n,n)·Σₖ C(2k,k)C(n,k)²
    Domb,
    /// Σₖ C(2k,k)C(4k,2k)·C(2m,m)C(4m,2m), m = n−k
    SunS2,
    /// Cauchy product of ₂F₁(a,b;1) and ₂F₁(c,d;1) coefficient streams
    Product2F1([Rational; 4]),
    /// A general ₚF_q stream
    PFQ(HyperParams),
}

/// Coefficients of ₂F₁(a, b; 1; x).
fn f21_unit(a: &Rational, b: &Rational, n_max: usize) -> Vec<Rational> {
    HyperParams::new_unchecked(vec![a.clone(), b.clone()], vec![int(1)]).coeffs(n_max)
}

fn cauchy(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    Series::new(x.to_vec()).mul(&Series::new(y.to_vec())).coeffs().to_vec()
}

impl CoeffFamily {
    pub fn hyper3f2(s: Rational) -> Self {
        CoeffFamily::Hyper3F2(s)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoeffFamily::Hyper3F2(_) => "hyper3F2",
            CoeffFamily::Square2F1(_) => "square2F1",
            CoeffFamily::ConvCentral(_) => "convCentral",
            CoeffFamily::Domb => "domb",
            CoeffFamily::SunS2 => "sunS2",
            CoeffFamily::Product2F1(_) => "product2F1",
            CoeffFamily::PFQ(_) => "pFq",
        }
    }

    /// The s parameter for the one-parameter families.
    pub fn s(&self) -> Option<&Rational> {
        match self {
            CoeffFamily::Hyper3F2(s) | CoeffFamily::Square2F1(s) | CoeffFamily::ConvCentral(s) => {
                Some(s)
            }
            _ => None,
        }
    }

    /// Builds a family from a name and an optional s value.
    pub fn from_parts(name: &str, s: Option<&Rational>) -> Result<Self, HyperError> {
        let need_s = || {
            s.cloned()
                .ok_or_else(|| HyperError::InvalidParams(format!("family {name} needs s")))
        };
        let fam = match name {
            "hyper3F2" => CoeffFamily::Hyper3F2(need_s()?),
            "square2F1" => CoeffFamily::Square2F1(need_s()?),
            "convCentral" => CoeffFamily::ConvCentral(need_s()?),
            "domb" => CoeffFamily::Domb,
            "sunS2" => CoeffFamily::SunS2,
            other => return other.parse(),
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<(), HyperError> {
        let unit = |q: &Rational| q.is_positive() && q < &int(1);
        match self {
            CoeffFamily::Hyper3F2(s) | CoeffFamily::Square2F1(s) | CoeffFamily::ConvCentral(s)
                if !unit(s) =>
            {
                Err(HyperError::InvalidParams(format!("s = {s} must lie in (0, 1)")))
            }
            CoeffFamily::PFQ(p) => HyperParams::new(p.upper.clone(), p.lower.clone()).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Exact t₀…t_{n_max}.
    pub fn coeffs(&self, n_max: usize) -> Vec<Rational> {
        match self {
            CoeffFamily::Hyper3F2(s) => self::hyper3f2_params(s).coeffs(n_max),
            CoeffFamily::Square2F1(s) => {
                let u = f21_unit(s, &(int(1) - s), n_max);
                cauchy(&u, &u)
            }
            CoeffFamily::ConvCentral(s) => {
                let cb = central_binomials(n_max);
                let one_minus = int(1) - s;
                let mut x = Vec::with_capacity(n_max + 1);
                let mut y = Vec::with_capacity(n_max + 1);
                let mut px = Rational::one();
                let mut py = Rational::one();
                for k in 0..=n_max {
                    // C(−s,k) = (−1)ᵏ(s)ₖ/k!
                    let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                    let c = Rational::from_integer(cb[k].clone());
                    x.push(&c * &px * &sign);
                    y.push(&c * &py * &sign);
                    let kk = int(k as i64);
                    px = px * (&kk + s) / (&kk + int(1));
                    py = py * (&kk + &one_minus) / (&kk + int(1));
                }
                cauchy(&x, &y)
            }
            CoeffFamily::Domb => {
                let cb = central_binomials(n_max);
                (0..=n_max)
                    .map(|n| {
                        let mut inner = BigInt::zero();
                        let mut cnk = BigInt::one();
                        for k in 0..=n {
                            inner += &cb[k] * &cnk * &cnk;
                            cnk = cnk * BigInt::from(n - k) / BigInt::from(k + 1);
                        }
                        Rational::from_integer(&cb[n] * inner)
                    })
                    .collect()
            }
            CoeffFamily::SunS2 => {
                let cb = central_binomials(2 * n_max);
                let g: Vec<Rational> = (0..=n_max)
                    .map(|k| Rational::from_integer(&cb[k] * &cb[2 * k]))
                    .collect();
                cauchy(&g, &g)
            }
            CoeffFamily::Product2F1([a, b, c, d]) => {
                cauchy(&f21_unit(a, b, n_max), &f21_unit(c, d, n_max))
            }
            CoeffFamily::PFQ(p) => p.coeffs(n_max),
        }
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs(n).pop().expect("stream is nonempty")
    }

    pub fn series(&self, order: usize) -> Series {
        Series::new(self.coeffs(order))
    }

    /// Term-ratio parameters when the stream is hypergeometric in n.
    pub fn hyper_params(&self) -> Option<HyperParams> {
        match self {
            CoeffFamily::Hyper3F2(s) => Some(hyper3f2_params(s)),
            CoeffFamily::PFQ(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// lim |tₙ₊₁/tₙ|; the series converges for |z|·ρ < 1.
    pub fn limiting_ratio(&self) -> Option<u32> {
        match self {
            CoeffFamily::Hyper3F2(_) | CoeffFamily::Square2F1(_) | CoeffFamily::Product2F1(_) => {
                Some(1)
            }
            CoeffFamily::ConvCentral(_) => Some(4),
            CoeffFamily::Domb => Some(36),
            CoeffFamily::SunS2 => Some(64),
            CoeffFamily::PFQ(p) => p.limiting_ratio(),
        }
    }

    /// |tₙ| ≤ K·(n+1)^d·Rⁿ as (K, d, R), for the non-hypergeometric streams.
    fn coefficient_bound(&self) -> Result<(u32, u32, u32), HyperError> {
        let unit = |q: &Rational| q.is_positive() && q <= &int(1);
        match self {
            CoeffFamily::Square2F1(s) if unit(s) => Ok((1, 1, 1)),
            CoeffFamily::ConvCentral(s) if unit(s) => Ok((1, 1, 4)),
            // C(2n,n) ≤ 4ⁿ and Σ C(2k,k)C(n,k)² ≤ (Σ C(n,k)2ᵏ)² = 9ⁿ
            CoeffFamily::Domb => Ok((1, 0, 36)),
            CoeffFamily::SunS2 => Ok((1, 1, 64)),
            CoeffFamily::Product2F1(p) if p.iter().all(unit) => Ok((1, 1, 1)),
            _ => Err(HyperError::Unsupported(format!("no coefficient bound for {self}"))),
        }
    }

    pub fn converges_at(&self, z: &Rational) -> bool {
        match self.limiting_ratio() {
            Some(r) => (z.abs() * int(r as i64)) < int(1),
            None => z.is_zero(),
        }
    }
}

pub fn hyper3f2_params(s: &Rational) -> HyperParams {
    HyperParams::new_unchecked(vec![rat(1, 2), s.clone(), int(1) - s], vec![int(1), int(1)])
}

impl fmt::Display for CoeffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffFamily::Hyper3F2(s) => write!(f, "hyper3F2({s})"),
            CoeffFamily::Square2F1(s) => write!(f, "square2F1({s})"),
            CoeffFamily::ConvCentral(s) => write!(f, "convCentral({s})"),
            CoeffFamily::Domb => write!(f, "domb"),
            CoeffFamily::SunS2 => write!(f, "sunS2"),
            CoeffFamily::Product2F1([a, b, c, d]) => write!(f, "product2F1({a},{b};{c},{d})"),
            CoeffFamily::PFQ(p) => write!(f, "pFq({p})"),
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<Rational>, NumericError> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',').map(parse_rational).collect()
}

impl FromStr for CoeffFamily {
    type Err = HyperError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let bad = || HyperError::InvalidParams(format!("unknown family {text:?}"));
        match t {
            "domb" => return Ok(CoeffFamily::Domb),
            "sunS2" => return Ok(CoeffFamily::SunS2),
            _ => {}
        }
        let (name, rest) = t.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let fam = match name {
            "hyper3F2" => CoeffFamily::Hyper3F2(parse_rational(inner)?),
            "square2F1" => CoeffFamily::Square2F1(parse_rational(inner)?),
            "convCentral" => CoeffFamily::ConvCentral(parse_rational(inner)?),
            "product2F1" | "pFq" => {
                let (u, l) = inner.split_once(';').ok_or_else(bad)?;
                let (u, l) = (parse_list(u)?, parse_list(l)?);
                if name == "pFq" {
                    CoeffFamily::PFQ(HyperParams::new(u, l)?)
                } else {
                    match (u.as_slice(), l.as_slice()) {
                        ([a, b], [c, d]) => {
                            CoeffFamily::Product2F1([a.clone(), b.clone(), c.clone(), d.clone()])
                        }
                        _ => return Err(bad()),
                    }
                }
            }
            _ => return Err(bad()),
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl TryFrom<String> for CoeffFamily {
    type Error = HyperError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CoeffFamily> for String {
    fn from(f: CoeffFamily) -> Self {
        f.to_string()
    }
}

fn ceil_mul(ulps: &BigUint, q: &Rational) -> BigUint {
    // ⌈ulps·q⌉ for q ≥ 0
    let num = ulps * q.numer().magnitude();
    let den = q.denom().magnitude();
    let (d, r) = num.div_rem(den);
    if r.is_zero() {
        d
    } else {
        d + 1u32
    }
}

/// Σ (a + b·n)·tₙ·zⁿ with error below 10^(−digits).
pub fn eval_numeric(
    family: &CoeffFamily,
    a: &Rational,
    b: &Rational,
    z: &Rational,
    digits: u32,
) -> Result<BigApprox, HyperError> {
    eval_numeric_bits(family, a, b, z, bits_for_digits(digits))
}

/// As [`eval_numeric`] at an explicit binary precision; the returned error
/// bound is a few dozen ulps of that precision.
pub fn eval_numeric_bits(
    family: &CoeffFamily,
    a: &Rational,
    b: &Rational,
    z: &Rational,
    bits: u32,
) -> Result<BigApprox, HyperError> {
    if z.is_zero() {
        let t0 = family.coeff(0);
        return Ok(BigApprox::from_rational(&(a * t0), bits));
    }
    if let CoeffFamily::Hyper3F2(s) = family {
        if z == &int(-1) {
            return boundary_minus_one(s, a, b, bits);
        }
    }
    if !family.converges_at(z) {
        return Err(HyperError::DivergentInput { family: family.to_string(), z: z.to_string() });
    }
    match family.hyper_params() {
        Some(p) => sum_hypergeometric(&p, a, b, z, bits),
        None => sum_bounded(family, a, b, z, bits),
    }
}

/// Term-ratio bound ρ_N ≥ sup_{n≥N} |z|·Π|n+uᵢ|/|n+lᵢ| (lowers include the n! factor).
fn ratio_bound(p: &HyperParams, z: &Rational, n: usize) -> Option<Rational> {
    let nn = int(n as i64);
    let mut lowers = p.lower.clone();
    lowers.push(int(1));
    let mut rho = z.abs();
    for (i, l) in lowers.iter().enumerate() {
        let nl = &nn + l;
        if !nl.is_positive() {
            return None;
        }
        match p.upper.get(i) {
            Some(u) => {
                if !(&nn + u).is_positive() {
                    return None;
                }
                rho *= int(1) + (u - l).abs() / &nl;
            }
            None => {
                if nl < int(1) {
                    return None;
                }
                rho /= nl;
            }
        }
    }
    Some(rho)
}

fn sum_hypergeometric(
    p: &HyperParams,
    a: &Rational,
    b: &Rational,
    z: &Rational,
    bits: u32,
) -> Result<BigApprox, HyperError> {
    let rho_inf = match p.limiting_ratio() {
        Some(1) => z.abs(),
        Some(_) => Rational::zero(),
        None => {
            return Err(HyperError::DivergentInput { family: format!("pFq({p})"), z: z.to_string() })
        }
    };
    let target = (int(1) + rho_inf) / int(2);
    // smallest N0 with ρ_{N0} ≤ target; ρ_N decreases in N
    let mut n0 = 1usize;
    loop {
        if let Some(r) = ratio_bound(p, z, n0) {
            if r <= target {
                break;
            }
        }
        n0 = if n0 < 16 { n0 + 1 } else { n0 * 2 };
    }
    let rho = ratio_bound(p, z, n0).expect("checked above");
    let c1 = (int(1) - &rho).recip();
    let c2 = &rho * &c1 * &c1;
    // The running term carries a rounding floor of about c1 ulps and the tail
    // factor grows like n·c1, so work with enough extra bits that the floor
    // times the tail factor stays far below one ulp of the output precision.
    let c1f = crate::numerics::rational::to_f64(&c1).max(1.0);
    let extra = (2.0 * c1f.log2() + (bits as f64 * c1f).log2() + 24.0).ceil() as u32;
    let out_bits = bits;
    let bits = bits + extra;
    let tol = BigUint::one() << (extra + 4);

    // clear parameter denominators: (n + u) = (n·D + U)/D
    let mut den_lcm = z.denom().clone();
    for q in p.upper.iter().chain(p.lower.iter()) {
        den_lcm = den_lcm.lcm(q.denom());
    }
    let d = den_lcm;
    let ups: Vec<BigInt> = p.upper.iter().map(|u| (u * Rational::from_integer(d.clone())).to_integer()).collect();
    let lows: Vec<BigInt> = p.lower.iter().map(|l| (l * Rational::from_integer(d.clone())).to_integer()).collect();
    let extra_d = p.upper.len() as i64 - p.lower.len() as i64;

    let mut term = BigApprox::from_integer(BigInt::one(), bits);
    let mut u_sum = BigApprox::zero(bits);
    let mut v_sum = BigApprox::zero(bits);
    let abs_a = a.abs();
    let abs_b = b.abs();
    let mut n = 0usize;
    loop {
        if n >= n0 && (n.is_multiple_of(8) || term.abs_upper_ulps().bits() < (extra as u64) + 24) {
            let t_up = term.abs_upper_ulps();
            let nn = int(n as i64);
            let factor = &abs_a * &c1 + &abs_b * (&nn * &c1 + &c2);
            let tail = ceil_mul(&t_up, &factor);
            if tail <= tol {
                let value = u_sum
                    .mul_rational(a)
                    .add(&v_sum.mul_rational(b))
                    .widen(&tail);
                return Ok(value.with_bits(out_bits));
            }
        }
        u_sum = u_sum.add(&term);
        if n > 0 {
            v_sum = v_sum.add(&term.mul_int(&BigInt::from(n)));
        }
        // tₙ₊₁zⁿ⁺¹ = tₙzⁿ · z·Π(nD+U)/Π(nD+L)/(n+1)·D^(#L−#U)
        let nd = BigInt::from(n) * &d;
        let mut num = z.numer().clone();
        let mut den = z.denom() * BigInt::from(n + 1);
        for u in &ups {
            num *= &nd + u;
        }
        for l in &lows {
            den *= &nd + l;
        }
        if extra_d > 0 {
            den *= num_traits::pow(d.clone(), extra_d as usize);
        } else if extra_d < 0 {
            num *= num_traits::pow(d.clone(), (-extra_d) as usize);
        }
        if num.is_zero() {
            // terminating series: the sum is exact apart from rounding
            return Ok(u_sum.mul_rational(a).add(&v_sum.mul_rational(b)).with_bits(out_bits));
        }
        term = term.mul_int(&num).div_int(&den)?;
        n += 1;
    }
}

fn sum_bounded(
    family: &CoeffFamily,
    a: &Rational,
    b: &Rational,
    z: &Rational,
    bits: u32,
) -> Result<BigApprox, HyperError> {
    let (k, d, r) = family.coefficient_bound()?;
    let q = z.abs() * int(r as i64);
    let weight = int(k as i64) * (a.abs() + b.abs());
    let e = d + 1;
    // tail from N ≤ weight·(N+1)^e·q^N / (1 − ((N+2)/(N+1))^e·q)
    let tail_at = |n: usize| -> Option<Rational> {
        let n1 = int(n as i64 + 1);
        let growth = crate::numerics::rational::pow_int(&((&n1 + int(1)) / &n1), e as i64);
        let rho = growth * &q;
        if rho >= int(1) {
            return None;
        }
        let lead = &weight
            * crate::numerics::rational::pow_int(&n1, e as i64)
            * crate::numerics::rational::pow_int(&q, n as i64);
        Some(lead / (int(1) - rho))
    };
    let limit = Rational::new(BigInt::from(16), BigInt::one() << bits);
    let qf = crate::numerics::rational::to_f64(&q);
    let mut n = ((bits as f64 * std::f64::consts::LN_2) / -qf.ln()).ceil() as usize + 8;
    loop {
        if let Some(t) = tail_at(n) {
            if t <= limit {
                break;
            }
        }
        n += n / 4 + 4;
    }
    let tail_ulps = ceil_mul(&(BigUint::one() << bits), &tail_at(n).unwrap());
    let coeffs = family.coeffs(n);
    let mut acc = BigApprox::zero(bits);
    let mut zpow = Rational::one();
    for (i, t) in coeffs.iter().enumerate().take(n) {
        let w = a + b * int(i as i64);
        if !t.is_zero() && !w.is_zero() {
            acc = acc.add(&BigApprox::from_rational(&(w * t * &zpow), bits));
        }
        zpow *= z;
    }
    Ok(acc.widen(&tail_ulps))
}

/// Value at z = −1 of Σ(a+bn)tₙzⁿ for tₙ = (1/2)ₙ(s)ₙ(1−s)ₙ/n!³. The series
/// converges there only conditionally; by Abel's theorem its sum is the limit
/// of the analytic function, which the Clausen square f² with
/// f = ₂F₁(s/2, (1−s)/2; 1; x) and Pfaff's map x ↦ x/(x−1) express through
/// rapidly convergent series at 1/2:
/// f(−1) = 2^(−α)·P, θf(−1) = 2^(−α)·(−α/2·P + αγ/4·P₁) with α = s/2, γ = (1+s)/2,
/// P = ₂F₁(α, γ; 1; 1/2), P₁ = ₂F₁(α+1, γ+1; 2; 1/2).
fn boundary_minus_one(
    s: &Rational,
    a: &Rational,
    b: &Rational,
    bits: u32,
) -> Result<BigApprox, HyperError> {
    let wbits = bits + 16;
    let alpha = s / int(2);
    let gamma = (int(1) + s) / int(2);
    let half = rat(1, 2);
    let p = HyperParams::new(vec![alpha.clone(), gamma.clone()], vec![int(1)])?;
    let p1 = HyperParams::new(vec![&alpha + int(1), &gamma + int(1)], vec![int(2)])?;
    let pv = sum_hypergeometric(&p, &int(1), &int(0), &half, wbits)?;
    let p1v = sum_hypergeometric(&p1, &int(1), &int(0), &half, wbits)?;
    // f² = 2^(−s)·P², 2fθf = 2^(−s)·(−α·P² + (αγ/2)·P·P₁)
    let p2 = pv.mul(&pv);
    let pp1 = pv.mul(&p1v);
    let inner = p2
        .mul_rational(&(a - b * &alpha))
        .add(&pp1.mul_rational(&(b * &alpha * &gamma / int(2))));
    let two_pow = BigApprox::from_integer(BigInt::from(2), wbits);
    let scale = two_pow.nth_root(s.denom().to_u32().unwrap_or(1))?;
    let scale = scale.pow_u(s.numer().to_u32().unwrap_or(0));
    Ok(inner.div(&scale)?.with_bits(bits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

/// ₂F₁(a,b;a+b+1/2;x)² against ₃F₂(2a,2b,a+b; a+b+1/2, 2a+2b; x) to order N.
/// `lower_override` replaces the right side's lower parameters (negative controls).
pub fn clausen_check(
    a: &Rational,
    b: &Rational,
    order: usize,
    lower_override: Option<[Rational; 2]>,
) -> Result<CheckResult, HyperError> {
    let c = a + b + rat(1, 2);
    let left = HyperParams::new(vec![a.clone(), b.clone()], vec![c.clone()])?.series(order);
    let left = left.mul(&left);
    let lowers = lower_override.unwrap_or_else(|| [c.clone(), int(2) * (a + b)]);
    let right = HyperParams::new(
        vec![int(2) * a, int(2) * b, a + b],
        lowers.to_vec(),
    )?
    .series(order);
    let first_mismatch = left.first_mismatch(&right);
    Ok(CheckResult { pass: first_mismatch.is_none(), first_mismatch })
}

#[derive(Clone, Debug)]
pub struct GaussHalfReport {
    pub left: BigApprox,
    pub right: BigApprox,
    pub exact_sine: bool,
    pub pass: bool,
}

/// s(1−s)·₂F₁(s,1−s;1;1/2)·₂F₁(s+1,2−s;2;1/2) against 2·sin(sπ)/π.
pub fn gauss_half_check(s: &Rational, digits: u32) -> Result<GaussHalfReport, HyperError> {
    let bits = bits_for_digits(digits);
    let half = rat(1, 2);
    let f1 = HyperParams::new(vec![s.clone(), int(1) - s], vec![int(1)])?;
    let f2 = HyperParams::new(vec![s + int(1), int(2) - s], vec![int(2)])?;
    let v1 = sum_hypergeometric(&f1, &int(1), &int(0), &half, bits)?;
    let v2 = sum_hypergeometric(&f2, &int(1), &int(0), &half, bits)?;
    let left = v1.mul(&v2).mul_rational(&(s * (int(1) - s)));
    let sine = sin_pi(s, digits)?;
    let right = sine
        .to_approx(bits)
        .mul_int(&BigInt::from(2))
        .div(&pi_oracle(digits).with_bits(bits))?;
    let pass = left.agrees_with(&right, digits);
    Ok(GaussHalfReport { left, right, exact_sine: sine.is_exact(), pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(1), 5), int(120));
    }

    #[test]
    fn family_coefficients() {
        assert_eq!(CoeffFamily::Hyper3F2(rat(1, 2)).coeff(1), rat(1, 8));
        assert_eq!(CoeffFamily::Square2F1(rat(1, 2)).coeff(1), rat(1, 2));
        assert_eq!(CoeffFamily::Domb.coeff(2), int(90));
        assert_eq!(CoeffFamily::SunS2.coeff(1), int(24));
        assert_eq!(CoeffFamily::SunS2.coeff(2), int(984));
    }

    #[test]
    fn family_text_round_trip() {
        for t in [
            "hyper3F2(1/4)",
            "square2F1(1/3)",
            "convCentral(1/6)",
            "domb",
            "sunS2",
            "product2F1(1/6,1/3;2/3,5/6)",
            "pFq(1/4,1/4;1)",
        ] {
            assert_eq!(t.parse::<CoeffFamily>().unwrap().to_string(), t);
        }
        assert!("hyper3F2(3/2)".parse::<CoeffFamily>().is_err());
        assert!("pFq(1;0)".parse::<CoeffFamily>().is_err());
    }

    #[test]
    fn bauer_at_the_boundary() {
        let fam = CoeffFamily::Hyper3F2(rat(1, 2));
        let v = eval_numeric(&fam, &int(1), &int(4), &int(-1), 30).unwrap();
        let target = BigApprox::from_integer(BigInt::from(2), bits_for_digits(30))
            .div(&pi_oracle(30))
            .unwrap();
        assert!(v.agrees_with(&target, 30));
        assert_eq!(v.to_decimal(8), "0.63661977");
    }

    #[test]
    fn divergence_is_reported() {
        let fam = CoeffFamily::Hyper3F2(rat(1, 2));
        assert!(matches!(
            eval_numeric(&fam, &int(1), &int(3), &int(4), 20),
            Err(HyperError::DivergentInput { .. })
        ));
        assert!(matches!(
            eval_numeric(&CoeffFamily::Domb, &int(1), &int(1), &rat(1, 36), 20),
            Err(HyperError::DivergentInput { .. })
        ));
    }

    #[test]
    fn clausen_instances() {
        assert!(clausen_check(&rat(1, 4), &rat(1, 4), 32, None).unwrap().pass);
        assert!(clausen_check(&rat(1, 6), &rat(1, 3), 32, None).unwrap().pass);
        let bad = clausen_check(&rat(1, 4), &rat(1, 4), 32, Some([int(1), rat(2, 1)])).unwrap();
        assert!(!bad.pass);
        assert!(bad.first_mismatch.unwrap() <= 2);
    }

    #[test]
    fn gauss_half() {
        for s in [rat(1, 2), rat(1, 4)] {
            assert!(gauss_half_check(&s, 30).unwrap().pass, "{s}");
        }
        let r = gauss_half_check(&rat(1, 5), 30).unwrap();
        assert!(r.pass && !r.exact_sine);
    }
}
