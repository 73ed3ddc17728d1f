//! The series list as data, plus the verification driver.
//!
//! Convergent entries are summed against the AGM oracle; entries with a
//! derivation are also re-derived exactly and compared up to a common
//! rational factor. Divergent entries are never summed.

use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyper::CoeffFamily;
use crate::numerics::approx::BigApprox;
use crate::numerics::radconst::RadConst;
use crate::numerics::rational::{parse_rational, Rational};
use crate::transforms::{find_rule, TransformRule};
use crate::translate::{constant_over_pi, translate, Certificate, SeriesSpec, Status};

pub const BUILTIN_CATALOG: &str = include_str!("../data/catalog.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("catalog invariant violated by {id}: {msg}")]
    InvariantViolation { id: String, msg: String },
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    R,
    WZ,
    #[serde(rename = "modular")]
    Modular,
    #[serde(rename = "new")]
    New,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub source: String,
    pub rule: String,
    #[serde(with = "crate::numerics::rational::text")]
    pub x0: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub spec: SeriesSpec,
    pub tags: Vec<Tag>,
    /// The list line as printed, in plain text.
    pub printed: String,
    /// Set when the stored constant or data differ from the printed line.
    pub discrepancy: Option<String>,
    pub derivation: Option<Derivation>,
}

impl CatalogEntry {
    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn is_divergent(&self) -> bool {
        self.spec.status == Status::DivergentCertificate
    }
}

/// A divergent list line for which no shipped rule yields a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncertifiedEntry {
    pub id: String,
    pub family: CoeffFamily,
    pub z: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: RadConst,
    pub tags: Vec<Tag>,
    pub printed: String,
    pub note: String,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub uncertified: Vec<UncertifiedEntry>,
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    version: u32,
    #[serde(default)]
    entry: Vec<EntryRecord>,
    #[serde(default)]
    uncertified: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    id: String,
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<String>,
    z: String,
    a: String,
    b: String,
    c_r: String,
    #[serde(default = "one_u64")]
    c_m: u64,
    #[serde(default)]
    c_t: u8,
    #[serde(default = "default_status")]
    status: Status,
    #[serde(default)]
    tags: Vec<Tag>,
    #[serde(default)]
    printed: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    discrepancy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    derivation: Option<Derivation>,
}

fn one_u64() -> u64 {
    1
}

fn default_status() -> Status {
    Status::NumericOnly
}

struct Parsed {
    family: CoeffFamily,
    z: Rational,
    a: Rational,
    b: Rational,
    c: RadConst,
}

impl EntryRecord {
    fn parse_fields(&self) -> Result<Parsed, CatalogError> {
        let bad = |msg: String| CatalogError::InvariantViolation { id: self.id.clone(), msg };
        let q = |field: &str, text: &str| {
            parse_rational(text).map_err(|e| bad(format!("field {field}: {e}")))
        };
        let s = self.s.as_deref().map(|t| q("s", t)).transpose()?;
        let family =
            CoeffFamily::from_parts(&self.family, s.as_ref()).map_err(|e| bad(e.to_string()))?;
        if self.c_t > 1 {
            return Err(bad(format!("c_t = {} must be 0 or 1", self.c_t)));
        }
        let c = RadConst::new(q("c_r", &self.c_r)?, self.c_m.into(), self.c_t == 1)
            .map_err(|e| bad(e.to_string()))?;
        if c.m() != &num_bigint::BigUint::from(self.c_m) {
            return Err(bad(format!("c_m = {} is not squarefree", self.c_m)));
        }
        Ok(Parsed { family, z: q("z", &self.z)?, a: q("a", &self.a)?, b: q("b", &self.b)?, c })
    }

    fn from_entry(e: &CatalogEntry) -> Self {
        let spec = &e.spec;
        let c_m: u64 = spec.c.m().try_into().expect("catalog radicals fit in u64");
        EntryRecord {
            id: spec.id.clone(),
            family: spec.family.name().to_string(),
            s: spec.family.s().map(|s| s.to_string()),
            z: spec.z.to_string(),
            a: spec.a.to_string(),
            b: spec.b.to_string(),
            c_r: spec.c.r().to_string(),
            c_m,
            c_t: spec.c.is_imaginary() as u8,
            status: spec.status,
            tags: e.tags.clone(),
            printed: e.printed.clone(),
            note: spec.note.clone(),
            discrepancy: e.discrepancy.clone(),
            derivation: e.derivation.clone(),
        }
        .with_full_family(&spec.family)
    }

    fn with_full_family(mut self, family: &CoeffFamily) -> Self {
        if family.s().is_none() {
            self.family = family.to_string();
        }
        self
    }
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let file: CatalogFile = toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
    if file.version != 1 {
        return Err(CatalogError::Parse(format!("unsupported version {}", file.version)));
    }
    let mut cat = Catalog::default();
    for rec in &file.entry {
        let p = rec.parse_fields()?;
        let spec = SeriesSpec {
            id: rec.id.clone(),
            family: p.family,
            z: p.z,
            a: p.a,
            b: p.b,
            c: p.c,
            status: rec.status,
            note: rec.note.clone(),
        };
        cat.entries.push(CatalogEntry {
            spec,
            tags: rec.tags.clone(),
            printed: rec.printed.clone(),
            discrepancy: rec.discrepancy.clone(),
            derivation: rec.derivation.clone(),
        });
    }
    for rec in &file.uncertified {
        let p = rec.parse_fields()?;
        cat.uncertified.push(UncertifiedEntry {
            id: rec.id.clone(),
            family: p.family,
            z: p.z,
            a: p.a,
            b: p.b,
            c: p.c,
            tags: rec.tags.clone(),
            printed: rec.printed.clone(),
            note: rec.note.clone(),
        });
    }
    cat.check_invariants()?;
    Ok(cat)
}

pub fn load_catalog(path: &Path) -> Result<Catalog, CatalogError> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

pub fn builtin_catalog() -> Catalog {
    parse_catalog(BUILTIN_CATALOG).expect("shipped catalog is valid")
}

/// The catalog named by RPV_CATALOG, or the built-in one.
pub fn default_catalog() -> Result<Catalog, CatalogError> {
    match std::env::var_os("RPV_CATALOG") {
        Some(p) => load_catalog(Path::new(&p)),
        None => Ok(builtin_catalog()),
    }
}

impl Catalog {
    fn check_invariants(&self) -> Result<(), CatalogError> {
        let violation = |id: &str, msg: String| CatalogError::InvariantViolation { id: id.into(), msg };
        let mut seen = HashMap::new();
        let ids = self.entries.iter().map(|e| e.id()).chain(self.uncertified.iter().map(|u| u.id.as_str()));
        for id in ids {
            if seen.insert(id, ()).is_some() {
                return Err(violation(id, "duplicate id".into()));
            }
        }
        for e in &self.entries {
            e.spec.validate().map_err(|err| violation(e.id(), err.to_string()))?;
            if e.is_divergent() && e.spec.converges() {
                return Err(violation(e.id(), "marked divergent but the series converges".into()));
            }
            match &e.derivation {
                Some(d) if !seen.contains_key(d.source.as_str()) => {
                    return Err(violation(e.id(), format!("unknown derivation source {}", d.source)));
                }
                None if e.is_divergent() => {
                    return Err(violation(e.id(), "divergent entry without a certificate".into()));
                }
                None if e.spec.status == Status::ProvedTranslation => {
                    return Err(violation(e.id(), "proved-translation entry without a derivation".into()));
                }
                _ => {}
            }
        }
        for u in &self.uncertified {
            if u.family.converges_at(&u.z) {
                return Err(violation(&u.id, "uncertified records are for divergent lines only".into()));
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id() == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len() + self.uncertified.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn render(&self) -> String {
        let file = CatalogFile {
            version: 1,
            entry: self.entries.iter().map(EntryRecord::from_entry).collect(),
            uncertified: self
                .uncertified
                .iter()
                .map(|u| {
                    let e = CatalogEntry {
                        spec: SeriesSpec {
                            id: u.id.clone(),
                            family: u.family.clone(),
                            z: u.z.clone(),
                            a: u.a.clone(),
                            b: u.b.clone(),
                            c: u.c.clone(),
                            status: Status::DivergentCertificate,
                            note: u.note.clone(),
                        },
                        tags: u.tags.clone(),
                        printed: u.printed.clone(),
                        discrepancy: None,
                        derivation: None,
                    };
                    EntryRecord::from_entry(&e)
                })
                .collect(),
        };
        toml::to_string(&file).expect("catalog serializes")
    }

    /// Re-derives the entry from its recorded source, rule and point.
    pub fn certificate(&self, id: &str, rules: &[TransformRule]) -> Result<Certificate, String> {
        let e = self.get(id).ok_or_else(|| format!("no entry {id}"))?;
        let d = e.derivation.as_ref().ok_or_else(|| format!("{id} has no derivation"))?;
        let src = self.get(&d.source).ok_or_else(|| format!("no source {}", d.source))?;
        let rule = find_rule(rules, &d.rule).map_err(|e| e.to_string())?;
        translate(&src.spec, &rule, &d.x0).map_err(|e| e.to_string())
    }
}

// ---- verification ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub status: Status,
    /// Σ to the requested precision (absent for divergent entries).
    pub computed: Option<String>,
    /// c/π, or |c|/π for imaginary constants.
    pub target: String,
    pub digits_matched: u32,
    pub certificate: Option<String>,
    pub discrepancy: Option<String>,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub digits: u32,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<EntryReport>,
    pub uncertified: Vec<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{} {:<28} {}\n",
                if e.pass { "PASS" } else { "FAIL" },
                e.id,
                e.detail
            ));
        }
        for u in &self.uncertified {
            out.push_str(&format!("SKIP {u:<28} divergent, no certificate\n"));
        }
        let notes: Vec<&EntryReport> = self.entries.iter().filter(|e| e.discrepancy.is_some()).collect();
        if !notes.is_empty() {
            out.push_str("\ndiscrepancies:\n");
            for e in notes {
                out.push_str(&format!("  {}: {}\n", e.id, e.discrepancy.as_deref().unwrap_or("")));
            }
        }
        out.push_str(&format!("\n{} passed, {} failed at {} digits\n", self.passed, self.failed, self.digits));
        out
    }
}

fn decimal(x: &BigApprox, digits: u32) -> String {
    x.to_decimal(digits)
}

/// Sums a convergent entry against c/π, replays its derivation if it has
/// one; divergent entries are checked by certificate only.
pub fn verify_entry(cat: &Catalog, entry: &CatalogEntry, rules: &[TransformRule], digits: u32) -> EntryReport {
    let spec = &entry.spec;
    let mut report = EntryReport {
        id: spec.id.clone(),
        status: spec.status,
        computed: None,
        target: String::new(),
        digits_matched: 0,
        certificate: None,
        discrepancy: entry.discrepancy.clone(),
        pass: true,
        detail: String::new(),
    };
    let mut details = Vec::new();
    match constant_over_pi(&spec.c, digits) {
        Ok(t) => report.target = decimal(&t, digits),
        Err(e) => {
            report.pass = false;
            details.push(e.to_string());
        }
    }
    if let Some(d) = &entry.derivation {
        match cat.certificate(&spec.id, rules) {
            Ok(cert) => {
                let ok = cert.derived.projectively_equal(spec);
                report.certificate = Some(format!("{} @ {} from {} ({:?})", d.rule, d.x0, d.source, cert.gate));
                if ok {
                    details.push(format!("certificate {} @ {}", d.rule, d.x0));
                } else {
                    report.pass = false;
                    let g = &cert.derived;
                    details.push(format!(
                        "certificate gives ({}, {}, {}, {}) not the stored data",
                        g.a, g.b, g.z, g.c
                    ));
                }
            }
            Err(e) => {
                report.pass = false;
                details.push(format!("derivation failed: {e}"));
            }
        }
    }
    if !entry.is_divergent() {
        match spec.check_numeric(digits) {
            Ok(chk) => {
                report.computed = Some(decimal(&chk.sum, digits));
                report.digits_matched = chk.digits_matched;
                if chk.pass {
                    details.push(format!("{digits} digits"));
                } else {
                    report.pass = false;
                    details.push(format!("sum matches c/π to only {} digits", chk.digits_matched));
                }
            }
            Err(e) => {
                report.pass = false;
                details.push(e.to_string());
            }
        }
    } else {
        details.push("divergent".into());
    }
    report.detail = details.join("; ");
    report
}

/// Verifies every entry on a pool of `jobs` threads; report order follows the file.
pub fn verify_all(cat: &Catalog, rules: &[TransformRule], digits: u32, jobs: usize) -> VerifyReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let entries: Vec<EntryReport> =
        pool.install(|| cat.entries.par_iter().map(|e| verify_entry(cat, e, rules, digits)).collect());
    let passed = entries.iter().filter(|r| r.pass).count();
    VerifyReport {
        digits,
        passed,
        failed: entries.len() - passed,
        entries,
        uncertified: cat.uncertified.iter().map(|u| u.id.clone()).collect(),
    }
}

/// |a·t₀ − c/π| / scale: how well the first term alone approximates the sum.
pub fn first_term_gap(entry: &CatalogEntry, scale: &Rational, digits: u32) -> Result<BigApprox, String> {
    let spec = &entry.spec;
    let t0 = &spec.a * spec.family.coeff(0);
    let target = constant_over_pi(&spec.c, digits).map_err(|e| e.to_string())?;
    let bits = target.bits();
    let gap = BigApprox::from_rational(&t0, bits).sub(&target).abs();
    Ok(gap.mul_rational(&(Rational::from_integer(1.into()) / scale)))
}
