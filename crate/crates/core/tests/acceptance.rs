//! One line per acceptance criterion; exits non-zero if any criterion fails.
//! Sub-checks that fail are named on the criterion's line.

mod support {
    pub mod laws;
}

use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use rpv::binsplit::{bench, oracle_digits, pi_digits};
use rpv::catalog::{builtin_catalog, first_term_gap, verify_all, Catalog};
use rpv::numerics::{int, rat, RadConst, Rational};
use rpv::special::{
    find_limit, limit_eval, rogers_domb_check, sun_2_11, sun_4_14, sun_arguments, sun_s2_identity,
    sun_targets,
};
use rpv::transforms::{
    find_rule, pfaff_twice_is_euler, rule_catalog, verify_rule_formal, verify_rule_numeric,
    TransformRule,
};
use rpv::translate::{replay, translate, Certificate, SeriesSpec, TranslateError};
use support::laws;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, text: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(text.as_ref());
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn c1_first_term(cat: &Catalog) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let e = cat.get("s4-26390n+1103").expect("entry");
    let gap = first_term_gap(e, &int(9801), 30).expect("gap").to_f64();
    let t = start.elapsed();
    o.require(gap < 4e-9, format!("gap {gap:.3e} ≥ 4e-9"));
    o.require(within(t, 1.0), format!("took {t:.2?}"));
    o.note(format!("|1103/9801 − 1/(2π√2)| = {gap:.3e} in {t:.2?}"));
    o
}

fn c2_catalog(cat: &Catalog, rules: &[TransformRule]) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let report = verify_all(cat, rules, 50, jobs);
    let t = start.elapsed();
    let convergent: Vec<_> = report.entries.iter().filter(|e| e.computed.is_some()).collect();
    let conv_pass = convergent.iter().filter(|e| e.pass).count();
    for e in report.entries.iter().filter(|e| !e.pass) {
        o.require(false, format!("{} failed: {}", e.id, e.detail));
    }
    o.require(convergent.len() >= 35, format!("only {} convergent entries", convergent.len()));
    // printed lines with inconsistent constants carry a note
    for id in ["s4-26390n+1103", "s4-10n+1", "s3-33n+4", "s6-342n+25", "s6-252n+20", "s6-chudnovsky"] {
        let noted = report.entries.iter().any(|e| e.id == id && e.pass && e.discrepancy.is_some());
        o.require(noted, format!("{id} without a passing corrected constant and note"));
    }
    o.require(within(t, 60.0), format!("took {t:.2?}"));
    o.note(format!(
        "{conv_pass}/{} convergent entries at 50 digits, {} entries total, {t:.2?}",
        convergent.len(),
        report.entries.len()
    ));
    o
}

fn c3_rules(rules: &[TransformRule]) -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut passed = 0;
    for r in rules {
        let rep = verify_rule_formal(r, 64).expect("formal check");
        o.require(rep.pass && rep.order == 64, format!("{} mismatch at {:?}", r.id, rep.first_mismatch));
        passed += usize::from(rep.pass);
    }
    let t = start.elapsed();
    o.require(rules.len() >= 16, format!("only {} rules", rules.len()));
    o.require(within(t, 30.0), format!("took {t:.2?}"));
    let euler = pfaff_twice_is_euler(&rat(1, 5), &rat(2, 7), &rat(3, 4), 32).expect("pfaff");
    o.require(euler, "Pfaff∘Pfaff ≠ Euler at order 32");
    o.note(format!("{passed}/{} rules at order 64 in {t:.2?}; Pfaff∘Pfaff = Euler: {euler}", rules.len()));
    o
}

fn c4_warning(cat: &Catalog, rules: &[TransformRule]) -> Outcome {
    let mut o = Outcome::new();
    let rule = find_rule(rules, "warning").expect("rule");
    let formal = verify_rule_formal(&rule, 64).expect("formal");
    o.require(formal.pass, "formal check fails");
    let x0 = rat(1, 2);
    let numeric = verify_rule_numeric(&rule, &x0, 30).expect("numeric");
    o.require(!numeric.pass, "numeric check at 1/2 passes");
    let source = &cat.get("start-1/3").expect("seed").spec;
    let refused = matches!(translate(source, &rule, &x0), Err(TranslateError::BranchCheckFailed { .. }));
    o.require(refused, "translation not refused");
    o.note(format!(
        "formal {}, at 1/2: {} vs {}, translation refused: {refused}",
        formal.pass,
        numeric.lhs.to_decimal(8),
        numeric.rhs.to_decimal(8)
    ));
    o
}

fn listed(family: &str, s: (i64, i64), z: Rational, a: i64, b: i64, c: &str) -> SeriesSpec {
    let family = rpv::hyper::CoeffFamily::from_parts(family, Some(&rat(s.0, s.1))).expect("family");
    rpv::translate::spec("listed", family, z, a, b, c)
}

fn c5_certificates(cat: &Catalog, rules: &[TransformRule]) -> Outcome {
    let mut o = Outcome::new();
    let h = "hyper3F2";
    let cases: Vec<(&str, &str, Rational, SeriesSpec)> = vec![
        ("start-1/4", "pfaff-sq", rat(1, 2), listed(h, (1, 2), int(-1), 1, 4, "2")),
        ("start-1/2", "kummer-sq", rat(1, 2), listed(h, (1, 2), rat(-1, 8), 1, 6, "2*sqrt(2)")),
        ("start-1/4", "goursat-1/4", rat(1, 2), listed(h, (1, 6), rat(27, 125), 3, 28, "5*sqrt(5)")),
        ("start-1/3", "goursat-1/3", rat(1, 2), listed(h, (1, 6), rat(4, 125), 2, 22, "5/3*sqrt(15)")),
        ("s2-42n+5", "class3", rat(1, 64), listed(h, (1, 4), rat(-256, 3969), 8, 65, "9*sqrt(7)")),
        ("s2-42n+5", "class4-b", rat(1, 64), listed(h, (1, 6), rat(-64, 125), 8, 63, "5*sqrt(15)")),
        // 85√85/√3 = (85/3)·√255
        ("s2-42n+5", "class4-a", rat(1, 64), listed(h, (1, 6), rat(64, 614125), 144, 2394, "85/3*sqrt(255)")),
        ("s3-5n+1", "class7", rat(-1, 8), listed(h, (1, 6), rat(-9, 64000), 31, 506, "160/9*sqrt(30)")),
    ];
    let mut ok = 0;
    for (src, rule_id, x0, want) in &cases {
        let source = &cat.get(src).expect("source").spec;
        let rule = find_rule(rules, rule_id).expect("rule");
        let label = format!("{src} --{rule_id}@{x0}");
        match translate(source, &rule, x0) {
            Ok(cert) => {
                // both sides in the same normal form: coprime (a, b), b > 0
                let got = cert.derived.normalized();
                let want = want.normalized();
                let same = got.family == want.family
                    && got.z == want.z
                    && got.a == want.a
                    && got.b == want.b
                    && got.c == want.c;
                o.require(same, format!("{label} gave ({}, {}, {}, {})", got.a, got.b, got.z, got.c));
                let back = Certificate::from_text(&cert.to_text()).expect("certificate text");
                let rep = replay(&back, rules);
                o.require(rep.pass, format!("{label} replay: {}", rep.detail));
                ok += usize::from(same && rep.pass);
            }
            Err(e) => o.require(false, format!("{label} refused: {e}")),
        }
    }
    o.note(format!("{ok}/{} derivations exact and replayed", cases.len()));
    o
}

fn c6_divergent(cat: &Catalog, rules: &[TransformRule]) -> Outcome {
    let mut o = Outcome::new();
    // (entry, z, a, b, |c|² from the list)
    let cases = [
        ("s2-3n+1-m8", int(-8), 1, 3, int(1)),
        ("s2-3n+1-4", int(4), 1, 3, int(4)),
        ("s2-21n+8", int(64), 8, 21, int(4)),
        ("s3-15n+4-m4", int(-4), 4, 15, int(27)),
    ];
    let mut summary = Vec::new();
    for (id, z, a, b, norm) in cases {
        match cat.certificate(id, rules) {
            Ok(cert) => {
                let d = &cert.derived;
                o.require(d.z == z, format!("{id}: z = {}", d.z));
                o.require(d.a == int(a) && d.b == int(b), format!("{id}: (a, b) = ({}, {})", d.a, d.b));
                o.require(
                    d.c.norm_squared() == norm,
                    format!("{id}: |c| = √({}) but the list has √({norm})", d.c.norm_squared()),
                );
                o.require(!cert.convention.is_empty(), format!("{id}: no branch convention"));
                summary.push(format!("z={z}: c={}", d.c));
            }
            Err(e) => o.require(false, format!("{id}: {e}")),
        }
    }
    o.note(summary.join(", "));
    o
}

fn c7_digits(cat: &Catalog) -> Outcome {
    let mut o = Outcome::new();
    let chud = cat.get("s6-chudnovsky").expect("entry");
    let report = bench(chud, 10_000).expect("digits");
    let oracle = oracle_digits(10_000);
    o.require(report.output == oracle, "10,000 digits differ from the oracle");
    o.require(within(report.total, 10.0), format!("took {:.2?}", report.total));
    let a = pi_digits(chud, 1000).expect("digits");
    let b = pi_digits(cat.get("s4-26390n+1103").expect("entry"), 1000).expect("digits");
    let triple = a == b && b == oracle[..1000];
    o.require(triple, "1,000-digit triple agreement fails");
    o.note(format!(
        "10,000 digits in {:.2?} ({} terms), oracle match {}; triple agreement at 1,000: {triple}",
        report.total,
        report.terms,
        report.output == oracle
    ));
    o
}

fn c8_limits() -> Outcome {
    let mut o = Outcome::new();
    let mut parts = Vec::new();
    for id in ["limit-1/2", "limit-1/3", "limit-1/4", "limit-1/6", "limit-8x+1"] {
        let spec = find_limit(id).expect("limit");
        match limit_eval(&spec, 1e-8, 20) {
            Ok(r) => {
                o.require(r.pass && r.error < 1e-8, format!("{id}: error {:.2e}", r.error));
                parts.push(format!("{id} {:.1e}", r.error));
            }
            Err(e) => o.require(false, format!("{id}: {e}")),
        }
    }
    o.note(format!("errors: {}", parts.join(", ")));
    o
}

fn c9_sun() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let s2 = sun_s2_identity(300);
    let t = start.elapsed();
    o.require(s2.pass, "S2 identity fails");
    o.require(within(t, 10.0), format!("S2 identity took {t:.2?}"));
    for (name, r) in [("2.11", sun_2_11(30)), ("4.14", sun_4_14(30))] {
        match r {
            Ok(r) => o.require(r.pass && r.digits_matched >= 30, format!("{name}: {} digits", r.digits_matched)),
            Err(e) => o.require(false, format!("{name}: {e}")),
        }
    }
    let expected = [rat(1, 128), rat(-1, 576), rat(-1, 4032), rat(1, 48), rat(1, 72), rat(1, 63)];
    let mut found = Vec::new();
    for ((w, roots), want) in sun_arguments(&sun_targets()).into_iter().zip(expected) {
        let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        o.require(roots == [want.clone()], format!("64x/(64x−1) = {w} solves to {}, expected {want}", shown.join(", ")));
        found.extend(shown);
    }
    match rogers_domb_check(30) {
        Ok(d) => {
            o.require(d.formal_pass && d.formal_order == 40, "Rogers–Domb formal check");
            o.require(d.numeric_pass, "Rogers–Domb numeric check");
        }
        Err(e) => o.require(false, format!("Rogers–Domb: {e}")),
    }
    o.note(format!("S2 n ≤ 300 in {t:.2?}; arguments {}", found.join(", ")));
    o
}

fn c10_properties() -> Outcome {
    let mut o = Outcome::new();
    let mut run = |name: &str, result: Result<(), String>| {
        o.require(result.is_ok(), format!("{name}: {}", result.err().unwrap_or_default()));
    };
    let cfg = || TestRunner::new(Config { cases: 128, failure_persistence: None, ..Config::default() });
    run(
        "ring",
        cfg()
            .run(&(laws::series(), laws::series(), laws::series()), |(f, g, h)| laws::ring_laws(&f, &g, &h))
            .map_err(|e| e.to_string()),
    );
    run(
        "θ derivation",
        cfg()
            .run(&(laws::series(), laws::series(), laws::small_rational()), |(f, g, q)| {
                laws::theta_laws(&f, &g, &q)
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "pochhammer",
        cfg()
            .run(&(laws::small_rational(), 0usize..12), |(a, n)| laws::pochhammer_laws(&a, n))
            .map_err(|e| e.to_string()),
    );
    run(
        "coefficient oracles",
        cfg()
            .run(&(laws::unit_interval_s(), 0usize..14), |(s, n)| laws::coeff_oracles(&s, n))
            .map_err(|e| e.to_string()),
    );
    run(
        "RadConst",
        cfg()
            .run(
                &(laws::radconst(), laws::radconst(), laws::radconst(), laws::small_rational()),
                |(x, y, z, q): (RadConst, RadConst, RadConst, Rational)| laws::radconst_laws(&x, &y, &z, &q),
            )
            .map_err(|e| e.to_string()),
    );
    o.note("ring, θ derivation, pochhammer, coefficient oracles, RadConst algebra: 128 cases each");
    o
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let cat = builtin_catalog();
    let rules = rule_catalog();
    let criteria: Vec<Criterion> = vec![
        ("first-term reproduction", Box::new(|| c1_first_term(&cat))),
        ("catalog verification", Box::new(|| c2_catalog(&cat, &rules))),
        ("rule suite", Box::new(|| c3_rules(&rules))),
        ("warning example", Box::new(|| c4_warning(&cat, &rules))),
        ("translation certificates", Box::new(|| c5_certificates(&cat, &rules))),
        ("divergent certificates", Box::new(|| c6_divergent(&cat, &rules))),
        ("digits", Box::new(|| c7_digits(&cat))),
        ("limits", Box::new(c8_limits)),
        ("sun suite", Box::new(c9_sun)),
        ("property suites", Box::new(c10_properties)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        print!("{verdict} {:>2} {name}: {} [{:.2?}]", i + 1, out.detail, start.elapsed());
        if !out.failures.is_empty() {
            failed += 1;
            print!(" -- failing: {}", out.failures.join("; "));
        }
        println!();
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
