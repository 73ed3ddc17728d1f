use rpv::catalog::{builtin_catalog, parse_catalog, verify_all, verify_entry, Tag, VerifyReport};
use rpv::transforms::rule_catalog;
use rpv::translate::Status;

#[test]
fn report_json_round_trips_byte_for_byte() {
    let mut cat = builtin_catalog();
    cat.entries.retain(|e| ["start-1/4", "s2-4n+1", "s2-3n+1-m8"].contains(&e.id()));
    let report = verify_all(&cat, &rule_catalog(), 20, 1);
    let text = report.to_json();
    let again = VerifyReport::from_json(&text).unwrap();
    assert_eq!(again, report);
    assert_eq!(again.to_json(), text);
}

#[test]
fn corrupted_argument_fails_exactly_one_entry() {
    let text = builtin_catalog().render();
    let broken = text.replacen("z = \"-1/777924\"", "z = \"-1/777925\"", 1);
    assert_ne!(broken, text);
    let cat = parse_catalog(&broken).unwrap();
    let report = verify_all(&cat, &rule_catalog(), 20, 1);
    let failed: Vec<&str> = report.entries.iter().filter(|e| !e.pass).map(|e| e.id.as_str()).collect();
    assert_eq!(failed, ["s4-21460n+1123"]);
    assert_eq!(report.failed, 1);
}

#[test]
fn verdicts_stable_between_10_and_50_digits() {
    let cat = builtin_catalog();
    let rules = rule_catalog();
    for id in ["s4-26390n+1103", "s3-6n+1", "s6-28n+3", "sun-4.14", "s2-21n+8"] {
        let e = cat.get(id).unwrap();
        let lo = verify_entry(&cat, e, &rules, 10);
        let hi = verify_entry(&cat, e, &rules, 50);
        assert!(lo.pass && hi.pass, "{id}");
        if let (Some(a), Some(b)) = (&lo.computed, &hi.computed) {
            assert!(b.starts_with(&a[..a.len() - 2]), "{id}: {a} vs {b}");
        }
    }
}

#[test]
fn catalog_shape() {
    let cat = builtin_catalog();
    let blocks = ["s2-", "s3-", "s4-", "s6-"];
    let listed = cat.entries.iter().filter(|e| blocks.iter().any(|b| e.id().starts_with(b))).count();
    assert!(listed + cat.uncertified.len() >= 44);
    for e in &cat.entries {
        if e.is_divergent() {
            assert!(e.derivation.is_some(), "{}", e.id());
        }
        if e.spec.status == Status::ProvedStart {
            assert!(e.id().starts_with("start-"));
        }
    }
    assert!(cat.entries.iter().any(|e| e.tags.contains(&Tag::New)));
}

#[test]
fn uncertified_lines_are_reported_not_verified() {
    let cat = builtin_catalog();
    let report = verify_all(&cat, &rule_catalog(), 10, 1);
    assert_eq!(report.uncertified, ["s4-35n+8", "s3-10n+3", "s3-11n+3"]);
    assert!(report.entries.iter().all(|e| !report.uncertified.contains(&e.id)));
}
