//! Checks every shipped transformation rule by exact coefficient comparison,
//! and Pfaff applied twice against Euler.
//!
//!     cargo run --release --example rule_suite -- 64

use rpv::numerics::rat;
use rpv::transforms::{pfaff_twice_is_euler, rule_catalog, verify_rule_formal};

fn main() {
    let order = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(64);
    let start = std::time::Instant::now();
    let rules = rule_catalog();
    let mut failed = 0;
    for r in &rules {
        let rep = verify_rule_formal(r, order).unwrap();
        if !rep.pass {
            failed += 1;
        }
        println!("{:<16} {:<5} {}", r.id, rep.pass, r.note);
    }
    let euler = pfaff_twice_is_euler(&rat(1, 5), &rat(2, 7), &rat(3, 4), 32).unwrap();
    println!("pfaff twice = euler (order 32): {euler}");
    println!("{} rules, {failed} failed, {:.2?}", rules.len(), start.elapsed());
}
