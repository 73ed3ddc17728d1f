//! Sums every convergent catalog entry against the AGM oracle and replays
//! every recorded derivation.
//!
//!     cargo run --release --example verify_catalog -- 50

use rpv::catalog::{builtin_catalog, verify_all};
use rpv::transforms::rule_catalog;

fn main() {
    let digits = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(50);
    let cat = builtin_catalog();
    let rules = rule_catalog();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let start = std::time::Instant::now();
    let report = verify_all(&cat, &rules, digits, jobs);
    print!("{}", report.to_text());
    println!("{} entries in {:.2?}", cat.entries.len(), start.elapsed());
    if !report.all_pass() {
        std::process::exit(1);
    }
}
