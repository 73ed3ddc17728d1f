//! π digits by binary splitting from a catalog entry, checked against the
//! AGM oracle.
//!
//!     cargo run --release --example pi_digits -- s6-chudnovsky 10000

use rpv::binsplit::{bench, format_digits, oracle_digits};
use rpv::catalog::builtin_catalog;

fn main() {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "s6-chudnovsky".into());
    let digits: u64 = args.next().and_then(|d| d.parse().ok()).unwrap_or(10_000);
    let cat = builtin_catalog();
    let entry = cat.get(&id).unwrap_or_else(|| panic!("no catalog entry {id}"));
    let report = bench(entry, digits).expect("splittable entry");
    println!(
        "{id}: {} digits from {} terms; split {:.2?}, recombine {:.2?}, total {:.2?}",
        digits, report.terms, report.split_time, report.recombine_time, report.total
    );
    let tail = &report.output[report.output.len().saturating_sub(20)..];
    println!("{}…{tail}", &format_digits(&report.output)[..22.min(digits as usize + 1)]);
    let t = std::time::Instant::now();
    let agrees = oracle_digits(digits) == report.output;
    println!("oracle agreement: {agrees} ({:.2?})", t.elapsed());
}
