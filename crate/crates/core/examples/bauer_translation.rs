//! Derives Bauer's series Σ(4n+1)(−1)ⁿ(1/2)ₙ³/n!³ = 2/π from the s = 1/4
//! starting formula, writes the certificate, reads it back and replays it,
//! then follows a few more chains from the catalog.
//!
//!     cargo run --release --example bauer_translation

use rpv::catalog::builtin_catalog;
use rpv::numerics::rat;
use rpv::transforms::rule_catalog;
use rpv::translate::{replay, translate_chain, Certificate};

fn main() {
    let cat = builtin_catalog();
    let rules = rule_catalog();
    let chains: [(&str, &str, rpv::numerics::Rational); 5] = [
        ("start-1/4", "pfaff-sq", rat(1, 2)),
        ("start-1/2", "kummer-sq", rat(1, 2)),
        ("start-1/4", "goursat-1/4", rat(1, 2)),
        ("s2-42n+5", "class3", rat(1, 64)),
        ("s3-5n+1", "class7", rat(-1, 8)),
    ];
    for (i, (src, rule, x0)) in chains.into_iter().enumerate() {
        let source = &cat.get(src).expect("catalog entry").spec;
        let certs = translate_chain(source, &[(rule, x0)], &rules).expect("gated translation");
        let cert = &certs[0];
        if i == 0 {
            print!("{}", cert.to_text());
        }
        let back = Certificate::from_text(&cert.to_text()).expect("round trip");
        let d = &cert.derived;
        println!(
            "{src} --{rule}@{}--> ({}, {}, z = {}, c = {}) [{:?}], replay: {}",
            cert.x0,
            d.a,
            d.b,
            d.z,
            d.c,
            cert.gate,
            replay(&back, &rules).detail
        );
    }
}
