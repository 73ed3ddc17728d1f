//! A transformation that is correct as a power series but gives a wrong
//! value at x0 = 1/2: the coefficients agree to any order, the point
//! evaluation does not, and the gated translation refuses to use it.
//!
//!     cargo run --release --example warning_example

use rpv::catalog::builtin_catalog;
use rpv::numerics::rat;
use rpv::transforms::{find_rule, rule_catalog, verify_rule_formal, verify_rule_numeric};
use rpv::translate::{translate, translate_exact};

fn main() {
    let rules = rule_catalog();
    let rule = find_rule(&rules, "warning").unwrap();
    let x0 = rat(1, 2);
    let formal = verify_rule_formal(&rule, 64).unwrap();
    println!("formal to order {}: {}", formal.order, formal.pass);
    let num = verify_rule_numeric(&rule, &x0, 30).unwrap();
    println!(
        "at x0 = 1/2: left {} right {} -> {}",
        num.lhs.to_decimal(20),
        num.rhs.to_decimal(20),
        num.pass
    );

    let cat = builtin_catalog();
    let source = &cat.get("start-1/3").unwrap().spec;
    let (_, naive) = translate_exact(source, &rule, &x0).unwrap();
    println!("ungated result: ({}, {}, z = {}, c = {})", naive.a, naive.b, naive.z, naive.c);
    match translate(source, &rule, &x0) {
        Ok(_) => println!("accepted (unexpected)"),
        Err(e) => println!("refused: {e}"),
    }
}
