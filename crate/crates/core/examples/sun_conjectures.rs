//! Sun's conjectures: the S⁽²⁾ convolution identity, formulas 2.11 and 4.14,
//! the six arguments from 64x/(64x − 1), and the Rogers–Domb series.
//!
//!     cargo run --release --example sun_conjectures

use rpv::special::{
    rogers_domb_check, sun_2_11, sun_2_11_truncated, sun_4_14, sun_arguments, sun_s2_identity,
    sun_targets,
};

fn main() {
    let s2 = sun_s2_identity(300);
    println!(
        "S2 identity n <= 300: {} (printed definition first fails at n = {:?}: {} vs {})",
        s2.pass, s2.printed_definition_failure, s2.printed_value_n1, s2.convolution_n1
    );
    let r = sun_2_11(30).unwrap();
    println!("2.11: {} digits, {}", r.digits_matched, r.detail);
    println!("2.11 truncated after 10 terms: {} digits", sun_2_11_truncated(10, 30).unwrap());
    let r = sun_4_14(30).unwrap();
    println!("4.14: {} digits, {}", r.digits_matched, r.detail);
    for (w, roots) in sun_arguments(&sun_targets()) {
        let xs: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        println!("64x/(64x-1) = {w}: x = {}", xs.join(", "));
    }
    let d = rogers_domb_check(30).unwrap();
    let x0 = d.transport_x0.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    println!(
        "Rogers-Domb: formal to order {} {}, numeric {}; transport at x0 = {x0}: {}",
        d.formal_order, d.formal_pass, d.numeric_pass, d.transport
    );
}
