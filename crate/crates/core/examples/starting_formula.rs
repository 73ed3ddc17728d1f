//! Σ n·cₙ/2ⁿ = 2 sin(sπ)/π for the Cauchy square of (s)ₖ(1−s)ₖ/k!², and the
//! central-binomial rewriting of the same sums.
//!
//!     cargo run --release --example starting_formula -- 60

use rpv::numerics::rat;
use rpv::special::{corollary_base, corollary_binomial_check, starting_formula};

fn main() {
    let digits = std::env::args().nth(1).and_then(|d| d.parse().ok()).unwrap_or(60);
    for s in [rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 6), rat(2, 5)] {
        let r = starting_formula(&s, digits).unwrap();
        let exact = r.exact.map(|c| c.to_string()).unwrap_or_else(|| "(numeric sine)".into());
        println!("s = {s}: {} digits, 2 sin(sπ) = {exact}", r.digits_matched);
        if let Some(base) = corollary_base(&s) {
            let check = corollary_binomial_check(&s, 60).unwrap();
            println!("    binomial form over {base}^n, n <= 60: {}", check.pass);
        }
    }
}
