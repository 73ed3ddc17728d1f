//! The limit formulas: weighted sums evaluated on a ladder of points
//! approaching the boundary and extrapolated to the limit.
//!
//!     cargo run --release --example limits

use rpv::special::{limit_eval, limit_specs};

fn main() {
    for spec in limit_specs() {
        let t = std::time::Instant::now();
        match limit_eval(&spec, 1e-8, 20) {
            Ok(r) => println!(
                "{} {:<12} estimate {:.15} target {:.15} error {:.1e} (amplification {:.1e}, {:.2?})",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                r.estimate,
                r.target,
                r.error,
                r.amplification,
                t.elapsed()
            ),
            Err(e) => println!("FAIL {:<12} {e}", spec.id),
        }
    }
}
