//! Generic-surface mode: slope analysis straight from five intersection
//! numbers, with no family behind them.  This mirrors the `slope` CLI
//! subcommand.

use slopestab::slope::{destabilizes, mu_c, mu_variety, SurfaceSlopeData};
use slopestab::Rational;

fn main() {
    // the worked surface: semistable over (0, 1]
    let data = SurfaceSlopeData::new(
        Rational::from(8i64),
        Rational::from(48i64),
        Rational::from(2i64),
        Rational::from(32i64),
        Rational::from(-2i64),
    )
    .unwrap();
    println!("mu = {}", mu_variety(&data));
    println!("mu_1 = {}", mu_c(&data, &Rational::one()).unwrap());
    let d = destabilizes(&data, &Rational::one()).unwrap();
    println!("verdict: {}", d.verdict);

    // same family slightly closer to the ample boundary: unstable at c = 1
    let near = SurfaceSlopeData::new(
        Rational::new(88, 25),
        Rational::new(208, 5),
        Rational::new(2, 5),
        Rational::from(32i64),
        Rational::from(-2i64),
    )
    .unwrap();
    let d = destabilizes(&near, &Rational::one()).unwrap();
    println!(
        "verdict: {} (witness c = {}, mu at witness = {})",
        d.verdict,
        d.witness_c.unwrap(),
        d.mu_at_witness.unwrap()
    );
}
