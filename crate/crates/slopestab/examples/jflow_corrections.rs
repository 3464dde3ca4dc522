//! The J-flow criterion on the worked family: the class alpha, its exact
//! ampleness threshold t*, and correction divisors when alpha fails to be
//! ample.  Both the minimal-integer and exact-rational-threshold searches
//! are shown.

use slopestab::jflow::{alpha_ample, alpha_class, correction_search, t_star};
use slopestab::{CurveFamily, Rational};

fn main() {
    let fam = CurveFamily::new(5, 3).unwrap();
    let t = Rational::from(3i64);

    let star = t_star(&fam);
    println!("t* = {star}  (~{:.6})", star.to_f64());
    println!("alpha ample at t = 3: {}", alpha_ample(&fam, &t).unwrap());
    println!(
        "alpha ample at t = 4: {}",
        alpha_ample(&fam, &Rational::from(4i64)).unwrap()
    );

    let alpha = alpha_class(&fam, &t).unwrap();
    println!("alpha = {}", alpha);

    let integer = correction_search(&fam, &t, true, 1_000_000).unwrap();
    for c in &integer.corrections {
        println!("minimal integer correction: {:?} with a = {}", c.curve, c.coefficient);
    }

    let rational = correction_search(&fam, &t, false, 1_000_000).unwrap();
    for c in &rational.corrections {
        println!(
            "rational mode: {:?} admissible for a > {}, sample a = {}",
            c.curve,
            c.threshold.as_ref().unwrap(),
            c.coefficient
        );
    }
}
