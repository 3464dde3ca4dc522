//! Certified two-sided Seshadri bounds for the residual curve Z against
//! L_t.  The lower bound comes from an explicit ampleness witness; the
//! upper bound is the tightest violated nef condition and is in general a
//! quadratic surd.

use slopestab::{CurveFamily, Rational};

fn main() {
    for (g, d, tn, td) in [
        (5u64, 3u64, 3i64, 1i64),
        (5, 3, 13, 5),
        (9, 3, 5, 1),
        (17, 4, 7, 1),
        (100, 8, 15, 1),
    ] {
        let fam = CurveFamily::new(g, d).unwrap();
        let t = Rational::new(tn, td);
        let iv = fam.seshadri_interval(&t).unwrap();
        println!(
            "g = {g:3}  d = {d}  t = {t:>6}  epsilon in [{}, {}]  (~{:.4})",
            iv.lo,
            iv.hi,
            iv.hi.to_f64()
        );
    }
}
