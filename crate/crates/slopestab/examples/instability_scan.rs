//! Scan every eligible (g, d) with g up to 30 and print the destabilizing
//! polarization found for each, together with the witness and the
//! discriminant quantity Q (always negative on this region).

use slopestab::CurveFamily;

fn main() {
    for g in 5u64..=30 {
        for d in (3u64..).take_while(|d| (d - 1) * (d - 1) < g) {
            let fam = CurveFamily::new(g, d).unwrap();
            let (t0, decision) = fam.destabilizing_t().unwrap();
            println!(
                "g = {g:3}  d = {d}  Q = {:>8}  unstable at t = {t0} with witness c = {}",
                fam.q_value(),
                decision.witness_c.unwrap(),
            );
        }
    }
}
