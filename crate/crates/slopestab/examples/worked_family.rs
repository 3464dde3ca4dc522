//! End-to-end walkthrough of the genus-5 family with a degree-3 cover at
//! t = 3: the threshold s_C, the intersection numbers of (L_3, Z), both
//! slopes, the destabilization verdict, and the full JSON certificate.

use slopestab::slope::{destabilizes, mu_c, mu_variety};
use slopestab::{build_certificate, CurveFamily, Rational};

fn main() {
    let fam = CurveFamily::new(5, 3).unwrap();
    let t = Rational::from(3i64);

    println!("s_C = {}", fam.s_c());
    let data = fam.slope_data(&t).unwrap();
    println!(
        "L^2 = {}  K.L = {}  L.Z = {}  K.Z = {}  Z^2 = {}",
        data.l2(),
        data.kl(),
        data.lz(),
        data.kz(),
        data.z2()
    );
    println!("mu(X, L_3) = {}", mu_variety(&data));
    for c in [Rational::new(1, 10), Rational::new(2, 15), Rational::one()] {
        println!("mu_c at c = {c}: {}", mu_c(&data, &c).unwrap());
    }

    let decision = destabilizes(&data, &Rational::one()).unwrap();
    println!("verdict over (0, 1]: {}", decision.verdict);

    let cert = build_certificate(&fam, &t).unwrap();
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());
}
