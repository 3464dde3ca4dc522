//! Slopes of product polarizations from Hilbert coefficients: the slope of
//! a product is the sum of the factor slopes, exactly.

use slopestab::slope::{product_mu, HilbertCoeffs};
use slopestab::Rational;

fn main() {
    // a polarized surface and a polarized curve
    let surface = HilbertCoeffs::new(2, Rational::from(4i64), Rational::from(-24i64)).unwrap();
    let curve = HilbertCoeffs::new(1, Rational::from(2i64), Rational::from(-3i64)).unwrap();

    println!("mu(surface) = {}", surface.mu());
    println!("mu(curve)   = {}", curve.mu());
    println!("mu(surface x surface) = {}", product_mu(&surface, &surface));
    println!("mu(surface x curve)   = {}", product_mu(&surface, &curve));
    assert_eq!(
        product_mu(&surface, &curve),
        &surface.mu() + &curve.mu()
    );
}
