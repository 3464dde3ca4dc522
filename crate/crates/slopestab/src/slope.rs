//! The slope engine: Hilbert coefficients, the blown-up Hilbert
//! polynomial pieces and their integrals, closed-form surface slopes, and
//! the exact destabilization decision procedure.
//!
//! Everything is decided by sign analysis of low-degree polynomials with
//! rational coefficients; roots are isolated as exact quadratic surds and
//! witnesses are picked by Stern-Brocot traversal, so there is no sampling
//! error anywhere.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{simplest_rational_between, Rational, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("L^2 must be positive, got {0}")]
    NonPositiveVolume(Rational),
    #[error("leading Hilbert coefficient must be positive, got {0}")]
    NonPositiveLeadingCoeff(Rational),
    #[error("slope is undefined at c = {0} (zero denominator)")]
    DegenerateSlope(Rational),
    #[error("c must be positive, got {0}")]
    NonPositiveParameter(Rational),
    #[error("Seshadri lower bound must be positive, got {0}")]
    InvalidInterval(Rational),
}

/// The five intersection numbers driving every surface slope formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSlopeData {
    l2: Rational,
    kl: Rational,
    lz: Rational,
    kz: Rational,
    z2: Rational,
}

impl SurfaceSlopeData {
    pub fn new(
        l2: Rational,
        kl: Rational,
        lz: Rational,
        kz: Rational,
        z2: Rational,
    ) -> Result<Self, SlopeError> {
        if !l2.is_positive() {
            return Err(SlopeError::NonPositiveVolume(l2));
        }
        Ok(SurfaceSlopeData { l2, kl, lz, kz, z2 })
    }

    pub fn l2(&self) -> &Rational {
        &self.l2
    }

    pub fn kl(&self) -> &Rational {
        &self.kl
    }

    pub fn lz(&self) -> &Rational {
        &self.lz
    }

    pub fn kz(&self) -> &Rational {
        &self.kz
    }

    pub fn z2(&self) -> &Rational {
        &self.z2
    }

    /// Z pairs to zero against everything we track.
    pub fn z_numerically_trivial(&self) -> bool {
        self.lz.is_zero() && self.kz.is_zero() && self.z2.is_zero()
    }

    /// Data for the scaled polarization kL.
    pub fn scaled(&self, k: &Rational) -> Result<Self, SlopeError> {
        SurfaceSlopeData::new(
            &(k * k) * &self.l2,
            k * &self.kl,
            k * &self.lz,
            self.kz.clone(),
            self.z2.clone(),
        )
    }
}

/// Leading two Hilbert polynomial coefficients of a polarized variety;
/// slopes never use the lower terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertCoeffs {
    dim: u32,
    a0: Rational,
    a1: Rational,
}

impl HilbertCoeffs {
    pub fn new(dim: u32, a0: Rational, a1: Rational) -> Result<Self, SlopeError> {
        if !a0.is_positive() {
            return Err(SlopeError::NonPositiveLeadingCoeff(a0));
        }
        Ok(HilbertCoeffs { dim, a0, a1 })
    }

    /// Surface coefficients a0 = L^2/2, a1 = -K.L/2.
    pub fn of_surface(data: &SurfaceSlopeData) -> Self {
        let two = Rational::from(2i64);
        HilbertCoeffs {
            dim: 2,
            a0: &data.l2 / &two,
            a1: -&(&data.kl / &two),
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn a0(&self) -> &Rational {
        &self.a0
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }

    pub fn mu(&self) -> Rational {
        &self.a1 / &self.a0
    }
}

/// Polynomial c0 + c1 x + c2 x^2 with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPoly {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl QuadPoly {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        QuadPoly { c0, c1, c2 }
    }

    pub fn zero() -> Self {
        QuadPoly::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.c0 + &(x * &(&self.c1 + &(x * &self.c2)))
    }

    pub fn derivative(&self) -> QuadPoly {
        QuadPoly::new(
            self.c1.clone(),
            &Rational::from(2i64) * &self.c2,
            Rational::zero(),
        )
    }

    /// Exact antiderivative evaluated over [0, c].
    pub fn integral_to(&self, c: &Rational) -> Rational {
        let half = Rational::new(1, 2);
        let third = Rational::new(1, 3);
        c * &(&self.c0 + &(c * &(&(&self.c1 * &half) + &(c * &(&self.c2 * &third)))))
    }

    /// Real roots inside the open interval (lo, hi), in increasing order.
    fn roots_in_open(&self, lo: &Surd, hi: &Surd) -> Vec<Surd> {
        let mut roots = Vec::new();
        if self.c2.is_zero() {
            if !self.c1.is_zero() {
                roots.push(Surd::from_rational(-&(&self.c0 / &self.c1)));
            }
        } else {
            let two_a = &Rational::from(2i64) * &self.c2;
            let disc = &self.c1.square() - &(&(&Rational::from(4i64) * &self.c2) * &self.c0);
            if disc.is_positive() {
                let mid = -&(&self.c1 / &two_a);
                let spread = (&Rational::one() / &two_a).abs();
                let root_lo = Surd::new(mid.clone(), -&spread, disc.clone()).expect("disc >= 0");
                let root_hi = Surd::new(mid, spread, disc).expect("disc >= 0");
                roots.push(root_lo);
                roots.push(root_hi);
            } else if disc.is_zero() {
                roots.push(Surd::from_rational(-&(&self.c1 / &two_a)));
            }
        }
        roots.retain(|r| r.cmp_surd(lo) == Ordering::Greater && r.cmp_surd(hi) == Ordering::Less);
        roots.sort();
        roots
    }
}

/// Verdict of the destabilization search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unstable,
    NoWitnessFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Unstable => write!(f, "Unstable"),
            Verdict::NoWitnessFound => write!(f, "NoWitnessFound"),
        }
    }
}

/// Outcome of [`destabilizes`]: a witness is present exactly when the
/// verdict is `Unstable`, and then `mu_c` at the witness re-checks strictly
/// below the variety slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_c: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_at_witness: Option<Rational>,
}

impl Decision {
    fn no_witness() -> Self {
        Decision {
            verdict: Verdict::NoWitnessFound,
            witness_c: None,
            mu_at_witness: None,
        }
    }
}

/// Slope of the polarized surface itself: mu(X, L) = -K.L / L^2.
pub fn mu_variety(data: &SurfaceSlopeData) -> Rational {
    -&(&data.kl / &data.l2)
}

/// Numerator 3(2 L.Z - c (K.Z + Z^2)) of the closed-form subscheme slope.
fn mu_c_numerator_poly(data: &SurfaceSlopeData) -> QuadPoly {
    let three = Rational::from(3i64);
    let six = Rational::from(6i64);
    QuadPoly::new(
        &six * &data.lz,
        -&(&three * &(&data.kz + &data.z2)),
        Rational::zero(),
    )
}

/// Denominator 2c(3 L.Z - c Z^2) of the closed-form subscheme slope.
fn mu_c_denominator_poly(data: &SurfaceSlopeData) -> QuadPoly {
    let two = Rational::from(2i64);
    let six = Rational::from(6i64);
    QuadPoly::new(
        Rational::zero(),
        &six * &data.lz,
        -&(&two * &data.z2),
    )
}

/// Closed-form subscheme slope mu_c(O_Z, L) = 3(2L.Z - c(K.Z + Z^2)) / (2c(3L.Z - cZ^2)).
pub fn mu_c(data: &SurfaceSlopeData, c: &Rational) -> Result<Rational, SlopeError> {
    if !c.is_positive() {
        return Err(SlopeError::NonPositiveParameter(c.clone()));
    }
    let den = mu_c_denominator_poly(data).eval(c);
    if den.is_zero() {
        return Err(SlopeError::DegenerateSlope(c.clone()));
    }
    Ok(mu_c_numerator_poly(data).eval(c) / den)
}

/// The polynomials `(atilde_0, atilde_1)` measuring the subscheme:
/// `atilde_0(x) = x L.Z - x^2 Z^2/2` and `atilde_1(x) = -x K.Z / 2`.
pub fn atilde_polys(data: &SurfaceSlopeData) -> (QuadPoly, QuadPoly) {
    let half = Rational::new(1, 2);
    let a0t = QuadPoly::new(
        Rational::zero(),
        data.lz.clone(),
        -&(&data.z2 * &half),
    );
    let a1t = QuadPoly::new(Rational::zero(), -&(&data.kz * &half), Rational::zero());
    (a0t, a1t)
}

/// The integral definition of the subscheme slope, evaluated by exact
/// polynomial antidifferentiation.  Agrees with [`mu_c`] identically.
pub fn mu_c_integral(data: &SurfaceSlopeData, c: &Rational) -> Result<Rational, SlopeError> {
    if !c.is_positive() {
        return Err(SlopeError::NonPositiveParameter(c.clone()));
    }
    let (a0t, a1t) = atilde_polys(data);
    let half = Rational::new(1, 2);
    let d0 = a0t.derivative();
    let integrand = QuadPoly::new(
        &a1t.c0 + &(&d0.c0 * &half),
        &a1t.c1 + &(&d0.c1 * &half),
        &a1t.c2 + &(&d0.c2 * &half),
    );
    let num = integrand.integral_to(c);
    let den = a0t.integral_to(c);
    if den.is_zero() {
        return Err(SlopeError::DegenerateSlope(c.clone()));
    }
    Ok(num / den)
}

/// Search `(0, eps_lo]` for a rational c with `mu_c < mu(X, L)`.
///
/// The decision reduces to the sign of `P(c) * D(c)` where
/// `P = N - mu * D` and `N`, `D` are the closed-form numerator and
/// denominator.  Both are quadratics; their roots split the interval into
/// pieces of constant sign.  The witness is the smallest-denominator
/// rational in the destabilizing set (ties: smaller numerator).
pub fn destabilizes(data: &SurfaceSlopeData, eps_lo: &Rational) -> Result<Decision, SlopeError> {
    if !eps_lo.is_positive() {
        return Err(SlopeError::InvalidInterval(eps_lo.clone()));
    }
    if data.z_numerically_trivial() {
        return Ok(Decision::no_witness());
    }
    let mu = mu_variety(data);
    let d_poly = mu_c_denominator_poly(data);
    if d_poly.is_zero() {
        // mu_c undefined for every c: conservatively not destabilizing.
        return Ok(Decision::no_witness());
    }
    let n_poly = mu_c_numerator_poly(data);
    let p_poly = QuadPoly::new(
        &n_poly.c0 - &(&mu * &d_poly.c0),
        &n_poly.c1 - &(&mu * &d_poly.c1),
        &n_poly.c2 - &(&mu * &d_poly.c2),
    );
    if p_poly.is_zero() {
        // mu_c == mu identically: semistable with equality, no strict witness.
        return Ok(Decision::no_witness());
    }

    let lo = Surd::from_rational(Rational::zero());
    let hi = Surd::from_rational(eps_lo.clone());
    let mut cuts = p_poly.roots_in_open(&lo, &hi);
    cuts.extend(d_poly.roots_in_open(&lo, &hi));
    cuts.sort();
    cuts.dedup();

    let destabilizing_at = |c: &Rational| -> bool {
        let d = d_poly.eval(c);
        if d.is_zero() {
            return false; // pole, slope undefined
        }
        p_poly.eval(c).signum() * d.signum() < 0
    };

    let mut candidates: Vec<Rational> = Vec::new();
    let mut endpoints = vec![lo];
    endpoints.extend(cuts);
    endpoints.push(hi);
    for pair in endpoints.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.cmp_surd(b) != Ordering::Less {
            continue;
        }
        let sample = simplest_rational_between(a, b);
        if destabilizing_at(&sample) {
            candidates.push(sample);
        }
    }
    if destabilizing_at(eps_lo) {
        candidates.push(eps_lo.clone());
    }

    let witness = candidates.into_iter().min_by(|x, y| {
        (x.denom(), x.numer()).cmp(&(y.denom(), y.numer()))
    });
    match witness {
        Some(c) => {
            let mu_w = mu_c(data, &c)?;
            debug_assert!(mu_w < mu, "witness must re-check strictly below mu");
            Ok(Decision {
                verdict: Verdict::Unstable,
                witness_c: Some(c),
                mu_at_witness: Some(mu_w),
            })
        }
        None => Ok(Decision::no_witness()),
    }
}

/// Slope of a product polarization via Hilbert-coefficient convolution:
/// `a0 = a0 a0'`, `a1 = a0 a1' + a1 a0'`, so the slope is additive.
pub fn product_mu(p: &HilbertCoeffs, q: &HilbertCoeffs) -> Rational {
    let a0 = &p.a0 * &q.a0;
    let a1 = &(&p.a0 * &q.a1) + &(&p.a1 * &q.a0);
    a1 / a0
}
