//! Products C x C for curves admitting a simple branched cover of P^1:
//! hypothesis validation, the ample-cone threshold s_C, ampleness testing
//! in the symmetric plane, Seshadri intervals for the residual curve, and
//! the instability certificate for eligible (g, d).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::Certificate;
use crate::exactnum::{Rational, Surd};
use crate::nslattice::{Genus, LatticeError, NSClass, PlaneCoords};
use crate::slope::{destabilizes, SlopeError, SurfaceSlopeData, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("(d-1)^2 = {0} exceeds g = {1}: s_C is unknown for this cover degree")]
    KouvidakisHypothesisFailed(u64, u64),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(u64),
    #[error("family (g={0}, d={1}) does not satisfy 2 <= d-1 < sqrt(g)")]
    HypothesisNotSatisfied(u64, u64),
    #[error("t = {0} is not above s_C = {1}: L_t is not ample")]
    NotAmplePolarization(Rational, Rational),
    #[error("destabilizing t search exhausted after {0} halvings")]
    SearchExhausted(u32),
    #[error("c = 1 destabilization condition holds at every tested t up to the cap {0}")]
    UnboundedAbove(Rational),
    #[error("resolution must be positive, got {0}")]
    InvalidResolution(Rational),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

/// Ampleness verdict for a class in the symmetric plane.  `Unknown` only
/// occurs for classes with positive delta'-coefficient, where the nef
/// boundary is not pinned down; necessary conditions can still refute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmpleVerdict {
    Ample,
    NotAmple,
    Unknown,
}

/// Certified two-sided bounds on the Seshadri constant of the residual
/// curve: `lo` by an explicit ampleness witness, `hi` by a violated
/// necessary condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeshadriInterval {
    pub lo: Rational,
    pub hi: Surd,
}

/// A genus-g curve with a simple branched cover of P^1 of degree d,
/// subject to the hypothesis (d-1)^2 <= g that pins s_C = g/(d-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFamily {
    genus: Genus,
    degree: u64,
    s_c: Rational,
    strict: bool,
}

impl CurveFamily {
    pub fn new(g: u64, d: u64) -> Result<Self, FamilyError> {
        let genus = Genus::new(g)?;
        if d < 2 {
            return Err(FamilyError::DegreeTooSmall(d));
        }
        let dm1 = d - 1;
        if dm1 * dm1 > g {
            return Err(FamilyError::KouvidakisHypothesisFailed(dm1 * dm1, g));
        }
        let s_c = Rational::from_big((g).into(), (dm1).into()).expect("d >= 2");
        let strict = dm1 >= 2 && dm1 * dm1 < g;
        Ok(CurveFamily {
            genus,
            degree: d,
            s_c,
            strict,
        })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// The ample-cone threshold s_C = g/(d-1).
    pub fn s_c(&self) -> &Rational {
        &self.s_c
    }

    /// Whether the strict hypothesis 2 <= d-1 < sqrt(g) holds.
    pub fn main_theorem_eligible(&self) -> bool {
        self.strict
    }

    /// The residual curve Z = (d-1) f - delta'.
    pub fn residual_class(&self) -> NSClass {
        PlaneCoords::new(Rational::from(self.degree - 1), -Rational::one())
            .to_class(self.genus)
    }

    /// The diagonal Delta = f + delta'.
    pub fn diagonal_class(&self) -> NSClass {
        NSClass::diagonal(self.genus)
    }

    /// The polarization class L_t = t f - delta' (ampleness is a separate query).
    pub fn polarization(&self, t: &Rational) -> NSClass {
        PlaneCoords::new(t.clone(), -Rational::one()).to_class(self.genus)
    }

    fn require_above_s_c(&self, t: &Rational) -> Result<(), FamilyError> {
        if t <= &self.s_c {
            return Err(FamilyError::NotAmplePolarization(
                t.clone(),
                self.s_c.clone(),
            ));
        }
        Ok(())
    }

    /// Decide ampleness of a symmetric-plane class.
    ///
    /// Writing the class as `a f + b delta'`: for `b <= 0` the cone is
    /// exactly known through s_C; for `b > 0` only necessary conditions
    /// (pairings against Z, Delta, f and the self-intersection) are
    /// available, so a class passing them all is `Unknown`.
    pub fn is_ample(&self, x: &NSClass) -> Result<AmpleVerdict, FamilyError> {
        if x.genus() != self.genus {
            return Err(LatticeError::LatticeMismatch(
                x.genus().value(),
                self.genus.value(),
            )
            .into());
        }
        let plane = x.to_plane()?;
        let (a, b) = (&plane.a, &plane.b);
        if b.is_negative() {
            let scale = a / &(-b);
            return Ok(if a.is_positive() && scale > self.s_c {
                AmpleVerdict::Ample
            } else {
                AmpleVerdict::NotAmple
            });
        }
        if b.is_zero() {
            return Ok(if a.is_positive() {
                AmpleVerdict::Ample
            } else {
                AmpleVerdict::NotAmple
            });
        }
        // b > 0: necessary conditions only.
        let z = self.residual_class();
        let delta = self.diagonal_class();
        let f = NSClass::fibre_sum(self.genus);
        let against_z = x.intersect(&z)?;
        let against_delta = x.intersect(&delta)?;
        let against_f = x.intersect(&f)?;
        let square = x.self_intersection();
        if against_z.is_negative()
            || against_delta.is_negative()
            || !against_f.is_positive()
            || !square.is_positive()
        {
            return Ok(AmpleVerdict::NotAmple);
        }
        Ok(AmpleVerdict::Unknown)
    }

    /// The five intersection numbers of (L_t, Z) for t > s_C.
    pub fn slope_data(&self, t: &Rational) -> Result<SurfaceSlopeData, FamilyError> {
        self.require_above_s_c(t)?;
        let g = self.genus.as_rational();
        let dm1 = Rational::from(self.degree - 1);
        let two = Rational::from(2i64);
        let two_g = &two * &g;
        let deg_k = &two * &(&g + &g) - &Rational::from(4i64); // 2(2g-2)
        let l2 = &(&two * &t.square()) - &two_g;
        let kl = &deg_k * t;
        let lz = &(&two * &(t * &dm1)) - &two_g;
        let kz = &deg_k * &dm1;
        let z2 = &(&two * &dm1.square()) - &two_g;
        Ok(SurfaceSlopeData::new(l2, kl, lz, kz, z2)?)
    }

    /// Certified bounds on the Seshadri constant of Z with respect to L_t.
    pub fn seshadri_interval(&self, t: &Rational) -> Result<SeshadriInterval, FamilyError> {
        self.require_above_s_c(t)?;
        let g = self.genus.as_rational();
        let dm1 = Rational::from(self.degree - 1);

        // Lower bound: on the decidable side (c <= 1) the class
        // L_t - cZ = (t - c(d-1)) f - (1-c) delta' is ample all the way up
        // to c = 1, where it degenerates to the ample f-multiple
        // (t - (d-1)) f.  Certify the endpoint through is_ample.
        let z = self.residual_class();
        let at_one = (&self.polarization(t) - &z)?;
        debug_assert_eq!(self.is_ample(&at_one)?, AmpleVerdict::Ample);
        let lo = Rational::one();

        // Upper bounds: thresholds where a necessary nef condition fails.
        let mut thresholds: Vec<Surd> = Vec::new();

        // (L_t - cZ).Z >= 0 is linear with slope -Z^2; Z^2 <= 0 here, so it
        // only constrains when Z^2 > 0 (excluded by the hypothesis).
        let z2 = &(&Rational::from(2i64) * &dm1.square()) - &(&Rational::from(2i64) * &g);
        debug_assert!(!z2.is_positive());

        // (L_t - cZ).Delta >= 0  <=>  c <= (t+g)/(g+d-1).
        thresholds.push(Surd::from_rational(
            &(t + &g) / &(&g + &dm1),
        ));

        // (L_t - cZ).f >= 0  <=>  c <= t/(d-1).
        thresholds.push(Surd::from_rational(t / &dm1));

        // (L_t - cZ)^2 >= 0  <=>  ((d-1)^2 - g) c^2 + (2g - 2t(d-1)) c + (t^2 - g) >= 0.
        let a2 = &dm1.square() - &g;
        let a1 = &(&Rational::from(2i64) * &g) - &(&Rational::from(2i64) * &(t * &dm1));
        let a0 = &t.square() - &g;
        if a2.is_zero() {
            // boundary d-1 = sqrt(g): linear with negative slope
            debug_assert!(a1.is_negative());
            thresholds.push(Surd::from_rational(-&(&a0 / &a1)));
        } else {
            // downward parabola positive between its roots; 0 sits inside,
            // so the upper root is the threshold.
            let disc = &a1.square() - &(&(&Rational::from(4i64) * &a2) * &a0);
            debug_assert!(disc.is_positive());
            let two_a = &Rational::from(2i64) * &a2;
            let mid = -&(&a1 / &two_a);
            let spread = (&Rational::one() / &two_a).abs();
            let r1 = Surd::new(mid.clone(), spread.clone(), disc.clone()).expect("disc > 0");
            let r2 = Surd::new(mid, -&spread, disc).expect("disc > 0");
            thresholds.push(r1.max(r2));
        }

        let hi = thresholds.into_iter().min().expect("nonempty");
        debug_assert!(hi.cmp_rational(&lo) != Ordering::Less);
        Ok(SeshadriInterval { lo, hi })
    }

    /// Limit slopes at t = s_C:
    /// `mu(X, L) -> -(2g-2)(d-1)/(g-(d-1)^2)` and
    /// `mu_1(O_Z, L) -> 3(g-(2g-2)(d-1)-(d-1)^2)/(2(g-(d-1)^2))`.
    pub fn limit_slopes(&self) -> (Rational, Rational) {
        let g = self.genus.as_rational();
        let dm1 = Rational::from(self.degree - 1);
        let deg_k = &Rational::from(2i64) * &(&g - &Rational::one()); // 2g-2
        let gap = &g - &dm1.square();
        let mu = -&(&(&deg_k * &dm1) / &gap);
        let mu1 = &(&Rational::from(3i64) * &(&(&g - &(&deg_k * &dm1)) - &dm1.square()))
            / &(&Rational::from(2i64) * &gap);
        (mu, mu1)
    }

    /// The discriminant quantity Q = 3g - (2g-2)(d-1) - 3(d-1)^2; strictly
    /// negative for every eligible family.
    pub fn q_value(&self) -> Rational {
        let g = self.genus.as_rational();
        let dm1 = Rational::from(self.degree - 1);
        let deg_k = &Rational::from(2i64) * &(&g - &Rational::one());
        &(&(&Rational::from(3i64) * &g) - &(&deg_k * &dm1))
            - &(&Rational::from(3i64) * &dm1.square())
    }

    /// A rational t0 > s_C at which the polarization is slope unstable:
    /// start at s_C + 1/2 and halve the offset until the destabilization
    /// check passes, capped at 64 halvings.
    pub fn destabilizing_t(&self) -> Result<(Rational, crate::slope::Decision), FamilyError> {
        if !self.strict {
            return Err(FamilyError::HypothesisNotSatisfied(
                self.genus.value(),
                self.degree,
            ));
        }
        let mut offset = Rational::new(1, 2);
        let half = Rational::new(1, 2);
        for _ in 0..=64u32 {
            let t = &self.s_c + &offset;
            let data = self.slope_data(&t)?;
            let decision = destabilizes(&data, &Rational::one())?;
            if decision.verdict == Verdict::Unstable {
                return Ok((t, decision));
            }
            offset = &offset * &half;
        }
        Err(FamilyError::SearchExhausted(64))
    }

    /// The full instability certificate for an eligible family.
    pub fn main_certificate(&self) -> Result<Certificate, FamilyError> {
        if !self.strict {
            return Err(FamilyError::HypothesisNotSatisfied(
                self.genus.value(),
                self.degree,
            ));
        }
        let q = self.q_value();
        assert!(q.is_negative(), "Q < 0 must hold for eligible families");
        let (t0, _decision) = self.destabilizing_t()?;
        let cert = crate::cert::build_certificate(self, &t0)?;
        debug_assert_eq!(cert.verdicts.slope.verdict, Verdict::Unstable);
        Ok(cert)
    }

    /// Whether the c = 1 destabilization condition mu_1(t) < mu(t) holds.
    fn c1_condition(&self, t: &Rational) -> Result<bool, FamilyError> {
        let data = self.slope_data(t)?;
        let mu = crate::slope::mu_variety(&data);
        let mu1 = crate::slope::mu_c(&data, &Rational::one())?;
        Ok(mu1 < mu)
    }

    /// Bracket `[t_lo, t_hi]` with `t_hi - t_lo <= resolution` around the
    /// largest t at which the c = 1 condition still destabilizes: the
    /// condition is verified exactly at `t_lo` and fails at `t_hi`.
    pub fn destabilizing_t_sup(
        &self,
        resolution: &Rational,
    ) -> Result<(Rational, Rational), FamilyError> {
        if !resolution.is_positive() {
            return Err(FamilyError::InvalidResolution(resolution.clone()));
        }
        if !self.strict {
            return Err(FamilyError::HypothesisNotSatisfied(
                self.genus.value(),
                self.degree,
            ));
        }
        // Find t_lo where the c = 1 condition holds, halving from the
        // certificate's starting offset.
        let half = Rational::new(1, 2);
        let mut offset = Rational::new(1, 2);
        let mut guard = 0u32;
        while !self.c1_condition(&(&self.s_c + &offset))? {
            offset = &offset * &half;
            guard += 1;
            assert!(guard <= 256, "c = 1 condition must hold near s_C");
        }
        let mut t_lo = &self.s_c + &offset;
        // Find t_hi where it fails, doubling the offset up to a cap.
        let cap = &self.s_c + &Rational::from(1i64 << 16);
        let mut probe = &offset * &Rational::from(2i64);
        let t_hi = loop {
            let t = &self.s_c + &probe;
            if t > cap {
                return Err(FamilyError::UnboundedAbove(cap));
            }
            if !self.c1_condition(&t)? {
                break t;
            }
            probe = &probe * &Rational::from(2i64);
        };
        let mut t_hi = t_hi;
        while &t_hi - &t_lo > *resolution {
            let mid = &(&t_lo + &t_hi) * &half;
            if self.c1_condition(&mid)? {
                t_lo = mid;
            } else {
                t_hi = mid;
            }
        }
        Ok((t_lo, t_hi))
    }
}
