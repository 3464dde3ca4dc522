//! The rank-3 numerical lattice of a product of curves C x C: the span of
//! the two fibre classes and the diagonal, with its intersection form.
//!
//! In the basis (f1, f2, delta) the Gram matrix is
//! `[[0,1,1],[1,0,1],[1,1,2-2g]]`.  The symmetric plane spanned by
//! `f = f1 + f2` and `delta' = delta - f` carries the diagonal form
//! `diag(2, -2g)` and is exposed as a coordinate view.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u64),
    #[error("classes live on surfaces of different genus ({0} vs {1})")]
    LatticeMismatch(u64, u64),
    #[error("class is not in the symmetric plane (f1 and f2 coefficients differ)")]
    NotInSymmetricPlane,
}

/// Genus of the underlying curve; the lattice only exists for g >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genus(u64);

impl Genus {
    pub fn new(g: u64) -> Result<Self, LatticeError> {
        if g < 2 {
            return Err(LatticeError::GenusTooSmall(g));
        }
        Ok(Genus(g))
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    pub fn as_rational(&self) -> Rational {
        Rational::from(self.0)
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A numerical divisor class `c1*f1 + c2*f2 + cd*delta` on C x C.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NSClass {
    #[serde(rename = "g")]
    genus: Genus,
    #[serde(rename = "f1")]
    c1: Rational,
    #[serde(rename = "f2")]
    c2: Rational,
    #[serde(rename = "delta")]
    cd: Rational,
}

impl NSClass {
    pub fn new(genus: Genus, c1: Rational, c2: Rational, cd: Rational) -> Self {
        NSClass { genus, c1, c2, cd }
    }

    pub fn zero(genus: Genus) -> Self {
        NSClass::new(genus, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn fibre1(genus: Genus) -> Self {
        NSClass::new(genus, Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn fibre2(genus: Genus) -> Self {
        NSClass::new(genus, Rational::zero(), Rational::one(), Rational::zero())
    }

    /// The diagonal class delta.
    pub fn diagonal(genus: Genus) -> Self {
        NSClass::new(genus, Rational::zero(), Rational::zero(), Rational::one())
    }

    /// f = f1 + f2.
    pub fn fibre_sum(genus: Genus) -> Self {
        NSClass::new(genus, Rational::one(), Rational::one(), Rational::zero())
    }

    /// delta' = delta - f.
    pub fn delta_prime(genus: Genus) -> Self {
        NSClass::new(
            genus,
            -Rational::one(),
            -Rational::one(),
            Rational::one(),
        )
    }

    /// The canonical class K = (2g-2) f.
    pub fn canonical(genus: Genus) -> Self {
        let k = Rational::from(2 * genus.value() - 2);
        NSClass::new(genus, k.clone(), k, Rational::zero())
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn coeffs(&self) -> (&Rational, &Rational, &Rational) {
        (&self.c1, &self.c2, &self.cd)
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero() && self.cd.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> NSClass {
        NSClass::new(self.genus, k * &self.c1, k * &self.c2, k * &self.cd)
    }

    /// Symmetric bilinear intersection pairing.
    pub fn intersect(&self, other: &NSClass) -> Result<Rational, LatticeError> {
        if self.genus != other.genus {
            return Err(LatticeError::LatticeMismatch(
                self.genus.value(),
                other.genus.value(),
            ));
        }
        let (x1, x2, xd) = (&self.c1, &self.c2, &self.cd);
        let (y1, y2, yd) = (&other.c1, &other.c2, &other.cd);
        // Gram matrix [[0,1,1],[1,0,1],[1,1,2-2g]] on (f1, f2, delta).
        let dd = Rational::from(2i64) - Rational::from(2 * self.genus.value());
        Ok(x1 * y2 + x2 * y1 + x1 * yd + xd * y1 + x2 * yd + xd * y2 + &(&dd * xd) * yd)
    }

    pub fn self_intersection(&self) -> Rational {
        self.intersect(self).expect("same genus")
    }

    /// Coordinates `(a, b)` with `self = a*f + b*delta'`; defined only for
    /// classes in the symmetric plane.
    pub fn to_plane(&self) -> Result<PlaneCoords, LatticeError> {
        if self.c1 != self.c2 {
            return Err(LatticeError::NotInSymmetricPlane);
        }
        Ok(PlaneCoords {
            a: &self.c1 + &self.cd,
            b: self.cd.clone(),
        })
    }
}

impl Add for &NSClass {
    type Output = Result<NSClass, LatticeError>;
    fn add(self, other: &NSClass) -> Self::Output {
        if self.genus != other.genus {
            return Err(LatticeError::LatticeMismatch(
                self.genus.value(),
                other.genus.value(),
            ));
        }
        Ok(NSClass::new(
            self.genus,
            &self.c1 + &other.c1,
            &self.c2 + &other.c2,
            &self.cd + &other.cd,
        ))
    }
}

impl Sub for &NSClass {
    type Output = Result<NSClass, LatticeError>;
    fn sub(self, other: &NSClass) -> Self::Output {
        self + &(-other)
    }
}

impl Neg for &NSClass {
    type Output = NSClass;
    fn neg(self) -> NSClass {
        NSClass::new(self.genus, -&self.c1, -&self.c2, -&self.cd)
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*f1 + {}*f2 + {}*delta (g={})",
            self.c1, self.c2, self.cd, self.genus
        )
    }
}

/// Coordinates `a*f + b*delta'` in the symmetric plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCoords {
    pub a: Rational,
    pub b: Rational,
}

impl PlaneCoords {
    pub fn new(a: Rational, b: Rational) -> Self {
        PlaneCoords { a, b }
    }

    pub fn to_class(&self, genus: Genus) -> NSClass {
        let c = &self.a - &self.b;
        NSClass::new(genus, c.clone(), c, self.b.clone())
    }

    /// Pairing `(a,b).(a',b') = 2aa' - 2g bb'`.
    pub fn pair(&self, other: &PlaneCoords, genus: Genus) -> Rational {
        let two = Rational::from(2i64);
        let two_g = Rational::from(2 * genus.value());
        &(&two * &self.a) * &other.a - &(&two_g * &self.b) * &other.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn g(v: u64) -> Genus {
        Genus::new(v).unwrap()
    }

    #[test]
    fn genus_bound() {
        assert!(Genus::new(1).is_err());
        assert!(Genus::new(2).is_ok());
    }

    #[test]
    fn basic_intersection_numbers() {
        for gv in [2u64, 5, 17] {
            let gen = g(gv);
            let f = NSClass::fibre_sum(gen);
            let dp = NSClass::delta_prime(gen);
            assert_eq!(f.intersect(&f).unwrap(), rat(2, 1));
            assert_eq!(dp.intersect(&f).unwrap(), rat(0, 1));
            assert_eq!(
                dp.intersect(&dp).unwrap(),
                rat(-2 * gv as i64, 1),
                "delta'^2 = -2g"
            );
            let f1 = NSClass::fibre1(gen);
            let f2 = NSClass::fibre2(gen);
            let d = NSClass::diagonal(gen);
            assert_eq!(f1.intersect(&f1).unwrap(), rat(0, 1));
            assert_eq!(f1.intersect(&f2).unwrap(), rat(1, 1));
            assert_eq!(f1.intersect(&d).unwrap(), rat(1, 1));
            assert_eq!(d.intersect(&d).unwrap(), rat(2 - 2 * gv as i64, 1));
        }
    }

    #[test]
    fn residual_class_self_intersection_g5_d3() {
        // Z = 2f - delta' for (g,d) = (5,3); Z^2 = 2*4 - 10 = -2
        let gen = g(5);
        let z = PlaneCoords::new(rat(2, 1), rat(-1, 1)).to_class(gen);
        assert_eq!(z.self_intersection(), rat(-2, 1));
    }

    #[test]
    fn canonical_class_examples() {
        let k5 = NSClass::canonical(g(5));
        assert_eq!(k5.coeffs().0, &rat(8, 1));
        assert_eq!(k5.coeffs().1, &rat(8, 1));
        assert_eq!(k5.coeffs().2, &rat(0, 1));
        assert_eq!(k5.self_intersection(), rat(128, 1));
        let k2 = NSClass::canonical(g(2));
        assert_eq!(k2.coeffs().0, &rat(2, 1));
    }

    #[test]
    fn plane_coordinates_roundtrip_and_examples() {
        let gen = g(5);
        // L_3 = 3f - delta'
        let l3 = PlaneCoords::new(rat(3, 1), rat(-1, 1));
        let c = l3.to_class(gen);
        assert_eq!(c.coeffs(), (&rat(4, 1), &rat(4, 1), &rat(-1, 1)));
        assert_eq!(c.to_plane().unwrap(), l3);
        // zero class
        let z = PlaneCoords::new(rat(0, 1), rat(0, 1)).to_class(gen);
        assert!(z.is_zero());
        // the diagonal Delta = f + delta'
        let d = NSClass::diagonal(gen);
        assert_eq!(d.to_plane().unwrap(), PlaneCoords::new(rat(1, 1), rat(1, 1)));
    }

    #[test]
    fn plane_pairing_matches_lattice_pairing() {
        let gen = g(7);
        let x = PlaneCoords::new(rat(3, 2), rat(-5, 3));
        let y = PlaneCoords::new(rat(-1, 4), rat(2, 1));
        let via_plane = x.pair(&y, gen);
        let via_lattice = x.to_class(gen).intersect(&y.to_class(gen)).unwrap();
        assert_eq!(via_plane, via_lattice);
    }

    #[test]
    fn genus_mismatch_is_an_error() {
        let a = NSClass::fibre_sum(g(2));
        let b = NSClass::fibre_sum(g(3));
        assert!(matches!(
            a.intersect(&b),
            Err(LatticeError::LatticeMismatch(2, 3))
        ));
    }

    #[test]
    fn non_symmetric_class_has_no_plane_coords() {
        let c = NSClass::new(g(2), rat(1, 1), rat(2, 1), rat(0, 1));
        assert!(matches!(
            c.to_plane(),
            Err(LatticeError::NotInSymmetricPlane)
        ));
    }

    #[test]
    fn serialization_shape() {
        let c = NSClass::new(g(5), rat(4, 1), rat(4, 1), rat(-1, 1));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"g":5,"f1":"4/1","f2":"4/1","delta":"-1/1"}"#);
        let back: NSClass = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
