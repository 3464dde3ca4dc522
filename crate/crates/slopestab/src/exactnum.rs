//! Exact scalar arithmetic: arbitrary-precision rationals and quadratic
//! surds `p + q*sqrt(r)` with total-order comparisons.
//!
//! Every number that ends up in a certificate flows through this module;
//! nothing here ever rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Arbitrary-precision rational in canonical form: positive denominator,
/// gcd(|num|, den) = 1.  Serializes as the ASCII string `"num/den"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den == 0`; use [`Rational::checked_div`] for runtime input.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rational::new with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ExactNumError> {
        if den.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Sign as -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Result<Self, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ExactNumError> {
        if rhs.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Non-authoritative float value, for human-readable output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = ExactNumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ExactNumError::Parse(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num_s.trim().parse().map_err(|_| err())?;
        let den: BigInt = den_s.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// `floor(sqrt(n))` for `n >= 0`.
fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Exact square root of a non-negative rational, if it is one.
fn rational_sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = isqrt(r.numer());
    let sd = isqrt(r.denom());
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::from_big(sn, sd).expect("positive denominator"))
    } else {
        None
    }
}

/// Pull the largest square factor found out of `m >= 0`: returns `(s, core)`
/// with `m = s^2 * core`.  Trial division up to a fixed bound plus a final
/// perfect-square check; a partially reduced core is still a valid
/// representation, comparisons never rely on the core being squarefree.
fn extract_square(m: &BigInt) -> (BigInt, BigInt) {
    let mut core = m.clone();
    let mut s = BigInt::one();
    if core.is_zero() || core.is_one() {
        return (s, core);
    }
    let mut p: u64 = 2;
    while p <= 1_000 {
        let p2 = BigInt::from(p * p);
        if p2 > core {
            break;
        }
        while (&core % &p2).is_zero() {
            core /= &p2;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let t = isqrt(&core);
    if &(&t * &t) == &core {
        s *= &t;
        core = BigInt::one();
    }
    (s, core)
}

/// Quadratic surd `p + q*sqrt(r)` over the rationals, `r >= 0`.
///
/// Canonical form: a rational value is stored with `q = r = 0`; otherwise
/// square factors of `r` are absorbed into `q` and `r` is a positive
/// non-square integer.  Comparisons are exact for all representable inputs,
/// including radicands whose square part escapes canonicalization.
#[derive(Debug, Clone)]
pub struct Surd {
    p: Rational,
    q: Rational,
    r: Rational,
}

impl Surd {
    pub fn new(p: Rational, q: Rational, r: Rational) -> Result<Self, ExactNumError> {
        if r.is_negative() {
            return Err(ExactNumError::NegativeRadicand(r.to_string()));
        }
        let mut s = Surd { p, q, r };
        s.canonicalize();
        Ok(s)
    }

    pub fn from_rational(p: Rational) -> Self {
        Surd {
            p,
            q: Rational::zero(),
            r: Rational::zero(),
        }
    }

    pub fn sqrt(r: Rational) -> Result<Self, ExactNumError> {
        Surd::new(Rational::zero(), Rational::one(), r)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    fn canonicalize(&mut self) {
        if self.q.is_zero() || self.r.is_zero() {
            self.q = Rational::zero();
            self.r = Rational::zero();
            return;
        }
        if let Some(w) = rational_sqrt_exact(&self.r) {
            self.p = &self.p + &(&self.q * &w);
            self.q = Rational::zero();
            self.r = Rational::zero();
            return;
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let m = self.r.numer() * self.r.denom();
        let (s, core) = extract_square(&m);
        let d = Rational::from(self.r.denom().clone());
        self.q = &self.q * &(Rational::from(s) / d);
        self.r = Rational::from(core);
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.q.is_zero() {
            Some(&self.p)
        } else {
            None
        }
    }

    pub fn add_rational(&self, x: &Rational) -> Surd {
        Surd {
            p: &self.p + x,
            q: self.q.clone(),
            r: self.r.clone(),
        }
    }

    pub fn neg(&self) -> Surd {
        Surd {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
        }
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        single_radical_sign(&(&self.p - x), &self.q, &self.r)
    }

    pub fn cmp_surd(&self, other: &Surd) -> Ordering {
        let dp = &self.p - &other.p;
        if self.q.is_zero() && other.q.is_zero() {
            return rational_sign(&dp);
        }
        if other.q.is_zero() {
            return single_radical_sign(&dp, &self.q, &self.r);
        }
        if self.q.is_zero() {
            return single_radical_sign(&dp, &(-&other.q), &other.r);
        }
        if self.r == other.r {
            return single_radical_sign(&dp, &(&self.q - &other.q), &self.r);
        }
        // Distinct radicands.  If r * r' is a rational square w^2 then
        // sqrt(r') = (w/r) * sqrt(r) and we are back to one radical.
        let prod = &self.r * &other.r;
        if let Some(w) = rational_sqrt_exact(&prod) {
            let v = &self.q - &(&other.q * &(w / self.r.clone()));
            return single_radical_sign(&dp, &v, &self.r);
        }
        // Genuinely independent radicals: the difference is provably nonzero,
        // so interval refinement terminates with the exact sign.
        refine_sign(&dp, &self.q, &self.r, &other.q, &other.r)
    }

    /// Non-authoritative float value, for human-readable output only.
    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.r.to_f64().sqrt()
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_surd(other) == Ordering::Equal
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_surd(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_surd(other)
    }
}

impl From<Rational> for Surd {
    fn from(p: Rational) -> Self {
        Surd::from_rational(p)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.r)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Surd", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("r", &self.r)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            p: Rational,
            q: Rational,
            r: Rational,
        }
        let raw = Raw::deserialize(deserializer)?;
        Surd::new(raw.p, raw.q, raw.r).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

fn rational_sign(x: &Rational) -> Ordering {
    match x.signum() {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    }
}

/// Exact sign of `u + v*sqrt(r)` with `r >= 0`, by sign analysis and squaring.
fn single_radical_sign(u: &Rational, v: &Rational, r: &Rational) -> Ordering {
    if v.is_zero() || r.is_zero() {
        return rational_sign(u);
    }
    if u.is_zero() {
        return rational_sign(v);
    }
    if u.signum() == v.signum() {
        return rational_sign(u);
    }
    // Opposite signs: |u| vs |v|*sqrt(r) decided by squaring.
    match u.square().cmp(&(&v.square() * r)) {
        Ordering::Greater => rational_sign(u),
        Ordering::Less => rational_sign(v),
        Ordering::Equal => Ordering::Equal,
    }
}

/// Rational bounds `lo <= sqrt(r) <= hi` with `hi - lo = 1/(denom * 2^bits)`.
pub(crate) fn sqrt_bounds(r: &Rational, bits: u32) -> (Rational, Rational) {
    let m = r.numer() * r.denom();
    let scaled = &m << (2 * bits as usize);
    let s = isqrt(&scaled);
    let den = r.denom() * (BigInt::one() << bits as usize);
    let lo = Rational::from_big(s.clone(), den.clone()).expect("positive denominator");
    let hi = Rational::from_big(s + BigInt::one(), den).expect("positive denominator");
    (lo, hi)
}

/// Sign of `u + qa*sqrt(ra) - qb*sqrt(rb)` when the value is known nonzero.
fn refine_sign(u: &Rational, qa: &Rational, ra: &Rational, qb: &Rational, rb: &Rational) -> Ordering {
    let mut bits = 32u32;
    loop {
        let (la, ha) = sqrt_bounds(ra, bits);
        let (lb, hb) = sqrt_bounds(rb, bits);
        let (a_lo, a_hi) = if qa.is_negative() {
            (qa * &ha, qa * &la)
        } else {
            (qa * &la, qa * &ha)
        };
        let (b_lo, b_hi) = if qb.is_negative() {
            (qb * &hb, qb * &lb)
        } else {
            (qb * &lb, qb * &hb)
        };
        let x_lo = u + &a_lo - &b_hi;
        let x_hi = u + &a_hi - &b_lo;
        if x_lo.is_positive() {
            return Ordering::Greater;
        }
        if x_hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
        assert!(bits <= 1 << 22, "surd sign refinement failed to separate");
    }
}

/// Smallest-denominator rational in the open interval `(lo, hi)`
/// (ties broken by numerator), by Stern-Brocot traversal with batched steps.
/// Requires `0 <= lo < hi`.
pub fn simplest_rational_between(lo: &Surd, hi: &Surd) -> Rational {
    assert!(lo.cmp_rational(&Rational::zero()) != Ordering::Less, "negative lower bound");
    assert!(lo.cmp_surd(hi) == Ordering::Less, "empty interval");
    // left = la/lb, right = ra/rb; right starts at the point at infinity.
    let mut la = BigInt::zero();
    let mut lb = BigInt::one();
    let mut ra = BigInt::one();
    let mut rb = BigInt::zero();
    let frac = |n: &BigInt, d: &BigInt| Rational::from_big(n.clone(), d.clone()).unwrap();
    loop {
        let mn = &la + &ra;
        let md = &lb + &rb;
        let m = frac(&mn, &md);
        if lo.cmp_rational(&m) != Ordering::Less {
            // m <= lo: batch steps to the right.
            let k = max_steps(|k| {
                let n = &la + &(&ra * k);
                let d = &lb + &(&rb * k);
                lo.cmp_rational(&frac(&n, &d)) != Ordering::Less
            });
            la += &ra * &k;
            lb += &rb * &k;
        } else if hi.cmp_rational(&m) != Ordering::Greater {
            // m >= hi: batch steps to the left.
            let k = max_steps(|k| {
                let n = &ra + &(&la * k);
                let d = &rb + &(&lb * k);
                hi.cmp_rational(&frac(&n, &d)) != Ordering::Greater
            });
            ra += &la * &k;
            rb += &lb * &k;
        } else {
            return m;
        }
    }
}

/// Largest `k >= 1` satisfying a monotone predicate, by exponential then
/// binary search.  The predicate must hold at `k = 1`.
fn max_steps(pred: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut k = BigInt::one();
    debug_assert!(pred(&k));
    let mut next = &k * 2;
    while pred(&next) {
        k = next;
        next = &k * 2;
    }
    // Invariant: pred(k) holds, pred(hi) fails.
    let mut hi = next;
    while &hi - &k > BigInt::one() {
        let mid: BigInt = (&hi + &k) / 2;
        if pred(&mid) {
            k = mid;
        } else {
            hi = mid;
        }
    }
    k
}
