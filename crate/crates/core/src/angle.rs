//! Exact angles in ℚ/ℤ.
//!
//! An [`Angle`] is a reduced fraction `p/q` with `0 ≤ p < q`. Arithmetic is
//! exact (arbitrary precision), so preimage towers of any depth stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("malformed angle {0:?}: expected \"p/q\" or an integer")]
    Malformed(String),
    #[error("angle denominator must be positive")]
    ZeroDenominator,
}

/// A point of ℝ/ℤ with rational coordinate, kept in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// Builds `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "angle denominator must be nonzero");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn try_new(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::ZeroDenominator);
        }
        Ok(Self::new(num, den))
    }

    /// Reduces an arbitrary rational modulo 1.
    pub fn from_rational(r: BigRational) -> Self {
        let fl = r.floor();
        Angle(r - fl)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
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

    /// Small-denominator view, used by numeric caches.
    pub fn to_u64_pair(&self) -> Option<(u64, u64)> {
        Some((self.numer().to_u64()?, self.denom().to_u64()?))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// `m_d(t) = d·t mod 1`.
    pub fn times(&self, d: u32) -> Angle {
        Angle::from_rational(&self.0 * BigRational::from_integer(BigInt::from(d)))
    }

    /// The `d` preimages `(t + j)/d`, in increasing order on `[0, 1)`.
    pub fn preimages(&self, d: u32) -> Vec<Angle> {
        let dd = BigRational::from_integer(BigInt::from(d));
        (0..d)
            .map(|j| Angle((&self.0 + BigRational::from_integer(BigInt::from(j))) / &dd))
            .collect()
    }

    /// `-t mod 1`.
    pub fn reflect(&self) -> Angle {
        Angle::from_rational(-&self.0)
    }

    /// Length of the counterclockwise arc from `self` to `other`, in `[0, 1)`.
    pub fn ccw_distance(&self, other: &Angle) -> BigRational {
        let diff = &other.0 - &self.0;
        if diff.is_negative() {
            diff + BigRational::one()
        } else {
            diff
        }
    }

    /// True iff `self` lies in the open counterclockwise arc from `a` to `b`.
    /// When `a == b` the arc is the whole circle minus `a`.
    pub fn in_open_arc(&self, a: &Angle, b: &Angle) -> bool {
        if self == a || self == b {
            return false;
        }
        if a == b {
            return true;
        }
        a.ccw_distance(self) < a.ccw_distance(b)
    }

    /// The base-`d` digit of `t`: `floor(d·t)`.
    pub fn first_digit(&self, d: u32) -> u32 {
        let scaled = &self.0 * BigRational::from_integer(BigInt::from(d));
        scaled.floor().to_integer().to_u32().unwrap_or(0)
    }
}

/// `m_d` on angles.
pub fn map_angle(t: &Angle, d: u32) -> Angle {
    t.times(d)
}

/// The `d` preimages of `t` under `m_d`, in increasing circular order from 0.
pub fn angle_preimages(t: &Angle, d: u32) -> Vec<Angle> {
    t.preimages(d)
}

pub fn reflect(t: &Angle) -> Angle {
    t.reflect()
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |x: &str| -> Result<BigInt, AngleError> {
            x.trim()
                .parse::<BigInt>()
                .map_err(|_| AngleError::Malformed(s.to_string()))
        };
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let n = parse(n)?;
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(AngleError::ZeroDenominator);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(parse(s)?),
        };
        Ok(Angle::from_rational(r))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest prime not dividing any of `avoid`.
pub(crate) fn fresh_prime(avoid: &[BigInt]) -> u64 {
    let mut p = 5u64;
    loop {
        let is_prime = (2..p).take_while(|k| k * k <= p).all(|k| p % k != 0);
        if is_prime && avoid.iter().all(|a| !(a % BigInt::from(p)).is_zero()) {
            return p;
        }
        p += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(map_angle(&a("1/3"), 2), a("2/3"));
        assert_eq!(map_angle(&a("1/7"), 2), a("2/7"));
        assert_eq!(map_angle(&a("2/3"), 2), a("1/3"));
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(angle_preimages(&a("1/3"), 2), vec![a("1/6"), a("2/3")]);
        assert_eq!(angle_preimages(&a("0"), 3), vec![a("0"), a("1/3"), a("2/3")]);
        assert_eq!(angle_preimages(&a("2/3"), 2), vec![a("1/3"), a("5/6")]);
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect(&a("1/7")), a("6/7"));
        assert_eq!(reflect(&a("0")), a("0"));
        assert_eq!(reflect(&a("1/2")), a("1/2"));
    }

    #[test]
    fn parsing_reduces_and_wraps() {
        assert_eq!(a("4/6"), a("2/3"));
        assert_eq!(a("5/3"), a("2/3"));
        assert_eq!(a("-1/3"), a("2/3"));
        assert_eq!(a("2/3").to_string(), "2/3");
        assert!("1/0".parse::<Angle>().is_err());
        assert!("x".parse::<Angle>().is_err());
    }

    #[test]
    fn open_arc_wraps() {
        assert!(a("0").in_open_arc(&a("3/4"), &a("1/4")));
        assert!(!a("1/2").in_open_arc(&a("3/4"), &a("1/4")));
        assert!(!a("3/4").in_open_arc(&a("3/4"), &a("1/4")));
    }

    fn arb_angle() -> impl Strategy<Value = Angle> {
        (0i64..500, 1i64..500).prop_map(|(n, d)| Angle::new(n, d))
    }

    proptest! {
        #[test]
        fn preimages_map_back(t in arb_angle(), d in 2u32..6) {
            for p in angle_preimages(&t, d) {
                prop_assert_eq!(map_angle(&p, d), t.clone());
            }
        }

        #[test]
        fn reflection_is_an_involution_commuting_with_mult(t in arb_angle(), d in 2u32..6) {
            prop_assert_eq!(reflect(&reflect(&t)), t.clone());
            prop_assert_eq!(map_angle(&reflect(&t), d), reflect(&map_angle(&t, d)));
        }
    }
}
