//! Exact numbers: rationals and the cubic field Q(γ) of the
//! Boshernitzan–Kornfeld example.

mod cubic;
mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cubic::{isolate_gamma, minimal_poly, CubicElement, IsolatingInterval};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse exact scalar from {0:?} (expected p/q or (c0,c1,c2))")]
pub struct ParseScalarError(pub String);

/// A rational or an element of Q(γ).
///
/// Kept normalised: a cubic element whose γ and γ² coordinates vanish is
/// stored as `Rational`, so equality and hashing agree with the value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Cubic(CubicElement),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(Rational::new(num, den))
    }

    pub fn gamma() -> Self {
        Scalar::Cubic(CubicElement::gamma())
    }

    pub fn cubic(c0: Rational, c1: Rational, c2: Rational) -> Self {
        Self::from(CubicElement::new(c0, c1, c2))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Cubic(_) => None,
        }
    }

    pub fn to_cubic(&self) -> CubicElement {
        match self {
            Scalar::Rational(r) => CubicElement::from_rational(r.clone()),
            Scalar::Cubic(c) => c.clone(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rational(r) => r.signum(),
            Scalar::Cubic(c) => c.signum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.floor(),
            Scalar::Cubic(c) => c.floor(),
        }
    }

    /// Representative of `self` modulo 1 in [0,1).
    pub fn mod1(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                if r.signum() >= 0 && *r < Rational::one() {
                    return self.clone();
                }
                Scalar::Rational(r - &Rational::from_bigint(r.floor()))
            }
            Scalar::Cubic(c) => {
                let k = Rational::from_bigint(c.floor());
                Scalar::Cubic(CubicElement::new(&c.c0 - &k, c.c1.clone(), c.c2.clone()))
            }
        }
    }

    /// True iff `0 <= self < 1`.
    pub fn in_unit(&self) -> bool {
        self.signum() >= 0 && *self < Scalar::one()
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating-point approximation, for rendering only.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Cubic(c) => c.to_f64(),
        }
    }
}

/// Free-function form of [`Scalar::mod1`].
pub fn mod1(x: &Scalar) -> Scalar {
    x.mod1()
}

impl From<CubicElement> for Scalar {
    fn from(c: CubicElement) -> Self {
        if c.is_rational() {
            Scalar::Rational(c.c0)
        } else {
            Scalar::Cubic(c)
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            _ => (self - other).signum().cmp(&0),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => Scalar::from(&self.to_cubic() + &rhs.to_cubic()),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => Scalar::from(&self.to_cubic() - &rhs.to_cubic()),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Cubic(c), Scalar::Rational(r)) | (Scalar::Rational(r), Scalar::Cubic(c)) => {
                Scalar::from(c.scale(r))
            }
            (Scalar::Cubic(a), Scalar::Cubic(b)) => Scalar::from(a * b),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            (_, Scalar::Rational(r)) => Scalar::from(self.to_cubic().scale(&r.recip())),
            (_, Scalar::Cubic(c)) => Scalar::from(&self.to_cubic() * &c.recip()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cubic(c) => Scalar::Cubic(-c),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt::Display::fmt(r, f),
            Scalar::Cubic(c) => fmt::Display::fmt(c, f),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim_start().starts_with('(') {
            Ok(Scalar::from(s.parse::<CubicElement>()?))
        } else {
            Ok(Scalar::Rational(s.parse()?))
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn mod1_examples() {
        assert_eq!(q(7, 3).mod1(), q(1, 3));
        assert_eq!(q(-1, 4).mod1(), q(3, 4));
        let g2 = Scalar::gamma() + Scalar::int(2);
        assert_eq!(g2.mod1(), Scalar::gamma());
        assert_eq!(g2.mod1().to_string(), "(0/1,1/1,0/1)");
        assert_eq!((-Scalar::gamma()).mod1(), Scalar::one() - Scalar::gamma());
    }

    #[test]
    fn gamma_below_one_third() {
        // P(0) = 1 > 0 and P(1/3) = -2/27 < 0 bracket γ
        assert_eq!(minimal_poly(&Rational::zero()), Rational::one());
        assert_eq!(minimal_poly(&Rational::new(1, 3)), Rational::new(-2, 27));
        assert_eq!(Scalar::gamma().cmp(&q(1, 3)), Ordering::Less);
        assert_eq!(Scalar::gamma().cmp(&q(3, 10)), Ordering::Greater);
    }

    #[test]
    fn minimal_relation_is_exact() {
        let g = Scalar::gamma();
        let g2 = &g * &g;
        let g3 = &g2 * &g;
        assert_eq!(&g2 + &(q(3, 1) * &g) - Scalar::one(), g3);
        let p = &g3 - &g2 - q(3, 1) * &g + Scalar::one();
        assert!(p.is_zero());
        assert!(p.is_rational());
    }

    #[test]
    fn division_by_cubic() {
        let g = Scalar::gamma();
        let x = Scalar::one() - &g * &g;
        assert_eq!(&(&x / &g) * &g, x);
    }

    #[test]
    fn serde_as_string() {
        let v = vec![q(1, 2), Scalar::gamma()];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","(0/1,1/1,0/1)"]"#);
        let back: Vec<Scalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
