use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ParseScalarError, Rational};

/// Element `c0 + c1·γ + c2·γ²` of Q(γ), where γ is the root in (0,1) of
/// x³ − x² − 3x + 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CubicElement {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

/// Closed interval with rational endpoints holding exactly one root of P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
}

/// P(x) = x³ − x² − 3x + 1 evaluated exactly.
pub fn minimal_poly(x: &Rational) -> Rational {
    let x2 = x * x;
    let x3 = &x2 * x;
    x3 - x2 - Rational::from_int(3) * x + Rational::one()
}

// Finest dyadic bracket computed so far: γ ∈ (g/2^bits, (g+1)/2^bits).
// P is strictly decreasing on [0,1], so bisection only needs the sign at the
// midpoint, and γ being irrational keeps every midpoint off the root.
static BRACKET: OnceLock<Mutex<(u32, BigInt)>> = OnceLock::new();

fn poly_sign_at_dyadic(x: &BigInt, bits: u32) -> i32 {
    let s = BigInt::one() << bits;
    let x2 = x * x;
    let v = &x2 * x - &x2 * &s - BigInt::from(3) * x * &s * &s + &s * &s * &s;
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Numerator `g` with γ ∈ (g/2^bits, (g+1)/2^bits).
pub(crate) fn gamma_bracket(bits: u32) -> BigInt {
    let cell = BRACKET.get_or_init(|| Mutex::new((0, BigInt::zero())));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    let (have, ref g) = *guard;
    if have >= bits {
        return g >> (have - bits);
    }
    let mut g = g.clone();
    for b in have + 1..=bits {
        let mid = (&g << 1u32) + 1;
        g = if poly_sign_at_dyadic(&mid, b) > 0 {
            mid
        } else {
            mid - 1
        };
    }
    *guard = (bits, g.clone());
    g
}

/// Isolating interval for γ of width at most `width`.
pub fn isolate_gamma(width: &Rational) -> IsolatingInterval {
    assert!(width.signum() > 0, "width must be positive");
    let mut bits = 1u32;
    while Rational::from_bigints(BigInt::one(), BigInt::one() << bits) > *width {
        bits += 1;
    }
    let g = gamma_bracket(bits);
    let den = BigInt::one() << bits;
    IsolatingInterval {
        lo: Rational::from_bigints(g.clone(), den.clone()),
        hi: Rational::from_bigints(g + 1, den),
    }
}

impl CubicElement {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        CubicElement { c0, c1, c2 }
    }

    pub fn gamma() -> Self {
        Self::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, Rational::zero(), Rational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.is_rational()
    }

    /// Integer coordinates `n_i = c_i · L` for the common denominator L > 0.
    fn cleared(&self) -> [BigInt; 3] {
        let l = self.c0.denom().lcm(&self.c1.denom()).lcm(&self.c2.denom());
        [&self.c0, &self.c1, &self.c2].map(|c| c.numer() * (&l / c.denom()))
    }

    /// Exact sign, by interval evaluation over successively finer γ brackets.
    pub fn signum(&self) -> i32 {
        if self.is_rational() {
            return self.c0.signum();
        }
        let [n0, n1, n2] = self.cleared();
        let mut bits = 64u32;
        loop {
            // scale by S² with g' = S·γ ∈ [g, g+1]
            let g = gamma_bracket(bits);
            let g1 = &g + 1;
            let s = BigInt::one() << bits;
            let base = &n0 * &s * &s;
            let t1 = [&n1 * &s * &g, &n1 * &s * &g1];
            let t2 = [&n2 * &g * &g, &n2 * &g1 * &g1];
            let lo = &base + t1.iter().min().unwrap() + t2.iter().min().unwrap();
            let hi = &base + t1.iter().max().unwrap() + t2.iter().max().unwrap();
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Rational enclosure [lo, hi] of the value from a 64-bit γ bracket.
    fn enclosure(&self) -> (Rational, Rational) {
        let bits = 64;
        let den = BigInt::one() << bits;
        let g = gamma_bracket(bits);
        let glo = Rational::from_bigints(g.clone(), den.clone());
        let ghi = Rational::from_bigints(g + 1, den);
        let a = [&self.c1 * &glo, &self.c1 * &ghi];
        let b = [&self.c2 * &(&glo * &glo), &self.c2 * &(&ghi * &ghi)];
        let lo = &self.c0 + a.iter().min().unwrap() + b.iter().min().unwrap();
        let hi = &self.c0 + a.iter().max().unwrap() + b.iter().max().unwrap();
        (lo, hi)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.c0.floor();
        }
        let mut k = self.enclosure().0.floor();
        loop {
            let below = self - &Self::from_rational(Rational::from_bigint(k.clone()));
            if below.signum() < 0 {
                k -= 1;
                continue;
            }
            let above = &below - &Self::from_rational(Rational::one());
            if above.signum() >= 0 {
                k += 1;
                continue;
            }
            return k;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure();
        (lo.to_f64() + hi.to_f64()) / 2.0
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.c0 * r, &self.c1 * r, &self.c2 * r)
    }

    /// Multiplicative inverse, by solving the 3×3 multiplication-matrix system.
    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        if self.is_rational() {
            return Self::from_rational(self.c0.recip());
        }
        // columns: self·1, self·γ, self·γ²
        let g = Self::gamma();
        let c0 = self.clone();
        let c1 = &c0 * &g;
        let c2 = &c1 * &g;
        let m = [
            [c0.c0.clone(), c1.c0.clone(), c2.c0.clone()],
            [c0.c1.clone(), c1.c1.clone(), c2.c1.clone()],
            [c0.c2.clone(), c1.c2.clone(), c2.c2.clone()],
        ];
        let det = det3(&m);
        // Cramer's rule with right-hand side e0.
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut mj = m.clone();
            for (i, row) in mj.iter_mut().enumerate() {
                row[j] = if i == 0 { Rational::one() } else { Rational::zero() };
            }
            *slot = det3(&mj) / &det;
        }
        let [a, b, c] = out;
        Self::new(a, b, c)
    }
}

fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    &m[0][0] * minor(1, 2, 1, 2) - &m[0][1] * minor(1, 2, 0, 2) + &m[0][2] * minor(1, 2, 0, 1)
}

impl<'a> Add<&'a CubicElement> for &'a CubicElement {
    type Output = CubicElement;
    fn add(self, rhs: &CubicElement) -> CubicElement {
        CubicElement::new(&self.c0 + &rhs.c0, &self.c1 + &rhs.c1, &self.c2 + &rhs.c2)
    }
}

impl<'a> Sub<&'a CubicElement> for &'a CubicElement {
    type Output = CubicElement;
    fn sub(self, rhs: &CubicElement) -> CubicElement {
        CubicElement::new(&self.c0 - &rhs.c0, &self.c1 - &rhs.c1, &self.c2 - &rhs.c2)
    }
}

impl<'a> Mul<&'a CubicElement> for &'a CubicElement {
    type Output = CubicElement;
    fn mul(self, rhs: &CubicElement) -> CubicElement {
        let (a, b) = (self, rhs);
        let d0 = &a.c0 * &b.c0;
        let d1 = &a.c0 * &b.c1 + &a.c1 * &b.c0;
        let d2 = &a.c0 * &b.c2 + &a.c1 * &b.c1 + &a.c2 * &b.c0;
        let d3 = &a.c1 * &b.c2 + &a.c2 * &b.c1;
        let d4 = &a.c2 * &b.c2;
        // γ³ = γ² + 3γ − 1 and γ⁴ = 4γ² + 2γ − 1
        let three = Rational::from_int(3);
        let two = Rational::from_int(2);
        let four = Rational::from_int(4);
        CubicElement::new(
            &d0 - &d3 - &d4,
            d1 + &three * &d3 + &two * &d4,
            d2 + &d3 + &four * &d4,
        )
    }
}

impl Neg for &CubicElement {
    type Output = CubicElement;
    fn neg(self) -> CubicElement {
        CubicElement::new(-&self.c0, -&self.c1, -&self.c2)
    }
}

impl fmt::Display for CubicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c0, self.c1, self.c2)
    }
}

impl FromStr for CubicElement {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseScalarError(s.to_string());
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(CubicElement::new(
            parts[0].parse()?,
            parts[1].parse()?,
            parts[2].parse()?,
        ))
    }
}
