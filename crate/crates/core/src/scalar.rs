//! Exact arithmetic in the quadratic field Q(φ), φ = (1 + √5)/2.
//!
//! Every mass, length and cochain value in the workbench is a [`Scalar`]
//! `a + bφ` with rational `a`, `b`. Comparisons are decided exactly from the
//! defining relation φ² = φ + 1; floating point is only used for reporting.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Golden ratio as a double, for reporting only.
pub const PHI_F64: f64 = 1.618_033_988_749_895;

/// An element `a + bφ` of Q(φ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn phi() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    /// `p/q` with no φ part. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::new(BigRational::new(p.into(), q.into()), BigRational::zero())
    }

    /// `a + bφ` with integer coefficients.
    pub fn from_ints(a: i64, b: i64) -> Self {
        Scalar::new(rat(a), rat(b))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn phi_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True iff the value lies in Z.
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// True iff the value lies in φZ.
    pub fn is_integer_multiple_of_phi(&self) -> bool {
        self.a.is_zero() && self.b.is_integer()
    }

    /// Galois conjugate, φ ↦ 1 − φ.
    pub fn conjugate(&self) -> Self {
        Scalar::new(&self.a + &self.b, -self.b.clone())
    }

    /// Field norm `x · conj(x) = a² + ab − b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Scalar::new(c.a / &n, c.b / &n))
    }

    /// Integer power; negative exponents go through [`Scalar::inverse`].
    pub fn pow(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// Exact sign. Writes the value as `(p + q√5)/2` and compares `p²` with `5q²`
    /// when the two terms disagree in sign.
    pub fn signum(&self) -> Ordering {
        let p = &self.a * rat(2) + &self.b;
        let q = &self.b;
        let sp = p.cmp(&BigRational::zero());
        let sq = q.cmp(&BigRational::zero());
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            (s, t) => {
                let lhs = &p * &p;
                let rhs = q * q * rat(5);
                if lhs > rhs {
                    s
                } else {
                    t
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * PHI_F64
    }

    /// Smallest integer `n` with `n >= self`, decided exactly.
    pub fn ceil(&self) -> BigInt {
        let approx = self.to_f64().ceil();
        let mut n = if approx.is_finite() {
            BigInt::from(approx as i128)
        } else {
            // fall back to the rational bounds φ ∈ (1, 2)
            let lo = &self.a + self.b.clone().min(self.b.clone() * rat(2));
            lo.floor().to_integer()
        };
        while Scalar::from(n.clone() - 1) >= *self {
            n -= 1;
        }
        while Scalar::from(n.clone()) < *self {
            n += 1;
        }
        n
    }

    pub fn floor(&self) -> BigInt {
        -(-self).ceil()
    }

    /// Exact rational approximation of a double.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Scalar::from)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::new(rat(n), BigRational::zero())
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from(n as i64)
    }
}

impl From<u64> for Scalar {
    fn from(n: u64) -> Self {
        Scalar::from(BigInt::from(n))
    }
}

impl From<usize> for Scalar {
    fn from(n: usize) -> Self {
        Scalar::from(BigInt::from(n))
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::new(BigRational::from_integer(n), BigRational::zero())
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        (self - other).signum()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| Scalar::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| Scalar::new(&x.a - &y.a, &x.b - &y.b));
// (a + bφ)(c + dφ) = (ac + bd) + (ad + bc + bd)φ
forward_binop!(Mul, mul, |x, y| {
    let bd = &x.b * &y.b;
    Scalar::new(&x.a * &y.a + &bd, &x.a * &y.b + &x.b * &y.a + bd)
});
forward_binop!(Div, div, |x, y| {
    x * y.inverse().expect("division of a Scalar by zero")
});

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a.clone(), -self.b.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Canonical form `p/q+r/sφ` (or `p/q-r/sφ` when the φ part is negative).
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = fmt_rational(&self.a);
        if self.b.is_negative() {
            write!(f, "{}-{}φ", a, fmt_rational(&-self.b.clone()))
        } else {
            write!(f, "{}+{}φ", a, fmt_rational(&self.b))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (≈{})", self, self.to_f64())
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Ok(BigRational::one());
    }
    if s == "-" {
        return Ok(-BigRational::one());
    }
    if let Ok(r) = BigRational::from_str(s) {
        return Ok(r);
    }
    // plain decimals such as "2.5"
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        if let Ok(n) = BigInt::from_str(&digits) {
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(BigRational::new(n, den));
        }
    }
    Err(Error::Parse(format!("invalid scalar `{whole}`")))
}

/// Accepts `p/q+r/sφ`, `p/q-r/sφ`, plain rationals or decimals, `φ`, `2φ`,
/// `-1/2φ`. The spelling `phi` is accepted for `φ`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace("phi", "φ");
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('φ') else {
            return parse_rational(&s, input).map(Scalar::from);
        };
        // split "a±b" at the last sign that is not leading and not after '/'
        let bytes: Vec<char> = body.chars().collect();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == '+' || bytes[i] == '-') && bytes[i - 1] != '/' {
                split = Some(i);
                break;
            }
        }
        let (a, b) = match split {
            Some(i) => {
                let a: String = bytes[..i].iter().collect();
                let b: String = bytes[i..].iter().collect();
                (parse_rational(&a, input)?, parse_rational(&b, input)?)
            }
            None => (BigRational::zero(), parse_rational(body, input)?),
        };
        Ok(Scalar::new(a, b))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(Scalar::from(n)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_satisfies_its_minimal_polynomial() {
        let phi = Scalar::phi();
        assert!((&phi * &phi - &phi - Scalar::one()).is_zero());
    }

    #[test]
    fn signs_near_zero() {
        // F_{n+1} - φ F_n alternates in sign and shrinks like φ^-n
        let (mut f0, mut f1) = (0i64, 1i64);
        for n in 0..40 {
            let x = Scalar::from(f1) - Scalar::phi() * Scalar::from(f0);
            let expected = if n % 2 == 0 { Ordering::Greater } else { Ordering::Less };
            assert_eq!(x.signum(), expected, "n = {n}");
            let next = f0 + f1;
            f0 = f1;
            f1 = next;
        }
    }

    #[test]
    fn inverse_and_powers() {
        let phi = Scalar::phi();
        assert_eq!(phi.inverse().unwrap(), &phi - Scalar::one());
        let x = Scalar::from_ints(3, -7);
        assert_eq!(&x * x.inverse().unwrap(), Scalar::one());
        assert_eq!(phi.pow(-2).unwrap() * phi.pow(2).unwrap(), Scalar::one());
        assert!(Scalar::zero().inverse().is_none());
    }

    #[test]
    fn ceil_and_floor_are_exact() {
        assert_eq!(Scalar::phi().ceil(), BigInt::from(2));
        assert_eq!(Scalar::phi().floor(), BigInt::from(1));
        assert_eq!(Scalar::from(3).ceil(), BigInt::from(3));
        assert_eq!(Scalar::ratio(-7, 2).ceil(), BigInt::from(-3));
        // 8φ^-1 ≈ 4.944
        assert_eq!((Scalar::from(8) / Scalar::phi()).ceil(), BigInt::from(5));
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/1+0/1φ", "-3/4-5/7φ", "0/1+1/1φ", "2/3-1/1φ"] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn parses_loose_spellings() {
        assert_eq!("φ".parse::<Scalar>().unwrap(), Scalar::phi());
        assert_eq!("-φ".parse::<Scalar>().unwrap(), -Scalar::phi());
        assert_eq!("2phi".parse::<Scalar>().unwrap(), Scalar::from_ints(0, 2));
        assert_eq!("1-φ".parse::<Scalar>().unwrap(), Scalar::from_ints(1, -1));
        assert_eq!("-1/2".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
        assert_eq!("2.5".parse::<Scalar>().unwrap(), Scalar::ratio(5, 2));
        assert_eq!("3/4-1/2φ".parse::<Scalar>().unwrap(), Scalar::new(
            BigRational::new(3.into(), 4.into()),
            BigRational::new((-1).into(), 2.into())
        ));
        assert!("abc".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn ordering_is_total_and_exact() {
        let mut xs = [
            Scalar::phi(),
            Scalar::ratio(8, 5),
            Scalar::ratio(13, 8),
            Scalar::from(2) - Scalar::phi(),
            Scalar::zero(),
        ];
        xs.sort();
        let f: Vec<f64> = xs.iter().map(Scalar::to_f64).collect();
        assert!(f.windows(2).all(|w| w[0] < w[1]), "{f:?}");
    }
}
