use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point with exact coordinates (one coordinate for 1-D tilings, two for 2-D).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Scalar>);

impl Point {
    pub fn line(x: Scalar) -> Self {
        Point(vec![x])
    }

    pub fn plane(x: Scalar, y: Scalar) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.0[i]
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn dist2(&self, other: &Point) -> Scalar {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    /// Coordinates as doubles, padded to two entries.
    pub fn to_f64(&self) -> [f64; 2] {
        let x = self.0.first().map(Scalar::to_f64).unwrap_or(0.0);
        let y = self.0.get(1).map(Scalar::to_f64).unwrap_or(0.0);
        [x, y]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A non-negative distance threshold, stored through its exact square so that
/// radii such as `k√2` on the chair lattice compare exactly.
#[derive(Clone)]
pub struct Radius {
    squared: Scalar,
    squared_f64: f64,
}

const TIE_TOLERANCE: f64 = 1e-9;

impl Radius {
    pub fn zero() -> Self {
        Radius::from_squared(Scalar::zero()).expect("zero is non-negative")
    }

    pub fn new(r: &Scalar) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Parse(format!("negative radius {r}")));
        }
        Radius::from_squared(r * r)
    }

    pub fn from_squared(squared: Scalar) -> Result<Self> {
        if squared.is_negative() {
            return Err(Error::Parse(format!("negative squared radius {squared}")));
        }
        let squared_f64 = squared.to_f64();
        Ok(Radius { squared, squared_f64 })
    }

    pub fn from_f64(r: f64) -> Result<Self> {
        let s = Scalar::from_f64(r).ok_or_else(|| Error::Parse(format!("radius {r}")))?;
        Radius::new(&s)
    }

    pub fn squared(&self) -> &Scalar {
        &self.squared
    }

    pub fn is_zero(&self) -> bool {
        self.squared.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.squared_f64.sqrt()
    }

    /// `k` times this radius.
    pub fn times(&self, k: u64) -> Radius {
        let k2 = Scalar::from(k * k);
        Radius::from_squared(&self.squared * &k2).expect("non-negative")
    }

    /// Whether a squared distance lies within the closed ball.
    pub fn admits(&self, dist2: &Scalar) -> bool {
        *dist2 <= self.squared
    }

    /// Same decision as [`Radius::admits`], using the double approximation when
    /// it is unambiguous and the exact value only near ties.
    pub fn admits_approx<F: FnOnce() -> Scalar>(&self, dist2_f64: f64, exact: F) -> bool {
        let slack = TIE_TOLERANCE * (1.0 + self.squared_f64.abs());
        if dist2_f64 < self.squared_f64 - slack {
            true
        } else if dist2_f64 > self.squared_f64 + slack {
            false
        } else {
            self.admits(&exact())
        }
    }

    /// Strict version: distance squared strictly greater than the radius squared.
    pub fn exceeded_by(&self, dist2: &Scalar) -> bool {
        *dist2 > self.squared
    }
}

impl PartialEq for Radius {
    fn eq(&self, other: &Self) -> bool {
        self.squared == other.squared
    }
}

impl Eq for Radius {}

impl PartialOrd for Radius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radius {
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared.cmp(&other.squared)
    }
}

impl fmt::Debug for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Radius(√({}) ≈ {:.6})", self.squared, self.to_f64())
    }
}

impl std::hash::Hash for Radius {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.squared.hash(state);
    }
}
