use serde::{Deserialize, Serialize};

use super::system::System;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPart {
    pub proto: usize,
    pub level: u32,
    pub count: u64,
}

/// A region described only by its supertile decomposition, with a boundary
/// measure supplied by the caller rather than computed from geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub system: System,
    pub descriptor: String,
    pub parts: Vec<RegionPart>,
    pub declared_boundary: Scalar,
}

impl RegionSpec {
    pub fn new(
        system: System,
        descriptor: impl Into<String>,
        parts: Vec<RegionPart>,
        declared_boundary: Scalar,
    ) -> Result<Self> {
        let n = system.tiling().prototiles.len();
        for p in &parts {
            if p.count == 0 {
                return Err(Error::InvalidRegion("part counts must be positive".into()));
            }
            if p.proto >= n {
                return Err(Error::UnknownPrototile(format!("#{}", p.proto)));
            }
        }
        if !declared_boundary.is_positive() {
            return Err(Error::InvalidRegion("declared boundary must be positive".into()));
        }
        Ok(RegionSpec {
            system,
            descriptor: descriptor.into(),
            parts,
            declared_boundary,
        })
    }
}

/// The chair region `R_n`: `2^k − 1` NE supertiles of level `n − k` for
/// `k = 1..n`, with boundary measure `4·2^n`.
pub fn chair_partial_region(n: u32) -> Result<RegionSpec> {
    if n < 1 {
        return Err(Error::InvalidRegion("R_n needs n ≥ 1".into()));
    }
    if n > 62 {
        return Err(Error::InvalidRegion(format!("R_{n} is too large")));
    }
    let parts = (1..=n)
        .map(|k| RegionPart {
            proto: 0,
            level: n - k,
            count: (1u64 << k) - 1,
        })
        .collect();
    RegionSpec::new(
        System::Chair,
        format!("R{n}"),
        parts,
        Scalar::from(4u64 << n),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_regions() {
        let r1 = chair_partial_region(1).unwrap();
        assert_eq!(r1.parts, vec![RegionPart { proto: 0, level: 0, count: 1 }]);
        assert_eq!(r1.declared_boundary, Scalar::from(8));
        let r2 = chair_partial_region(2).unwrap();
        assert_eq!(
            r2.parts,
            vec![
                RegionPart { proto: 0, level: 1, count: 1 },
                RegionPart { proto: 0, level: 0, count: 3 }
            ]
        );
        assert_eq!(r2.declared_boundary, Scalar::from(16));
        let r3 = chair_partial_region(3).unwrap();
        let shape: Vec<(u32, u64)> = r3.parts.iter().map(|p| (p.level, p.count)).collect();
        assert_eq!(shape, vec![(2, 1), (1, 3), (0, 7)]);
    }

    #[test]
    fn invalid_regions() {
        assert!(chair_partial_region(0).is_err());
        assert!(RegionSpec::new(System::Chair, "x", vec![], Scalar::zero()).is_err());
        let zero = vec![RegionPart { proto: 0, level: 1, count: 0 }];
        assert!(RegionSpec::new(System::Chair, "x", zero, Scalar::one()).is_err());
    }
}
