use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::top::TopCochain;
use crate::error::{Error, Result};
use crate::format::float12;
use crate::geometry::{Patch, RegionSpec};
use crate::scalar::Scalar;

/// Something a top cochain can be integrated over.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Patch(&'a Patch),
    Region(&'a RegionSpec),
}

impl Target<'_> {
    fn boundary(&self) -> Scalar {
        match self {
            Target::Patch(p) => p.boundary_measure(),
            Target::Region(r) => r.declared_boundary.clone(),
        }
    }
}

pub fn integrate(alpha: &TopCochain, target: Target<'_>) -> Result<Scalar> {
    match target {
        Target::Patch(p) => Ok(alpha.tile_values(p)?.iter().sum()),
        Target::Region(region) => {
            if region.system != alpha.system() {
                return Err(Error::IncompatibleCochains);
            }
            let values = alpha.label_values().ok_or_else(|| {
                Error::InsufficientCollar(
                    "a region carries no surrounding pattern; use a radius-0 cochain".into(),
                )
            })?;
            let sys = region.system.tiling();
            let mut total = Scalar::zero();
            for part in &region.parts {
                let counts = sys.label_counts(part.proto, part.level)?;
                let on_supertile: Scalar = counts
                    .into_iter()
                    .zip(values)
                    .map(|(c, v)| Scalar::from(c) * v)
                    .sum();
                total += on_supertile * Scalar::from(part.count);
            }
            Ok(total)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyPoint {
    pub descriptor: String,
    pub integral: Scalar,
    pub boundary: Scalar,
    pub ratio: f64,
}

impl DiscrepancyPoint {
    pub fn new(descriptor: String, integral: Scalar, boundary: Scalar) -> Self {
        let ratio = if boundary.is_zero() {
            if integral.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (integral.abs() / &boundary).to_f64()
        };
        DiscrepancyPoint {
            descriptor,
            integral,
            boundary,
            ratio,
        }
    }
}

/// One point per member of the family, in order. Patches are described as
/// `patch<i>`, regions by their own descriptor.
pub fn discrepancy_series(
    alpha: &TopCochain,
    family: &[Target<'_>],
) -> Result<Vec<DiscrepancyPoint>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    family
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let descriptor = match t {
                Target::Patch(_) => format!("patch{i}"),
                Target::Region(r) => r.descriptor.clone(),
            };
            Ok(DiscrepancyPoint::new(descriptor, integrate(alpha, *t)?, t.boundary()))
        })
        .collect()
}

pub fn write_discrepancy_csv<W: Write>(points: &[DiscrepancyPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["descriptor", "integral_exact", "boundary_exact", "ratio_float"])?;
    for p in points {
        w.write_record([
            p.descriptor.clone(),
            p.integral.to_string(),
            p.boundary.to_string(),
            float12(p.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::mass_cochain;
    use crate::geometry::{chair_partial_region, System};

    fn ne_minus_sw() -> TopCochain {
        mass_cochain(
            System::Chair,
            &[
                ("NE", Scalar::one()),
                ("SW", -Scalar::one()),
                ("NW", Scalar::zero()),
                ("SE", Scalar::zero()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn r3_integral() {
        let r3 = chair_partial_region(3).unwrap();
        assert_eq!(integrate(&ne_minus_sw(), Target::Region(&r3)).unwrap(), Scalar::from(17));
    }

    #[test]
    fn fibonacci_level_two() {
        let f = mass_cochain(
            System::Fibonacci,
            &[("a", Scalar::one()), ("b", -Scalar::phi())],
        )
        .unwrap();
        let p = System::Fibonacci.tiling().supertile(0, 2).unwrap();
        assert_eq!(
            integrate(&f, Target::Patch(&p)).unwrap(),
            Scalar::from(2) - Scalar::phi()
        );
    }

    #[test]
    fn empty_patch_integrates_to_zero() {
        let p = Patch::new(System::Chair, vec![]).unwrap();
        assert!(integrate(&ne_minus_sw(), Target::Patch(&p)).unwrap().is_zero());
    }

    #[test]
    fn region_and_patch_integration_agree_on_supertiles() {
        use crate::geometry::{RegionPart, RegionSpec};
        let alpha = ne_minus_sw();
        for level in 0..5 {
            let p = System::Chair.tiling().supertile(0, level).unwrap();
            let r = RegionSpec::new(
                System::Chair,
                "s",
                vec![RegionPart { proto: 0, level, count: 1 }],
                Scalar::one(),
            )
            .unwrap();
            assert_eq!(
                integrate(&alpha, Target::Patch(&p)).unwrap(),
                integrate(&alpha, Target::Region(&r)).unwrap()
            );
        }
    }

    #[test]
    fn series_csv() {
        let regions: Vec<RegionSpec> = (1..=3).map(|n| chair_partial_region(n).unwrap()).collect();
        let family: Vec<Target> = regions.iter().map(Target::Region).collect();
        let pts = discrepancy_series(&ne_minus_sw(), &family).unwrap();
        let mut buf = Vec::new();
        write_discrepancy_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "descriptor,integral_exact,boundary_exact,ratio_float");
        assert_eq!(lines[3], "R3,17/1+0/1φ,32/1+0/1φ,0.531250000000");
        assert!(discrepancy_series(&ne_minus_sw(), &[]).is_err());
    }
}
