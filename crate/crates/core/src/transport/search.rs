use rayon::prelude::*;
use serde::Serialize;

use super::hall::{hall_feasible, TransportProblem};
use crate::cochain::TopCochain;
use crate::error::{Error, Result};
use crate::geometry::{Patch, Radius, System};
use crate::scalar::Scalar;

/// Least feasible grid radius `step · h` for one patch, where `h` is half the
/// largest tile diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusSearch {
    pub step: u64,
    #[serde(serialize_with = "ser_radius")]
    pub radius: Radius,
    /// Number of feasibility checks performed.
    pub probes: usize,
}

fn ser_radius<S: serde::Serializer>(r: &Radius, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(r.to_f64())
}

pub fn grid_step(system: System) -> Radius {
    let d2 = system.tiling().max_diameter_sq();
    Radius::from_squared(d2 / Scalar::from(4)).expect("non-negative")
}

fn feasible_at(
    patch: &Patch,
    source: &[Scalar],
    target: &[Scalar],
    r: &Radius,
) -> Result<bool> {
    // boundary band of fixed width h: tiles there may trade with the unseen
    // rest of the tiling, so the radius reflects imbalance deep inside
    let band = grid_step(patch.system());
    let problem =
        TransportProblem::from_masses(patch, source.to_vec(), target.to_vec(), r.clone(), band)?;
    Ok(hall_feasible(&problem).feasible)
}

/// Minimal feasible radius on one patch, by galloping and then bisection.
pub fn min_radius_for_patch(
    patch: &Patch,
    source: &TopCochain,
    target: &TopCochain,
) -> Result<RadiusSearch> {
    let h = grid_step(patch.system());
    let src = source.tile_values(patch)?;
    let tgt = target.tile_values(patch)?;
    let cap = (patch.diameter_f64() / h.to_f64()).ceil().max(1.0) as u64;
    let mut probes = 0;
    let mut check = |k: u64| {
        probes += 1;
        feasible_at(patch, &src, &tgt, &h.times(k))
    };
    if check(0)? {
        return Ok(RadiusSearch {
            step: 0,
            radius: Radius::zero(),
            probes: 1,
        });
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    loop {
        if check(hi)? {
            break;
        }
        lo = hi;
        if hi >= cap {
            return Err(Error::SearchExhausted(format!(
                "infeasible up to the patch diameter ({cap} steps)"
            )));
        }
        hi = (hi * 2).min(cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if check(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RadiusSearch {
        step: hi,
        radius: h.times(hi),
        probes,
    })
}

/// Minimal feasible radius per patch, in family order.
pub fn min_transport_radius(
    source: &TopCochain,
    target: &TopCochain,
    family: &[Patch],
) -> Result<Vec<RadiusSearch>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    family
        .par_iter()
        .map(|p| min_radius_for_patch(p, source, target))
        .collect()
}
