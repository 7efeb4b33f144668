use std::collections::BTreeMap;

use serde::Serialize;

use super::plan::{Site, TransportPlan};
use crate::geometry::{Patch, Radius};
use crate::scalar::Scalar;

const DISTANCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// First violation found, if any.
    pub violation: Option<String>,
    pub moves: usize,
    pub rounds: usize,
    pub max_displacement: f64,
    /// Sum over rounds of the largest displacement in the round: a bound on
    /// how far any parcel travels.
    pub composed_displacement: f64,
    /// Least tile mass seen at the start or end of any round.
    pub min_mass: Option<Scalar>,
}

/// Checks a plan against source and target masses: positive moves, sites in
/// the patch, displacements that match tile geometry and stay within `r`
/// (also when composed over rounds), no tile sending more than it holds in a
/// round, and final masses equal to the target.
pub fn verify_plan(
    plan: &TransportPlan,
    source: &[Scalar],
    target: &[Scalar],
    patch: &Patch,
    r: &Radius,
) -> VerifyReport {
    let mut report = VerifyReport {
        ok: true,
        violation: None,
        moves: plan.moves.len(),
        rounds: plan.rounds,
        max_displacement: plan.max_displacement(),
        composed_displacement: 0.0,
        min_mass: None,
    };
    let fail = |mut rep: VerifyReport, msg: String| {
        rep.ok = false;
        rep.violation = Some(msg);
        rep
    };
    if source.len() != patch.len() || target.len() != patch.len() {
        return fail(report, "mass vectors do not match the patch".into());
    }
    let limit = r.to_f64() * (1.0 + DISTANCE_TOLERANCE) + DISTANCE_TOLERANCE;
    for (i, m) in plan.moves.iter().enumerate() {
        if !m.mass.is_positive() {
            return fail(report, format!("move {i} has non-positive mass {}", m.mass));
        }
        for site in [m.src, m.dst] {
            if let Site::Tile(t) = site {
                if t >= patch.len() {
                    return fail(report, format!("move {i} refers to missing tile {t}"));
                }
            }
        }
        if let (Site::Tile(s), Site::Tile(d)) = (m.src, m.dst) {
            let actual = patch.centroid_dist2_f64(s, d).sqrt();
            if (actual - m.displacement).abs() > 1e-6 * (1.0 + actual) {
                return fail(
                    report,
                    format!("move {i} claims displacement {} but tiles are {actual} apart", m.displacement),
                );
            }
            let within = r.admits_approx(patch.centroid_dist2_f64(s, d), || patch.centroid_dist2(s, d));
            if !within {
                return fail(report, format!("move {i} ({s} → {d}) travels {actual} > r"));
            }
        } else if m.displacement > limit {
            return fail(report, format!("move {i} travels {} > r", m.displacement));
        }
    }
    let mut by_round: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, m) in plan.moves.iter().enumerate() {
        by_round.entry(m.round).or_default().push(i);
    }
    let mut cur = source.to_vec();
    let mut min_mass = cur.iter().min().cloned();
    let mut composed = 0.0;
    for (round, idx) in &by_round {
        let mut out = vec![Scalar::zero(); patch.len()];
        let mut round_max: f64 = 0.0;
        for &i in idx {
            let m = &plan.moves[i];
            round_max = round_max.max(m.displacement);
            if m.src == m.dst {
                continue;
            }
            if let Site::Tile(s) = m.src {
                out[s] += &m.mass;
            }
        }
        composed += round_max;
        for (t, o) in out.iter().enumerate() {
            if *o > cur[t] {
                return fail(
                    report,
                    format!("tile {t} sends {o} in round {round} but holds {}", cur[t]),
                );
            }
        }
        for &i in idx {
            let m = &plan.moves[i];
            if m.src == m.dst {
                continue;
            }
            if let Site::Tile(s) = m.src {
                cur[s] -= &m.mass;
            }
            if let Site::Tile(d) = m.dst {
                cur[d] += &m.mass;
            }
        }
        if let Some(low) = cur.iter().min() {
            if min_mass.as_ref().is_none_or(|m| low < m) {
                min_mass = Some(low.clone());
            }
        }
    }
    report.composed_displacement = composed;
    report.min_mass = min_mass;
    if composed > limit {
        return fail(report, format!("rounds compose to displacement {composed} > r"));
    }
    if let Some(t) = (0..patch.len()).find(|&t| cur[t] != target[t]) {
        return fail(
            report,
            format!("tile {t} ends with {} instead of {}", cur[t], target[t]),
        );
    }
    report
}
