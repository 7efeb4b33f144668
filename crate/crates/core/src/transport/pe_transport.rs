//! Strongly PE transport: solve for a pattern-equivariant flux, then realize
//! it in small rounds and check the result.

use serde::Serialize;

use super::pe_solve::{solve_pe_coboundary, PESolveResult};
use super::stepwise::{stepwise_plan_from_flux, StepwisePlan};
use super::verify::{verify_plan, VerifyReport};
use crate::cochain::{FaceValues, TopCochain};
use crate::error::{Error, Result};
use crate::geometry::{Patch, Radius};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct PETransport {
    pub solve: PESolveResult,
    /// Tiles (indices into the input patch) of the largest connected group of
    /// core tiles; the plan lives on this subpatch.
    pub region: Vec<usize>,
    pub patch: Patch,
    pub source: Vec<Scalar>,
    pub target: Vec<Scalar>,
    /// `None` when the flux does not solve `δβ = α` exactly.
    pub stepwise: Option<StepwisePlan>,
    pub report: Option<VerifyReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PETransportSummary {
    pub residual: Scalar,
    pub classes: usize,
    pub core_tiles: usize,
    pub region_tiles: usize,
    pub rounds: u64,
    pub n1: Option<usize>,
    pub n2: Option<Scalar>,
    pub epsilon: Option<Scalar>,
    pub min_mass: Option<Scalar>,
    pub verified: bool,
    pub violation: Option<String>,
}

impl PETransport {
    /// Exact flux, verified plan, and no intermediate mass below ε.
    pub fn ok(&self) -> bool {
        match (&self.stepwise, &self.report) {
            (Some(s), Some(r)) => {
                r.ok && r.min_mass.as_ref().is_some_and(|m| *m >= s.epsilon)
            }
            _ => false,
        }
    }

    pub fn summary(&self) -> PETransportSummary {
        let s = self.stepwise.as_ref();
        let r = self.report.as_ref();
        PETransportSummary {
            residual: self.solve.residual.clone(),
            classes: self.solve.classes.len(),
            core_tiles: self.solve.core.len(),
            region_tiles: self.region.len(),
            rounds: s.map_or(0, |s| s.n3),
            n1: s.map(|s| s.n1),
            n2: s.map(|s| s.n2.clone()),
            epsilon: s.map(|s| s.epsilon.clone()),
            min_mass: r.and_then(|r| r.min_mass.clone()),
            verified: self.ok(),
            violation: r.and_then(|r| r.violation.clone()),
        }
    }
}

/// Solves `δβ = source − target` with β constant on radius-`radius` face
/// classes, then moves `source + background` to `target + background` along β
/// on the largest connected group of core tiles. Faces on the edge of that
/// group exchange mass with the surrounding tiles, shown as the exterior.
pub fn pe_transport(
    source: &TopCochain,
    target: &TopCochain,
    patch: &Patch,
    radius: &Radius,
    background: &Scalar,
) -> Result<PETransport> {
    if background.is_negative() {
        return Err(Error::InvalidProblem("background mass must be nonnegative".into()));
    }
    let alpha = source.sub(target)?;
    let solve = solve_pe_coboundary(&alpha, patch, radius)?;
    let core_patch = patch.subpatch(&solve.core)?;
    let region: Vec<usize> = core_patch
        .components()
        .into_iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .expect("core is non-empty")
        .into_iter()
        .map(|i| solve.core[i])
        .collect();
    let sub = patch.subpatch(&region)?;
    let src_all = source.tile_values_partial(patch)?;
    let tgt_all = target.tile_values_partial(patch)?;
    let lift = |vals: &[Option<Scalar>]| -> Vec<Scalar> {
        region
            .iter()
            .map(|&t| vals[t].clone().expect("core tiles have values") + background)
            .collect()
    };
    let (src, tgt) = (lift(&src_all), lift(&tgt_all));
    let (stepwise, report) = if solve.is_exact() {
        let beta: FaceValues = solve
            .face_values
            .iter()
            .filter(|(k, _)| sub.face(k).is_some())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let plan = stepwise_plan_from_flux(&beta, &src, &sub)?;
        let r = Radius::from_f64(plan.displacement_bound.max(0.0))?;
        let report = verify_plan(&plan.plan, &src, &tgt, &sub, &r);
        (Some(plan), Some(report))
    } else {
        (None, None)
    };
    Ok(PETransport {
        solve,
        region,
        patch: sub,
        source: src,
        target: tgt,
        stepwise,
        report,
    })
}
