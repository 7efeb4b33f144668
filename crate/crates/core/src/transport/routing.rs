//! Net face fluxes of a plan, routing each move along a straight segment.

use num_traits::ToPrimitive;

use super::plan::{Site, TransportPlan};
use crate::cochain::FaceValues;
use crate::error::{Error, Result};
use crate::geometry::{FaceKey, Patch, Point};
use crate::scalar::Scalar;

/// Unit step of the deterministic perturbation applied to degenerate segments.
fn nudge(j: i64) -> (Scalar, Scalar) {
    (Scalar::ratio(j, 500), Scalar::ratio(j, 1750))
}

const MAX_NUDGES: i64 = 64;

fn floor_i64(s: &Scalar) -> i64 {
    s.floor().to_i64().expect("coordinate in range")
}

/// Lattice edges crossed by the open segment `p → q`, each with the sign of the
/// crossing relative to the edge orientation; `None` if the segment touches a
/// lattice vertex or starts or ends on a lattice line.
fn grid_crossings(p: &Point, q: &Point) -> Option<Vec<(FaceKey, i8)>> {
    let (px, py, qx, qy) = (p.coord(0), p.coord(1), q.coord(0), q.coord(1));
    if px.is_integer() || py.is_integer() || qx.is_integer() || qy.is_integer() {
        return None;
    }
    let mut out = Vec::new();
    let dx = qx - px;
    let dy = qy - py;
    // vertical lines x = k
    let (lo, hi) = if px < qx { (px, qx) } else { (qx, px) };
    for k in floor_i64(lo) + 1..=floor_i64(hi) {
        let t = (Scalar::from(k) - px) / &dx;
        let y = py + &(&t * &dy);
        if y.is_integer() {
            return None;
        }
        let sign = if dx.is_positive() { 1 } else { -1 };
        out.push((FaceKey::Edge { x: k, y: floor_i64(&y), vertical: true }, sign));
    }
    let (lo, hi) = if py < qy { (py, qy) } else { (qy, py) };
    for k in floor_i64(lo) + 1..=floor_i64(hi) {
        let t = (Scalar::from(k) - py) / &dy;
        let x = px + &(&t * &dx);
        if x.is_integer() {
            return None;
        }
        let sign = if dy.is_positive() { 1 } else { -1 };
        out.push((FaceKey::Edge { x: floor_i64(&x), y: k, vertical: false }, sign));
    }
    Some(out)
}

fn cells_beside(key: &FaceKey) -> ((i64, i64), (i64, i64)) {
    match key {
        FaceKey::Edge { x, y, vertical: true } => ((x - 1, *y), (*x, *y)),
        FaceKey::Edge { x, y, vertical: false } => ((*x, y - 1), (*x, *y)),
        FaceKey::Vertex(_) => unreachable!("lattice edges only"),
    }
}

fn route_grid(patch: &Patch, src: usize, dst: usize, mass: &Scalar, beta: &mut FaceValues) -> Result<()> {
    let (p0, q0) = (patch.centroid(src), patch.centroid(dst));
    for j in 0..MAX_NUDGES {
        let (ox, oy) = nudge(j);
        let shift = Point::plane(ox, oy);
        let (p, q) = (p0.add(&shift), q0.add(&shift));
        let Some(crossings) = grid_crossings(&p, &q) else {
            continue;
        };
        for (key, sign) in crossings {
            let (a, b) = cells_beside(&key);
            let (ta, tb) = (patch.cell_owner(a), patch.cell_owner(b));
            match (ta, tb) {
                (Some(x), Some(y)) if x == y => {}
                (Some(_), Some(_)) => {
                    let v = beta.entry(key).or_insert_with(Scalar::zero);
                    if sign > 0 {
                        *v += mass;
                    } else {
                        *v -= mass;
                    }
                }
                _ => {
                    return Err(Error::PlanLeavesPatch(format!(
                        "segment from tile {src} to tile {dst} crosses {key:?}"
                    )))
                }
            }
        }
        return Ok(());
    }
    Err(Error::PlanLeavesPatch(format!(
        "segment from tile {src} to tile {dst} stays degenerate"
    )))
}

fn route_line(patch: &Patch, src: usize, dst: usize, mass: &Scalar, beta: &mut FaceValues) {
    let (a, b) = (src.min(dst), src.max(dst));
    // 1-D tiles are ordered left to right; the right vertex of tile i is crossed
    // for i in a..b
    let sys = patch.tiling();
    for t in a..b {
        let x = sys.tile_interval(&patch.tiles()[t]).1;
        let v = beta.entry(FaceKey::Vertex(x)).or_insert_with(Scalar::zero);
        if dst > src {
            *v += mass;
        } else {
            *v -= mass;
        }
    }
}

/// β(c) = net mass carried across `c` in its positive direction, so that
/// `δβ` is each tile's net outflow.
pub fn flux_from_plan(plan: &TransportPlan, patch: &Patch) -> Result<FaceValues> {
    // boundary faces stay zero: moves never leave the patch
    let mut beta: FaceValues = patch
        .faces()
        .iter()
        .map(|f| (f.key.clone(), Scalar::zero()))
        .collect();
    let line = patch.system().dimension() == 1;
    if line && patch.components().len() > 1 && !plan.moves.is_empty() {
        return Err(Error::PlanLeavesPatch("gap between tiles".into()));
    }
    for m in &plan.moves {
        let (Site::Tile(s), Site::Tile(d)) = (m.src, m.dst) else {
            return Err(Error::PlanLeavesPatch("move to or from the exterior".into()));
        };
        if s >= patch.len() || d >= patch.len() {
            return Err(Error::PlanLeavesPatch(format!("no tile {}", s.max(d))));
        }
        if s == d {
            continue;
        }
        if line {
            route_line(patch, s, d, &m.mass, &mut beta);
        } else {
            route_grid(patch, s, d, &m.mass, &mut beta)?;
        }
    }
    Ok(beta)
}
