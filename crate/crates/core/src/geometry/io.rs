//! JSON serialization and SVG rendering of patches.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::patch::Patch;
use super::system::{System, Tile, Translation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Exact(Scalar),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TileJson {
    proto: String,
    t: Vec<Coord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PatchJson {
    system: System,
    tiles: Vec<TileJson>,
}

fn coord_scalar(c: &Coord) -> Scalar {
    match c {
        Coord::Int(i) => Scalar::from(*i),
        Coord::Exact(s) => s.clone(),
    }
}

fn coord_int(c: &Coord) -> Result<i64> {
    use num_traits::ToPrimitive;
    let s = coord_scalar(c);
    if !s.is_integer() {
        return Err(Error::Parse(format!("lattice coordinate {s} is not an integer")));
    }
    s.rational_part()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Parse(format!("coordinate {s} out of range")))
}

pub fn patch_to_json(patch: &Patch) -> serde_json::Value {
    let sys = patch.tiling();
    let tiles = patch
        .tiles()
        .iter()
        .map(|t| TileJson {
            proto: sys.label(t.proto).to_string(),
            t: match &t.at {
                Translation::Line(x) => vec![Coord::Exact(x.clone())],
                Translation::Grid(x, y) => vec![Coord::Int(*x), Coord::Int(*y)],
            },
        })
        .collect();
    serde_json::to_value(PatchJson {
        system: patch.system(),
        tiles,
    })
    .expect("patch JSON is always representable")
}

pub fn patch_from_json(value: &serde_json::Value) -> Result<Patch> {
    let pj: PatchJson = serde_json::from_value(value.clone())?;
    let sys = pj.system.tiling();
    let tiles = pj
        .tiles
        .iter()
        .map(|tj| {
            let proto = sys.proto_by_label(&tj.proto)?;
            let at = match (pj.system.dimension(), tj.t.as_slice()) {
                (1, [x]) => Translation::Line(coord_scalar(x)),
                (2, [x, y]) => Translation::Grid(coord_int(x)?, coord_int(y)?),
                _ => {
                    return Err(Error::Parse(format!(
                        "tile {} has {} coordinates",
                        tj.proto,
                        tj.t.len()
                    )))
                }
            };
            Ok(Tile { proto, at })
        })
        .collect::<Result<Vec<_>>>()?;
    Patch::new(pj.system, tiles)
}

fn fill(label: &str) -> &'static str {
    match label {
        "NE" => "#e4572e",
        "SE" => "#29335c",
        "SW" => "#f3a712",
        "NW" => "#669bbc",
        "a" => "#e4572e",
        _ => "#669bbc",
    }
}

/// Outline of a lattice tile, traced along its boundary edges.
fn outline(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    use std::collections::HashMap;
    let has = |c: (i64, i64)| cells.contains(&c);
    // directed boundary edges with the tile on the left
    let mut next: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
    for &(x, y) in cells {
        if !has((x, y - 1)) {
            next.insert((x, y), (x + 1, y));
        }
        if !has((x + 1, y)) {
            next.insert((x + 1, y), (x + 1, y + 1));
        }
        if !has((x, y + 1)) {
            next.insert((x + 1, y + 1), (x, y + 1));
        }
        if !has((x - 1, y)) {
            next.insert((x, y + 1), (x, y));
        }
    }
    let start = *next.keys().min().expect("tile has cells");
    let mut path = vec![start];
    let mut cur = next[&start];
    while cur != start {
        path.push(cur);
        cur = next[&cur];
    }
    // drop collinear points
    let n = path.len();
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (path[(i + n - 1) % n], path[i], path[(i + 1) % n]);
            (b.0 - a.0) * (c.1 - b.1) != (b.1 - a.1) * (c.0 - b.0)
        })
        .map(|i| path[i])
        .collect()
}

/// SVG with one polygon per tile, filled by label. One-dimensional patches are
/// drawn as a strip of unit height.
pub fn patch_to_svg(patch: &Patch) -> String {
    let sys = patch.tiling();
    const SCALE: f64 = 20.0;
    let mut polys: Vec<(Vec<(f64, f64)>, &str)> = Vec::new();
    for t in patch.tiles() {
        let label = sys.label(t.proto);
        let pts: Vec<(f64, f64)> = match &t.at {
            Translation::Line(_) => {
                let (l, r) = sys.tile_interval(t);
                let (l, r) = (l.to_f64(), r.to_f64());
                vec![(l, 0.0), (r, 0.0), (r, 1.0), (l, 1.0)]
            }
            Translation::Grid(..) => {
                let cells: Vec<(i64, i64)> = sys.tile_cells(t).collect();
                outline(&cells)
                    .into_iter()
                    .map(|(x, y)| (x as f64, y as f64))
                    .collect()
            }
        };
        polys.push((pts, label));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    for (pts, _) in &polys {
        for &(x, y) in pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
    }
    let (w, h) = ((x1 - x0) * SCALE, (y1 - y0) * SCALE);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    for (pts, label) in &polys {
        let coords: Vec<String> = pts
            .iter()
            // flip y so that north is up
            .map(|&(x, y)| format!("{:.3},{:.3}", (x - x0) * SCALE, (y1 - y) * SCALE))
            .collect();
        let _ = writeln!(
            out,
            r#"  <polygon points="{}" fill="{}" stroke="black" stroke-width="0.5"><title>{}</title></polygon>"#,
            coords.join(" "),
            fill(label),
            label
        );
    }
    out.push_str("</svg>\n");
    out
}
