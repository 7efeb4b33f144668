use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Half-open axis-aligned square `[x, x+side) × [y, y+side)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Square {
    pub x: f64,
    pub y: f64,
    pub side: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointDiscrepancy {
    pub square: Square,
    pub count: u64,
    /// `count − ρ·area`.
    pub discrepancy: f64,
    pub perimeter: f64,
    /// `|discrepancy| / perimeter`.
    pub ratio: f64,
}

/// Counts points in each square and compares with the expected `ρ·area`.
pub fn point_discrepancy_series(
    points: &[[f64; 2]],
    rho: f64,
    squares: &[Square],
) -> Vec<PointDiscrepancy> {
    squares
        .par_iter()
        .map(|sq| {
            let count = points
                .iter()
                .filter(|p| {
                    p[0] >= sq.x && p[0] < sq.x + sq.side && p[1] >= sq.y && p[1] < sq.y + sq.side
                })
                .count() as u64;
            let discrepancy = count as f64 - rho * sq.side * sq.side;
            let perimeter = 4.0 * sq.side;
            PointDiscrepancy {
                square: *sq,
                count,
                discrepancy,
                perimeter,
                ratio: discrepancy.abs() / perimeter,
            }
        })
        .collect()
}
