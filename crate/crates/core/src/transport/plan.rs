use serde::{Deserialize, Serialize};

use crate::geometry::Patch;
use crate::scalar::Scalar;

/// Endpoint of a move: a tile of the patch, or the region outside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Tile(usize),
    Exterior,
}

impl Site {
    pub fn tile(self) -> Option<usize> {
        match self {
            Site::Tile(t) => Some(t),
            Site::Exterior => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub src: Site,
    pub dst: Site,
    pub mass: Scalar,
    #[serde(rename = "disp")]
    pub displacement: f64,
    #[serde(default)]
    pub round: usize,
}

/// Moves grouped into rounds; moves of one round happen simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub moves: Vec<Move>,
    pub rounds: usize,
}

impl TransportPlan {
    pub fn empty() -> Self {
        TransportPlan::default()
    }

    /// Net mass leaving each tile over the whole plan.
    pub fn net_outflow(&self, tiles: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); tiles];
        for m in &self.moves {
            if m.src == m.dst {
                continue;
            }
            if let Site::Tile(s) = m.src {
                out[s] += &m.mass;
            }
            if let Site::Tile(d) = m.dst {
                out[d] -= &m.mass;
            }
        }
        out
    }

    pub fn max_displacement(&self) -> f64 {
        self.moves
            .iter()
            .map(|m| m.displacement)
            .fold(0.0, f64::max)
    }
}

/// Distance between the reference points of two tiles.
pub fn tile_distance(patch: &Patch, a: usize, b: usize) -> f64 {
    patch.centroid_dist2_f64(a, b).sqrt()
}
