//! Bounded-transport feasibility on a finite patch via max-flow.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flow::{FlowNetwork, FlowValue};
use super::plan::{tile_distance, Move, Site, TransportPlan};
use crate::cochain::TopCochain;
use crate::error::{Error, Result};
use crate::geometry::{Patch, Radius};
use crate::scalar::Scalar;

/// Transport of `source` onto `target` within a patch, moving nothing farther
/// than `radius`. Tiles within `slack_band` of the patch boundary may keep or
/// receive any amount, standing in for the tiling beyond the patch.
#[derive(Clone, Debug)]
pub struct TransportProblem<'a> {
    pub patch: &'a Patch,
    pub source: Vec<Scalar>,
    pub target: Vec<Scalar>,
    pub radius: Radius,
    pub slack_band: Radius,
}

impl<'a> TransportProblem<'a> {
    pub fn new(
        patch: &'a Patch,
        source: &TopCochain,
        target: &TopCochain,
        radius: Radius,
        slack_band: Radius,
    ) -> Result<Self> {
        let source = source.tile_values(patch)?;
        let target = target.tile_values(patch)?;
        TransportProblem::from_masses(patch, source, target, radius, slack_band)
    }

    pub fn from_masses(
        patch: &'a Patch,
        source: Vec<Scalar>,
        target: Vec<Scalar>,
        radius: Radius,
        slack_band: Radius,
    ) -> Result<Self> {
        if source.len() != patch.len() || target.len() != patch.len() {
            return Err(Error::InvalidProblem(format!(
                "{} tiles but {} source and {} target masses",
                patch.len(),
                source.len(),
                target.len()
            )));
        }
        if let Some(i) = source.iter().chain(&target).position(Scalar::is_negative) {
            return Err(Error::InvalidProblem(format!(
                "negative mass at position {i}"
            )));
        }
        Ok(TransportProblem {
            patch,
            source,
            target,
            radius,
            slack_band,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutSide {
    /// `source(U)` exceeds the target mass within `r` of `U`.
    Supply,
    /// `target(U)` exceeds the source mass within `r` of `U`.
    Demand,
}

/// A set of tiles violating the Hall condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub side: CutSide,
    pub tiles: Vec<usize>,
    pub mass: Scalar,
    pub neighbourhood: Vec<usize>,
    pub capacity: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "lowercase")]
pub enum Certificate {
    /// Saturating flow, as moves between tiles. Slack-zone imbalance is not listed.
    Flow(TransportPlan),
    Cut(Cut),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HallResult {
    pub feasible: bool,
    pub certificate: Certificate,
}

/// Ordered pairs `(i, j)` of tiles whose reference points lie within `radius`
/// (including `i == j`).
pub fn pairs_within(patch: &Patch, radius: &Radius) -> Vec<(usize, usize)> {
    let n = patch.len();
    let r = radius.to_f64();
    let cell = r.max(1.0);
    let key = |i: usize| {
        let c = patch.centroid_f64(i);
        ((c[0] / cell).floor() as i64, (c[1] / cell).floor() as i64)
    };
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..n {
        buckets.entry(key(i)).or_default().push(i);
    }
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (kx, ky) = key(i);
            let mut out = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(b) = buckets.get(&(kx + dx, ky + dy)) {
                        for &j in b {
                            let d2 = patch.centroid_dist2_f64(i, j);
                            if radius.admits_approx(d2, || patch.centroid_dist2(i, j)) {
                                out.push((i, j));
                            }
                        }
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect()
}

/// Tiles whose reference point lies within `band` of a boundary face midpoint.
pub fn slack_zone(patch: &Patch, band: &Radius) -> Vec<bool> {
    if band.is_zero() {
        return vec![false; patch.len()];
    }
    let anchors: Vec<_> = patch
        .boundary_faces()
        .map(|f| patch.faces()[f].key.anchor())
        .collect();
    let anchors_f64: Vec<[f64; 2]> = anchors.iter().map(|a| a.to_f64()).collect();
    (0..patch.len())
        .into_par_iter()
        .map(|i| {
            let c = patch.centroid_f64(i);
            let mut best = f64::INFINITY;
            for a in &anchors_f64 {
                best = best.min((a[0] - c[0]).powi(2) + (a[1] - c[1]).powi(2));
            }
            band.admits_approx(best, || {
                anchors
                    .iter()
                    .zip(&anchors_f64)
                    .filter(|(_, a)| (a[0] - c[0]).powi(2) + (a[1] - c[1]).powi(2) <= best + 1e-6)
                    .map(|(a, _)| a.dist2(patch.centroid(i)))
                    .min()
                    .expect("a boundary face near the minimum")
            })
        })
        .collect()
}

/// Common denominator scaling to integers, when every mass is rational and small.
fn as_integers(values: &[&Scalar]) -> Option<Vec<i128>> {
    if !values.iter().all(|v| v.is_rational()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.rational_part().denom());
    }
    let out: Option<Vec<i128>> = values
        .iter()
        .map(|v| {
            let r = v.rational_part();
            let n = r.numer() * (&lcm / r.denom());
            if n.abs().bits() > 90 {
                None
            } else {
                n.to_i128()
            }
        })
        .collect();
    out
}

struct Network<C> {
    graph: FlowNetwork<C>,
    tile_arcs: Vec<usize>,
    /// `(tile, arc, leaving)`: slack arcs out of or into a boundary tile.
    slack_arcs: Vec<(usize, usize, bool)>,
    total: C,
}

const SOURCE: usize = 0;
const SINK: usize = 1;
const SLACK_IN: usize = 2;
const SLACK_OUT: usize = 3;

fn left(i: usize) -> usize {
    4 + 2 * i
}

fn right(i: usize) -> usize {
    5 + 2 * i
}

fn build<C: FlowValue>(
    supply: &[C],
    demand: &[C],
    pairs: &[(usize, usize)],
    slack: &[bool],
) -> Network<C> {
    let n = supply.len();
    let mut g = FlowNetwork::new(4 + 2 * n);
    let sum = |v: &[C]| v.iter().fold(C::zero(), |a, b| a.plus(b));
    let (ts, td) = (sum(supply), sum(demand));
    let total = ts.plus(&td);
    // exceeds every finite cut
    let inf = total.plus(&total);
    let mut slack_arcs = Vec::new();
    for i in 0..n {
        if supply[i] > C::zero() {
            g.add_edge(SOURCE, left(i), supply[i].clone());
        }
        if demand[i] > C::zero() {
            g.add_edge(right(i), SINK, demand[i].clone());
        }
        if slack[i] {
            slack_arcs.push((i, g.add_edge(left(i), SLACK_OUT, inf.clone()), true));
            slack_arcs.push((i, g.add_edge(SLACK_IN, right(i), inf.clone()), false));
        }
    }
    g.add_edge(SOURCE, SLACK_IN, td);
    g.add_edge(SLACK_OUT, SINK, ts);
    g.add_edge(SLACK_IN, SLACK_OUT, inf.clone());
    let tile_arcs = pairs
        .iter()
        .filter(|&&(i, j)| supply[i] > C::zero() && demand[j] > C::zero())
        .map(|&(i, j)| g.add_edge(left(i), right(j), inf.clone()))
        .collect();
    Network {
        graph: g,
        tile_arcs,
        slack_arcs,
        total,
    }
}

fn solve<C: FlowValue>(
    problem: &TransportProblem<'_>,
    supply: &[C],
    demand: &[C],
    to_scalar: impl Fn(&C) -> Scalar,
) -> HallResult {
    let patch = problem.patch;
    let pairs = pairs_within(patch, &problem.radius);
    let slack = slack_zone(patch, &problem.slack_band);
    let mut net = build(supply, demand, &pairs, &slack);
    let flow = net.graph.max_flow(SOURCE, SINK);
    if flow == net.total {
        let mut moves: Vec<Move> = net
            .tile_arcs
            .iter()
            .filter_map(|&e| {
                let f = net.graph.flow(e);
                if f == C::zero() {
                    return None;
                }
                let (u, v) = net.graph.endpoints(e);
                let (i, j) = ((u - 4) / 2, (v - 5) / 2);
                Some(Move {
                    src: Site::Tile(i),
                    dst: Site::Tile(j),
                    mass: to_scalar(&f),
                    displacement: tile_distance(patch, i, j),
                    round: 0,
                })
            })
            .collect();
        // exchange with the tiling beyond the patch, counted as no displacement
        for &(i, e, leaving) in &net.slack_arcs {
            let f = net.graph.flow(e);
            if f == C::zero() {
                continue;
            }
            let (src, dst) = if leaving {
                (Site::Tile(i), Site::Exterior)
            } else {
                (Site::Exterior, Site::Tile(i))
            };
            moves.push(Move {
                src,
                dst,
                mass: to_scalar(&f),
                displacement: 0.0,
                round: 0,
            });
        }
        return HallResult {
            feasible: true,
            certificate: Certificate::Flow(TransportPlan { moves, rounds: 1 }),
        };
    }
    let reach = net.graph.reachable(SOURCE);
    let n = patch.len();
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in &pairs {
        adjacent[i].push(j);
    }
    let (side, tiles) = if !reach[SLACK_IN] {
        (CutSide::Supply, (0..n).filter(|&i| reach[left(i)]).collect::<Vec<_>>())
    } else {
        (CutSide::Demand, (0..n).filter(|&j| !reach[right(j)]).collect())
    };
    let (inside, outside) = match side {
        CutSide::Supply => (&problem.source, &problem.target),
        CutSide::Demand => (&problem.target, &problem.source),
    };
    let tiles: Vec<usize> = tiles.into_iter().filter(|&i| inside[i].is_positive()).collect();
    let mut neighbourhood: Vec<usize> = tiles.iter().flat_map(|&i| adjacent[i].clone()).collect();
    neighbourhood.sort_unstable();
    neighbourhood.dedup();
    HallResult {
        feasible: false,
        certificate: Certificate::Cut(Cut {
            side,
            mass: tiles.iter().map(|&i| &inside[i]).sum(),
            capacity: neighbourhood.iter().map(|&j| &outside[j]).sum(),
            tiles,
            neighbourhood,
        }),
    }
}

/// Decides whether the problem admits a transport plan with displacement at most `r`.
pub fn hall_feasible(problem: &TransportProblem<'_>) -> HallResult {
    let all: Vec<&Scalar> = problem.source.iter().chain(&problem.target).collect();
    let n = problem.source.len();
    match as_integers(&all) {
        Some(ints) => {
            let scale = {
                let mut lcm = BigInt::one();
                for v in &all {
                    lcm = lcm.lcm(v.rational_part().denom());
                }
                Scalar::from(lcm)
            };
            solve(problem, &ints[..n], &ints[n..], |c| {
                Scalar::from(BigInt::from(*c)) / &scale
            })
        }
        None => solve(problem, &problem.source, &problem.target, Scalar::clone),
    }
}
