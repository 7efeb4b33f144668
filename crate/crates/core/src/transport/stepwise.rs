//! Realizing a flux as many small rounds of transfers between neighbours.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::plan::{tile_distance, Move, Site, TransportPlan};
use crate::cochain::FaceValues;
use crate::error::{Error, Result};
use crate::geometry::Patch;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct StepwisePlan {
    pub plan: TransportPlan,
    /// Largest number of faces on a tile.
    pub n1: usize,
    /// Largest `|β(c)|`.
    pub n2: Scalar,
    /// Number of rounds, `⌈N₁N₂/ε⌉`.
    pub n3: u64,
    /// Smaller of the least start mass and the least end mass.
    pub epsilon: Scalar,
    pub start: Vec<Scalar>,
    pub end: Vec<Scalar>,
    /// Upper bound on the distance any parcel travels: `N₃ · 2 · max tile diameter`.
    pub displacement_bound: f64,
}

fn face_displacement(patch: &Patch, tile: usize, face: usize) -> f64 {
    let c = patch.centroid_f64(tile);
    let a = patch.faces()[face].key.anchor().to_f64();
    2.0 * ((a[0] - c[0]).powi(2) + (a[1] - c[1]).powi(2)).sqrt()
}

/// Splits β into `N₃` equal rounds. In every round each face `c` carries
/// `β(c)/N₃` in its positive direction; transfers between the same pair of
/// sites are netted. Faces without a β value count as zero, and boundary faces
/// exchange with the exterior.
pub fn stepwise_plan_from_flux(
    beta: &FaceValues,
    source: &[Scalar],
    patch: &Patch,
) -> Result<StepwisePlan> {
    if source.len() != patch.len() {
        return Err(Error::InvalidProblem("one source mass per tile is needed".into()));
    }
    let zero = Scalar::zero();
    let value = |f: usize| beta.get(&patch.faces()[f].key).unwrap_or(&zero);
    let end: Vec<Scalar> = (0..patch.len())
        .map(|t| {
            let mut out = source[t].clone();
            for &(f, sign) in patch.tile_faces(t) {
                if sign > 0 {
                    out -= value(f);
                } else {
                    out += value(f);
                }
            }
            out
        })
        .collect();
    let n1 = (0..patch.len())
        .map(|t| patch.tile_faces(t).len())
        .max()
        .unwrap_or(0);
    let faces_used: Vec<usize> = (0..patch.faces().len())
        .filter(|&f| !value(f).is_zero())
        .collect();
    let n2 = faces_used
        .iter()
        .map(|&f| value(f).abs())
        .max()
        .unwrap_or_else(Scalar::zero);
    let epsilon = source
        .iter()
        .chain(&end)
        .min()
        .cloned()
        .unwrap_or_else(Scalar::zero);
    let max_diam = patch.tiling().max_diameter_sq().to_f64().sqrt();
    if faces_used.is_empty() {
        return Ok(StepwisePlan {
            plan: TransportPlan::empty(),
            n1,
            n2,
            n3: 0,
            epsilon,
            start: source.to_vec(),
            end,
            displacement_bound: 0.0,
        });
    }
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveMass(format!(
            "least start or end mass is {epsilon}"
        )));
    }
    let n3_big: BigInt = (Scalar::from(n1) * &n2 / &epsilon).ceil().max(BigInt::from(1));
    let n3 = n3_big
        .to_u64()
        .ok_or_else(|| Error::InvalidProblem(format!("{n3_big} rounds")))?;
    let per_round = Scalar::from(n3).inverse().expect("n3 > 0");
    // net transfer per ordered pair of sites in one round
    let mut transfers: BTreeMap<(Site, Site), (Scalar, f64)> = BTreeMap::new();
    for &f in &faces_used {
        let face = &patch.faces()[f];
        let amount = value(f) * &per_round;
        let (from, to, disp) = match (face.back, face.front) {
            (Some(b), Some(fr)) => (Site::Tile(b), Site::Tile(fr), tile_distance(patch, b, fr)),
            (Some(b), None) => (Site::Tile(b), Site::Exterior, face_displacement(patch, b, f)),
            (None, Some(fr)) => (Site::Exterior, Site::Tile(fr), face_displacement(patch, fr, f)),
            (None, None) => unreachable!("faces touch a tile"),
        };
        let (key, amount) = if from <= to {
            ((from, to), amount)
        } else {
            ((to, from), -amount)
        };
        let entry = transfers.entry(key).or_insert((Scalar::zero(), disp));
        entry.0 += amount;
        entry.1 = entry.1.max(disp);
    }
    let round_moves: Vec<Move> = transfers
        .into_iter()
        .filter(|(_, (m, _))| !m.is_zero())
        .map(|((a, b), (m, disp))| {
            let (src, dst, mass) = if m.is_positive() { (a, b, m) } else { (b, a, -m) };
            Move {
                src,
                dst,
                mass,
                displacement: disp,
                round: 0,
            }
        })
        .collect();
    let rounds = n3 as usize;
    let mut moves = Vec::with_capacity(round_moves.len() * rounds);
    for r in 0..rounds {
        moves.extend(round_moves.iter().cloned().map(|mut m| {
            m.round = r;
            m
        }));
    }
    Ok(StepwisePlan {
        plan: TransportPlan { moves, rounds },
        n1,
        n2,
        n3,
        epsilon,
        start: source.to_vec(),
        end,
        displacement_bound: n3 as f64 * 2.0 * max_diam,
    })
}

/// Masses after each round, starting with the initial masses.
pub fn simulate_rounds(plan: &TransportPlan, start: &[Scalar]) -> Vec<Vec<Scalar>> {
    let mut states = vec![start.to_vec()];
    let mut cur = start.to_vec();
    let mut by_round: BTreeMap<usize, Vec<&Move>> = BTreeMap::new();
    for m in &plan.moves {
        by_round.entry(m.round).or_default().push(m);
    }
    for moves in by_round.values() {
        for m in moves {
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
        states.push(cur.clone());
    }
    states
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{mass_cochain, primitive_1d};
    use crate::geometry::System;

    #[test]
    fn zero_flux_gives_empty_plan() {
        let p = System::Chair.tiling().supertile(0, 2).unwrap();
        let s = vec![Scalar::one(); p.len()];
        let out = stepwise_plan_from_flux(&FaceValues::new(), &s, &p).unwrap();
        assert_eq!(out.plan.rounds, 0);
        assert!(out.plan.moves.is_empty());
    }

    #[test]
    fn intermediate_masses_interpolate() {
        let p = System::Fibonacci.tiling().supertile(0, 9).unwrap();
        let alpha = mass_cochain(
            System::Fibonacci,
            &[("a", Scalar::one()), ("b", -Scalar::phi())],
        )
        .unwrap();
        let beta = primitive_1d(&alpha, &p).unwrap().face_values();
        // background mass keeps every tile positive
        let f1 = mass_cochain(System::Fibonacci, &[("a", Scalar::from(2)), ("b", Scalar::one())])
            .unwrap();
        let start = f1.tile_values(&p).unwrap();
        let out = stepwise_plan_from_flux(&beta, &start, &p).unwrap();
        assert_eq!(out.plan.rounds as u64, out.n3);
        let states = simulate_rounds(&out.plan, &start);
        let n3 = Scalar::from(out.n3);
        for (i, state) in states.iter().enumerate() {
            let w = Scalar::from(i) / &n3;
            for t in 0..p.len() {
                let want = &start[t] + &(&w * &(&out.end[t] - &start[t]));
                assert_eq!(state[t], want);
                assert!(state[t] >= out.epsilon);
            }
        }
    }

    #[test]
    fn nonpositive_mass_is_rejected() {
        let p = System::Fibonacci.tiling().supertile(0, 4).unwrap();
        let beta: FaceValues = p
            .faces()
            .iter()
            .map(|f| (f.key.clone(), Scalar::one()))
            .collect();
        let start = vec![Scalar::zero(); p.len()];
        assert!(matches!(
            stepwise_plan_from_flux(&beta, &start, &p),
            Err(Error::NonPositiveMass(_))
        ));
    }
}
