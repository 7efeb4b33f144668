//! The Fibonacci example: mass 1 on every `a` tile against mass φ on every
//! `b` tile.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{PEProbe, PairReport, Verdicts};
use super::{distribution, CaseParts, expectations, radius_series, ratio_grows_linearly, strictly_grows};
use crate::cochain::{discrepancy_series, primitive_1d, primitive_1d_values, mass_cochain, Target, TopCochain};
use crate::error::{Error, Result};
use crate::geometry::{collar_signature, CellRef, FaceKey, Patch, Radius, RegionPart, RegionSpec, System};
use crate::scalar::Scalar;
use crate::transport::solve_pe_coboundary;

pub struct FibonacciCase {
    pub f1: TopCochain,
    pub f2: TopCochain,
    pub expected: Verdicts,
}

pub fn fibonacci_case() -> FibonacciCase {
    let sys = System::Fibonacci;
    FibonacciCase {
        f1: mass_cochain(sys, &[("a", Scalar::one()), ("b", Scalar::zero())]).expect("labels exist"),
        f2: mass_cochain(sys, &[("a", Scalar::zero()), ("b", Scalar::phi())]).expect("labels exist"),
        expected: expectations("fibonacci", "f1->f2"),
    }
}

/// The level-`m` a-supertile as a region with its two endpoints as boundary.
pub fn fibonacci_supertile_region(m: u32) -> RegionSpec {
    RegionSpec::new(
        System::Fibonacci,
        format!("A{m}"),
        vec![RegionPart { proto: 0, level: m, count: 1 }],
        Scalar::from(2),
    )
    .expect("valid region")
}

/// `F_{m+1} − φ·F_m` from the Fibonacci recurrence alone.
pub fn fibonacci_density_oracle(m: u32) -> Scalar {
    let (mut f, mut g) = (BigInt::from(0), BigInt::from(1));
    for _ in 0..m {
        let next = &f + &g;
        f = g;
        g = next;
    }
    // now f = F_m, g = F_{m+1}
    Scalar::from(g) - Scalar::from(f) * Scalar::phi()
}

/// Two vertices with equal collars between which the two masses differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionWitness {
    pub radius_squared: Scalar,
    pub v1: usize,
    pub v2: usize,
    pub x1: Scalar,
    pub x2: Scalar,
    pub signature: String,
    pub int_f1: Scalar,
    pub int_f2: Scalar,
}

impl ObstructionWitness {
    /// `∫f₁` a positive integer, `∫f₂` a positive multiple of φ, and the two
    /// unequal, all checked exactly.
    pub fn is_valid(&self) -> bool {
        self.int_f1.is_positive()
            && self.int_f1.is_integer()
            && self.int_f2.is_positive()
            && self.int_f2.is_integer_multiple_of_phi()
            && self.int_f1 != self.int_f2
    }
}

fn patch_length(patch: &Patch) -> Scalar {
    let sys = patch.tiling();
    match (patch.tiles().first(), patch.tiles().last()) {
        (Some(a), Some(b)) => sys.tile_interval(b).1 - sys.tile_interval(a).0,
        _ => Scalar::zero(),
    }
}

/// Searches the smallest a-supertile of level at least 6 that is longer than
/// `4R`.
pub fn strong_pe_obstruction(radius: &Radius) -> Result<ObstructionWitness> {
    let sys = System::Fibonacci.tiling();
    let four_r_sq = radius.squared() * &Scalar::from(16);
    for level in 6..=40 {
        let patch = sys.supertile(0, level)?;
        let len = patch_length(&patch);
        if &len * &len > four_r_sq {
            return strong_pe_obstruction_in(&patch, radius);
        }
    }
    Err(Error::SearchExhausted(format!("no supertile longer than 4R for R = {}", radius.to_f64())))
}

/// Scans vertices left to right and returns the first pair `(v₁, v₂)`, in
/// lexicographic order, with equal radius-`R` collars and positive `∫f₁`, `∫f₂`
/// between them.
pub fn strong_pe_obstruction_in(patch: &Patch, radius: &Radius) -> Result<ObstructionWitness> {
    if patch.system() != System::Fibonacci {
        return Err(Error::IncompatibleCochains);
    }
    let case = fibonacci_case();
    let p1 = primitive_1d(&case.f1, patch)?;
    let p2 = primitive_1d_values(&case.f2.tile_values(patch)?, patch)?;
    let sigs: Vec<Option<_>> = p1
        .vertices
        .par_iter()
        .map(|x| {
            let face = patch.face(&FaceKey::Vertex(x.clone()))?;
            collar_signature(patch, &CellRef::Face(face), radius).ok()
        })
        .collect();
    let n = sigs.len();
    for i in 0..n {
        let Some(si) = &sigs[i] else { continue };
        for j in i + 1..n {
            if sigs[j].as_ref() != Some(si) {
                continue;
            }
            let w = ObstructionWitness {
                radius_squared: radius.squared().clone(),
                v1: i,
                v2: j,
                x1: p1.vertices[i].clone(),
                x2: p1.vertices[j].clone(),
                signature: si.to_string(),
                int_f1: &p1.values[j] - &p1.values[i],
                int_f2: &p2.values[j] - &p2.values[i],
            };
            if w.is_valid() {
                return Ok(w);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no pair of equal radius-{:.6} collars on a {}-tile patch",
        radius.to_f64(),
        patch.len()
    )))
}

const RADIUS_LEVELS: std::ops::RangeInclusive<u32> = 5..=9;
const PRIMITIVE_LEVELS: std::ops::RangeInclusive<u32> = 8..=15;
const DISCREPANCY_LEVELS: std::ops::RangeInclusive<u32> = 1..=15;
const COLLAR_LEVELS: std::ops::RangeInclusive<u32> = 0..=5;
const PROBE_LEVEL: u32 = 10;

/// sup|β| over the later levels stays within 10% of the earlier levels.
fn primitive_bounded(sups: &[(u32, Scalar)]) -> bool {
    let half = sups.len() / 2;
    let early = sups[..half].iter().map(|(_, s)| s.clone()).max();
    let late = sups[half..].iter().map(|(_, s)| s.clone()).max();
    match (early, late) {
        (Some(e), Some(l)) => l <= e * Scalar::ratio(11, 10),
        _ => false,
    }
}

pub(super) fn run() -> Result<CaseParts> {
    let case = fibonacci_case();
    let alpha = case.f1.sub(&case.f2)?;
    let sys = System::Fibonacci.tiling();

    let radius_series = radius_series(&case.f1, &case.f2, RADIUS_LEVELS)?;

    let regions: Vec<RegionSpec> = DISCREPANCY_LEVELS.map(fibonacci_supertile_region).collect();
    let targets: Vec<Target> = regions.iter().map(Target::Region).collect();
    let discrepancy = discrepancy_series(&alpha, &targets)?;
    let density_ok = discrepancy
        .iter()
        .zip(DISCREPANCY_LEVELS)
        .all(|(d, m)| d.integral == fibonacci_density_oracle(m));
    let bounded = !strictly_grows(&radius_series) && !ratio_grows_linearly(&discrepancy);

    let primitive_sup = PRIMITIVE_LEVELS
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| Ok((m, primitive_1d(&alpha, &sys.supertile(0, m)?)?.sup_abs)))
        .collect::<Result<Vec<_>>>()?;
    let weak_diagnostic = primitive_bounded(&primitive_sup);

    let probe_patch = sys.supertile(0, PROBE_LEVEL)?;
    let probes = COLLAR_LEVELS
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let r = sys.collar_radius(k);
            let solve = solve_pe_coboundary(&alpha, &probe_patch, &r)?;
            let witness = strong_pe_obstruction_in(&probe_patch, &r).ok();
            Ok((
                PEProbe {
                    collar_level: k,
                    radius_squared: r.squared().clone(),
                    classes: solve.classes.len(),
                    core_tiles: solve.core.len(),
                    residual: solve.residual,
                },
                witness,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let strong_somewhere = probes
        .iter()
        .any(|(p, w)| p.residual.is_zero() && w.is_none());
    let witnesses_consistent = probes
        .iter()
        .all(|(p, w)| w.is_none() || !p.residual.is_zero());

    let strongly_pe = bounded && strong_somewhere;
    let computed = Verdicts {
        bounded,
        weakly_pe: bounded && (strongly_pe || weak_diagnostic),
        strongly_pe,
    };
    let (pe_probes, obstructions): (Vec<_>, Vec<_>) = probes.into_iter().unzip();
    let mut notes = vec![
        "weak PE is certified through the bounded primitive on supertiles".to_string(),
    ];
    if !witnesses_consistent {
        notes.push("a collar level has both an exact flux and an obstruction".into());
    }
    let pair = PairReport {
        source: "f1".into(),
        target: "f2".into(),
        computed,
        expected: case.expected,
        matches: computed == case.expected,
        radius_series,
        discrepancy,
        primitive_sup,
        pe_probes,
        obstructions: obstructions.into_iter().flatten().collect(),
        pe_transport: None,
        notes,
    };
    let dists = vec![distribution("f1", &case.f1), distribution("f2", &case.f2)];
    let checks = vec![
        ("∫(f1 − f2) over A_m equals F_{m+1} − φF_m for m = 1..15".to_string(), density_ok),
        ("obstruction witnesses agree with the PE solve".to_string(), witnesses_consistent),
    ];
    Ok((dists, vec![pair], checks))
}
