//! The chair example: mass 2 on NE tiles, against mass 1 on NE and SW tiles,
//! against mass 1 on NW and SE tiles.

use num_bigint::BigInt;
use serde::Serialize;

use super::report::{PairReport, Verdicts};
use super::{distribution, CaseParts, expectations, radius_series, ratio_grows_linearly, strictly_grows};
use crate::cochain::{discrepancy_series, integrate, mass_cochain, Target, TopCochain};
use crate::error::Result;
use crate::geometry::{chair_partial_region, RegionPart, RegionSpec, System};
use crate::scalar::Scalar;
use crate::transport::pe_transport;

pub struct ChairCase {
    pub f1: TopCochain,
    pub f2: TopCochain,
    pub f3: TopCochain,
    /// Expected verdicts for `f1->f2`, `f1->f3`, `f2->f3`.
    pub expected: [Verdicts; 3],
}

fn chair(masses: &[(&str, i64)]) -> TopCochain {
    let rule: Vec<(&str, Scalar)> = ["NE", "SE", "SW", "NW"]
        .iter()
        .map(|l| {
            let v = masses.iter().find(|(k, _)| k == l).map_or(0, |(_, v)| *v);
            (*l, Scalar::from(v))
        })
        .collect();
    mass_cochain(System::Chair, &rule).expect("chair labels")
}

pub fn chair_case() -> ChairCase {
    ChairCase {
        f1: chair(&[("NE", 2)]),
        f2: chair(&[("NE", 1), ("SW", 1)]),
        f3: chair(&[("NW", 1), ("SE", 1)]),
        expected: [
            expectations("chair", "f1->f2"),
            expectations("chair", "f1->f3"),
            expectations("chair", "f2->f3"),
        ],
    }
}

/// The counting cochain, `i_NE − i_SW`, `i_NW − i_SE` and
/// `i_NE + i_SW − i_NW − i_SE`, with their names.
pub fn chair_generators() -> [(&'static str, TopCochain); 4] {
    [
        ("count", chair(&[("NE", 1), ("SE", 1), ("SW", 1), ("NW", 1)])),
        ("NE-SW", chair(&[("NE", 1), ("SW", -1)])),
        ("NW-SE", chair(&[("NW", 1), ("SE", -1)])),
        ("NE+SW-NW-SE", chair(&[("NE", 1), ("SW", 1), ("NW", -1), ("SE", -1)])),
    ]
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Row {
    pub m: u32,
    #[serde(serialize_with = "ser_int")]
    pub count: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub ne_minus_sw: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub nw_minus_se: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub balanced: BigInt,
}

fn supertile_region(proto: usize, m: u32) -> RegionSpec {
    RegionSpec::new(
        System::Chair,
        format!("{}^{m}", System::Chair.tiling().label(proto)),
        vec![RegionPart { proto, level: m, count: 1 }],
        Scalar::from(8u64 << m),
    )
    .expect("valid region")
}

fn as_int(s: Scalar) -> BigInt {
    debug_assert!(s.is_integer());
    s.floor()
}

/// Values of the four generators on the NE `m`-supertile, `m = 0..=m_max`.
pub fn chair_h2_table(m_max: u32) -> Result<Vec<H2Row>> {
    let gens = chair_generators();
    (0..=m_max)
        .map(|m| {
            let region = supertile_region(0, m);
            let v = gens
                .iter()
                .map(|(_, g)| integrate(g, Target::Region(&region)).map(as_int))
                .collect::<Result<Vec<_>>>()?;
            let [count, ne_minus_sw, nw_minus_se, balanced]: [BigInt; 4] =
                v.try_into().expect("four generators");
            Ok(H2Row { m, count, ne_minus_sw, nw_minus_se, balanced })
        })
        .collect()
}

/// `∫ α` over the level-`m` supertile of each prototile, in label order.
pub fn on_supertiles(alpha: &TopCochain, m: u32) -> Result<Vec<(String, Scalar)>> {
    let sys = System::Chair.tiling();
    (0..sys.prototiles.len())
        .map(|p| {
            let v = integrate(alpha, Target::Region(&supertile_region(p, m)))?;
            Ok((sys.label(p).to_string(), v))
        })
        .collect()
}

/// `(n − 1)·2ⁿ + 1`.
pub fn partial_region_oracle(n: u32) -> Scalar {
    Scalar::from((BigInt::from(n) - 1) * (BigInt::from(1) << n) + 1)
}

const RADIUS_LEVELS: std::ops::RangeInclusive<u32> = 4..=6;
const REGION_LEVELS: std::ops::RangeInclusive<u32> = 1..=10;
const PE_LEVEL: u32 = 5;

fn pair(
    names: (&str, &str),
    src: &TopCochain,
    tgt: &TopCochain,
    expected: Verdicts,
) -> Result<PairReport> {
    let alpha = src.sub(tgt)?;
    let radius_series = radius_series(src, tgt, RADIUS_LEVELS)?;
    let regions: Vec<RegionSpec> = REGION_LEVELS
        .map(chair_partial_region)
        .collect::<Result<_>>()?;
    let targets: Vec<Target> = regions.iter().map(Target::Region).collect();
    let discrepancy = discrepancy_series(&alpha, &targets)?;
    let mut notes = Vec::new();
    let radius_grows = strictly_grows(&radius_series);
    let not_wb = ratio_grows_linearly(&discrepancy);
    if radius_grows {
        notes.push("minimal radius grows on every level".to_string());
    }
    if not_wb {
        notes.push("discrepancy ratio on R_n grows linearly".to_string());
    }
    let bounded = !radius_grows && !not_wb;
    let transport = if bounded {
        let patch = System::Chair.tiling().supertile(0, PE_LEVEL)?;
        let r = System::Chair.tiling().collar_radius(1);
        Some(pe_transport(src, tgt, &patch, &r, &Scalar::one())?)
    } else {
        notes.push("no bounded transport, so no PE solve".into());
        None
    };
    let strongly_pe = transport.as_ref().is_some_and(|t| t.ok());
    if bounded && !strongly_pe {
        notes.push("bounded, but no verified PE flux at the 1-supertile collar".into());
    }
    let computed = Verdicts {
        bounded,
        weakly_pe: bounded && strongly_pe,
        strongly_pe,
    };
    Ok(PairReport {
        source: names.0.into(),
        target: names.1.into(),
        computed,
        expected,
        matches: computed == expected,
        radius_series,
        discrepancy,
        primitive_sup: Vec::new(),
        pe_probes: Vec::new(),
        obstructions: Vec::new(),
        pe_transport: transport.map(|t| t.summary()),
        notes,
    })
}

pub(super) fn run() -> Result<CaseParts> {
    let case = chair_case();
    let pairs = [
        (("f1", "f2"), &case.f1, &case.f2, case.expected[0]),
        (("f1", "f3"), &case.f1, &case.f3, case.expected[1]),
        (("f2", "f3"), &case.f2, &case.f3, case.expected[2]),
    ];
    let reports = pairs
        .iter()
        .map(|(n, s, t, e)| pair(*n, s, t, *e))
        .collect::<Result<Vec<_>>>()?;
    let a12 = case.f1.sub(&case.f2)?;
    let a23 = case.f2.sub(&case.f3)?;
    let formula_ok = REGION_LEVELS.map(|n| {
        let region = chair_partial_region(n)?;
        Ok(integrate(&a12, Target::Region(&region))? == partial_region_oracle(n))
    })
    .collect::<Result<Vec<bool>>>()?
    .into_iter()
    .all(|b| b);
    let exact_ok = on_supertiles(&a23, 1)?.iter().all(|(_, v)| v.is_zero());
    let checks = vec![
        ("∫(f1 − f2) over R_n equals (n−1)·2ⁿ + 1 for n = 1..10".to_string(), formula_ok),
        ("f2 − f3 integrates to 0 on all four 1-supertiles".to_string(), exact_ok),
    ];
    let dists = vec![
        distribution("f1", &case.f1),
        distribution("f2", &case.f2),
        distribution("f3", &case.f3),
    ];
    Ok((dists, reports, checks))
}
