//! The two worked examples, with verdicts recomputed from the transport
//! module and compared against shipped expectations.

mod chair;
mod fibonacci;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use chair::{chair_case, chair_generators, chair_h2_table, on_supertiles, partial_region_oracle, ChairCase, H2Row};
pub use fibonacci::{
    fibonacci_case, fibonacci_density_oracle, fibonacci_supertile_region, strong_pe_obstruction,
    strong_pe_obstruction_in, FibonacciCase, ObstructionWitness,
};
pub use report::{CaseReport, Distribution, PEProbe, PairReport, RadiusPoint, Verdicts};

use crate::cochain::{DiscrepancyPoint, TopCochain, TopRule};
use crate::error::{Error, Result};
use crate::format::float12;
use crate::transport::min_transport_radius;

/// Distributions, pair reports, and extra named checks of one case.
type CaseParts = (Vec<Distribution>, Vec<PairReport>, Vec<(String, bool)>);

const EXPECTATIONS: &str = include_str!("../../fixtures/verdicts.json");

fn expectations(case: &str, pair: &str) -> Verdicts {
    let all: BTreeMap<String, BTreeMap<String, Verdicts>> =
        serde_json::from_str(EXPECTATIONS).expect("shipped fixture parses");
    all[case][pair]
}

fn distribution(name: &str, f: &TopCochain) -> Distribution {
    let sys = f.system().tiling();
    let masses = match f.rule() {
        TopRule::Label(v) => v
            .iter()
            .enumerate()
            .map(|(p, m)| (sys.label(p).to_string(), m.clone()))
            .collect(),
        TopRule::Signature(_) => BTreeMap::new(),
    };
    Distribution { name: name.into(), masses }
}

/// Minimal transport radius on the supertiles of the first prototile.
fn radius_series(
    src: &TopCochain,
    tgt: &TopCochain,
    levels: std::ops::RangeInclusive<u32>,
) -> Result<Vec<RadiusPoint>> {
    let sys = src.system().tiling();
    let levels: Vec<u32> = levels.collect();
    let family = levels
        .iter()
        .map(|&l| sys.supertile(0, l))
        .collect::<Result<Vec<_>>>()?;
    let found = min_transport_radius(src, tgt, &family)?;
    Ok(levels
        .into_iter()
        .zip(found)
        .map(|(level, r)| RadiusPoint {
            level,
            step: r.step,
            radius: float12(r.radius.to_f64()),
        })
        .collect())
}

/// Growth on every step of the family: the signature of unbounded transport.
fn strictly_grows(series: &[RadiusPoint]) -> bool {
    series.len() >= 2 && series.windows(2).all(|w| w[1].step > w[0].step)
}

/// `|∫α| / |∂P|` rising by steps that do not shrink over the last few
/// members: the integral outgrows any constant times the boundary, so α is not
/// well balanced and no bounded transport exists.
fn ratio_grows_linearly(points: &[DiscrepancyPoint]) -> bool {
    let tail = &points[points.len().saturating_sub(5)..];
    let steps: Vec<f64> = tail.windows(2).map(|w| w[1].ratio - w[0].ratio).collect();
    let (lo, hi) = steps
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    !steps.is_empty() && lo > 0.0 && lo >= hi / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    Fibonacci,
    Chair,
}

impl CaseName {
    pub const ALL: [CaseName; 2] = [CaseName::Fibonacci, CaseName::Chair];
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseName::Fibonacci => "fibonacci",
            CaseName::Chair => "chair",
        })
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fibonacci" | "fib" => Ok(CaseName::Fibonacci),
            "chair" => Ok(CaseName::Chair),
            _ => Err(Error::Parse(format!("unknown case '{s}'"))),
        }
    }
}

pub fn run_case(name: CaseName) -> Result<CaseReport> {
    let (distributions, pairs, checks) = match name {
        CaseName::Fibonacci => fibonacci::run()?,
        CaseName::Chair => chair::run()?,
    };
    let matches = pairs.iter().all(|p| p.matches) && checks.iter().all(|(_, ok)| *ok);
    Ok(CaseReport {
        case: name.to_string(),
        distributions,
        pairs,
        checks,
        matches,
    })
}
