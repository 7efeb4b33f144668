use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::cochain::DiscrepancyPoint;
use crate::format::float12;
use crate::scalar::Scalar;
use crate::transport::PETransportSummary;

use super::fibonacci::ObstructionWitness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub bounded: bool,
    pub weakly_pe: bool,
    pub strongly_pe: bool,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for Verdicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}",
            yes_no(self.bounded),
            yes_no(self.weakly_pe),
            yes_no(self.strongly_pe)
        )
    }
}

/// A named mass distribution: one mass per prototile label.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    pub name: String,
    pub masses: BTreeMap<String, Scalar>,
}

/// Minimal transport radius on one member of a supertile family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusPoint {
    pub level: u32,
    pub step: u64,
    pub radius: String,
}

/// Residual of the PE solve at one collar level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PEProbe {
    pub collar_level: u32,
    pub radius_squared: Scalar,
    pub classes: usize,
    pub core_tiles: usize,
    pub residual: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub computed: Verdicts,
    pub expected: Verdicts,
    pub matches: bool,
    pub radius_series: Vec<RadiusPoint>,
    pub discrepancy: Vec<DiscrepancyPoint>,
    /// `(level, sup |β|)` for the one-dimensional primitive.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primitive_sup: Vec<(u32, Scalar)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pe_probes: Vec<PEProbe>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<ObstructionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pe_transport: Option<PETransportSummary>,
    pub notes: Vec<String>,
}

impl PairReport {
    pub fn label(&self) -> String {
        format!("{}->{}", self.source, self.target)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub distributions: Vec<Distribution>,
    pub pairs: Vec<PairReport>,
    /// Extra exact checks: `(description, holds)`.
    pub checks: Vec<(String, bool)>,
    pub matches: bool,
}

impl CaseReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let labels: Vec<&String> = self
            .distributions
            .first()
            .map(|d| d.masses.keys().collect())
            .unwrap_or_default();
        let _ = writeln!(out, "case {}", self.case);
        let _ = write!(out, "{:<6}", "");
        for l in &labels {
            let _ = write!(out, " {:>12}", l);
        }
        out.push('\n');
        for d in &self.distributions {
            let _ = write!(out, "{:<6}", d.name);
            for l in &labels {
                let _ = write!(out, " {:>12}", short(&d.masses[*l]));
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>10} {:>12} {:>12} {:>6}",
            "pair", "bounded", "weakly-PE", "strongly-PE", "expected", "match"
        );
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{:<8} {:>8} {:>10} {:>12} {:>12} {:>6}",
                p.label(),
                yes_no(p.computed.bounded),
                yes_no(p.computed.weakly_pe),
                yes_no(p.computed.strongly_pe),
                p.expected.to_string(),
                yes_no(p.matches)
            );
        }
        for p in &self.pairs {
            let steps: Vec<String> = p
                .radius_series
                .iter()
                .map(|r| format!("L{}:{}", r.level, r.radius))
                .collect();
            let _ = writeln!(out, "  {} minimal radius {}", p.label(), steps.join(" "));
            if let (Some(first), Some(last)) = (p.discrepancy.first(), p.discrepancy.last()) {
                let _ = writeln!(
                    out,
                    "  {} discrepancy ratio {} {} .. {} {}",
                    p.label(),
                    first.descriptor,
                    float12(first.ratio),
                    last.descriptor,
                    float12(last.ratio)
                );
            }
            if let Some((lvl, sup)) = p.primitive_sup.last() {
                let _ = writeln!(
                    out,
                    "  {} primitive sup|β| on level {lvl}: {}",
                    p.label(),
                    float12(sup.to_f64())
                );
            }
            for w in &p.obstructions {
                let _ = writeln!(
                    out,
                    "  {} obstruction R²={}: ∫f1={} ∫f2={}",
                    p.label(),
                    float12(w.radius_squared.to_f64()),
                    short(&w.int_f1),
                    short(&w.int_f2)
                );
            }
            if let Some(t) = &p.pe_transport {
                let _ = writeln!(
                    out,
                    "  {} PE flux residual {} on {} core tiles, {} rounds, verified {}",
                    p.label(),
                    short(&t.residual),
                    t.core_tiles,
                    t.rounds,
                    yes_no(t.verified)
                );
            }
            for n in &p.notes {
                let _ = writeln!(out, "  {} {n}", p.label());
            }
        }
        for (what, ok) in &self.checks {
            let _ = writeln!(out, "check {what}: {}", if *ok { "ok" } else { "FAILED" });
        }
        let _ = writeln!(out, "verdicts match: {}", yes_no(self.matches));
        out
    }
}

/// `3`, `φ`, `-2φ`, `1/2+φ`: compact human form of a scalar.
fn short(s: &Scalar) -> String {
    let (a, b) = (s.rational_part(), s.phi_part());
    let num = |r: &num_rational::BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    };
    use num_traits::{One, Zero};
    let phi = |r: &num_rational::BigRational| {
        if r.is_one() {
            "φ".to_string()
        } else if (-r).is_one() {
            "-φ".to_string()
        } else {
            format!("{}φ", num(r))
        }
    };
    match (a.is_zero(), b.is_zero()) {
        (_, true) => num(a),
        (true, false) => phi(b),
        (false, false) => {
            let p = phi(b);
            if p.starts_with('-') {
                format!("{}{}", num(a), p)
            } else {
                format!("{}+{}", num(a), p)
            }
        }
    }
}
