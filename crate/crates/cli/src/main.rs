use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tiletransport::casebook::{run_case, CaseName};
use tiletransport::cochain::{
    discrepancy_series, integrate, parse_label_masses, write_discrepancy_csv, Target, TopCochain,
};
use tiletransport::format::float12;
use tiletransport::geometry::{
    chair_partial_region, patch_from_json, patch_to_json, patch_to_svg, Patch, RegionPart,
    RegionSpec, System, Tile, Translation,
};
use tiletransport::transport::{
    grid_step, hall_feasible, min_radius_for_patch, pe_transport, solve_pe_coboundary, verify_plan,
    Certificate, TransportProblem,
};
use tiletransport::Scalar;

/// Exit status for a result that was computed but did not check out.
const VERIFICATION_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "tiletransport", version, about = "Mass transport on Fibonacci and chair tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a supertile and write it as JSON and/or SVG.
    Gen {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Integrate a label cochain over a patch or a chair region `R<n>`.
    Integrate {
        #[command(flatten)]
        patch: PatchArgs,
        #[arg(long)]
        alpha: String,
        /// Chair region such as `R5`, instead of a patch.
        #[arg(long)]
        region: Option<String>,
    },
    /// Integral against boundary measure over a family, as CSV.
    Discrepancy {
        #[arg(long)]
        system: System,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, ignore_case = true, default_value = "supertiles")]
        family: Family,
        #[arg(long)]
        proto: Option<String>,
        #[arg(long, default_value_t = 1)]
        min: u32,
        #[arg(long)]
        max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded transport between two label cochains on a patch.
    Transport {
        #[command(flatten)]
        patch: PatchArgs,
        #[command(flatten)]
        masses: MassArgs,
        /// Radius in grid steps of half the largest tile diameter; searched when absent.
        #[arg(long)]
        radius_step: Option<u64>,
        /// Width of the boundary band, in grid steps.
        #[arg(long, default_value_t = 1)]
        slack_steps: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Solve δβ = α with β constant on face collar classes.
    SolvePe {
        #[command(flatten)]
        patch: PatchArgs,
        #[command(flatten)]
        masses: MassArgs,
        /// α directly, instead of source minus target.
        #[arg(long)]
        alpha: Option<String>,
        /// Collar radius, as a supertile level.
        #[arg(long, default_value_t = 1)]
        collar: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strongly PE transport realized in small rounds, then verified.
    Stepwise {
        #[command(flatten)]
        patch: PatchArgs,
        #[command(flatten)]
        masses: MassArgs,
        #[arg(long, default_value_t = 1)]
        collar: u32,
        /// Mass added to every tile so that no tile runs dry.
        #[arg(long, default_value = "1")]
        background: Scalar,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the worked examples and compare verdicts with expectations.
    Casebook {
        #[arg(long, value_enum, ignore_case = true, default_value = "all")]
        case: CaseChoice,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PatchArgs {
    #[arg(long)]
    system: Option<System>,
    /// Prototile label of the supertile; the first prototile by default.
    #[arg(long)]
    proto: Option<String>,
    #[arg(long)]
    level: Option<u32>,
    /// Patch JSON written by `gen`, instead of a supertile.
    #[arg(long, conflicts_with_all = ["proto", "level"])]
    patch: Option<PathBuf>,
}

#[derive(Args)]
struct MassArgs {
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Chair regions R_min..R_max.
    Rn,
    /// Supertiles of one prototile at levels min..max.
    Supertiles,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseChoice {
    Fibonacci,
    Chair,
    All,
}

impl PatchArgs {
    fn system(&self) -> Result<System> {
        match (self.system, &self.patch) {
            (Some(s), _) => Ok(s),
            (None, Some(_)) => Ok(self.load()?.system()),
            (None, None) => bail!("--system is required"),
        }
    }

    fn load(&self) -> Result<Patch> {
        if let Some(path) = &self.patch {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let patch = patch_from_json(&value)?;
            if let Some(s) = self.system {
                if s != patch.system() {
                    bail!("--system {s} does not match the {} patch", patch.system());
                }
            }
            return Ok(patch);
        }
        let system = self.system.context("--system is required")?;
        let level = self.level.context("--level or --patch is required")?;
        let sys = system.tiling();
        let proto = match &self.proto {
            Some(label) => sys.proto_by_label(label)?,
            None => 0,
        };
        Ok(sys.supertile(proto, level)?)
    }
}

impl MassArgs {
    fn pair(&self, system: System) -> Result<(TopCochain, TopCochain)> {
        let (Some(s), Some(t)) = (&self.source, &self.target) else {
            bail!("--source and --target are required");
        };
        Ok((parse_label_masses(system, s)?, parse_label_masses(system, t)?))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Boundary of a level-`m` supertile: the prototile boundary scaled by the
/// inflation to the power `m·(d − 1)`.
fn supertile_boundary(system: System, proto: usize, m: u32) -> Result<Scalar> {
    let sys = system.tiling();
    let at = match system.dimension() {
        1 => Translation::Line(Scalar::zero()),
        _ => Translation::Grid(0, 0),
    };
    let single = Patch::new(system, vec![Tile { proto, at }])?;
    let mut b = single.boundary_measure();
    for _ in 0..m * (system.dimension() as u32 - 1) {
        b *= &sys.rule.inflation;
    }
    Ok(b)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen { patch, json, svg } => {
            let p = patch.load()?;
            if let Some(path) = &svg {
                write_output(Some(path), &patch_to_svg(&p))?;
            }
            if json.is_some() || svg.is_none() {
                write_output(json.as_deref(), &pretty(&patch_to_json(&p))?)?;
            }
            if json.is_some() || svg.is_some() {
                eprintln!("{} tiles", p.len());
            }
            Ok(0)
        }
        Command::Integrate { patch, alpha, region } => {
            let system = patch.system()?;
            let a = parse_label_masses(system, &alpha)?;
            let (descriptor, value, boundary) = match region {
                Some(name) => {
                    let n: u32 = name
                        .strip_prefix('R')
                        .and_then(|n| n.parse().ok())
                        .with_context(|| format!("region '{name}' is not R<n>"))?;
                    if system != System::Chair {
                        bail!("R<n> regions are chair regions");
                    }
                    let r = chair_partial_region(n)?;
                    (r.descriptor.clone(), integrate(&a, Target::Region(&r))?, r.declared_boundary)
                }
                None => {
                    let p = patch.load()?;
                    ("patch".to_string(), integrate(&a, Target::Patch(&p))?, p.boundary_measure())
                }
            };
            let ratio = (value.abs() / &boundary).to_f64();
            let out = json!({
                "descriptor": descriptor,
                "integral": value,
                "boundary": boundary,
                "ratio": float12(ratio),
            });
            write_output(None, &pretty(&out)?)?;
            Ok(0)
        }
        Command::Discrepancy { system, alpha, family, proto, min, max, out } => {
            let a = parse_label_masses(system, &alpha)?;
            if min > max {
                bail!("--min {min} exceeds --max {max}");
            }
            let regions: Vec<RegionSpec> = match family {
                Family::Rn => {
                    if system != System::Chair {
                        bail!("the Rn family is defined for the chair tiling");
                    }
                    (min.max(1)..=max).map(chair_partial_region).collect::<Result<_, _>>()?
                }
                Family::Supertiles => {
                    let sys = system.tiling();
                    let p = match &proto {
                        Some(l) => sys.proto_by_label(l)?,
                        None => 0,
                    };
                    (min..=max)
                        .map(|m| {
                            Ok(RegionSpec::new(
                                system,
                                format!("{}{m}", sys.label(p)),
                                vec![RegionPart { proto: p, level: m, count: 1 }],
                                supertile_boundary(system, p, m)?,
                            )?)
                        })
                        .collect::<Result<_>>()?
                }
            };
            let targets: Vec<Target> = regions.iter().map(Target::Region).collect();
            let points = discrepancy_series(&a, &targets)?;
            let mut buf = Vec::new();
            write_discrepancy_csv(&points, &mut buf)?;
            write_output(out.as_deref(), &String::from_utf8(buf)?)?;
            Ok(0)
        }
        Command::Transport { patch, masses, radius_step, slack_steps, out, report } => {
            let system = patch.system()?;
            let p = patch.load()?;
            let (src, tgt) = masses.pair(system)?;
            let h = grid_step(system);
            let step = match radius_step {
                Some(k) => k,
                None => min_radius_for_patch(&p, &src, &tgt)?.step,
            };
            let r = h.times(step);
            let problem = TransportProblem::new(&p, &src, &tgt, r.clone(), h.times(slack_steps))?;
            let result = hall_feasible(&problem);
            match &result.certificate {
                Certificate::Flow(plan) => {
                    let check = verify_plan(plan, &problem.source, &problem.target, &p, &r);
                    write_output(out.as_deref(), &pretty(plan)?)?;
                    let summary = json!({
                        "tiles": p.len(),
                        "radius_step": step,
                        "radius": float12(r.to_f64()),
                        "feasible": true,
                        "verification": check,
                    });
                    write_output(report.as_deref(), &pretty(&summary)?)?;
                    if !check.ok {
                        eprintln!("plan failed verification: {}", check.violation.unwrap_or_default());
                        return Ok(VERIFICATION_FAILED);
                    }
                    Ok(0)
                }
                Certificate::Cut(cut) => {
                    let summary = json!({
                        "tiles": p.len(),
                        "radius_step": step,
                        "radius": float12(r.to_f64()),
                        "feasible": false,
                        "cut": cut,
                    });
                    write_output(report.as_deref(), &pretty(&summary)?)?;
                    eprintln!("no transport within radius {}: Hall condition fails", float12(r.to_f64()));
                    Ok(VERIFICATION_FAILED)
                }
            }
        }
        Command::SolvePe { patch, masses, alpha, collar, out } => {
            let system = patch.system()?;
            let p = patch.load()?;
            let a = match alpha {
                Some(a) => parse_label_masses(system, &a)?,
                None => {
                    let (s, t) = masses.pair(system)?;
                    s.sub(&t)?
                }
            };
            let r = system.tiling().collar_radius(collar);
            let solved = solve_pe_coboundary(&a, &p, &r)?;
            write_output(out.as_deref(), &pretty(&solved.summary())?)?;
            Ok(0)
        }
        Command::Stepwise { patch, masses, collar, background, out, report } => {
            let system = patch.system()?;
            let p = patch.load()?;
            let (src, tgt) = masses.pair(system)?;
            let r = system.tiling().collar_radius(collar);
            let t = pe_transport(&src, &tgt, &p, &r, &background)?;
            if let Some(plan) = &t.stepwise {
                write_output(out.as_deref(), &pretty(&plan.plan)?)?;
            }
            write_output(report.as_deref(), &pretty(&t.summary())?)?;
            if !t.ok() {
                eprintln!("no verified strongly PE transport at collar level {collar}");
                return Ok(VERIFICATION_FAILED);
            }
            Ok(0)
        }
        Command::Casebook { case, json } => {
            let names: Vec<CaseName> = match case {
                CaseChoice::Fibonacci => vec![CaseName::Fibonacci],
                CaseChoice::Chair => vec![CaseName::Chair],
                CaseChoice::All => CaseName::ALL.to_vec(),
            };
            let reports = names.into_iter().map(run_case).collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                print!("{}", r.to_text());
            }
            if let Some(path) = &json {
                write_output(Some(path), &pretty(&reports)?)?;
            }
            Ok(if reports.iter().all(|r| r.matches) { 0 } else { VERIFICATION_FAILED })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
