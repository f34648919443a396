//! `ccc`: validate stacky fans, draw skeleta, tabulate homs and run the verification suite.
//!
//! Exit status: 0 on success, 1 when validation or a verification check fails, 2 on input
//! errors.

mod input;
mod render;
mod svg;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ccc_core::coherent::{generators, hom_basis, line_bundle_cohomology, DivisorData};
use ccc_core::fan::{build_skeleton, StackyFan};
use ccc_core::fixtures;
use ccc_core::linalg::Int;
use ccc_core::polysheaf::torus_hom;
use ccc_core::verify::{face_pairs, kappa_generator, run_suite, CheckId, CheckReport, SuiteParameters, VerificationReport};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ccc", version, about = "Coherent-constructible workbench for toric stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input is a valid stacky fan.
    Validate { input: String },
    /// Print the skeleton cells modulo M, optionally drawing them.
    Skeleton {
        input: String,
        /// Write an SVG drawing (rank at most 2).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Graded hom dimensions between generators, coherent and constructible side by side.
    Homs {
        input: String,
        /// Generator pairs as `a,b`; defaults to all face pairs.
        #[arg(long, num_args = 1..)]
        pairs: Vec<String>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        window: i64,
    },
    /// Čech cohomology of a line bundle, per M-degree.
    Cohomology {
        input: String,
        /// Divisor coefficients on the rays, comma separated; defaults to zero.
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        window: i64,
    },
    /// Run verification checks and print the report.
    Verify {
        /// Fan files or fixture names.
        inputs: Vec<String>,
        /// Comma-separated fixture names, or `standard` for the shipped suite.
        #[arg(long)]
        suite: Option<String>,
        /// Comma-separated check names; an empty string selects nothing.
        #[arg(long)]
        checks: Option<String>,
        /// Worker threads (0 for one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        window: Option<i64>,
        #[arg(long = "box", value_parser = clap::value_parser!(i64).range(1..))]
        box_radius: Option<i64>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { input } => validate(&input),
        Command::Skeleton { input, svg } => skeleton(&input, svg),
        Command::Homs { input, pairs, window } => homs(&input, &pairs, window),
        Command::Cohomology { input, divisor, window } => cohomology(&input, divisor.as_deref(), window),
        Command::Verify { inputs, suite, checks, jobs, window, box_radius } => {
            verify(&inputs, suite.as_deref(), checks.as_deref(), jobs, window, box_radius)
        }
    }
}

/// Loads and validates; a fan violating the stacky-fan conditions is an input error here.
fn load(input: &str) -> Result<StackyFan> {
    let spec = input::load_spec(input)?;
    input::validate(&spec).with_context(|| format!("{input} is not a valid stacky fan"))
}

fn validate(input: &str) -> Result<Outcome> {
    let spec = input::load_spec(input)?;
    match input::validate(&spec) {
        Ok(sf) => {
            render::print(&json!({ "valid": true, "fan": render::fan_summary(&sf) }));
            Ok(Outcome::Ok)
        }
        Err(e) => {
            render::print(&json!({ "valid": false, "name": spec.name, "errors": [e.to_string()] }));
            Ok(Outcome::Failed)
        }
    }
}

fn skeleton(input: &str, svg_path: Option<PathBuf>) -> Result<Outcome> {
    let sf = load(input)?;
    let cells = build_skeleton(&sf);
    render::print(&json!({
        "name": sf.name(),
        "n_rank": sf.n_rank(),
        "cells": cells.iter().map(render::skeleton_cell).collect::<Vec<_>>(),
    }));
    if let Some(path) = svg_path {
        let Some(svg) = svg::skeleton_svg(&sf, &cells) else {
            bail!("SVG export needs rank at most 2, this fan has rank {}", sf.n_rank());
        };
        std::fs::write(&path, svg).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Outcome::Ok)
}

fn parse_pair(s: &str, count: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else { bail!("pair {s:?} should look like a,b") };
    let (a, b): (usize, usize) = (a.parse().with_context(|| format!("bad pair {s:?}"))?, b.parse().with_context(|| format!("bad pair {s:?}"))?);
    if a >= count || b >= count {
        bail!("unknown generator in pair {s:?}: there are {count} generators");
    }
    Ok((a, b))
}

fn homs(input: &str, pairs: &[String], window: i64) -> Result<Outcome> {
    let sf = load(input)?;
    let gens = generators(&sf);
    let pairs: Vec<(usize, usize)> = if pairs.is_empty() {
        face_pairs(&sf)
    } else {
        pairs.iter().map(|p| parse_pair(p, gens.len())).collect::<Result<_>>()?
    };
    let mut all_match = true;
    let mut tables = Vec::new();
    for (a, b) in pairs {
        let coherent = hom_basis(&sf, &gens[a], &gens[b], window);
        let torus = torus_hom(&kappa_generator(&sf, &gens[a]), &kappa_generator(&sf, &gens[b]), window)?;
        let mut degrees: BTreeMap<Vec<i64>, (bool, BTreeMap<i32, usize>)> = BTreeMap::new();
        for e in &coherent.basis {
            let m: Vec<i64> = e.degree.iter().map(|x| i64::try_from(x).expect("small degree")).collect();
            degrees.entry(m).or_default().0 = true;
        }
        for (m, d) in &torus.dims {
            degrees.entry(m.clone()).or_default().1 = d.clone();
        }
        let rows: Vec<Value> = degrees
            .iter()
            .map(|(m, (c, d))| {
                let matches = *d == if *c { [(0, 1)].into_iter().collect() } else { BTreeMap::new() };
                all_match &= matches;
                json!({ "m": m, "coherent": usize::from(*c), "constructible": render::dims(d), "match": matches })
            })
            .collect();
        all_match &= torus.window_stable;
        tables.push(json!({ "source": a, "target": b, "window_stable": torus.window_stable, "degrees": rows }));
    }
    render::print(&json!({
        "name": sf.name(),
        "window_radius": window,
        "generators": gens.iter().enumerate().map(|(i, g)| render::generator(i, &sf, g)).collect::<Vec<_>>(),
        "pairs": tables,
        "all_match": all_match,
    }));
    Ok(if all_match { Outcome::Ok } else { Outcome::Failed })
}

fn cohomology(input: &str, divisor: Option<&str>, window: i64) -> Result<Outcome> {
    let sf = load(input)?;
    let k = sf.fan_hat().rays().len();
    let coefficients: Vec<Int> = match divisor {
        None => vec![Int::from(0); k],
        Some(s) => s
            .split(',')
            .map(|c| c.trim().parse::<i64>().map(Int::from).with_context(|| format!("bad divisor coefficient {c:?}")))
            .collect::<Result<_>>()?,
    };
    let d = DivisorData::new(coefficients.clone());
    let h = line_bundle_cohomology(&sf, &d, window)?;
    render::print(&json!({ "name": sf.name(), "divisor": render::ints(&coefficients), "cohomology": render::cohomology(&h) }));
    Ok(Outcome::Ok)
}

fn selection(checks: Option<&str>) -> Result<Vec<CheckId>> {
    match checks {
        None => Ok(CheckId::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(|c| CheckId::parse(c).with_context(|| format!("unknown check {c:?}")))
            .collect(),
    }
}

fn verify(
    inputs: &[String],
    suite: Option<&str>,
    checks: Option<&str>,
    jobs: usize,
    window: Option<i64>,
    box_radius: Option<i64>,
) -> Result<Outcome> {
    let selected = selection(checks)?;
    let shipped = fixtures::suite_params()?;
    let params = SuiteParameters {
        window_radius: window.unwrap_or(shipped.window_radius),
        box_radius: box_radius.unwrap_or(shipped.box_radius),
    };
    let mut names: Vec<String> = inputs.to_vec();
    match suite {
        Some("standard") => names.extend(shipped.fans.iter().cloned()),
        Some(list) => names.extend(list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from)),
        None => {}
    }
    if names.is_empty() {
        bail!("nothing to verify: give a fan or --suite");
    }
    let mut reports: BTreeMap<String, VerificationReport> = BTreeMap::new();
    for name in &names {
        let spec = input::load_spec(name)?;
        let label = if spec.name.is_empty() { name.clone() } else { spec.name.clone() };
        let report = match input::validate(&spec) {
            Ok(sf) => run_suite(&label, &sf, &selected, &params, jobs)?,
            Err(e) => {
                let mut check = CheckReport::default();
                check.fail(e.to_string());
                VerificationReport { suite: label.clone(), parameters: params.clone(), checks: [("validate".into(), check)].into() }
            }
        };
        reports.insert(label, report);
    }
    let passed = reports.values().all(VerificationReport::passed);
    let failing: Vec<String> =
        reports.iter().flat_map(|(n, r)| r.failing().into_iter().map(move |c| format!("{n}/{c}"))).collect();
    let reports: serde_json::Map<String, Value> =
        reports.into_iter().map(|(n, r)| (n, serde_json::to_value(&r).expect("report serializes"))).collect();
    render::print(&json!({ "passed": passed, "failing": failing, "reports": reports }));
    if !passed {
        eprintln!("failing checks: {}", failing.join(", "));
    }
    Ok(if passed { Outcome::Ok } else { Outcome::Failed })
}
