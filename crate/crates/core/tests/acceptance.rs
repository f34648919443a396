//! The eight acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed.

use std::time::{Duration, Instant};

use ccc_core::coherent::{line_bundle_cohomology, DivisorData};
use ccc_core::fixtures;
use ccc_core::fan::StackyFan;
use ccc_core::polysheaf::TorusOptions;
use ccc_core::verify::*;
use rayon::prelude::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(reports: &[(String, CheckReport)], allow_skip: bool) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|(_, r)| r.status == Status::Fail || (!allow_skip && r.status == Status::Skipped))
        .map(|(n, r)| format!("{n}: {:?} {}", r.status, r.failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")))
        .collect();
    let ran = reports.iter().filter(|(_, r)| r.status != Status::Skipped).count();
    Outcome { passed: bad.is_empty() && ran > 0, detail: if bad.is_empty() { format!("runs: {ran}") } else { bad.join(" | ") } }
}

fn suite() -> Vec<(String, StackyFan)> {
    fixtures::SUITE.iter().map(|n| (n.to_string(), fixtures::load(n).expect("suite fixture"))).collect()
}

fn per_fan<F>(fans: &[(String, StackyFan)], f: F) -> Vec<(String, CheckReport)>
where
    F: Fn(&StackyFan) -> Result<CheckReport, VerifyError> + Sync,
{
    fans.par_iter()
        .map(|(n, sf)| {
            let r = match f(sf) {
                Ok(r) => r,
                Err(VerifyError::Precondition(p)) => CheckReport::skipped(p),
                Err(e) => {
                    let mut r = CheckReport::default();
                    r.fail(e.to_string());
                    r
                }
            };
            (n.clone(), r)
        })
        .collect()
}

fn hom_formula() -> Outcome {
    let fans = suite();
    outcome(&per_fan(&fans, |sf| verify_hom_match(sf, &face_pairs(sf), 3, &TorusOptions::default())), false)
}

fn unit_lemma() -> Outcome {
    let fans: Vec<_> = ["p1", "p2", "p1xp1"].iter().map(|n| (n.to_string(), fixtures::load(n).unwrap())).collect();
    outcome(&per_fan(&fans, |sf| verify_unit(sf, 3)), false)
}

fn polytope_duality() -> Outcome {
    let r = verify_polytope_duality(&random_boxes(20_240_521, 10)).unwrap_or_else(|e| {
        let mut r = CheckReport::default();
        r.fail(e.to_string());
        r
    });
    outcome(&[("boxes".into(), r)], false)
}

fn vanishing() -> Outcome {
    outcome(&per_fan(&suite(), |sf| verify_vanishing(sf, 3)), false)
}

fn ss_containment() -> Outcome {
    let fans = suite();
    let mut reports = per_fan(&fans, |sf| verify_skeleton_ss(sf, 3));
    reports.extend(per_fan(&fans, |sf| verify_ss_estimate(sf, 3)).into_iter().map(|(n, r)| (format!("{n} estimate"), r)));
    outcome(&reports, false)
}

fn line_bundles() -> Outcome {
    let sf = fixtures::load("p2").unwrap();
    let divisors: Vec<DivisorData> = (-4..=4).map(|d| DivisorData::from_i64(&[0, 0, d])).collect();
    let mut report = verify_line_bundles(&sf, &divisors, 4).unwrap_or_else(|e| {
        let mut r = CheckReport::default();
        r.fail(e.to_string());
        r
    });
    for (d, div) in (-4i64..=4).zip(&divisors) {
        let totals = line_bundle_cohomology(&sf, div, 4).expect("cohomology").totals();
        let at = |p: usize| totals.get(p).copied().unwrap_or(0);
        let h0 = if d >= 0 { ((d + 1) * (d + 2) / 2) as usize } else { 0 };
        let h2 = if d <= -3 { ((-d - 1) * (-d - 2) / 2) as usize } else { 0 };
        if at(0) != h0 || at(1) != 0 || at(2) != h2 {
            report.fail(format!("O({d}): totals {totals:?}, expected h0 = {h0}, h2 = {h2}"));
        }
    }
    outcome(&[("p2".into(), report)], false)
}

fn stability() -> Outcome {
    outcome(&per_fan(&suite(), |sf| verify_stability(sf, 3)), false)
}

fn stacky() -> Outcome {
    let fans = suite();
    let mut reports = per_fan(&fans, |sf| Ok(verify_stacky(sf)));
    for (name, r) in reports.iter_mut() {
        if (name == "c2z2" || name == "p1_double") && !r.notes.iter().any(|n| n.ends_with("H = Z/2")) {
            r.fail("expected a cone with stabilizer Z/2");
        }
    }
    outcome(&reports, false)
}

/// Name, runner and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 hom formula", hom_formula, 120),
        ("2 unit lemma", unit_lemma, 60),
        ("3 polytope duality", polytope_duality, 60),
        ("4 vanishing", vanishing, 60),
        ("5 ss containment", ss_containment, 60),
        ("6 line bundles on P2", line_bundles, 120),
        ("7 stability", stability, 300),
        ("8 stacky arithmetic", stacky, 10),
    ];
    let mut all = true;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let ok = o.passed;
        all &= ok;
        let slow = if elapsed > Duration::from_secs(budget) { format!(" (over the {budget}s budget)") } else { String::new() };
        println!("{} criterion {name}: {} [{:.1}s{slow}]", if ok { "PASS" } else { "FAIL" }, o.detail, elapsed.as_secs_f64());
    }
    if !all {
        eprintln!("some acceptance criteria failed");
        std::process::exit(1);
    }
}
