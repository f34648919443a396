use ccc_core::coherent::{generators, hom_basis, line_bundle_cohomology, DivisorData};
use ccc_core::fixtures;
use ccc_core::linalg::{rat, Rat};
use ccc_core::polyhedron::LCPolyhedron;
use ccc_core::polysheaf::{same_profile, torus_hom, IndicatorComplex, TorusOptions};
use ccc_core::verify::*;

fn r(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

#[test]
fn hom_match_passes_on_the_projective_line_and_records_both_sides() {
    let sf = fixtures::load("p1").unwrap();
    let pairs = face_pairs(&sf);
    assert_eq!(pairs.len(), 5);
    let rep = verify_hom_match(&sf, &pairs, 3, &TorusOptions::default()).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    let coherent: Vec<_> = rep.tables.values().filter(|t| !t.is_empty()).collect();
    assert!(coherent.len() >= 2 * pairs.len());
    assert!(rep.stability.values().all(|&s| s));
}

#[test]
fn a_wrong_kappa_image_disagrees_with_the_coherent_side() {
    // closed instead of open dual cone: Hom to itself picks up the wrong degrees
    let sf = fixtures::load("a1").unwrap();
    let gens = generators(&sf);
    let g = gens.iter().find(|g| sf.cone(g.cone).dim() == 1).unwrap();
    let wrong = IndicatorComplex::indicator(LCPolyhedron::from_cone(&sf.cone(g.cone).dual(), &g.chi, false), 1);
    let right = kappa_generator(&sf, g);
    let coherent = hom_basis(&sf, g, g, 3);
    let t = torus_hom(&wrong, &right, 3).unwrap();
    let disagree = (-3..=3).any(|m| {
        let expect = coherent.contains_degree(&[m.into()]);
        let got = t.at(&[m]);
        expect != (got == [(0, 1)].into_iter().collect())
    });
    assert!(disagree);
}

#[test]
fn unit_stalks_are_concentrated_at_the_origin() {
    for name in ["p1", "p2", "p1xp1"] {
        let sf = fixtures::load(name).unwrap();
        let rep = verify_unit(&sf, 3).unwrap();
        assert_eq!(rep.status, Status::Pass, "{name}: {:?}", rep.failures);
        let stalks = &rep.tables["stalks"];
        assert_eq!(stalks.len(), 1);
        assert!(matches!(&stalks[0].at, Key::Point(p) if p.iter().all(|c| c == "0")));
    }
}

#[test]
fn unit_is_skipped_on_affine_fans() {
    let sf = fixtures::load("a2").unwrap();
    assert!(matches!(verify_unit(&sf, 3), Err(VerifyError::Precondition(_))));
    let params = SuiteParameters::default();
    assert_eq!(run_check(&sf, CheckId::Unit, &params).unwrap().status, Status::Skipped);
}

#[test]
fn convolution_with_the_structure_sheaf_is_the_identity_on_generators() {
    for name in fixtures::SUITE {
        let sf = fixtures::load(name).unwrap();
        if !sf.fan().is_complete() {
            continue;
        }
        let unit = kappa_structure_sheaf(&sf).unwrap();
        for g in generators(&sf) {
            let e = kappa_generator(&sf, &g);
            let conv = convolve_auto(&e, &unit, 2).unwrap();
            let direct = e.sheaf(r(2)).unwrap();
            assert!(same_profile(&conv.sheaf, &direct).unwrap(), "{name} {}", generator_label(&g));
        }
    }
}

#[test]
fn vanishing_and_its_controls() {
    let sf = fixtures::load("p2").unwrap();
    let rep = verify_vanishing(&sf, 3).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    let controls: Vec<_> = rep.tables.iter().filter(|(k, _)| k.contains("control")).collect();
    assert_eq!(controls.len(), 2);
    assert!(controls.iter().all(|(_, t)| !t.is_empty()));
    let positive: Vec<_> = rep.tables.iter().filter(|(k, _)| !k.contains("control")).collect();
    assert!(!positive.is_empty());
    assert!(positive.iter().all(|(_, t)| t.is_empty()));
}

#[test]
fn monoidal_structure_on_the_projective_plane() {
    let sf = fixtures::load("p2").unwrap();
    let rep = verify_monoidal(&sf, &default_divisor_pairs(&sf), 3).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    assert_eq!(rep.tables.len(), 6);
}

#[test]
fn refinement_of_a_maximal_cone_changes_nothing() {
    let sf = fixtures::load("p1xp1").unwrap();
    let cone = default_refinement_cone(&sf);
    assert!(cone.is_some());
    let rep = verify_refinement(&sf, cone, 3).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    let ray = (0..sf.fan().len()).find(|&c| sf.cone(c).dim() == 1);
    assert!(matches!(verify_refinement(&sf, ray, 3), Err(VerifyError::Precondition(_))));
    let id = verify_refinement(&sf, None, 3).unwrap();
    assert_eq!(id.status, Status::Pass);
}

#[test]
fn skeleton_control_escapes_for_the_affine_line() {
    let sf = fixtures::load("a1").unwrap();
    let rep = verify_skeleton_ss(&sf, 3).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    assert_eq!(rep.stability.get("control escapes skeleton"), Some(&true));
    // generator of the ray: SS is the zero section over (0, ∞) and {0} x R<=0
    let ray = rep.tables.iter().find(|(k, _)| k.starts_with("c1")).map(|(_, t)| t).unwrap();
    assert_eq!(ray.len(), 1);
    assert_eq!(ray[0].at, Key::Point(vec!["0".into(), "xi=[-1]".into()]));
}

#[test]
fn ss_estimate_on_the_plane_fans() {
    for name in ["a2", "p1xp1"] {
        let sf = fixtures::load(name).unwrap();
        let rep = verify_ss_estimate(&sf, 3).unwrap();
        assert_eq!(rep.status, Status::Pass, "{name}: {:?}", rep.failures);
        assert!(!rep.tables.is_empty());
    }
}

#[test]
fn stacky_groups() {
    for (name, group) in [("c2z2", "Z/2"), ("p1_double", "Z/2")] {
        let sf = fixtures::load(name).unwrap();
        let rep = verify_stacky(&sf);
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.notes.iter().any(|n| n.ends_with(&format!("H = {group}"))), "{name}: {:?}", rep.notes);
    }
    let rep = verify_stacky(&fixtures::load("p2").unwrap());
    assert!(rep.notes.iter().all(|n| n.ends_with("H = 0")));
}

#[test]
fn line_bundles_on_the_projective_line() {
    let sf = fixtures::load("p1").unwrap();
    let divisors: Vec<DivisorData> = (-3..=3).map(|d| DivisorData::from_i64(&[0, d])).collect();
    let rep = verify_line_bundles(&sf, &divisors, 4).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
    // O(-2) has h1 = 1 in the single degree m = -1
    let h = line_bundle_cohomology(&sf, &divisors[1], 4).unwrap();
    assert_eq!(h.totals(), vec![0, 1]);
}

#[test]
fn polytope_duality_on_fixed_boxes() {
    let boxes = vec![
        DualityBox { lo: vec![rat(-1, 2)], hi: vec![rat(1, 3)] },
        DualityBox { lo: vec![r(0), rat(1, 4)], hi: vec![rat(1, 2), rat(3, 4)] },
    ];
    let rep = verify_polytope_duality(&boxes).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failures);
}

#[test]
fn random_boxes_are_seeded_and_small() {
    let a = random_boxes(7, 10);
    assert_eq!(a, random_boxes(7, 10));
    assert_eq!(a.iter().filter(|b| b.lo.len() == 1).count(), 5);
    for b in &a {
        for (l, h) in b.lo.iter().zip(&b.hi) {
            assert!(h > l && h - l < r(1) && *l >= r(-2) && *l <= r(1));
        }
    }
}

#[test]
fn suite_report_is_deterministic_and_keyed_by_check() {
    let sf = fixtures::load("p1").unwrap();
    let params = SuiteParameters::default();
    let a = run_suite("p1", &sf, &CheckId::ALL, &params, 1).unwrap();
    let b = run_suite("p1", &sf, &CheckId::ALL, &params, 4).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.passed(), "{:?}", a.failing());
    assert_eq!(a.checks.len(), CheckId::ALL.len());
    let empty = run_suite("p1", &sf, &[], &params, 1).unwrap();
    assert!(empty.checks.is_empty() && empty.passed());
}

#[test]
fn check_names_round_trip() {
    for c in CheckId::ALL {
        assert_eq!(CheckId::parse(c.name()), Some(c));
    }
    assert_eq!(CheckId::parse("nope"), None);
}
