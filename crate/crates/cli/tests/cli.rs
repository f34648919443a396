use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ccc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccc")).args(args).env_remove("CCC_FIXTURE_DIR").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ccc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_exit_codes() {
    let ok = ccc(&["validate", "p2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], true);

    let drop = ccc(&["validate", "dimension_drop"]);
    assert_eq!(drop.status.code(), Some(1));
    assert!(json(&drop)["errors"][0].as_str().unwrap().contains("drops dimension"));

    let bad = scratch("malformed.json");
    std::fs::write(&bad, "{\"n_rank\": 1,\n  \"beta\": [[1]\n").unwrap();
    let parse = ccc(&["validate", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));
    let err = String::from_utf8_lossy(&parse.stderr);
    assert!(err.contains("malformed.json:"), "{err}");

    assert_eq!(ccc(&["validate", "no_such_fan"]).status.code(), Some(2));
    assert_eq!(ccc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn skeleton_cells_and_svg_are_golden() {
    for name in ["p2", "p1_double"] {
        let svg = scratch(&format!("{name}.svg"));
        let out = ccc(&["skeleton", name, "--svg", svg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(&format!("{name}_skeleton.json")));
        assert_eq!(std::fs::read_to_string(&svg).unwrap(), golden(&format!("{name}_skeleton.svg")));
    }
}

#[test]
fn skeleton_cell_counts() {
    let count = |name: &str| json(&ccc(&["skeleton", name]))["cells"].as_array().unwrap().len();
    // zero section plus one cell per ray and per maximal cone
    assert_eq!(count("p1"), 3);
    assert_eq!(count("p2"), 7);
    // the doubled rays each carry two characters
    assert_eq!(count("p1_double"), 5);
}

#[test]
fn skeleton_svg_is_refused_in_rank_three_but_json_is_printed() {
    let svg = scratch("a3.svg");
    let out = ccc(&["skeleton", "a3", "--svg", svg.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    assert_eq!(json(&out)["n_rank"], 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
    assert!(!svg.exists());
}

#[test]
fn homs_tables() {
    let out = ccc(&["homs", "p1", "--window", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("p1_homs.json"));

    let p2 = json(&ccc(&["homs", "p2", "--pairs", "1,1", "0,0"]));
    assert_eq!(p2["all_match"], true);
    assert_eq!(p2["pairs"].as_array().unwrap().len(), 2);

    assert_eq!(ccc(&["homs", "p1", "--pairs", "0,7"]).status.code(), Some(2));
    assert_eq!(ccc(&["homs", "p1", "--pairs", "0"]).status.code(), Some(2));
}

#[test]
fn cohomology_of_plane_line_bundles() {
    let h = |d: &str| json(&ccc(&["cohomology", "p2", "--divisor", d]))["cohomology"]["totals"].clone();
    assert_eq!(h("0,0,2"), serde_json::json!([6, 0, 0]));
    assert_eq!(h("0,0,-3"), serde_json::json!([0, 0, 1]));
    assert_eq!(h("0,0,-1"), serde_json::json!([0, 0, 0]));
    assert_eq!(ccc(&["cohomology", "p2", "--divisor", "1,x"]).status.code(), Some(2));
}

#[test]
fn verify_full_suite_on_the_plane_passes() {
    let out = ccc(&["verify", "p2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["reports"]["p2"]["checks"].as_object().unwrap().len(), 10);
}

#[test]
fn verify_names_the_failing_check_for_a_corrupted_fixture() {
    let out = ccc(&["verify", "--suite", "corrupted_overlap"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["failing"], serde_json::json!(["corrupted_overlap/validate"]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupted_overlap/validate"));
}

#[test]
fn verify_with_an_empty_selection() {
    let out = ccc(&["verify", "p1", "--checks", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["reports"]["p1"]["checks"].as_object().unwrap().is_empty());
    assert_eq!(ccc(&["verify", "p1", "--checks", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_output_is_independent_of_parallelism() {
    let args = |jobs: &'static str| ["verify", "--suite", "p1,c2z2", "--checks", "hom_match,stacky,skeleton_ss", "--jobs", jobs];
    let one = ccc(&args("1"));
    let four = ccc(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn fixture_directory_override() {
    let dir = scratch("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("p1.json"),
        r#"{"name":"custom","format_version":1,"n_rank":1,"l_rank":1,"beta":[[2]],"rays_hat":[[1],[-1]],"cones_hat":[[0],[1]]}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ccc"))
        .args(["validate", "p1"])
        .env("CCC_FIXTURE_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["fan"]["name"], "custom");
}
