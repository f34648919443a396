//! Versioned suite fixtures. Files are embedded at build time; setting
//! `CCC_FIXTURE_DIR` reads them from that directory instead.

use std::path::PathBuf;

use serde::Deserialize;

use crate::fan::{Condition1Violation, StackyFan, StackyFanSpec};

pub const FIXTURE_DIR_ENV: &str = "CCC_FIXTURE_DIR";
pub const FORMAT_VERSION: u32 = 1;

/// The eight fans of the standard verification suite, in report order.
pub const SUITE: [&str; 8] = ["a1", "a2", "c2z2", "p1", "p1_double", "p2", "p1xp1", "p112"];

const EMBEDDED: &[(&str, &str)] = &[
    ("a1", include_str!("../../../fixtures/a1.json")),
    ("a2", include_str!("../../../fixtures/a2.json")),
    ("a3", include_str!("../../../fixtures/a3.json")),
    ("c2z2", include_str!("../../../fixtures/c2z2.json")),
    ("p1", include_str!("../../../fixtures/p1.json")),
    ("p1_double", include_str!("../../../fixtures/p1_double.json")),
    ("p2", include_str!("../../../fixtures/p2.json")),
    ("p1xp1", include_str!("../../../fixtures/p1xp1.json")),
    ("p112", include_str!("../../../fixtures/p112.json")),
    ("dimension_drop", include_str!("../../../fixtures/dimension_drop.json")),
    ("corrupted_overlap", include_str!("../../../fixtures/corrupted_overlap.json")),
    ("suite", include_str!("../../../fixtures/suite.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture {0}")]
    Unknown(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("fixture {name}: {source}")]
    Parse { name: String, source: serde_json::Error },
    #[error("fixture {name} has format version {found}, expected {FORMAT_VERSION}")]
    Version { name: String, found: u32 },
    #[error("fixture {name} is not a valid stacky fan: {source}")]
    Invalid { name: String, source: Condition1Violation },
}

/// Suite parameters shipped alongside the fans.
#[derive(Debug, Clone, Deserialize)]
pub struct SuiteParams {
    pub format_version: u32,
    pub fans: Vec<String>,
    pub window_radius: i64,
    pub box_radius: i64,
}

fn raw(name: &str) -> Result<String, FixtureError> {
    if let Ok(dir) = std::env::var(FIXTURE_DIR_ENV) {
        let path = PathBuf::from(dir).join(format!("{name}.json"));
        return std::fs::read_to_string(&path).map_err(|source| FixtureError::Io { path, source });
    }
    EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.to_string())
        .ok_or_else(|| FixtureError::Unknown(name.to_string()))
}

pub fn load_spec(name: &str) -> Result<StackyFanSpec, FixtureError> {
    let spec: StackyFanSpec =
        serde_json::from_str(&raw(name)?).map_err(|source| FixtureError::Parse { name: name.into(), source })?;
    if spec.format_version != FORMAT_VERSION {
        return Err(FixtureError::Version { name: name.into(), found: spec.format_version });
    }
    Ok(spec)
}

pub fn load(name: &str) -> Result<StackyFan, FixtureError> {
    StackyFan::from_spec(&load_spec(name)?).map_err(|source| FixtureError::Invalid { name: name.into(), source })
}

pub fn suite_params() -> Result<SuiteParams, FixtureError> {
    let p: SuiteParams =
        serde_json::from_str(&raw("suite")?).map_err(|source| FixtureError::Parse { name: "suite".into(), source })?;
    if p.format_version != FORMAT_VERSION {
        return Err(FixtureError::Version { name: "suite".into(), found: p.format_version });
    }
    Ok(p)
}

/// All suite fans, in suite order.
pub fn suite() -> Result<Vec<StackyFan>, FixtureError> {
    suite_params()?.fans.iter().map(|n| load(n)).collect()
}
