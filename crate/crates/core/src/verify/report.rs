//! Deterministic verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::{fmt_rat, Rat};

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Row key: an `M`-degree, or a rational point written as `"p/q"` strings.
#[derive(Serialize, Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[serde(untagged)]
pub enum Key {
    Lattice(Vec<i64>),
    Point(Vec<String>),
}

impl Key {
    pub fn point(x: &[Rat]) -> Self {
        Key::Point(x.iter().map(fmt_rat).collect())
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct DimRow {
    pub at: Key,
    pub dims: BTreeMap<i32, usize>,
}

pub type DimTable = Vec<DimRow>;

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub status: Status,
    pub parameters: BTreeMap<String, String>,
    pub stability: BTreeMap<String, bool>,
    pub tables: BTreeMap<String, DimTable>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Default for CheckReport {
    fn default() -> Self {
        Self {
            status: Status::Pass,
            parameters: BTreeMap::new(),
            stability: BTreeMap::new(),
            tables: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }
}

impl CheckReport {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Self { status: Status::Skipped, notes: vec![reason.into()], ..Self::default() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.failures.push(message.into());
        self.status = Status::Fail;
    }

    pub fn note(&mut self, message: impl Into<String>) {
        self.notes.push(message.into());
    }

    /// Records a stability flag; an unstable flag fails the check.
    pub fn stable(&mut self, key: impl Into<String>, ok: bool) {
        let key = key.into();
        if !ok {
            self.fail(format!("unstable: {key}"));
        }
        self.stability.insert(key, ok);
    }

    pub fn table(&mut self, name: impl Into<String>, rows: impl IntoIterator<Item = (Key, BTreeMap<i32, usize>)>) {
        let mut rows: DimTable = rows.into_iter().filter(|(_, d)| !d.is_empty()).map(|(at, dims)| DimRow { at, dims }).collect();
        rows.sort_by(|a, b| a.at.cmp(&b.at));
        self.tables.insert(name.into(), rows);
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct SuiteParameters {
    pub window_radius: i64,
    pub box_radius: i64,
}

impl Default for SuiteParameters {
    fn default() -> Self {
        Self { window_radius: 3, box_radius: 3 }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: SuiteParameters,
    pub checks: BTreeMap<String, CheckReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(CheckReport::passed)
    }

    pub fn failing(&self) -> Vec<String> {
        self.checks.iter().filter(|(_, c)| !c.passed()).map(|(k, _)| k.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
