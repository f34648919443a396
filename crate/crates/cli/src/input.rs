//! Resolving a command-line input to a validated stacky fan.

use std::path::Path;

use anyhow::{Context, Result};
use ccc_core::fan::{Condition1Violation, StackyFan, StackyFanSpec};
use ccc_core::fixtures;

/// A path to a JSON file, or else the name of a shipped fixture.
pub fn load_spec(input: &str) -> Result<StackyFanSpec> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {input}"))?;
        let mut spec: StackyFanSpec = serde_json::from_str(&text).map_err(|e| parse_error(input, &text, e))?;
        if spec.format_version != fixtures::FORMAT_VERSION {
            anyhow::bail!("{input}: format version {} is not supported", spec.format_version);
        }
        if spec.name.is_empty() {
            spec.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        return Ok(spec);
    }
    fixtures::load_spec(input).with_context(|| format!("{input} is neither a readable file nor a known fixture"))
}

fn parse_error(input: &str, text: &str, e: serde_json::Error) -> anyhow::Error {
    // errors at end of input point past the last line
    let lines: Vec<&str> = text.lines().collect();
    let line = lines.get(e.line().saturating_sub(1)).filter(|l| !l.trim().is_empty()).or(lines.last()).copied().unwrap_or("");
    anyhow::anyhow!("{input}:{}:{}: {e}\n    {line}", e.line(), e.column())
}

pub fn validate(spec: &StackyFanSpec) -> std::result::Result<StackyFan, Condition1Violation> {
    StackyFan::from_spec(spec)
}
