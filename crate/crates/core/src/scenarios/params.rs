//! Scenario parameters and the overrides file.
//!
//! The file is UTF-8 text with one `scenario.param = value` per line. Values
//! are hex byte strings (`0x6869`) or decimal integers. Blank lines and lines
//! starting with `#` are ignored.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ScenarioDef;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Bytes,
    Int,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub help: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Bytes(Vec<u8>),
    Int(i64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `scenario.param = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown scenario {scenario:?}")]
    UnknownScenario { line: usize, scenario: String },
    #[error("line {line}: scenario {scenario} has no parameter {param:?}")]
    UnknownParam {
        line: usize,
        scenario: String,
        param: String,
    },
    #[error("line {line}: bad value {value:?}: {reason}")]
    BadValue {
        line: usize,
        value: String,
        reason: String,
    },
}

/// Parameter values for one scenario.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, name: &str, v: ParamValue) -> Self {
        self.0.insert(name.into(), v);
        self
    }

    pub fn bytes(&self, name: &str, default: &[u8]) -> Vec<u8> {
        match self.0.get(name) {
            Some(ParamValue::Bytes(b)) => b.clone(),
            _ => default.to_vec(),
        }
    }

    pub fn int(&self, name: &str, default: i64) -> i64 {
        match self.0.get(name) {
            Some(ParamValue::Int(i)) => *i,
            _ => default,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Parsed overrides, keyed by scenario name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides(BTreeMap<String, Params>);

impl Overrides {
    pub fn parse(text: &str, registry: &[ScenarioDef]) -> Result<Self, ConfigError> {
        let mut out = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (scenario, param) = key.trim().split_once('.').ok_or(ConfigError::Syntax { line })?;
            let value = value.trim();
            let def = registry
                .iter()
                .find(|d| d.name == scenario)
                .ok_or_else(|| ConfigError::UnknownScenario {
                    line,
                    scenario: scenario.into(),
                })?;
            let spec = def
                .params
                .iter()
                .find(|p| p.name == param)
                .ok_or_else(|| ConfigError::UnknownParam {
                    line,
                    scenario: scenario.into(),
                    param: param.into(),
                })?;
            let bad = |reason: &str| ConfigError::BadValue {
                line,
                value: value.into(),
                reason: reason.into(),
            };
            let parsed = match spec.kind {
                ParamKind::Bytes => {
                    let hex_digits = value.strip_prefix("0x").ok_or_else(|| bad("expected a 0x-prefixed hex string"))?;
                    ParamValue::Bytes(hex::decode(hex_digits).map_err(|e| bad(&e.to_string()))?)
                }
                ParamKind::Int => ParamValue::Int(value.parse().map_err(|_| bad("expected an integer"))?),
            };
            let entry = out.0.entry(scenario.to_string()).or_default();
            entry.0.insert(param.to_string(), parsed);
        }
        Ok(out)
    }

    pub fn for_scenario(&self, name: &str) -> Params {
        self.0.get(name).cloned().unwrap_or_default()
    }
}
