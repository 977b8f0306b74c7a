//! Deterministic report construction.
//!
//! JSON reports are `serde_json` objects built on the default `BTreeMap`
//! backing, so key order is sorted and two runs with identical inputs
//! serialize to identical bytes. Every report carries `"schema": 1`, and
//! sampled/estimated quantities are nested under a `"heuristic"` key so
//! they can never be mistaken for certified values.

use freeline_core::p1split::SplittingType;
use serde_json::{Map, Value};

/// How a command renders its report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

/// A command report: one JSON object plus the human-readable lines that
/// stand in for it in text mode.
#[derive(Debug, Clone)]
pub struct Report {
    object: Map<String, Value>,
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut object = Map::new();
        object.insert("schema".into(), Value::from(1));
        object.insert("command".into(), Value::from(command));
        Report {
            object,
            lines: Vec::new(),
        }
    }

    /// Set a top-level JSON field.
    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.object.insert(key.into(), value);
        self
    }

    /// Nest a sampled or estimated value under the "heuristic" key.
    pub fn set_heuristic(&mut self, key: &str, value: Value) -> &mut Self {
        let slot = self
            .object
            .entry("heuristic".to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        if let Value::Object(m) = slot {
            m.insert(key.into(), value);
        }
        self
    }

    /// Add a text-mode line.
    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    /// Render to stdout in the requested mode.
    pub fn emit(&self, mode: OutputMode) {
        match mode {
            OutputMode::Json => {
                let v = Value::Object(self.object.clone());
                println!("{}", serde_json::to_string_pretty(&v).expect("valid JSON"));
            }
            OutputMode::Text => {
                for l in &self.lines {
                    println!("{l}");
                }
            }
        }
    }

    pub fn json(&self) -> Value {
        Value::Object(self.object.clone())
    }
}

/// A splitting type as a JSON array of its parts, ascending.
pub fn splitting_value(st: &SplittingType) -> Value {
    Value::Array(st.parts().iter().map(|&e| Value::from(e)).collect())
}
