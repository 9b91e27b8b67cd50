//! JSON run reports written by every CLI command.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn timing(&mut self, stage: &str, ms: f64) -> &mut Self {
        self.timings_ms.insert(stage.to_string(), ms);
        self
    }

    /// Records a metric; metrics must be finite.
    pub fn metric(&mut self, key: &str, value: f64) -> Result<&mut Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("metric `{key}`")));
        }
        self.metrics.insert(key.to_string(), value);
        Ok(self)
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// The report without wall-clock timings, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        Self { timings_ms: BTreeMap::new(), ..self.clone() }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }
}
