use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const RECORD_FILE: &str = "record";
pub const TABLE_DIR: &str = "tables";

/// A tolerance check. Only asserted checks decide the exit status; the others
/// are reported for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub asserted: bool,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("< {tolerance:e}"),
            asserted: true,
            passed: value < tolerance,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("{target} ± {tolerance}"),
            asserted: true,
            passed: (value - target).abs() <= tolerance,
        }
    }

    pub fn between(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("in [{lo}, {hi}]"),
            asserted: true,
            passed: (lo..=hi).contains(&value),
        }
    }

    pub fn holds(name: impl Into<String>, passed: bool, requirement: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: if passed { 1.0 } else { 0.0 },
            requirement: requirement.into(),
            asserted: true,
            passed,
        }
    }

    pub fn reported(mut self) -> Self {
        self.asserted = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_seconds: u64,
    pub elapsed_seconds: f64,
}

/// CSV table; the header row names the columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

/// What a command produced, before it is stamped and written.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub metrics: BTreeMap<String, f64>,
    pub params: BTreeMap<String, Vec<f64>>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.asserted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub artifact_version: String,
    pub command: String,
    pub passed: bool,
    pub tables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ExperimentConfig>,
    pub timing: Timing,
    pub metrics: BTreeMap<String, f64>,
    pub params: BTreeMap<String, Vec<f64>>,
    pub checks: Vec<Check>,
}

impl RunRecord {
    pub fn new(
        command: &str,
        config: Option<ExperimentConfig>,
        timing: Timing,
        outcome: &Outcome,
    ) -> Self {
        Self {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            passed: outcome.passed(),
            tables: outcome
                .tables
                .iter()
                .map(|t| format!("{TABLE_DIR}/{}", t.file_name()))
                .collect(),
            config,
            timing,
            metrics: outcome.metrics.clone(),
            params: outcome.params.clone(),
            checks: outcome.checks.clone(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let path = if path.is_dir() {
            path.join(RECORD_FILE)
        } else {
            path.to_path_buf()
        };
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Writes `record` and `tables/*.csv` into `dir`, returning the record path.
pub fn persist(dir: &Path, record: &RunRecord, tables: &[Table]) -> Result<PathBuf> {
    let table_dir = dir.join(TABLE_DIR);
    fs::create_dir_all(&table_dir).with_context(|| format!("creating {}", table_dir.display()))?;
    for table in tables {
        let path = table_dir.join(table.file_name());
        let mut w = csv::Writer::from_path(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    let path = dir.join(RECORD_FILE);
    fs::write(&path, toml::to_string(record)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Shortest text that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    v.to_string()
}
