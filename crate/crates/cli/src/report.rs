use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::ser::Serializer;
use serde::Serialize;

use crate::number::{g12, round12};

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => g12(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Num(v) if v.is_finite() => s.serialize_f64(round12(*v)),
            Cell::Num(v) => s.serialize_str(&g12(*v)),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(v) => s.serialize_str(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A declared invariant check with its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    /// Errors raised by the library while running the experiment.
    pub failures: Vec<String>,
    pub wall_clock_s: f64,
    #[serde(skip)]
    pub trajectories: Option<Vec<Vec<i64>>>,
}

impl Report {
    pub fn new(experiment: &str, seed: Option<u64>, columns: &[&str]) -> Self {
        Report {
            experiment: experiment.into(),
            seed,
            config: serde_json::Value::Null,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
            failures: Vec::new(),
            wall_clock_s: 0.0,
            trajectories: None,
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(Check::new(name, passed, witness));
    }

    pub fn fail(&mut self, message: impl ToString) {
        self.failures.push(message.to_string());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// Process exit code: 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_field(&c.render())).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable `key = value` summary.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment = {}", self.experiment);
        match self.seed {
            Some(s) => {
                let _ = writeln!(out, "seed = {s}");
            }
            None => out.push_str("seed = none\n"),
        }
        let _ = writeln!(out, "rows = {}", self.rows.len());
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| format!("{k}={}", v.render()))
                .collect();
            let _ = writeln!(out, "row = {}", fields.join(" "));
        }
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(out, "check.{} = {status} ({w})", c.name);
                }
                None => {
                    let _ = writeln!(out, "check.{} = {status}", c.name);
                }
            }
        }
        for f in &self.failures {
            let _ = writeln!(out, "failure = {f}");
        }
        let _ = writeln!(
            out,
            "status = {}",
            if self.passed() { "pass" } else { "FAIL" }
        );
        let _ = writeln!(out, "wall_clock_s = {}", g12(self.wall_clock_s));
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum, serde::Deserialize, Serialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

/// Writes the report into `dir`: `results.csv` and/or `report.json`, plus
/// `trajectories.csv` when raw paths were kept. Returns the written paths.
pub fn emit(report: &Report, dir: &Path, format: Format) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if matches!(format, Format::Csv | Format::Both) {
        let p = dir.join("results.csv");
        fs::write(&p, report.to_csv())?;
        written.push(p);
    }
    if matches!(format, Format::Json | Format::Both) {
        let p = dir.join("report.json");
        fs::write(&p, report.to_json())?;
        written.push(p);
    }
    if let Some(paths) = &report.trajectories {
        let p = dir.join("trajectories.csv");
        let mut s = String::from("sample,t,position\n");
        for (i, path) in paths.iter().enumerate() {
            for (t, x) in path.iter().enumerate() {
                let _ = writeln!(s, "{i},{t},{x}");
            }
        }
        fs::write(&p, s)?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_results_give_header_only_csv() {
        let r = Report::new("eur", Some(1), &["n", "h_x", "h_v", "h_s", "slack"]);
        assert_eq!(r.to_csv(), "n,h_x,h_v,h_s,slack\n");
    }

    #[test]
    fn csv_and_json_share_numbers() {
        let mut r = Report::new("eur", Some(1), &["n", "slack"]);
        r.push_row(vec![Cell::Int(0), Cell::Num(1.0 / 3.0)]);
        assert!(r.to_csv().contains("0.333333333333"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"][0][1].as_f64().unwrap(), 0.333333333333);
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn exit_codes() {
        let mut r = Report::new("x", None, &[]);
        assert_eq!(r.exit_code(), 0);
        r.check("c", false, Some("w".into()));
        assert_eq!(r.exit_code(), 2);
    }
}
