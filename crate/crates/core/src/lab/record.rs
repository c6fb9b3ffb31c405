//! Per-trial records, summaries and CSV output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Value {
    /// CSV cell. Floats keep 17 significant digits so the text round-trips.
    pub fn cell(&self) -> String {
        match self {
            Value::Int(x) => x.to_string(),
            Value::UInt(x) => x.to_string(),
            Value::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Value::Float(x) => x.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Int(x) => Some(x as f64),
            Value::UInt(x) => Some(x as f64),
            Value::Float(x) => Some(x),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Float)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::UInt(x)
    }
}

impl From<u32> for Value {
    fn from(x: u32) -> Self {
        Value::UInt(x.into())
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

/// A named assertion. Hard checks decide the exit status; soft checks are
/// recorded but only reported.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub values: Vec<(String, Value)>,
    pub checks: Vec<Check>,
}

impl TrialRecord {
    pub fn new(trial: usize, seed: u64, n: usize, m: usize, d: usize) -> Self {
        TrialRecord {
            trial,
            seed,
            n,
            m,
            d,
            values: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, value: impl Into<Value>) {
        self.values.push((name.to_string(), value.into()));
    }

    pub fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            hard: true,
        });
    }

    pub fn soft_check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            hard: false,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn float(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(Value::as_f64)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.hard)
    }
}

/// One line of the long-format summary: `group, quantity, value`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub group: String,
    pub quantity: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub name: String,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    /// Aggregate checks over all trials.
    pub checks: Vec<Check>,
}

impl ExperimentOutcome {
    pub fn new(name: &str, records: Vec<TrialRecord>) -> Self {
        ExperimentOutcome {
            name: name.to_string(),
            records,
            summary: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn summarize(&mut self, group: impl Into<String>, quantity: &str, value: impl Into<Value>) {
        self.summary.push(SummaryRow {
            group: group.into(),
            quantity: quantity.to_string(),
            value: value.into(),
        });
    }

    pub fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            hard: true,
        });
    }

    pub fn soft_check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            hard: false,
        });
    }

    /// Every hard check, per trial and aggregate, passed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(TrialRecord::passed)
            && self.checks.iter().all(|c| c.passed || !c.hard)
    }

    /// Names of failed hard checks with their counts, sorted by name.
    pub fn failures(&self) -> Vec<(String, usize)> {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let all = self
            .records
            .iter()
            .flat_map(|r| r.checks.iter())
            .chain(&self.checks);
        for c in all.filter(|c| c.hard && !c.passed) {
            *counts.entry(c.name.clone()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Soft checks that failed at least once, with counts.
    pub fn warnings(&self) -> Vec<(String, usize)> {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let all = self
            .records
            .iter()
            .flat_map(|r| r.checks.iter())
            .chain(&self.checks);
        for c in all.filter(|c| !c.hard && !c.passed) {
            *counts.entry(c.name.clone()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Per-trial CSV. Columns are the fixed identifiers, then every value
    /// name in first-seen order, then one column per check.
    pub fn trials_csv(&self) -> Result<String> {
        let mut columns: Vec<&str> = Vec::new();
        let mut check_columns: Vec<&str> = Vec::new();
        for r in &self.records {
            for (k, _) in &r.values {
                if !columns.contains(&k.as_str()) {
                    columns.push(k);
                }
            }
            for c in &r.checks {
                if !check_columns.contains(&c.name.as_str()) {
                    check_columns.push(&c.name);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["trial", "seed", "n", "m", "d"];
        header.extend(&columns);
        let check_headers: Vec<String> = check_columns.iter().map(|c| format!("check_{c}")).collect();
        header.extend(check_headers.iter().map(String::as_str));
        w.write_record(&header).map_err(csv_error)?;
        for r in &self.records {
            let mut row = vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.d.to_string(),
            ];
            for col in &columns {
                row.push(r.get(col).map_or(String::new(), Value::cell));
            }
            for col in &check_columns {
                let cell = r
                    .checks
                    .iter()
                    .find(|c| c.name == *col)
                    .map_or(String::new(), |c| c.passed.to_string());
                row.push(cell);
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        finish(w)
    }

    /// Long-format summary CSV including aggregate checks.
    pub fn summary_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["group", "quantity", "value"]).map_err(csv_error)?;
        for row in &self.summary {
            w.write_record([row.group.as_str(), &row.quantity, &row.value.cell()])
                .map_err(csv_error)?;
        }
        for c in &self.checks {
            let group = if c.hard { "check" } else { "soft_check" };
            w.write_record([group, &c.name, &c.passed.to_string()])
                .map_err(csv_error)?;
        }
        finish(w)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        msg: e.to_string(),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<csv>".into(),
        msg: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `results.csv` -> `results.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "results".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.summary.csv"))
}

/// Writes the trial CSV to `out` and the summary next to it.
pub fn emit_results(outcome: &ExperimentOutcome, out: &Path) -> Result<PathBuf> {
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })
    };
    write(out, outcome.trials_csv()?)?;
    let summary = summary_path(out);
    write(&summary, outcome.summary_csv()?)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentOutcome {
        let mut a = TrialRecord::new(0, 7, 10, 2, 3);
        a.push("gamma", 0.1f64 + 0.2);
        a.push("label", "x,y");
        a.check("lower", true);
        let mut b = TrialRecord::new(1, 8, 10, 2, 3);
        b.push("gamma", None::<f64>);
        b.push("extra", 4usize);
        b.soft_check("envelope", false);
        let mut out = ExperimentOutcome::new("t", vec![a, b]);
        out.summarize("n=10", "max_gamma", 0.3);
        out.check("aggregate", true);
        out
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1 + 0.2, 1.0 / 3.0, 1e-300, 123456.789, -2.5e10] {
            let cell = Value::Float(x).cell();
            assert_eq!(cell.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn trial_csv_layout() {
        let csv = sample().trials_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "trial,seed,n,m,d,gamma,label,extra,check_lower,check_envelope");
        assert!(lines[1].starts_with("0,7,10,2,3,3.0000000000000004e-1,\"x,y\",,true,"));
        assert_eq!(lines[2], "1,8,10,2,3,,,4,,false");
    }

    #[test]
    fn hard_and_soft() {
        let mut out = sample();
        assert!(out.passed());
        assert_eq!(out.warnings(), vec![("envelope".to_string(), 1)]);
        out.records[0].check("lower", false);
        assert!(!out.passed());
        assert_eq!(out.failures(), vec![("lower".to_string(), 1)]);
    }

    #[test]
    fn summary_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("run.csv");
        let path = emit_results(&sample(), &out).unwrap();
        assert_eq!(path, dir.path().join("run.summary.csv"));
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(
            text,
            "group,quantity,value\nn=10,max_gamma,2.9999999999999999e-1\ncheck,aggregate,true\n"
        );
        let bad = dir.path().join("missing").join("run.csv");
        assert!(matches!(emit_results(&sample(), &bad), Err(Error::Io { .. })));
    }
}
