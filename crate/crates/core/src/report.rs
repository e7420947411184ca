//! Report envelope shared by the CLI and the C ABI.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Big integers travel as decimal strings.
pub fn ser_decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Reported, never fails the run.
    Info,
    SkippedBudget,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
            Status::SkippedBudget => "SKIPPED-BUDGET",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    /// Tabular form for `--format csv`, when the check has one.
    #[serde(skip)]
    pub table: Option<String>,
}

impl Check {
    pub fn new(name: &str, status: Status, summary: impl Into<String>, evidence: impl Serialize) -> Check {
        Check {
            name: name.to_string(),
            status,
            summary: summary.into(),
            evidence: serde_json::to_value(evidence).unwrap_or(Value::Null),
            elapsed_ms: None,
            table: None,
        }
    }

    pub fn with_table(mut self, table: String) -> Check {
        self.table = Some(table);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(config: impl Serialize, checks: Vec<Check>) -> Report {
        let status = overall(&checks);
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            status,
            checks,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => EXIT_MISMATCH,
            Status::SkippedBudget => EXIT_BUDGET,
            Status::Pass | Status::Info => EXIT_PASS,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("{:<15} {}: {}\n", c.status.label(), c.name, c.summary));
        }
        s.push_str(&format!("overall: {}\n", self.status.label()));
        s
    }

    /// The checks' tables if any check has one, else one row per check.
    pub fn to_csv(&self) -> String {
        let tables: Vec<&str> = self.checks.iter().filter_map(|c| c.table.as_deref()).collect();
        if !tables.is_empty() {
            return tables.join("\n");
        }
        let mut s = String::from("check,status,summary\n");
        for c in &self.checks {
            s.push_str(&format!("{},{},\"{}\"\n", c.name, c.status.label(), c.summary.replace('"', "\"\"")));
        }
        s
    }
}

/// Fail beats skipped, skipped beats pass; info counts as pass.
pub fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::SkippedBudget) {
        Status::SkippedBudget
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_and_exit_codes() {
        let pass = Check::new("a", Status::Pass, "", ());
        let info = Check::new("b", Status::Info, "", ());
        let skip = Check::new("c", Status::SkippedBudget, "", ());
        let fail = Check::new("d", Status::Fail, "", ());
        assert_eq!(Report::new((), vec![pass.clone(), info.clone()]).exit_code(), EXIT_PASS);
        assert_eq!(Report::new((), vec![pass.clone(), skip.clone()]).exit_code(), EXIT_BUDGET);
        assert_eq!(Report::new((), vec![skip, fail, info]).exit_code(), EXIT_MISMATCH);
        let r = Report::new((), vec![pass]);
        assert!(r.to_json().contains("\"status\": \"pass\""));
        assert_eq!(r.to_csv(), "check,status,summary\na,PASS,\"\"\n");
    }
}
