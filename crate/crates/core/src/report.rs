//! Command reports with a stable JSON schema and a plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use unicode_width::UnicodeWidthStr;

use crate::dg::DefectReport;
use crate::graded::MultiMap;

pub const REPORT_SCHEMA: u32 = 1;

/// How many defects a check keeps verbatim.
const KEEP_DEFECTS: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportCaps {
    pub degree: i32,
    pub arity: Option<usize>,
    pub length: Option<usize>,
}

/// One operation value `op(input) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub input: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check was skipped.
    pub passed: Option<bool>,
    pub defect_count: usize,
    pub defects: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub model: String,
    pub field: String,
    pub grading: String,
    pub caps: ReportCaps,
    pub betti: BTreeMap<String, Vec<usize>>,
    pub operations: BTreeMap<String, Vec<Entry>>,
    pub values: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, model: &str, field: &str, grading: &str, caps: ReportCaps) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            command: command.into(),
            model: model.into(),
            field: field.into(),
            grading: grading.into(),
            caps,
            ..Report::default()
        }
    }

    pub fn check(&mut self, name: &str, report: &DefectReport) {
        self.checks.push(Check {
            name: name.into(),
            passed: Some(report.is_empty()),
            defect_count: report.defects.len(),
            defects: report.defects.iter().take(KEEP_DEFECTS).map(ToString::to_string).collect(),
        });
    }

    pub fn check_bool(&mut self, name: &str, ok: bool, detail: &str) {
        self.checks.push(Check {
            name: name.into(),
            passed: Some(ok),
            defect_count: usize::from(!ok),
            defects: if ok { vec![] } else { vec![detail.to_string()] },
        });
    }

    pub fn skipped(&mut self, name: &str) {
        self.checks.push(Check { name: name.into(), passed: None, defect_count: 0, defects: vec![] });
    }

    /// Records every nonzero value of a multilinear map in canonical order.
    pub fn table(&mut self, name: &str, map: &MultiMap) {
        let entries = map
            .entries()
            .map(|(t, v)| Entry { input: map.tuple_name(t), value: v.display(map.target()).to_string() })
            .collect();
        self.operations.insert(name.into(), entries);
    }

    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} on {} ({}, {})", self.command, self.model, self.field, self.grading);
        let _ = write!(s, "caps: degree {}", self.caps.degree);
        if let Some(a) = self.caps.arity {
            let _ = write!(s, ", arity {a}");
        }
        if let Some(l) = self.caps.length {
            let _ = write!(s, ", length {l}");
        }
        s.push('\n');
        if !self.betti.is_empty() {
            let width = self.betti.values().map(Vec::len).max().unwrap_or(0);
            let label = self.betti.keys().map(|k| k.width()).max().unwrap_or(0).max(6);
            let _ = write!(s, "\n{:label$}", "degree");
            for q in 0..width {
                let _ = write!(s, " {q:>4}");
            }
            s.push('\n');
            for (name, b) in &self.betti {
                let pad = label - name.width();
                let _ = write!(s, "{name}{}", " ".repeat(pad));
                for x in b {
                    let _ = write!(s, " {x:>4}");
                }
                s.push('\n');
            }
        }
        for (name, entries) in &self.operations {
            let _ = writeln!(s, "\n{name} ({} nonzero)", entries.len());
            for e in entries {
                let _ = writeln!(s, "  {}({}) = {}", name, e.input, e.value);
            }
        }
        if !self.values.is_empty() {
            s.push('\n');
            for (k, v) in &self.values {
                let _ = writeln!(s, "{k}: {v}");
            }
        }
        if !self.checks.is_empty() {
            s.push('\n');
            for c in &self.checks {
                let status = match c.passed {
                    Some(true) => "ok",
                    Some(false) => "FAILED",
                    None => "skipped",
                };
                let _ = writeln!(s, "[{status}] {}", c.name);
                for d in &c.defects {
                    let _ = writeln!(s, "    {d}");
                }
                if c.defect_count > c.defects.len() {
                    let _ = writeln!(s, "    ... {} more", c.defect_count - c.defects.len());
                }
            }
        }
        s
    }
}
