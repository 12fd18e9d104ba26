//! Command reports: named verdicts and metrics, each paired with the tolerance
//! it was judged against.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gframe_core::Tolerances;
use serde::Serialize;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metric {
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    /// Name of the metric that decided the verdict.
    pub metric: String,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub command: String,
    pub scenario_label: String,
    pub seed: u64,
    pub exit_code: i32,
    pub verdicts: BTreeMap<String, Verdict>,
    pub metrics: BTreeMap<String, Metric>,
    pub tolerances: Tolerances,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, scenario_label: &str, seed: u64, tolerances: Tolerances) -> Self {
        Report {
            format_version: REPORT_FORMAT_VERSION,
            command: command.into(),
            scenario_label: scenario_label.into(),
            seed,
            exit_code: 0,
            verdicts: BTreeMap::new(),
            metrics: BTreeMap::new(),
            tolerances,
            notes: Vec::new(),
        }
    }

    /// Records a metric; non-finite values are replaced by a note.
    pub fn metric(&mut self, name: &str, value: f64, tolerance: f64) {
        if value.is_finite() {
            self.metrics.insert(name.into(), Metric { value, tolerance });
        } else {
            self.notes.push(format!("{name} is not finite ({value})"));
        }
    }

    pub fn verdict(&mut self, name: &str, passed: bool, metric: &str, tolerance: f64) {
        self.verdicts.insert(
            name.into(),
            Verdict {
                passed,
                metric: metric.into(),
                tolerance,
            },
        );
    }

    /// Records `value` and a verdict that passes when `value ≤ tolerance`.
    pub fn at_most(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        let passed = value <= tolerance;
        self.metric(name, value, tolerance);
        self.verdict(name, passed, name, tolerance);
        passed
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.values().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command   {}", self.command);
        let _ = writeln!(s, "scenario  {}", self.scenario_label);
        let _ = writeln!(s, "seed      {}", self.seed);
        let _ = writeln!(s, "exit      {}", self.exit_code);
        if !self.verdicts.is_empty() {
            let _ = writeln!(s, "\nverdicts");
            for (name, v) in &self.verdicts {
                let mark = if v.passed { "pass" } else { "FAIL" };
                let _ = writeln!(s, "  {name:<34} {mark}  [{} vs {:.1e}]", v.metric, v.tolerance);
            }
        }
        if !self.metrics.is_empty() {
            let _ = writeln!(s, "\nmetrics");
            for (name, m) in &self.metrics {
                let _ = writeln!(s, "  {name:<34} {:>23.15e}  tol {:.1e}", m.value, m.tolerance);
            }
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "\nnotes");
            for n in &self.notes {
                let _ = writeln!(s, "  {n}");
            }
        }
        s
    }
}
