//! Structured outcomes of probe experiments.
//!
//! A [`ProbeReport`] aggregates named inequality checks. Every evaluation
//! records its *excess*: how far the asserted inequality is from holding
//! (`lhs - rhs` for `lhs <= rhs`, `|a - b|` for equalities). Excess up to the
//! tolerance passes, up to ten times the tolerance is marginal, beyond that it
//! fails.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagrams::PersistenceDiagram;
use crate::probes::ProbeSpec;
use crate::spaces::{MetricSpace, PointRepr};
use crate::transport::MeasureDescriptor;

/// Multiple of the tolerance beyond which a check counts as a genuine
/// counterexample rather than numerical noise.
pub const VIOLATION_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Violated,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub tolerance: f64,
    pub evaluated: usize,
    pub passed: usize,
    pub marginal: usize,
    pub failed: usize,
    /// Largest excess seen; negative values are slack.
    pub worst_excess: f64,
}

impl CheckSummary {
    fn new(name: &str, tolerance: f64) -> Self {
        CheckSummary {
            name: name.to_string(),
            tolerance,
            evaluated: 0,
            passed: 0,
            marginal: 0,
            failed: 0,
            worst_excess: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerRecord {
    pub point: PointRepr,
    pub value: f64,
}

/// A replayable object produced during a probe, with the numbers that were
/// asserted about it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<PersistenceDiagram>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub minimizers: Vec<MinimizerRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: String,
    pub space: Option<MetricSpace>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<CheckSummary>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
    /// Inputs needed to rerun the probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<ProbeSpec>,
    #[serde(default)]
    precondition_failed: bool,
}

impl ProbeReport {
    pub fn new(probe: &str, space: Option<MetricSpace>) -> Self {
        ProbeReport {
            probe: probe.to_string(),
            space,
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::Inconclusive,
            spec: None,
            precondition_failed: false,
        }
    }

    pub fn set_param<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("probe parameters are plain data");
        self.parameters.insert(key.to_string(), v);
    }

    /// Records one evaluation of the check `name`.
    pub fn record(&mut self, name: &str, excess: f64, tolerance: f64) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckSummary::new(name, tolerance));
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.evaluated += 1;
        if excess.is_nan() {
            c.failed += 1;
            c.worst_excess = f64::NAN;
            return;
        }
        if excess <= tolerance {
            c.passed += 1;
        } else if excess <= VIOLATION_FACTOR * tolerance {
            c.marginal += 1;
        } else {
            c.failed += 1;
        }
        if !(c.worst_excess >= excess) {
            c.worst_excess = excess;
        }
    }

    /// Records a boolean assertion: a false `holds` counts as a failure.
    pub fn record_bool(&mut self, name: &str, holds: bool) {
        self.record(name, if holds { 0.0 } else { f64::INFINITY }, 0.0);
    }

    /// Marks the probe as unable to run to completion; the verdict will be
    /// inconclusive.
    pub fn precondition_failed(&mut self, note: impl Into<String>) {
        self.precondition_failed = true;
        self.notes.push(note.into());
    }

    pub fn finalize(&mut self) {
        self.verdict = if self.checks.iter().any(|c| c.failed > 0) {
            Verdict::Violated
        } else if self.precondition_failed
            || self.checks.is_empty()
            || self.checks.iter().any(|c| c.marginal > 0)
        {
            Verdict::Inconclusive
        } else {
            Verdict::Confirmed
        };
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn witness(&self, label: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.label == label)
    }

    /// Largest worst-excess over all checks, the report's headline slack.
    pub fn worst_excess(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.worst_excess)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        let mut r = ProbeReport::new("t", None);
        r.record("a", -1.0, 1e-9);
        r.finalize();
        assert_eq!(r.verdict, Verdict::Confirmed);
        r.record("a", 5e-9, 1e-9);
        r.finalize();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        r.record("b", 1e-7, 1e-9);
        r.finalize();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.check("a").unwrap().marginal, 1);
        assert_eq!(r.check("a").unwrap().worst_excess, 5e-9);
    }

    #[test]
    fn empty_or_blocked_reports_are_inconclusive() {
        let mut r = ProbeReport::new("t", None);
        r.finalize();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        r.record_bool("ok", true);
        r.precondition_failed("isolated point");
        r.finalize();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn nan_excess_fails() {
        let mut r = ProbeReport::new("t", None);
        r.record("a", f64::NAN, 1e-9);
        r.finalize();
        assert_eq!(r.verdict, Verdict::Violated);
    }
}
