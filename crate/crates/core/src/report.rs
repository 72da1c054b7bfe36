//! Relation reports and their aggregation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One relation instance on one probe, aggregated over its mode tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub indices: Vec<i64>,
    /// First failing mode tuple; empty when all passed or no modes apply.
    pub modes: Vec<i64>,
    pub mode_window: Option<i64>,
    /// Number of coefficient identities evaluated.
    pub instances: u64,
    pub probe: String,
    pub residual_zero: bool,
    pub budget_valid: bool,
}

impl RelationReport {
    pub fn new(relation: impl Into<String>, indices: Vec<i64>, probe: impl Into<String>) -> Self {
        RelationReport {
            relation: relation.into(),
            indices,
            modes: vec![],
            mode_window: None,
            instances: 0,
            probe: probe.into(),
            residual_zero: true,
            budget_valid: true,
        }
    }

    pub fn status(&self) -> Status {
        if !self.budget_valid {
            Status::Skipped
        } else if self.residual_zero {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Record one checked identity.
    pub fn record(&mut self, modes: &[i64], zero: bool, valid: bool) {
        self.instances += 1;
        if !valid {
            self.budget_valid = false;
        }
        if !zero && self.residual_zero {
            self.residual_zero = false;
            self.modes = modes.to_vec();
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

impl Tally {
    pub fn add(&mut self, s: Status) {
        self.checked += 1;
        match s {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Skipped => self.skipped += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSummary {
    #[serde(flatten)]
    pub tally: Tally,
    pub first_failure: Option<RelationReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub totals: Tally,
    pub relations: BTreeMap<String, RelationSummary>,
    pub config: serde_json::Value,
}

impl SummaryReport {
    pub fn from_reports(reports: &[RelationReport], config: serde_json::Value) -> Self {
        let mut s = SummaryReport { config, ..Default::default() };
        for r in reports {
            let st = r.status();
            s.totals.add(st);
            let entry = s.relations.entry(r.relation.clone()).or_default();
            entry.tally.add(st);
            if st == Status::Fail && entry.first_failure.is_none() {
                entry.first_failure = Some(r.clone());
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.totals.failed == 0
    }
}

/// The last line of a report stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryLine {
    pub summary: SummaryReport,
}

/// Stable ordering used before emitting reports.
pub fn sort_reports(reports: &mut [RelationReport]) {
    reports.sort_by(|a, b| {
        (&a.relation, &a.indices, &a.probe, &a.modes).cmp(&(&b.relation, &b.indices, &b.probe, &b.modes))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_budget_never_passes() {
        let mut r = RelationReport::new("current.e-f", vec![1, 1], "p0");
        r.record(&[0, 0], true, false);
        assert_eq!(r.status(), Status::Skipped);
    }

    #[test]
    fn first_failing_modes_kept() {
        let mut r = RelationReport::new("current.e-e", vec![0, 1], "p0");
        r.record(&[0, 0], true, true);
        r.record(&[1, -1], false, true);
        r.record(&[2, 2], false, true);
        assert_eq!(r.modes, vec![1, -1]);
        assert_eq!(r.instances, 3);
        assert_eq!(r.status(), Status::Fail);
    }

    #[test]
    fn summary_counts() {
        let mut a = RelationReport::new("x", vec![], "p0");
        a.record(&[], false, true);
        let b = RelationReport::new("x", vec![], "p1");
        let s = SummaryReport::from_reports(&[a, b], serde_json::Value::Null);
        assert_eq!(s.totals.checked, 2);
        assert_eq!(s.totals.failed, 1);
        assert_eq!(s.totals.passed + s.totals.failed + s.totals.skipped, s.totals.checked);
        assert!(s.relations["x"].first_failure.is_some());
    }
}
