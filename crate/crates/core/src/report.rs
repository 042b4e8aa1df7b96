//! Check reports: one record per identity instance plus a summary.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The instance reaches past the configured truncation.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub check: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
    /// Scope remarks that apply to the whole report.
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    summary: &'a str,
    passed: usize,
    failed: usize,
    skipped: usize,
    checks: BTreeMap<String, CheckSummary>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notes: &'a [String],
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            records: vec![],
            notes: vec![],
        }
    }

    pub fn push(&mut self, check: &str, instance: impl Into<String>, ok: bool, detail: Option<String>) {
        self.records.push(Record {
            check: check.into(),
            instance: instance.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }

    pub fn pass(&mut self, check: &str, instance: impl Into<String>) {
        self.push(check, instance, true, None);
    }

    pub fn fail(&mut self, check: &str, instance: impl Into<String>, detail: impl Into<String>) {
        self.push(check, instance, false, Some(detail.into()));
    }

    pub fn skip(&mut self, check: &str, instance: impl Into<String>, why: impl Into<String>) {
        self.records.push(Record {
            check: check.into(),
            instance: instance.into(),
            status: Status::Skipped,
            detail: Some(why.into()),
        });
    }

    /// Records the outcome of a fallible check; horizon errors become skips.
    pub fn outcome(&mut self, check: &str, instance: impl Into<String>, r: Result<Option<String>, Error>) -> Result<(), Error> {
        match r {
            Ok(None) => self.pass(check, instance),
            Ok(Some(w)) => self.fail(check, instance, w),
            Err(Error::Horizon(why)) => self.skip(check, instance, why),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    /// Qualifies every check name, for merging reports of different maps.
    pub fn prefixed(mut self, prefix: &str) -> Report {
        for r in &mut self.records {
            r.check = format!("{prefix} {}", r.check);
        }
        self
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn summary(&self) -> BTreeMap<String, CheckSummary> {
        let mut out: BTreeMap<String, CheckSummary> = BTreeMap::new();
        for r in &self.records {
            let s = out.entry(r.check.clone()).or_default();
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => {
                    s.failed += 1;
                    if s.first_failure.is_none() {
                        s.first_failure = Some(match &r.detail {
                            Some(d) => format!("{}: {}", r.instance, d),
                            None => r.instance.clone(),
                        });
                    }
                }
                Status::Skipped => s.skipped += 1,
            }
        }
        out
    }

    pub fn check(&self, name: &str) -> CheckSummary {
        self.summary().remove(name).unwrap_or_default()
    }

    /// True when the named check ran at least once and never failed.
    pub fn check_passed(&self, name: &str) -> bool {
        let s = self.check(name);
        s.failed == 0 && s.passed > 0
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("serializable record"));
            out.push('\n');
        }
        let count = |s: Status| self.records.iter().filter(|r| r.status == s).count();
        let summary = SummaryRecord {
            summary: &self.title,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            checks: self.summary(),
            notes: &self.notes,
        };
        out.push_str(&serde_json::to_string(&summary).expect("serializable summary"));
        out.push('\n');
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for (name, s) in self.summary() {
            let verdict = if s.failed > 0 { "FAIL" } else { "pass" };
            let _ = write!(out, "  {name}: {verdict} ({} passed, {} failed", s.passed, s.failed);
            if s.skipped > 0 {
                let _ = write!(out, ", {} beyond truncation", s.skipped);
            }
            out.push(')');
            if let Some(w) = &s.first_failure {
                let _ = write!(out, "\n    witness: {w}");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let mut r = Report::new("demo");
        r.pass("C1", "a");
        r.fail("C1", "b", "mismatch");
        r.skip("C2", "c", "far");
        let s = r.check("C1");
        assert_eq!((s.passed, s.failed), (1, 1));
        assert_eq!(s.first_failure.as_deref(), Some("b: mismatch"));
        assert!(!r.check_passed("C2"));
        let nd = r.to_ndjson();
        assert_eq!(nd.lines().count(), 4);
        assert!(nd.lines().last().unwrap().contains("\"failed\":1"));
    }
}
