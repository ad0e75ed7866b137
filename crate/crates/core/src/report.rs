//! Claim-by-claim verification records.

use std::fmt::Display;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported for inspection; not a pass/fail assertion.
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub n: Option<usize>,
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub records: Vec<ClaimRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `expected` against `actual`; passes iff `ok`.
    pub fn check(
        &mut self,
        n: Option<usize>,
        claim: impl Into<String>,
        expected: impl Display,
        actual: impl Display,
        ok: bool,
    ) -> bool {
        self.records.push(ClaimRecord {
            n,
            claim: claim.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
        });
        ok
    }

    pub fn info(&mut self, n: Option<usize>, claim: impl Into<String>, detail: impl Display) {
        self.records.push(ClaimRecord {
            n,
            claim: claim.into(),
            expected: String::new(),
            actual: detail.to_string(),
            status: Status::Info,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&ClaimRecord> {
        self.records.iter().find(|r| r.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn checked(&self) -> usize {
        self.records.iter().filter(|r| r.status != Status::Info).count()
    }
}

/// `[a,b,...]` rendering of a list of chains.
pub(crate) fn chain_list<T: Display>(items: &[T]) -> String {
    let inner: Vec<String> = items.iter().map(|c| format!("({c})")).collect();
    format!("[{}]", inner.join(" "))
}
