//! Outcome records for window checks.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Result of one bounded check. `pass` holds exactly when no
/// counterexample was recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub params: BTreeMap<String, Value>,
    pub checked: u64,
    pub violations: u64,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub millis: Option<u64>,
}

impl VerificationReport {
    /// Drops the wall time so that reports of identical runs compare equal.
    pub fn without_timing(mut self) -> Self {
        self.millis = None;
        self
    }
}

/// Sums several reports into one; the first failing part supplies the
/// counterexample, prefixed by its lemma.
pub fn merge(lemma: &str, params: BTreeMap<String, Value>, parts: &[VerificationReport]) -> VerificationReport {
    let counterexample = parts
        .iter()
        .find_map(|r| r.counterexample.as_ref().map(|c| format!("{}: {c}", r.lemma)));
    let millis = parts.iter().map(|r| r.millis).sum::<Option<u64>>();
    VerificationReport {
        lemma: lemma.to_string(),
        params,
        checked: parts.iter().map(|r| r.checked).sum(),
        violations: parts.iter().map(|r| r.violations).sum(),
        pass: parts.iter().all(|r| r.pass),
        counterexample,
        millis,
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lemma: {}", self.lemma)?;
        for (k, v) in &self.params {
            writeln!(f, "  {k} = {v}")?;
        }
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "violations: {}", self.violations)?;
        if let Some(cex) = &self.counterexample {
            writeln!(f, "counterexample: {cex}")?;
        }
        if let Some(ms) = self.millis {
            writeln!(f, "millis: {ms}")?;
        }
        write!(f, "pass: {}", self.pass)
    }
}

/// Accumulates obligations for a report; keeps the first failure only.
pub(crate) struct Tally {
    lemma: String,
    params: BTreeMap<String, Value>,
    checked: u64,
    violations: u64,
    first: Option<String>,
    started: Instant,
}

impl Tally {
    pub fn new(lemma: impl Into<String>) -> Self {
        Tally {
            lemma: lemma.into(),
            params: BTreeMap::new(),
            checked: 0,
            violations: 0,
            first: None,
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(counterexample());
            }
        }
        ok
    }

    pub fn finish(self) -> VerificationReport {
        VerificationReport {
            lemma: self.lemma,
            params: self.params,
            checked: self.checked,
            violations: self.violations,
            pass: self.first.is_none(),
            counterexample: self.first,
            millis: Some(self.started.elapsed().as_millis() as u64),
        }
    }
}
