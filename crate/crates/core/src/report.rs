use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Display;
use core::time::Duration;

pub const MAX_FAILURE_WITNESSES: usize = 32;

/// Outcome of one verification suite.
///
/// Parameters and counters are kept as decimal strings in sorted maps so
/// that serialisations are byte-stable. A failing report always carries at
/// least one witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub passed: bool,
    pub counters: BTreeMap<String, String>,
    pub witnesses: Vec<String>,
    /// Filled in by drivers that measure time; never set by this crate.
    pub elapsed: Option<Duration>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            params: BTreeMap::new(),
            passed: true,
            counters: BTreeMap::new(),
            witnesses: Vec::new(),
            elapsed: None,
        }
    }

    pub fn param(mut self, name: &str, value: impl Display) -> Self {
        self.params.insert(name.to_string(), value.to_string());
        self
    }

    pub fn counter(&mut self, name: &str, value: impl Display) {
        self.counters.insert(name.to_string(), value.to_string());
    }

    /// Records a witness. Witnesses of failures go through [`Self::fail`].
    pub fn witness(&mut self, text: impl Display) {
        self.witnesses.push(text.to_string());
    }

    /// Marks the report failed. Only the first [`MAX_FAILURE_WITNESSES`]
    /// failure witnesses are kept.
    pub fn fail(&mut self, witness: impl Display) {
        if self.passed || self.witnesses.len() < MAX_FAILURE_WITNESSES {
            self.witness(witness);
        }
        self.passed = false;
    }

    pub fn counter_value(&self, name: &str) -> Option<&str> {
        self.counters.get(name).map(String::as_str)
    }
}
