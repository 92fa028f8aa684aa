//! Verification reports, configuration, and file emitters.

mod config;
mod emit;
mod verify;

pub use config::Config;
pub use emit::*;
pub use verify::run_verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    ProvenExact,
    ProvenByInterpolation {
        lambdas: Vec<String>,
    },
    NumericPass {
        tolerance: String,
    },
    NumericFail {
        tolerance: String,
    },
    /// An exact identity that does not hold, with the first witness found.
    ExactFail {
        witness: String,
    },
    DiscrepancyNoted {
        computed: String,
        printed: String,
    },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::ProvenExact => "proven-exact",
            Status::ProvenByInterpolation { .. } => "proven-by-interpolation",
            Status::NumericPass { .. } => "numeric-pass",
            Status::NumericFail { .. } => "numeric-fail",
            Status::ExactFail { .. } => "exact-fail",
            Status::DiscrepancyNoted { .. } => "discrepancy-noted",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Status::NumericFail { .. } | Status::ExactFail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    pub anchor: String,
    pub module: String,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: BTreeMap<String, String>,
    pub entries: Vec<ReportEntry>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_EXACT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

impl VerificationReport {
    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn discrepancies(&self) -> Vec<&ReportEntry> {
        self.entries.iter().filter(|e| matches!(e.status, Status::DiscrepancyNoted { .. })).collect()
    }

    pub fn failures(&self) -> Vec<&ReportEntry> {
        self.entries.iter().filter(|e| e.status.is_failure()).collect()
    }

    /// 2 if an exact identity failed, else 1 on a numeric failure, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| matches!(e.status, Status::ExactFail { .. })) {
            EXIT_EXACT
        } else if self.entries.iter().any(|e| matches!(e.status, Status::NumericFail { .. })) {
            EXIT_NUMERIC
        } else {
            EXIT_OK
        }
    }

    /// One line per entry.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&format!("{:<24} {:<44} {}\n", e.status.label(), e.name, e.details));
            match &e.status {
                Status::ExactFail { witness } => s.push_str(&format!("    witness: {witness}\n")),
                Status::DiscrepancyNoted { computed, printed } => {
                    s.push_str(&format!("    computed: {computed}\n    printed:  {printed}\n"))
                }
                _ => {}
            }
        }
        s
    }
}

/// Identity names and anchors the suite is expected to report, one per line of
/// the shipped manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub anchor: String,
    pub module: String,
}

pub fn manifest_of(report: &VerificationReport) -> Vec<ManifestEntry> {
    report
        .entries
        .iter()
        .map(|e| ManifestEntry { name: e.name.clone(), anchor: e.anchor.clone(), module: e.module.clone() })
        .collect()
}
