//! Versioned JSON reports.
//!
//! Every report is `{"schema_version", "command", "body", "timings"}`. The
//! body is a deterministic function of the inputs and budget; wall-clock
//! figures live only under `timings`.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::certify::CertReport;
use crate::corpus::CorpusReport;
use crate::egraph::{Budget, BudgetReport, BuildOutcome};
use crate::finalg::AxiomFailure;
use crate::terms::GeneratorProfile;
use crate::variety::VarietyDef;

pub const SCHEMA_VERSION: &str = "vf-report/1";

/// The JSON Schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub body: T,
    pub timings: Timings,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, body: T, elapsed: Duration) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            body,
            timings: Timings { total_ms: elapsed.as_secs_f64() * 1000.0 },
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// The report without `timings`, stable across runs.
    pub fn canonical(&self) -> Value {
        let mut v = self.to_value();
        if let Value::Object(map) = &mut v {
            map.remove("timings");
        }
        v
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorRow {
    pub name: String,
    pub sort: String,
    pub element: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortRow {
    pub sort: String,
    pub size: usize,
    /// Representative terms of the first elements, up to the cap.
    pub elements: Vec<String>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeReport {
    pub variety: String,
    pub profile: String,
    pub status: &'static str,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_size: Option<usize>,
    pub sorts: Vec<SortRow>,
    pub generators: Vec<GeneratorRow>,
    pub rounds: usize,
    pub nodes: usize,
    pub classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_exceeded: Option<BudgetReport>,
}

impl FreeReport {
    pub fn new(v: &VarietyDef, x: &GeneratorProfile, outcome: &BuildOutcome, budget: Budget, max_reps: usize) -> Self {
        let sig = &v.sig;
        let base = FreeReport {
            variety: v.name.clone(),
            profile: x.describe(),
            status: "saturated",
            budget,
            total_size: None,
            sorts: Vec::new(),
            generators: Vec::new(),
            rounds: 0,
            nodes: 0,
            classes: 0,
            budget_exceeded: None,
        };
        match outcome {
            BuildOutcome::Saturated(r) => FreeReport {
                total_size: Some(r.total_size()),
                sorts: sig
                    .sorts()
                    .map(|s| {
                        let reps = &r.reps[s.index()];
                        SortRow {
                            sort: sig.sort_name(s).to_string(),
                            size: reps.len(),
                            elements: reps.iter().take(max_reps).map(|t| t.to_string()).collect(),
                            truncated: reps.len() > max_reps,
                        }
                    })
                    .collect(),
                generators: r
                    .profile
                    .iter()
                    .zip(&r.gen_images)
                    .map(|(var, &e)| GeneratorRow {
                        name: var.name.clone(),
                        sort: sig.sort_name(var.sort).to_string(),
                        element: e,
                    })
                    .collect(),
                rounds: r.stats.rounds.len(),
                nodes: r.stats.nodes,
                classes: r.stats.classes,
                ..base
            },
            BuildOutcome::BudgetExceeded(b) => FreeReport {
                status: "budget-exceeded",
                rounds: b.stats.rounds.len(),
                nodes: b.stats.nodes,
                classes: b.classes,
                budget_exceeded: Some(b.clone()),
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub variety: String,
    pub holds: bool,
    pub sizes: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// 1-based position of the failing axiom.
    pub axiom: usize,
    pub identity: String,
    pub assignment: Vec<GeneratorRow>,
}

impl CheckReport {
    pub fn new(v: &VarietyDef, sizes: &[usize], failure: Option<&AxiomFailure>) -> Self {
        let sig = &v.sig;
        CheckReport {
            variety: v.name.clone(),
            holds: failure.is_none(),
            sizes: sig.sorts().map(|s| (sig.sort_name(s).to_string(), sizes[s.index()])).collect(),
            counterexample: failure.map(|f| Counterexample {
                axiom: f.axiom_index + 1,
                identity: f.axiom.clone(),
                assignment: f
                    .assignment
                    .iter()
                    .map(|(var, e)| GeneratorRow {
                        name: var.name.clone(),
                        sort: sig.sort_name(var.sort).to_string(),
                        element: *e,
                    })
                    .collect(),
            }),
        }
    }
}

pub type CertifyReport = Report<CertReport>;
pub type CorpusRunReport = Report<CorpusReport>;
