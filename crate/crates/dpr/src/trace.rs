//! Step-by-step record of one pipeline run. Traces serialize losslessly to
//! JSONL so runs can be audited and re-scored offline.

use graphprobe_core::EdgeTuple;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExecutorMode {
    ModelSimulated,
    ExternalInterpreter,
    InternalOracle,
}

impl ExecutorMode {
    pub fn label(self) -> &'static str {
        match self {
            ExecutorMode::ModelSimulated => "model-simulated",
            ExecutorMode::ExternalInterpreter => "external-interpreter",
            ExecutorMode::InternalOracle => "internal-oracle",
        }
    }
}

impl std::str::FromStr for ExecutorMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "model-simulated" => Ok(ExecutorMode::ModelSimulated),
            "external" | "external-interpreter" => Ok(ExecutorMode::ExternalInterpreter),
            "internal-oracle" => Ok(ExecutorMode::InternalOracle),
            _ => Err(format!("unknown executor mode {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum StepStatus {
    Ok,
    Failed(String),
}

impl StepStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, StepStatus::Ok)
    }
}

/// One pipeline step: outcome, payload when present, wall-clock.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord<T> {
    #[serde(flatten)]
    pub status: StepStatus,
    pub value: Option<T>,
    pub elapsed_ms: u64,
}

impl<T> StepRecord<T> {
    pub fn ok(value: T, elapsed_ms: u64) -> Self {
        StepRecord {
            status: StepStatus::Ok,
            value: Some(value),
            elapsed_ms,
        }
    }

    pub fn failed(reason: impl Into<String>, elapsed_ms: u64) -> Self {
        StepRecord {
            status: StepStatus::Failed(reason.into()),
            value: None,
            elapsed_ms,
        }
    }
}

/// Execution step payload: which executor ran and what it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExecRecord {
    pub mode: ExecutorMode,
    pub stdout: String,
    pub stderr: String,
    pub exit_status: Option<i32>,
    pub timed_out: bool,
    /// Set when external execution failed and the model-simulated fallback
    /// produced the answer instead.
    pub fallback_used: bool,
}

/// The full record of one run: all five steps in pipeline order and
/// exactly one final answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DprTrace {
    pub instance_id: String,
    pub description: StepRecord<String>,
    /// Edge-recognition rates of the description text against gold.
    pub description_fidelity: Option<(f64, f64)>,
    pub adjacency: StepRecord<Vec<EdgeTuple>>,
    /// Edge-recognition rates of the parsed adjacency against gold.
    pub adjacency_fidelity: Option<(f64, f64)>,
    pub algorithm: StepRecord<String>,
    pub program: Option<String>,
    pub execution: StepRecord<ExecRecord>,
    pub final_answer: StepRecord<String>,
}

impl DprTrace {
    /// Names of the steps that did not complete.
    pub fn failed_steps(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.description.status.is_ok() {
            out.push("description");
        }
        if !self.adjacency.status.is_ok() {
            out.push("adjacency");
        }
        if !self.algorithm.status.is_ok() {
            out.push("algorithm");
        }
        if !self.execution.status.is_ok() {
            out.push("execution");
        }
        if !self.final_answer.status.is_ok() {
            out.push("final_answer");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_round_trips_through_json() {
        let trace = DprTrace {
            instance_id: "x".into(),
            description: StepRecord::ok("desc".into(), 3),
            description_fidelity: Some((0.8, 0.2)),
            adjacency: StepRecord::ok(
                vec![EdgeTuple { a: 0, b: 1, weight: Some(4) }],
                5,
            ),
            adjacency_fidelity: Some((1.0, 0.0)),
            algorithm: StepRecord::failed("no block", 1),
            program: None,
            execution: StepRecord::ok(
                ExecRecord {
                    mode: ExecutorMode::InternalOracle,
                    stdout: "out".into(),
                    stderr: String::new(),
                    exit_status: Some(0),
                    timed_out: false,
                    fallback_used: false,
                },
                7,
            ),
            final_answer: StepRecord::ok("answer".into(), 0),
        };
        let json = serde_json::to_string(&trace).unwrap();
        let back: DprTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
    }
}
