//! The staged solving chain: perception description, adjacency triples,
//! algorithm selection with code generation, execution, and the formatted
//! final answer. Each stage talks to a pluggable backend, so every stage
//! is independently mockable and measurable.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use graphprobe_core::codec::{parse_edge_tuples, render_task_answer, score_edges};
use graphprobe_core::solvers::solve_task;
use graphprobe_core::task::{q3_demand, SubQuestion};
use graphprobe_core::{EdgeTuple, Graph, Query, TaskInstance};
use graphprobe_gateway::{
    build_prompt, Backend, ChatMessage, ChatRequest, GatewayError, PromptMode, PromptSpec,
};
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{run_sandboxed, ExecStatus, ProcessSlots};
use crate::trace::{DprTrace, ExecRecord, ExecutorMode, StepRecord};

/// Mock-script tags for the pipeline stages.
pub const TAG_DESCRIBE: &str = "describe";
pub const TAG_ADJACENCY: &str = "adjacency";
pub const TAG_PLAN: &str = "plan";
pub const TAG_SIMULATE: &str = "simulate";

#[derive(Debug, Error)]
pub enum DprError {
    #[error("invalid pipeline config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// Pipeline settings; backends are passed separately at run time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DprConfig {
    pub executor: ExecutorMode,
    /// Command template for the external interpreter, with `{program}` and
    /// optional `{graph}` placeholders. Graph text is always piped to
    /// stdin as well.
    pub interpreter_cmd: Option<String>,
    pub exec_timeout_secs: u64,
}

impl Default for DprConfig {
    fn default() -> Self {
        DprConfig {
            executor: ExecutorMode::InternalOracle,
            interpreter_cmd: None,
            exec_timeout_secs: 20,
        }
    }
}

impl DprConfig {
    pub fn validate(&self) -> Result<(), DprError> {
        if self.exec_timeout_secs == 0 {
            return Err(DprError::InvalidConfig("timeout must be > 0".into()));
        }
        if self.executor == ExecutorMode::ExternalInterpreter
            && self
                .interpreter_cmd
                .as_deref()
                .map_or(true, |c| c.trim().is_empty())
        {
            return Err(DprError::InvalidConfig(
                "external executor requires an interpreter command".into(),
            ));
        }
        Ok(())
    }
}

/// The two model stages plus the optional process-slot limiter for
/// external executions.
pub struct DprRuntime<'a> {
    pub describer: &'a Backend,
    pub reasoner: &'a Backend,
    pub exec_slots: Option<&'a ProcessSlots>,
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn plain_request<'a>(
    instance_id: &'a str,
    tag: &'a str,
    messages: &'a [ChatMessage],
) -> ChatRequest<'a> {
    ChatRequest {
        instance_id,
        tag,
        messages,
        images: &[],
    }
}

/// Step 1: query the describer with the edge-recognition prompt. Backend
/// failure degrades to an empty description; the run continues.
fn describe(
    instance: &TaskInstance,
    image: &[u8],
    runtime: &DprRuntime<'_>,
) -> (StepRecord<String>, Option<(f64, f64)>) {
    let start = Instant::now();
    let spec = PromptSpec::new(PromptMode::ZeroShot, SubQuestion::Q2);
    let built = match build_prompt(instance, &spec, image) {
        Ok(built) => built,
        Err(e) => return (StepRecord::failed(e.to_string(), elapsed_ms(start)), None),
    };
    let request = ChatRequest {
        instance_id: &instance.id,
        tag: TAG_DESCRIBE,
        messages: &built.0,
        images: &built.1,
    };
    match runtime.describer.chat(&request) {
        Ok(outcome) => {
            let tuples = parse_edge_tuples(
                &outcome.text,
                instance.graph.weighted(),
                instance.graph.directed(),
            );
            let fidelity = score_edges(&instance.graph.edge_set(), &tuples);
            (StepRecord::ok(outcome.text, elapsed_ms(start)), Some(fidelity))
        }
        Err(e) => (StepRecord::failed(e.to_string(), elapsed_ms(start)), None),
    }
}

/// Step 2: ask the reasoner for the adjacency triples given the image and
/// the description, then extract the tuple list.
fn build_adjacency(
    instance: &TaskInstance,
    description: &str,
    runtime: &DprRuntime<'_>,
) -> (StepRecord<Vec<EdgeTuple>>, Option<(f64, f64)>) {
    let start = Instant::now();
    let arity = if instance.graph.weighted() {
        "triples, i.e., (node1, node2, weight)"
    } else {
        "pairs, i.e., (node1, node2)"
    };
    let content = format!(
        "Graph description:\n{description}\n\nCreate the adjacency matrix of the graph \
         according to the visual graph and its description above. Give the adjacency matrix in \
         the form of {arity}, listing every edge of the graph exactly once."
    );
    let messages = [ChatMessage {
        role: "user".into(),
        content,
    }];
    match runtime
        .reasoner
        .chat(&plain_request(&instance.id, TAG_ADJACENCY, &messages))
    {
        Ok(outcome) => {
            let tuples = parse_edge_tuples(
                &outcome.text,
                instance.graph.weighted(),
                instance.graph.directed(),
            );
            if tuples.is_empty() {
                (
                    StepRecord::failed("no tuples extracted", elapsed_ms(start)),
                    None,
                )
            } else {
                let fidelity = score_edges(&instance.graph.edge_set(), &tuples);
                let list: Vec<EdgeTuple> = tuples.into_iter().collect();
                (StepRecord::ok(list, elapsed_ms(start)), Some(fidelity))
            }
        }
        Err(e) => (StepRecord::failed(e.to_string(), elapsed_ms(start)), None),
    }
}

fn plan_regexes() -> (&'static Regex, &'static Regex) {
    static NAME: OnceLock<Regex> = OnceLock::new();
    static BLOCK: OnceLock<Regex> = OnceLock::new();
    (
        NAME.get_or_init(|| Regex::new(r"(?im)^\s*algorithm\s*:\s*(.+)$").unwrap()),
        BLOCK.get_or_init(|| Regex::new(r"(?s)```[a-zA-Z0-9_+-]*\n(.*?)```").unwrap()),
    )
}

/// Step 3: ask the reasoner to pick the algorithm and emit a standalone
/// program that reads the canonical graph text on stdin.
fn plan_algorithm(
    instance: &TaskInstance,
    runtime: &DprRuntime<'_>,
) -> (StepRecord<String>, Option<String>) {
    let start = Instant::now();
    let demand = q3_demand(instance.kind, &instance.query)
        .unwrap_or_else(|| "a single concluding sentence".to_string());
    let content = format!(
        "Select the appropriate graph theory algorithm for the question below and generate the \
         corresponding code for multi-step reasoning.\n\nQuestion: {}\n\nState the chosen \
         algorithm on a line of the form 'Algorithm: <name>'. Then provide one standalone \
         program in a fenced code block. The program must read the graph from standard input \
         (header line 'directed|undirected weighted|unweighted n=<count>', then one edge per \
         line as 'u v' or 'u v w') and print only the final answer, formatted as: {demand}",
        instance.questions[2]
    );
    let messages = [ChatMessage {
        role: "user".into(),
        content,
    }];
    match runtime
        .reasoner
        .chat(&plain_request(&instance.id, TAG_PLAN, &messages))
    {
        Ok(outcome) => {
            let (name_re, block_re) = plan_regexes();
            let name = name_re
                .captures(&outcome.text)
                .map(|c| c[1].trim().to_string());
            let program = block_re
                .captures(&outcome.text)
                .map(|c| c[1].trim().to_string());
            match (name, &program) {
                (Some(name), Some(_)) => (StepRecord::ok(name, elapsed_ms(start)), program),
                (None, Some(_)) => (
                    StepRecord::ok("unnamed".to_string(), elapsed_ms(start)),
                    program,
                ),
                (_, None) => (
                    StepRecord::failed("no program block in response", elapsed_ms(start)),
                    None,
                ),
            }
        }
        Err(e) => (StepRecord::failed(e.to_string(), elapsed_ms(start)), None),
    }
}

/// Reconstructs the perceived graph from adjacency tuples. Node count is
/// inferred from the tuples and the query, never from the gold graph.
pub fn graph_from_adjacency(instance: &TaskInstance, adjacency: &[EdgeTuple]) -> Option<Graph> {
    let mut n = 1;
    for e in adjacency {
        n = n.max(e.a + 1).max(e.b + 1);
    }
    match &instance.query {
        Query::NodePair { source, target } => n = n.max(source + 1).max(target + 1),
        Query::Bipartition { left, right } => {
            for &v in left.iter().chain(right) {
                n = n.max(v + 1);
            }
        }
        Query::Embeddings { vectors } => n = n.max(vectors.len()),
        Query::None => {}
    }
    let cleaned = adjacency
        .iter()
        .filter(|e| e.a != e.b)
        .map(|e| (e.a, e.b, e.weight));
    Graph::new(
        instance.graph.directed(),
        instance.graph.weighted(),
        n,
        cleaned,
    )
    .ok()
}

fn model_simulated(
    instance: &TaskInstance,
    adjacency: &[EdgeTuple],
    runtime: &DprRuntime<'_>,
) -> Result<String, GatewayError> {
    let tuple_list = adjacency
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let demand = q3_demand(instance.kind, &instance.query)
        .map(|d| format!(" (Demand: {d})"))
        .unwrap_or_default();
    let content = format!(
        "Perform multi-step reasoning on the graph given by the adjacency matrix below and \
         answer the question.\nAdjacency matrix: {tuple_list}\nQuestion: {}{demand}",
        instance.questions[2]
    );
    let messages = [ChatMessage {
        role: "user".into(),
        content,
    }];
    runtime
        .reasoner
        .chat(&plain_request(&instance.id, TAG_SIMULATE, &messages))
        .map(|o| o.text)
}

/// Step 4: run the chosen executor over the perceived graph.
fn execute(
    instance: &TaskInstance,
    adjacency: &[EdgeTuple],
    program: Option<&str>,
    config: &DprConfig,
    runtime: &DprRuntime<'_>,
) -> StepRecord<ExecRecord> {
    let start = Instant::now();
    let record = |mode, stdout: String, stderr: String, exit, timed_out, fallback| ExecRecord {
        mode,
        stdout,
        stderr,
        exit_status: exit,
        timed_out,
        fallback_used: fallback,
    };
    match config.executor {
        ExecutorMode::ModelSimulated => match model_simulated(instance, adjacency, runtime) {
            Ok(text) => StepRecord::ok(
                record(ExecutorMode::ModelSimulated, text, String::new(), None, false, false),
                elapsed_ms(start),
            ),
            Err(e) => StepRecord::failed(e.to_string(), elapsed_ms(start)),
        },
        ExecutorMode::InternalOracle => {
            if adjacency.is_empty() {
                return StepRecord::failed("empty adjacency", elapsed_ms(start));
            }
            let Some(graph) = graph_from_adjacency(instance, adjacency) else {
                return StepRecord::failed("adjacency does not form a graph", elapsed_ms(start));
            };
            match solve_task(&graph, instance.kind, &instance.query) {
                Ok(answer) => {
                    let text = render_task_answer(instance.kind, &instance.query, &answer);
                    StepRecord::ok(
                        record(ExecutorMode::InternalOracle, text, String::new(), None, false, false),
                        elapsed_ms(start),
                    )
                }
                Err(e) => StepRecord::failed(
                    format!("oracle on perceived graph: {e}"),
                    elapsed_ms(start),
                ),
            }
        }
        ExecutorMode::ExternalInterpreter => {
            let Some(program) = program else {
                return StepRecord::failed("no program to execute", elapsed_ms(start));
            };
            let Some(command) = config.interpreter_cmd.as_deref() else {
                return StepRecord::failed("no interpreter command", elapsed_ms(start));
            };
            let graph_text = graph_from_adjacency(instance, adjacency)
                .map(|g| g.to_text())
                .unwrap_or_default();
            let output = {
                let _slot = runtime.exec_slots.map(|s| s.acquire());
                run_sandboxed(
                    program,
                    &graph_text,
                    command,
                    Duration::from_secs(config.exec_timeout_secs),
                )
            };
            let failure = match &output.status {
                ExecStatus::Exited(0) if !output.stdout.trim().is_empty() => None,
                ExecStatus::Exited(0) => Some("empty stdout".to_string()),
                ExecStatus::Exited(code) => Some(format!("exit status {code}")),
                ExecStatus::TimedOut => Some("timeout".to_string()),
                ExecStatus::SpawnFailed(e) => Some(format!("spawn failed: {e}")),
            };
            match failure {
                None => StepRecord::ok(
                    record(
                        ExecutorMode::ExternalInterpreter,
                        output.stdout,
                        output.stderr,
                        match output.status {
                            ExecStatus::Exited(code) => Some(code),
                            _ => None,
                        },
                        false,
                        false,
                    ),
                    elapsed_ms(start),
                ),
                Some(reason) => {
                    // External execution failed; fall back to the
                    // model-simulated executor.
                    match model_simulated(instance, adjacency, runtime) {
                        Ok(text) => StepRecord::ok(
                            record(
                                ExecutorMode::ExternalInterpreter,
                                text,
                                format!("{reason}; {}", output.stderr),
                                match output.status {
                                    ExecStatus::Exited(code) => Some(code),
                                    _ => None,
                                },
                                output.status == ExecStatus::TimedOut,
                                true,
                            ),
                            elapsed_ms(start),
                        ),
                        Err(e) => StepRecord::failed(
                            format!("{reason}; fallback failed: {e}"),
                            elapsed_ms(start),
                        ),
                    }
                }
            }
        }
    }
}

/// Runs the full chain: describe, adjacency, plan, execute, finalize.
/// Unrecoverable step failures leave a failure-marked trace with an empty
/// final answer.
pub fn run_dpr(
    instance: &TaskInstance,
    image: &[u8],
    config: &DprConfig,
    runtime: &DprRuntime<'_>,
) -> Result<(String, DprTrace), DprError> {
    config.validate()?;

    let (description, description_fidelity) = describe(instance, image, runtime);
    let description_text = description.value.clone().unwrap_or_default();

    let (adjacency, adjacency_fidelity) =
        build_adjacency(instance, &description_text, runtime);
    let adjacency_tuples = adjacency.value.clone().unwrap_or_default();

    let (algorithm, program) = plan_algorithm(instance, runtime);

    let execution = execute(
        instance,
        &adjacency_tuples,
        program.as_deref(),
        config,
        runtime,
    );

    let final_start = Instant::now();
    let final_answer = match (&execution.status, &execution.value) {
        (crate::trace::StepStatus::Ok, Some(exec)) => {
            StepRecord::ok(exec.stdout.trim().to_string(), elapsed_ms(final_start))
        }
        _ => StepRecord::failed("execution produced no answer", elapsed_ms(final_start)),
    };
    let answer_text = final_answer.value.clone().unwrap_or_default();

    let trace = DprTrace {
        instance_id: instance.id.clone(),
        description,
        description_fidelity,
        adjacency,
        adjacency_fidelity,
        algorithm,
        program,
        execution,
        final_answer,
    };
    Ok((answer_text, trace))
}
