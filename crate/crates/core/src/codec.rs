//! Free-text answer parsing, witness verification and metric computation.
//!
//! Parsers are total: arbitrary text never aborts, it just fails to parse
//! and the item is scored incorrect. Matching against gold is defined by
//! verifiers over the graph, never by string equality, so any valid
//! certificate earns credit regardless of which one the solver would pick.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeTuple, Graph};
use crate::task::{
    DifficultyTier, Query, SubQuestion, TaskAnswer, TaskInstance, TaskKind,
};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("parsed answer shape does not match task kind {kind}")]
    KindMismatch { kind: TaskKind },
}

/// Structured extraction of one free-text response.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsedResponse {
    pub sub_question: SubQuestion,
    pub node_count: Option<u64>,
    pub edge_tuples: Option<BTreeSet<EdgeTuple>>,
    pub task_answer: Option<TaskAnswer>,
    pub raw_text: String,
    pub parse_ok: bool,
}

impl ParsedResponse {
    /// Runs the extractor appropriate for the sub-question.
    pub fn extract(instance: &TaskInstance, sub: SubQuestion, text: &str) -> Self {
        let mut parsed = ParsedResponse {
            sub_question: sub,
            node_count: None,
            edge_tuples: None,
            task_answer: None,
            raw_text: text.to_string(),
            parse_ok: false,
        };
        match sub {
            SubQuestion::Q1 => {
                parsed.node_count = parse_node_count(text);
                parsed.parse_ok = parsed.node_count.is_some();
            }
            SubQuestion::Q2 => {
                let tuples = parse_edge_tuples(
                    text,
                    instance.graph.weighted(),
                    instance.graph.directed(),
                );
                parsed.parse_ok = !tuples.is_empty();
                parsed.edge_tuples = Some(tuples);
            }
            SubQuestion::Q3 => {
                parsed.task_answer = parse_task_answer(text, instance.kind);
                parsed.parse_ok = parsed.task_answer.is_some();
            }
        }
        parsed
    }
}

fn regexes() -> &'static Regexes {
    static CELL: OnceLock<Regexes> = OnceLock::new();
    CELL.get_or_init(Regexes::new)
}

struct Regexes {
    standalone_int: Regex,
    tuple: Regex,
    yes_no: Regex,
    node_run: Regex,
    vector2: Regex,
}

impl Regexes {
    fn new() -> Self {
        Regexes {
            standalone_int: Regex::new(r"\b\d+\b").unwrap(),
            tuple: Regex::new(r"[(<]\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*(\d+)\s*)?[)>]").unwrap(),
            yes_no: Regex::new(r"(?i)\b(yes|no)\b").unwrap(),
            // Two or more integers linked by arrow/comma/dash separators.
            node_run: Regex::new(r"\d+(?:\s*(?:,|->|→|-|⇒|=>|to)\s*\d+)+").unwrap(),
            vector2: Regex::new(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]").unwrap(),
        }
    }
}

/// Last standalone decimal integer in the text, if any.
pub fn parse_node_count(text: &str) -> Option<u64> {
    regexes()
        .standalone_int
        .find_iter(text)
        .last()
        .and_then(|m| m.as_str().parse().ok())
}

/// All parenthesized or angle-bracketed integer tuples of the arity implied
/// by `weighted` (2 or 3 elements), canonicalized and deduplicated. Tuples
/// of the wrong arity are ignored.
pub fn parse_edge_tuples(text: &str, weighted: bool, directed: bool) -> BTreeSet<EdgeTuple> {
    let mut out = BTreeSet::new();
    for cap in regexes().tuple.captures_iter(text) {
        let a: usize = match cap[1].parse() {
            Ok(v) => v,
            Err(_) => continue,
        };
        let b: usize = match cap[2].parse() {
            Ok(v) => v,
            Err(_) => continue,
        };
        let w: Option<u64> = cap.get(3).and_then(|m| m.as_str().parse().ok());
        match (weighted, w) {
            (false, None) => {
                out.insert(EdgeTuple::canonical(a, b, None, directed));
            }
            (true, Some(w)) => {
                out.insert(EdgeTuple::canonical(a, b, Some(w), directed));
            }
            _ => {} // wrong arity for this graph type
        }
    }
    out
}

fn parse_node_run(text: &str) -> Option<Vec<usize>> {
    let m = regexes().node_run.find_iter(text).last()?;
    let ids: Vec<usize> = regexes()
        .standalone_int
        .find_iter(m.as_str())
        .filter_map(|t| t.as_str().parse().ok())
        .collect();
    (ids.len() >= 2).then_some(ids)
}

/// Yes/no verdict plus the witness sequence trailing the verdict, anchored
/// on the `... is` clause of the answer templates when present.
fn parse_yes_no_witness(text: &str) -> Option<TaskAnswer> {
    let verdict = regexes().yes_no.find_iter(text).last()?;
    let answer = verdict.as_str().eq_ignore_ascii_case("yes");
    if !answer {
        return Some(TaskAnswer::YesNoWitness {
            answer: false,
            witness: None,
        });
    }
    // Work on a lowercased copy throughout; offsets into the original are
    // not byte-compatible after case folding.
    let tail = text[verdict.end()..].to_lowercase();
    let anchored = ["path is", "cycle is"]
        .iter()
        .filter_map(|anchor| tail.rfind(anchor).map(|pos| &tail[pos + anchor.len()..]))
        .min_by_key(|rest| rest.len());
    let witness = anchored
        .and_then(parse_node_run)
        .or_else(|| parse_node_run(&tail));
    Some(TaskAnswer::YesNoWitness {
        answer: true,
        witness,
    })
}

/// Kind-specific extraction of the task answer; `None` when the text does
/// not contain one.
pub fn parse_task_answer(text: &str, kind: TaskKind) -> Option<TaskAnswer> {
    match kind {
        TaskKind::Connectivity | TaskKind::Cycle | TaskKind::HamiltonPath => {
            parse_yes_no_witness(text)
        }
        TaskKind::TopoSort => parse_node_run(text).map(|order| TaskAnswer::TopoOrder { order }),
        TaskKind::ShortestPath => {
            let path = parse_node_run(text)?;
            let total = parse_node_count(text)?;
            Some(TaskAnswer::PathWeight { path, total })
        }
        TaskKind::MaxFlow => parse_node_count(text).map(|value| TaskAnswer::FlowValue { value }),
        TaskKind::BipartiteMatching => {
            let pairs: Vec<(usize, usize)> = regexes()
                .tuple
                .captures_iter(text)
                .filter(|cap| cap.get(3).is_none())
                .filter_map(|cap| Some((cap[1].parse().ok()?, cap[2].parse().ok()?)))
                .collect();
            (!pairs.is_empty()).then_some(TaskAnswer::Matching { pairs })
        }
        TaskKind::Gnn => {
            let vectors: Vec<[i64; 2]> = regexes()
                .vector2
                .captures_iter(text)
                .filter_map(|cap| Some([cap[1].parse().ok()?, cap[2].parse().ok()?]))
                .collect();
            (!vectors.is_empty()).then_some(TaskAnswer::Embeddings { vectors })
        }
    }
}

/// Edge-recognition rates: correct rate is the matched fraction of the
/// gold set; error rate is the wrong fraction of the response, zero for an
/// empty response.
pub fn score_edges(gold: &BTreeSet<EdgeTuple>, parsed: &BTreeSet<EdgeTuple>) -> (f64, f64) {
    assert!(!gold.is_empty(), "gold edge set must be nonempty");
    let correct = parsed.intersection(gold).count() as f64 / gold.len() as f64;
    let error = if parsed.is_empty() {
        0.0
    } else {
        parsed.difference(gold).count() as f64 / parsed.len() as f64
    };
    (correct, error)
}

fn path_edges_exist(graph: &Graph, path: &[usize]) -> bool {
    path.windows(2).all(|w| graph.has_edge(w[0], w[1]))
}

fn path_weight(graph: &Graph, path: &[usize]) -> Option<u64> {
    let mut total = 0u64;
    for w in path.windows(2) {
        total += graph.edge_weight(w[0], w[1])?;
    }
    Some(total)
}

/// A closed simple cycle: at least 3 distinct nodes, consecutive edges
/// exist, last connects back to first. A repeated first node at the end is
/// tolerated and stripped.
fn valid_cycle(graph: &Graph, witness: &[usize]) -> bool {
    let nodes = if witness.len() >= 2 && witness.first() == witness.last() {
        &witness[..witness.len() - 1]
    } else {
        witness
    };
    if nodes.len() < 3 {
        return false;
    }
    let distinct: BTreeSet<usize> = nodes.iter().copied().collect();
    if distinct.len() != nodes.len() {
        return false;
    }
    path_edges_exist(graph, nodes) && graph.has_edge(nodes[nodes.len() - 1], nodes[0])
}

fn endpoints_match(path: &[usize], a: usize, b: usize) -> bool {
    match (path.first(), path.last()) {
        (Some(&x), Some(&y)) => (x == a && y == b) || (x == b && y == a),
        _ => false,
    }
}

/// Two-tier task scoring: `(lenient, strict)`.
pub fn score_task(
    instance: &TaskInstance,
    parsed: &TaskAnswer,
) -> Result<(bool, bool), CodecError> {
    let graph = &instance.graph;
    let kind = instance.kind;
    let mismatch = CodecError::KindMismatch { kind };
    match kind {
        TaskKind::Connectivity | TaskKind::Cycle => {
            let (gold_yes, _) = match &instance.gold.task {
                TaskAnswer::YesNoWitness { answer, witness } => (*answer, witness),
                _ => return Err(mismatch),
            };
            let (answer, witness) = match parsed {
                TaskAnswer::YesNoWitness { answer, witness } => (*answer, witness),
                _ => return Err(mismatch),
            };
            let lenient = answer == gold_yes;
            let strict = lenient
                && (!answer
                    || witness.as_deref().is_some_and(|w| match kind {
                        TaskKind::Connectivity => {
                            let (a, b) = match instance.query {
                                Query::NodePair { source, target } => (source, target),
                                _ => return false,
                            };
                            // Direction-reversal tolerated; repeats allowed
                            // (any edge walk between the endpoints proves
                            // connectivity).
                            w.len() >= 2 && endpoints_match(w, a, b) && path_edges_exist(graph, w)
                        }
                        _ => valid_cycle(graph, w),
                    }));
            Ok((lenient, strict))
        }
        TaskKind::TopoSort => {
            let order = match parsed {
                TaskAnswer::TopoOrder { order } => order,
                _ => return Err(mismatch),
            };
            let ok = verify_topo_order(graph, order);
            Ok((ok, ok))
        }
        TaskKind::ShortestPath => {
            let (path, stated) = match parsed {
                TaskAnswer::PathWeight { path, total } => (path, *total),
                _ => return Err(mismatch),
            };
            let gold_total = match &instance.gold.task {
                TaskAnswer::PathWeight { total, .. } => *total,
                _ => return Err(mismatch),
            };
            let (a, b) = match instance.query {
                Query::NodePair { source, target } => (source, target),
                _ => return Err(mismatch),
            };
            let ok = path.len() >= 2
                && endpoints_match(path, a, b)
                && path_weight(graph, path) == Some(stated)
                && stated == gold_total;
            Ok((ok, ok))
        }
        TaskKind::MaxFlow => {
            let value = match parsed {
                TaskAnswer::FlowValue { value } => *value,
                _ => return Err(mismatch),
            };
            let gold_value = match &instance.gold.task {
                TaskAnswer::FlowValue { value } => *value,
                _ => return Err(mismatch),
            };
            let ok = value == gold_value;
            Ok((ok, ok))
        }
        TaskKind::BipartiteMatching => {
            let pairs = match parsed {
                TaskAnswer::Matching { pairs } => pairs,
                _ => return Err(mismatch),
            };
            let gold_size = match &instance.gold.task {
                TaskAnswer::Matching { pairs } => pairs.len(),
                _ => return Err(mismatch),
            };
            let (left, right) = match &instance.query {
                Query::Bipartition { left, right } => (left, right),
                _ => return Err(mismatch),
            };
            let ok = verify_matching(graph, left, right, pairs) && pairs.len() == gold_size;
            Ok((ok, ok))
        }
        TaskKind::HamiltonPath => {
            let gold_yes = match &instance.gold.task {
                TaskAnswer::YesNoWitness { answer, .. } => *answer,
                _ => return Err(mismatch),
            };
            let (answer, witness) = match parsed {
                TaskAnswer::YesNoWitness { answer, witness } => (*answer, witness),
                _ => return Err(mismatch),
            };
            let ok = if gold_yes {
                answer
                    && witness
                        .as_deref()
                        .is_some_and(|w| verify_hamilton_path(graph, w))
            } else {
                !answer
            };
            Ok((ok, ok))
        }
        TaskKind::Gnn => {
            let vectors = match parsed {
                TaskAnswer::Embeddings { vectors } => vectors,
                _ => return Err(mismatch),
            };
            let gold_vectors = match &instance.gold.task {
                TaskAnswer::Embeddings { vectors } => vectors,
                _ => return Err(mismatch),
            };
            let ok = vectors == gold_vectors;
            Ok((ok, ok))
        }
    }
}

/// Ordering is a permutation of all nodes and every edge points forward.
pub fn verify_topo_order(graph: &Graph, order: &[usize]) -> bool {
    let n = graph.node_count();
    if order.len() != n {
        return false;
    }
    let mut position = vec![usize::MAX; n];
    for (idx, &node) in order.iter().enumerate() {
        if node >= n || position[node] != usize::MAX {
            return false;
        }
        position[node] = idx;
    }
    graph.edges().iter().all(|e| position[e.a] < position[e.b])
}

/// Pairs are node-disjoint existing edges crossing the partition.
pub fn verify_matching(
    graph: &Graph,
    left: &[usize],
    right: &[usize],
    pairs: &[(usize, usize)],
) -> bool {
    let n = graph.node_count();
    let mut used = vec![false; n];
    let in_left: BTreeSet<usize> = left.iter().copied().collect();
    let in_right: BTreeSet<usize> = right.iter().copied().collect();
    for &(u, v) in pairs {
        if u >= n || v >= n || !graph.has_edge(u, v) {
            return false;
        }
        let crosses = (in_left.contains(&u) && in_right.contains(&v))
            || (in_left.contains(&v) && in_right.contains(&u));
        if !crosses || used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

/// Path visits every node exactly once along existing edges.
pub fn verify_hamilton_path(graph: &Graph, path: &[usize]) -> bool {
    let n = graph.node_count();
    if path.len() != n {
        return false;
    }
    let distinct: BTreeSet<usize> = path.iter().copied().collect();
    distinct.len() == n && path.iter().all(|&v| v < n) && path_edges_exist(graph, path)
}

/// Checks a gold task answer against its own instance; the generator
/// asserts this for every instance it emits.
pub fn verify_gold(instance: &TaskInstance) -> bool {
    match score_task(instance, &instance.gold.task) {
        Ok((_, strict)) => strict,
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// Answer rendering: gold answers serialized through the output templates.
// Used by mock scripts, the internal-oracle executor and the round-trip
// self-consistency suites.
// ---------------------------------------------------------------------------

fn join_seq(ids: &[usize], sep: &str) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// The Q1 answer text for a node count.
pub fn render_node_count(n: usize) -> String {
    format!("There are {n} nodes in the graph.")
}

/// The Q2 answer text: the full tuple list, angle brackets for flow
/// networks and parentheses otherwise.
pub fn render_edge_tuples(kind: TaskKind, edges: &[EdgeTuple]) -> String {
    let angle = kind == TaskKind::MaxFlow;
    edges
        .iter()
        .map(|e| {
            let body = match e.weight {
                Some(w) => format!("{}, {}, {}", e.a, e.b, w),
                None => format!("{}, {}", e.a, e.b),
            };
            if angle {
                format!("<{body}>")
            } else {
                format!("({body})")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// The Q3 answer text in the per-kind output format.
pub fn render_task_answer(kind: TaskKind, query: &Query, answer: &TaskAnswer) -> String {
    match (kind, answer) {
        (TaskKind::Connectivity, TaskAnswer::YesNoWitness { answer, witness }) => {
            let (a, b) = match query {
                Query::NodePair { source, target } => (*source, *target),
                _ => (0, 0),
            };
            if *answer {
                let path = witness.as_deref().unwrap_or(&[]);
                format!(
                    "Yes, there is a path between node {a} and node {b}. The path is {}.",
                    join_seq(path, ", ")
                )
            } else {
                format!("No, there is no path between node {a} and node {b}.")
            }
        }
        (TaskKind::Cycle, TaskAnswer::YesNoWitness { answer, witness }) => {
            if *answer {
                let cycle = witness.as_deref().unwrap_or(&[]);
                format!(
                    "Yes, there is a cycle in the graph. The cycle is {}.",
                    join_seq(cycle, ", ")
                )
            } else {
                "No, there is no cycle in the graph.".to_string()
            }
        }
        (TaskKind::TopoSort, TaskAnswer::TopoOrder { order }) => {
            format!(
                "Yes, all the nodes can be visited. The solution is {}.",
                join_seq(order, " → ")
            )
        }
        (TaskKind::ShortestPath, TaskAnswer::PathWeight { path, total }) => {
            let (a, b) = match query {
                Query::NodePair { source, target } => (*source, *target),
                _ => (0, 0),
            };
            format!(
                "In conclusion, the shortest path from node {a} to node {b} is {} with a total \
                 weight of {total}.",
                join_seq(path, " → ")
            )
        }
        (TaskKind::MaxFlow, TaskAnswer::FlowValue { value }) => {
            let (a, b) = match query {
                Query::NodePair { source, target } => (*source, *target),
                _ => (0, 0),
            };
            format!("The maximum flow from node {a} to node {b} is {value}.")
        }
        (TaskKind::BipartiteMatching, TaskAnswer::Matching { pairs }) => {
            let body = pairs
                .iter()
                .map(|(u, v)| format!("({u}, {v})"))
                .collect::<Vec<_>>()
                .join(", ");
            format!(
                "The maximum number of matches is {}. The assignment is {body}.",
                pairs.len()
            )
        }
        (TaskKind::HamiltonPath, TaskAnswer::YesNoWitness { answer, witness }) => {
            if *answer {
                let path = witness.as_deref().unwrap_or(&[]);
                format!(
                    "Yes, there is a Hamilton path in the graph. The Hamilton path is {}.",
                    join_seq(path, ", ")
                )
            } else {
                "No, there is no Hamilton path in the graph.".to_string()
            }
        }
        (TaskKind::Gnn, TaskAnswer::Embeddings { vectors }) => {
            let body = vectors
                .iter()
                .enumerate()
                .map(|(i, v)| format!("node {i}: [{}, {}]", v[0], v[1]))
                .collect::<Vec<_>>()
                .join(", ");
            format!("The updated embeddings are: {body}.")
        }
        _ => String::new(),
    }
}

// ---------------------------------------------------------------------------
// Per-instance records and aggregation.
// ---------------------------------------------------------------------------

/// Scores for one instance across the three sub-questions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub instance_id: String,
    pub kind: TaskKind,
    pub tier: DifficultyTier,
    pub node_correct: bool,
    pub edge_correct_rate: f64,
    pub edge_error_rate: f64,
    pub task_lenient: bool,
    pub task_strict: bool,
}

impl EvalRecord {
    /// Builds the record from the three parsed responses. Unparseable
    /// responses score incorrect; an absent task answer scores (false,
    /// false).
    pub fn score(
        instance: &TaskInstance,
        q1: &ParsedResponse,
        q2: &ParsedResponse,
        q3: &ParsedResponse,
    ) -> Self {
        let node_correct = q1.node_count == Some(instance.graph.node_count() as u64);
        let gold_edges = instance.graph.edge_set();
        let empty = BTreeSet::new();
        let parsed_edges = q2.edge_tuples.as_ref().unwrap_or(&empty);
        let (edge_correct_rate, edge_error_rate) = score_edges(&gold_edges, parsed_edges);
        let (task_lenient, task_strict) = match &q3.task_answer {
            Some(answer) => score_task(instance, answer).unwrap_or((false, false)),
            None => (false, false),
        };
        EvalRecord {
            instance_id: instance.id.clone(),
            kind: instance.kind,
            tier: instance.tier,
            node_correct,
            edge_correct_rate,
            edge_error_rate,
            task_lenient,
            task_strict,
        }
    }
}

/// Aggregated metrics for one (kind, tier) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub kind: TaskKind,
    pub tier: DifficultyTier,
    pub count: usize,
    pub node_accuracy: f64,
    pub edge_correct_rate: f64,
    pub edge_error_rate: f64,
    pub task_lenient: f64,
    pub task_strict: f64,
}

/// Per-cell grid plus the overall row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub cells: Vec<ReportCell>,
    pub overall: ReportCell,
}

fn mean(values: impl Iterator<Item = f64>, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        values.sum::<f64>() / count as f64
    }
}

fn cell_from(kind: TaskKind, tier: DifficultyTier, records: &[&EvalRecord]) -> ReportCell {
    let count = records.len();
    ReportCell {
        kind,
        tier,
        count,
        node_accuracy: mean(
            records.iter().map(|r| r.node_correct as u8 as f64),
            count,
        ),
        edge_correct_rate: mean(records.iter().map(|r| r.edge_correct_rate), count),
        edge_error_rate: mean(records.iter().map(|r| r.edge_error_rate), count),
        task_lenient: mean(records.iter().map(|r| r.task_lenient as u8 as f64), count),
        task_strict: mean(records.iter().map(|r| r.task_strict as u8 as f64), count),
    }
}

/// Per (kind, tier) and overall means over a record set.
pub fn aggregate(records: &[EvalRecord]) -> Report {
    let mut cells = Vec::new();
    for kind in TaskKind::ALL {
        for tier in DifficultyTier::ALL {
            let subset: Vec<&EvalRecord> = records
                .iter()
                .filter(|r| r.kind == kind && r.tier == tier)
                .collect();
            if !subset.is_empty() {
                cells.push(cell_from(kind, tier, &subset));
            }
        }
    }
    let all: Vec<&EvalRecord> = records.iter().collect();
    // Overall row reuses the cell shape; kind/tier fields are placeholders.
    let overall = cell_from(TaskKind::Connectivity, DifficultyTier::Easy, &all);
    Report { cells, overall }
}

impl Report {
    /// CSV with lenient and strict as separate columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "task,tier,count,node_accuracy,edge_correct_rate,edge_error_rate,task_lenient,task_strict\n",
        );
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
                cell.kind,
                cell.tier,
                cell.count,
                cell.node_accuracy,
                cell.edge_correct_rate,
                cell.edge_error_rate,
                cell.task_lenient,
                cell.task_strict
            ));
        }
        let o = &self.overall;
        out.push_str(&format!(
            "overall,-,{},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
            o.count, o.node_accuracy, o.edge_correct_rate, o.edge_error_rate, o.task_lenient, o.task_strict
        ));
        out
    }

    /// Human-readable grid; task accuracy printed as `lenient (strict)`.
    pub fn to_grid(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<20} {:<8} {:>6} {:>8} {:>9} {:>9}  {}\n",
            "Task", "Tier", "N", "Node%", "EdgeOK%", "EdgeErr%", "Task% (strict)"
        ));
        let mut line = |cell: &ReportCell, label_kind: &str, label_tier: &str| {
            out.push_str(&format!(
                "{:<20} {:<8} {:>6} {:>8.2} {:>9.2} {:>9.2}  {:.2} ({:.2})\n",
                label_kind,
                label_tier,
                cell.count,
                cell.node_accuracy * 100.0,
                cell.edge_correct_rate * 100.0,
                cell.edge_error_rate * 100.0,
                cell.task_lenient * 100.0,
                cell.task_strict * 100.0
            ));
        };
        for cell in &self.cells {
            line(cell, cell.kind.slug(), cell.tier.slug());
        }
        line(&self.overall, "overall", "-");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::GoldAnswer;

    fn tuples(directed: bool, items: &[(usize, usize, Option<u64>)]) -> BTreeSet<EdgeTuple> {
        items
            .iter()
            .map(|&(a, b, w)| EdgeTuple::canonical(a, b, w, directed))
            .collect()
    }

    #[test]
    fn node_count_from_sentence() {
        assert_eq!(parse_node_count("There are 7 nodes in the graph."), Some(7));
        assert_eq!(parse_node_count("10"), Some(10));
        assert_eq!(parse_node_count("The graph contains seven nodes"), None);
    }

    #[test]
    fn tuples_unweighted() {
        let got = parse_edge_tuples("(0, 1), (1, 2)", false, false);
        assert_eq!(got, tuples(false, &[(0, 1, None), (1, 2, None)]));
    }

    #[test]
    fn tuples_weighted_and_angle() {
        let got = parse_edge_tuples("(0, 1, 5), (1, 2, 3)", true, false);
        assert_eq!(
            got,
            tuples(false, &[(0, 1, Some(5)), (1, 2, Some(3))])
        );
        let angled = parse_edge_tuples("<0, 1, 5>", true, true);
        assert_eq!(angled, tuples(true, &[(0, 1, Some(5))]));
    }

    #[test]
    fn tuples_wrong_arity_ignored() {
        let got = parse_edge_tuples("(0, 1, 5), (1, 2)", false, false);
        assert_eq!(got, tuples(false, &[(1, 2, None)]));
    }

    #[test]
    fn yes_witness_from_template() {
        let parsed = parse_task_answer(
            "Yes, there is a path between node 3 and node 1. The path is 3, 5, 1.",
            TaskKind::Connectivity,
        );
        assert_eq!(
            parsed,
            Some(TaskAnswer::YesNoWitness {
                answer: true,
                witness: Some(vec![3, 5, 1])
            })
        );
    }

    #[test]
    fn no_cycle_template() {
        let parsed = parse_task_answer("No, there is no cycle in the graph.", TaskKind::Cycle);
        assert_eq!(
            parsed,
            Some(TaskAnswer::YesNoWitness {
                answer: false,
                witness: None
            })
        );
    }

    #[test]
    fn shortest_path_template() {
        let parsed = parse_task_answer(
            "In conclusion, the shortest path from node 0 to node 4 is 0 → 2 → 4 with a total \
             weight of 7.",
            TaskKind::ShortestPath,
        );
        assert_eq!(
            parsed,
            Some(TaskAnswer::PathWeight {
                path: vec![0, 2, 4],
                total: 7
            })
        );
    }

    #[test]
    fn worked_edge_rate_case() {
        let gold = tuples(false, &[(0, 1, None), (1, 2, None), (2, 3, None)]);
        let parsed = tuples(false, &[(0, 1, None), (2, 1, None), (3, 4, None)]);
        let (correct, error) = score_edges(&gold, &parsed);
        assert!((correct - 2.0 / 3.0).abs() < 1e-12);
        assert!((error - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_empty_edge_cases() {
        let gold = tuples(false, &[(0, 1, None), (1, 2, None)]);
        assert_eq!(score_edges(&gold, &gold.clone()), (1.0, 0.0));
        assert_eq!(score_edges(&gold, &BTreeSet::new()), (0.0, 0.0));
    }

    fn connectivity_instance(connected: bool) -> TaskInstance {
        // path 0-1-2 plus isolated 3 when disconnected probing (0,3)
        let graph = Graph::new(
            false,
            false,
            4,
            [(0, 1, None), (1, 2, None), (2, 3, None)],
        )
        .unwrap();
        let query = Query::NodePair {
            source: 0,
            target: 3,
        };
        let task = if connected {
            TaskAnswer::YesNoWitness {
                answer: true,
                witness: Some(vec![0, 1, 2, 3]),
            }
        } else {
            TaskAnswer::YesNoWitness {
                answer: false,
                witness: None,
            }
        };
        TaskInstance {
            id: "t".into(),
            kind: TaskKind::Connectivity,
            tier: DifficultyTier::Easy,
            query: query.clone(),
            questions: crate::task::instance_questions(TaskKind::Connectivity, &query),
            gold: GoldAnswer {
                node_count: 4,
                edge_set: graph.edges().to_vec(),
                task,
            },
            image_ref: String::new(),
            seed: 0,
            graph,
        }
    }

    #[test]
    fn lenient_without_strict_on_bad_witness() {
        let instance = connectivity_instance(true);
        let parsed = TaskAnswer::YesNoWitness {
            answer: true,
            witness: Some(vec![0, 3]), // edge (0,3) does not exist
        };
        assert_eq!(score_task(&instance, &parsed).unwrap(), (true, false));
    }

    #[test]
    fn witness_direction_reversal_accepted() {
        let instance = connectivity_instance(true);
        let parsed = TaskAnswer::YesNoWitness {
            answer: true,
            witness: Some(vec![3, 2, 1, 0]),
        };
        assert_eq!(score_task(&instance, &parsed).unwrap(), (true, true));
    }

    #[test]
    fn topo_any_valid_order_accepted() {
        let graph = Graph::new(true, false, 3, [(0, 2, None), (1, 2, None)]).unwrap();
        let query = Query::None;
        let instance = TaskInstance {
            id: "t".into(),
            kind: TaskKind::TopoSort,
            tier: DifficultyTier::Easy,
            query: query.clone(),
            questions: crate::task::instance_questions(TaskKind::TopoSort, &query),
            gold: GoldAnswer {
                node_count: 3,
                edge_set: graph.edges().to_vec(),
                task: TaskAnswer::TopoOrder {
                    order: vec![0, 1, 2],
                },
            },
            image_ref: String::new(),
            seed: 0,
            graph,
        };
        let parsed = TaskAnswer::TopoOrder {
            order: vec![1, 0, 2],
        };
        assert_eq!(score_task(&instance, &parsed).unwrap(), (true, true));
    }

    #[test]
    fn aggregate_strict_le_lenient() {
        let rec = |lenient, strict| EvalRecord {
            instance_id: "x".into(),
            kind: TaskKind::Cycle,
            tier: DifficultyTier::Easy,
            node_correct: true,
            edge_correct_rate: 1.0,
            edge_error_rate: 0.0,
            task_lenient: lenient,
            task_strict: strict,
        };
        let report = aggregate(&[rec(true, true), rec(true, false)]);
        assert_eq!(report.overall.task_lenient, 1.0);
        assert_eq!(report.overall.task_strict, 0.5);
        assert!(report.overall.task_strict <= report.overall.task_lenient);
    }
}
