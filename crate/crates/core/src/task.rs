//! Task taxonomy: the eight problem kinds, difficulty tiers with their
//! node-count ranges, per-instance queries, gold answers and the question
//! text attached to every instance.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeTuple, Graph};

/// The eight benchmark problem kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Connectivity,
    Cycle,
    TopoSort,
    ShortestPath,
    MaxFlow,
    BipartiteMatching,
    HamiltonPath,
    Gnn,
}

impl TaskKind {
    pub const ALL: [TaskKind; 8] = [
        TaskKind::Connectivity,
        TaskKind::Cycle,
        TaskKind::TopoSort,
        TaskKind::ShortestPath,
        TaskKind::MaxFlow,
        TaskKind::BipartiteMatching,
        TaskKind::HamiltonPath,
        TaskKind::Gnn,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            TaskKind::Connectivity => "connectivity",
            TaskKind::Cycle => "cycle",
            TaskKind::TopoSort => "topo_sort",
            TaskKind::ShortestPath => "shortest_path",
            TaskKind::MaxFlow => "max_flow",
            TaskKind::BipartiteMatching => "bipartite_matching",
            TaskKind::HamiltonPath => "hamilton_path",
            TaskKind::Gnn => "gnn",
        }
    }

    pub fn directed(self) -> bool {
        matches!(self, TaskKind::TopoSort | TaskKind::MaxFlow)
    }

    pub fn weighted(self) -> bool {
        matches!(self, TaskKind::ShortestPath | TaskKind::MaxFlow)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for TaskKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TaskKind::ALL
            .into_iter()
            .find(|k| k.slug() == s)
            .ok_or_else(|| format!("unknown task kind {s:?}"))
    }
}

/// Difficulty bucket. The node-count range it implies depends on the task
/// kind; Medium exists only for Connectivity, Cycle and TopoSort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DifficultyTier {
    Easy,
    Medium,
    Hard,
}

impl DifficultyTier {
    pub const ALL: [DifficultyTier; 3] =
        [DifficultyTier::Easy, DifficultyTier::Medium, DifficultyTier::Hard];

    pub fn slug(self) -> &'static str {
        match self {
            DifficultyTier::Easy => "easy",
            DifficultyTier::Medium => "medium",
            DifficultyTier::Hard => "hard",
        }
    }

    /// Inclusive node-count range for a `(kind, tier)` cell, or `None` when
    /// the cell does not exist.
    pub fn node_range(self, kind: TaskKind) -> Option<RangeInclusive<usize>> {
        use DifficultyTier::*;
        use TaskKind::*;
        match (kind, self) {
            (Connectivity | Cycle | TopoSort, Easy) => Some(5..=10),
            (Connectivity | Cycle | TopoSort, Medium) => Some(11..=25),
            (Connectivity | Cycle | TopoSort, Hard) => Some(26..=35),
            (ShortestPath | MaxFlow | HamiltonPath, Easy) => Some(5..=10),
            (ShortestPath | MaxFlow | HamiltonPath, Hard) => Some(11..=20),
            (BipartiteMatching, Easy) => Some(6..=20),
            (BipartiteMatching, Hard) => Some(17..=33),
            (Gnn, Easy) => Some(5..=8),
            (Gnn, Hard) => Some(9..=15),
            (_, Medium) => None,
        }
    }

    /// All valid `(kind, tier)` cells in canonical order.
    pub fn valid_cells() -> Vec<(TaskKind, DifficultyTier)> {
        let mut out = Vec::new();
        for kind in TaskKind::ALL {
            for tier in DifficultyTier::ALL {
                if tier.node_range(kind).is_some() {
                    out.push((kind, tier));
                }
            }
        }
        out
    }
}

impl fmt::Display for DifficultyTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for DifficultyTier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        DifficultyTier::ALL
            .into_iter()
            .find(|t| t.slug() == s)
            .ok_or_else(|| format!("unknown tier {s:?}"))
    }
}

/// Task-specific parameters of one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Query {
    None,
    /// Source/target pair for Connectivity, ShortestPath and MaxFlow.
    NodePair { source: usize, target: usize },
    /// Applicant/job bipartition for BipartiteMatching.
    Bipartition { left: Vec<usize>, right: Vec<usize> },
    /// Initial per-node 2-d integer embeddings for Gnn.
    Embeddings { vectors: Vec<[i64; 2]> },
}

/// A task-aligned answer: the shape shared by gold answers, solver results
/// and parsed model responses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TaskAnswer {
    /// Connectivity, Cycle, HamiltonPath.
    YesNoWitness {
        answer: bool,
        witness: Option<Vec<usize>>,
    },
    /// TopoSort: one valid ordering.
    TopoOrder { order: Vec<usize> },
    /// ShortestPath: path plus its stated total weight.
    PathWeight { path: Vec<usize>, total: u64 },
    /// MaxFlow.
    FlowValue { value: u64 },
    /// BipartiteMatching.
    Matching { pairs: Vec<(usize, usize)> },
    /// Gnn: post-convolution embedding matrix in node order.
    Embeddings { vectors: Vec<[i64; 2]> },
}

/// Reference answers for one instance: node count, canonical edge set and
/// the task answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldAnswer {
    pub node_count: usize,
    pub edge_set: Vec<EdgeTuple>,
    pub task: TaskAnswer,
}

/// One benchmark item: a graph, its rendered image reference, the three
/// questions and their gold answers.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskInstance {
    pub id: String,
    pub kind: TaskKind,
    pub tier: DifficultyTier,
    pub graph: Graph,
    pub query: Query,
    /// Q1 node recognition, Q2 edge recognition, Q3 the task question.
    pub questions: [String; 3],
    pub gold: GoldAnswer,
    pub image_ref: String,
    pub seed: u64,
}

/// Which of the three per-instance questions a prompt or response refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubQuestion {
    Q1,
    Q2,
    Q3,
}

impl SubQuestion {
    pub fn tag(self) -> &'static str {
        match self {
            SubQuestion::Q1 => "q1",
            SubQuestion::Q2 => "q2",
            SubQuestion::Q3 => "q3",
        }
    }
}

pub const Q1_TEXT: &str = "How many nodes are shown in the graph?";

const Q2_BASE: &str = "Please use tuples to represent the edges in the graph.";
const Q2_UNDIRECTED: &str =
    "Each tuple should consist of two nodes that are connected by an undirected edge.";
const Q2_DIRECTED: &str = "Each tuple should consist of two nodes representing a directed edge, \
     with the first node being the source and the second node being the destination.";
const Q2_UNDIRECTED_WEIGHTED: &str =
    "Each tuple should consist of three elements: (node1, node2, weight), where 'node1' and \
     'node2' are the nodes connected by an edge, and 'weight' is the numerical value associated \
     with the undirected edge.";
const Q2_DIRECTED_WEIGHTED: &str =
    "Each tuple should consist of three elements: <source, destination, weight>, where 'source' \
     is the source node, 'destination' is the destination node, and 'weight' is the numerical \
     value associated with the directed edge.";

/// Full edge-recognition question for a kind (question plus format demand).
pub fn q2_text(kind: TaskKind) -> String {
    let demand = match (kind.directed(), kind.weighted()) {
        (false, false) => Q2_UNDIRECTED,
        (true, false) => Q2_DIRECTED,
        (false, true) => Q2_UNDIRECTED_WEIGHTED,
        (true, true) => Q2_DIRECTED_WEIGHTED,
    };
    format!("{Q2_BASE} {demand}")
}

/// The concrete Q3 problem statement for an instance, with query node ids,
/// embeddings and partitions substituted in.
pub fn q3_text(kind: TaskKind, query: &Query) -> String {
    match kind {
        TaskKind::Connectivity => {
            let (a, b) = expect_pair(query);
            format!("Is there a path between node {a} and node {b} in the graph?")
        }
        TaskKind::Cycle => "Is there a cycle in the graph?".to_string(),
        TaskKind::TopoSort => "Can all the nodes be visited? Give the solution.".to_string(),
        TaskKind::ShortestPath => {
            let (a, b) = expect_pair(query);
            format!(
                "Give the shortest path from node {a} to node {b} in the graph and the final \
                 answer contains the path and total weights."
            )
        }
        TaskKind::MaxFlow => {
            let (a, b) = expect_pair(query);
            format!("What is the maximum flow from node {a} to node {b}?")
        }
        TaskKind::BipartiteMatching => {
            let (left, right) = match query {
                Query::Bipartition { left, right } => (left, right),
                _ => panic!("bipartite instance requires a bipartition query"),
            };
            format!(
                "Find an assignment of jobs to applicants in such that the maximum number of \
                 applicants find the job they are interested in. The applicants are nodes {} \
                 and the jobs are nodes {}.",
                join_ids(left),
                join_ids(right)
            )
        }
        TaskKind::HamiltonPath => {
            "Is there a path in this graph that visits every node exactly once?".to_string()
        }
        TaskKind::Gnn => {
            let vectors = match query {
                Query::Embeddings { vectors } => vectors,
                _ => panic!("gnn instance requires an embeddings query"),
            };
            let listing = vectors
                .iter()
                .enumerate()
                .map(|(i, v)| format!("node {i}: [{}, {}]", v[0], v[1]))
                .collect::<Vec<_>>()
                .join("; ");
            format!(
                "Each node is initially assigned an embedding vector in the graph, and the \
                 embedding will be updated by the sum of its neighbors' embeddings in a simple \
                 graph convolution layer. What's the embedding of each node after one layer of \
                 simple graph convolution layer? The initial embeddings are: {listing}."
            )
        }
    }
}

/// The Q3 output-format demand for a kind, where one exists. Kinds without
/// a stated format return `None` and the prompt omits the demand clause.
pub fn q3_demand(kind: TaskKind, query: &Query) -> Option<String> {
    match kind {
        TaskKind::Connectivity => {
            let (a, b) = expect_pair(query);
            Some(format!(
                "If there is a path between node {a} and node {b}, conclude your answer with \
                 'Yes, there is a path between node {a} and node {b}. The path is... ', and \
                 provide the specific nodes involved in the path in sequence. If no path exists, \
                 please conclude with 'No, there is no path between node {a} and node {b}.'"
            ))
        }
        TaskKind::Cycle => Some(
            "If there is a cycle, conclude your answer with 'Yes, there is a cycle in the \
             graph. The cycle is... ', and provide the specific nodes involved in the cycle in \
             sequence. If no cycle exists, please conclude with 'No, there is no cycle in the \
             graph.'"
                .to_string(),
        ),
        TaskKind::ShortestPath => {
            let (a, b) = expect_pair(query);
            Some(format!(
                "Please conclude your answer with a clear statement summarizing the path and \
                 its total weight, for example, 'In conclusion, the shortest path from node {a} \
                 to node {b} is... with a total weight of...'."
            ))
        }
        TaskKind::HamiltonPath => Some(
            "If there is a Hamilton path, conclude your answer with \"Yes, there is a Hamilton \
             path in the graph. The Hamilton path is ... .\" If no Hamilton path exits, please \
             conclude with \"No, there is no Hamilton path in the graph.\""
                .to_string(),
        ),
        TaskKind::TopoSort | TaskKind::MaxFlow | TaskKind::BipartiteMatching | TaskKind::Gnn => {
            None
        }
    }
}

/// The three question strings stored on every instance.
pub fn instance_questions(kind: TaskKind, query: &Query) -> [String; 3] {
    [Q1_TEXT.to_string(), q2_text(kind), q3_text(kind, query)]
}

fn expect_pair(query: &Query) -> (usize, usize) {
    match query {
        Query::NodePair { source, target } => (*source, *target),
        _ => panic!("task requires a source/target query"),
    }
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl TaskInstance {
    /// Node-count range check against the Table of tiers plus basic query
    /// sanity; used as a construction-time assertion by the generator.
    pub fn check_tier(&self) -> bool {
        self.tier
            .node_range(self.kind)
            .is_some_and(|r| r.contains(&self.graph.node_count()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medium_only_for_three_kinds() {
        let with_medium: Vec<TaskKind> = TaskKind::ALL
            .into_iter()
            .filter(|k| DifficultyTier::Medium.node_range(*k).is_some())
            .collect();
        assert_eq!(
            with_medium,
            vec![TaskKind::Connectivity, TaskKind::Cycle, TaskKind::TopoSort]
        );
        assert_eq!(DifficultyTier::valid_cells().len(), 19);
    }

    #[test]
    fn tier_ranges_match_table() {
        assert_eq!(
            DifficultyTier::Easy.node_range(TaskKind::Connectivity),
            Some(5..=10)
        );
        assert_eq!(
            DifficultyTier::Hard.node_range(TaskKind::Connectivity),
            Some(26..=35)
        );
        assert_eq!(
            DifficultyTier::Easy.node_range(TaskKind::BipartiteMatching),
            Some(6..=20)
        );
        assert_eq!(DifficultyTier::Hard.node_range(TaskKind::Gnn), Some(9..=15));
        assert_eq!(
            DifficultyTier::Hard.node_range(TaskKind::ShortestPath),
            Some(11..=20)
        );
    }

    #[test]
    fn kind_slugs_round_trip() {
        for kind in TaskKind::ALL {
            assert_eq!(kind.slug().parse::<TaskKind>().unwrap(), kind);
        }
    }

    #[test]
    fn q2_selects_arity_by_kind() {
        assert!(q2_text(TaskKind::ShortestPath).contains("(node1, node2, weight)"));
        assert!(q2_text(TaskKind::MaxFlow).contains("<source, destination, weight>"));
        assert!(q2_text(TaskKind::Cycle).contains("two nodes"));
    }
}
