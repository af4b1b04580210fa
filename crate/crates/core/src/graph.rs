//! Canonical graph representation shared by every other module.
//!
//! A [`Graph`] is immutable after construction: nodes are the integers
//! `0..n`, edges are stored canonically (undirected endpoints ordered
//! `u <= v`, the whole list sorted), and the constructor rejects anything
//! that violates the structural invariants. [`Graph::validate`] exposes the
//! same checks as a total function for callers that need the violation list
//! instead of an error.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One edge as it appears in edge lists, gold answers and parsed responses.
///
/// Canonical form: undirected endpoints satisfy `a <= b`; `weight` is
/// present exactly when the owning graph is weighted. Serializes as a bare
/// JSON array `[a, b]` or `[a, b, w]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeTuple {
    pub a: usize,
    pub b: usize,
    pub weight: Option<u64>,
}

impl EdgeTuple {
    /// Builds a tuple in canonical orientation for the given directedness.
    pub fn canonical(a: usize, b: usize, weight: Option<u64>, directed: bool) -> Self {
        if !directed && b < a {
            EdgeTuple { a: b, b: a, weight }
        } else {
            EdgeTuple { a, b, weight }
        }
    }
}

impl fmt::Display for EdgeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            Some(w) => write!(f, "({}, {}, {})", self.a, self.b, w),
            None => write!(f, "({}, {})", self.a, self.b),
        }
    }
}

impl Serialize for EdgeTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let len = if self.weight.is_some() { 3 } else { 2 };
        let mut seq = serializer.serialize_seq(Some(len))?;
        seq.serialize_element(&self.a)?;
        seq.serialize_element(&self.b)?;
        if let Some(w) = self.weight {
            seq.serialize_element(&w)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EdgeTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EdgeVisitor;
        impl<'de> Visitor<'de> for EdgeVisitor {
            type Value = EdgeTuple;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array [u, v] or [u, v, w]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<EdgeTuple, A::Error> {
                let a = seq
                    .next_element()?
                    .ok_or_else(|| serde::de::Error::invalid_length(0, &self))?;
                let b = seq
                    .next_element()?
                    .ok_or_else(|| serde::de::Error::invalid_length(1, &self))?;
                let weight = seq.next_element()?;
                if seq.next_element::<serde_json::Value>()?.is_some() {
                    return Err(serde::de::Error::invalid_length(4, &self));
                }
                Ok(EdgeTuple { a, b, weight })
            }
        }
        deserializer.deserialize_seq(EdgeVisitor)
    }
}

/// A single violated graph invariant, reported by [`Graph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `node_count` is zero.
    EmptyNodeSet,
    /// An edge endpoint is `>= node_count`.
    EndpointOutOfRange { edge: EdgeTuple },
    /// An edge connects a node to itself.
    SelfLoop { edge: EdgeTuple },
    /// The same edge appears twice (undirected edges compare unordered).
    DuplicateEdge { edge: EdgeTuple },
    /// A weight on an unweighted graph.
    UnexpectedWeight { edge: EdgeTuple },
    /// A missing or zero weight on a weighted graph.
    BadWeight { edge: EdgeTuple },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNodeSet => write!(f, "node count must be at least 1"),
            Violation::EndpointOutOfRange { edge } => {
                write!(f, "edge {edge} has an endpoint outside 0..n")
            }
            Violation::SelfLoop { edge } => write!(f, "self-loop {edge}"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge {edge}"),
            Violation::UnexpectedWeight { edge } => {
                write!(f, "weight on unweighted graph at {edge}")
            }
            Violation::BadWeight { edge } => {
                write!(f, "missing or zero weight on weighted graph at {edge}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("malformed graph text at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Immutable graph over nodes `0..node_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    directed: bool,
    weighted: bool,
    node_count: usize,
    edges: Vec<EdgeTuple>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    directed: bool,
    weighted: bool,
    n: usize,
    edges: Vec<EdgeTuple>,
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            directed: g.directed,
            weighted: g.weighted,
            n: g.node_count,
            edges: g.edges,
        }
    }
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        Graph::new(
            raw.directed,
            raw.weighted,
            raw.n,
            raw.edges.into_iter().map(|e| (e.a, e.b, e.weight)),
        )
    }
}

impl Graph {
    /// Canonicalizes and validates. Undirected endpoints are normalized to
    /// `u <= v` and the edge list is sorted before the invariant check, so
    /// two graphs with the same edge set compare equal.
    pub fn new(
        directed: bool,
        weighted: bool,
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, Option<u64>)>,
    ) -> Result<Self, GraphError> {
        let mut canonical: Vec<EdgeTuple> = edges
            .into_iter()
            .map(|(a, b, w)| EdgeTuple::canonical(a, b, w, directed))
            .collect();
        canonical.sort();
        let graph = Graph {
            directed,
            weighted,
            node_count,
            edges: canonical,
        };
        let violations = graph.validate();
        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// Constructs without canonicalization or validation. Intended for
    /// tests and for exercising [`Graph::validate`] on bad inputs.
    pub fn from_parts_unchecked(
        directed: bool,
        weighted: bool,
        node_count: usize,
        edges: Vec<EdgeTuple>,
    ) -> Self {
        Graph {
            directed,
            weighted,
            node_count,
            edges,
        }
    }

    /// Total invariant check: returns the empty list exactly when every
    /// structural invariant holds, otherwise one entry per violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.node_count == 0 {
            out.push(Violation::EmptyNodeSet);
        }
        let mut seen = BTreeSet::new();
        for &edge in &self.edges {
            if edge.a >= self.node_count || edge.b >= self.node_count {
                out.push(Violation::EndpointOutOfRange { edge });
            }
            if edge.a == edge.b {
                out.push(Violation::SelfLoop { edge });
            }
            let key = if self.directed {
                (edge.a, edge.b)
            } else {
                (edge.a.min(edge.b), edge.a.max(edge.b))
            };
            if !seen.insert(key) {
                out.push(Violation::DuplicateEdge { edge });
            }
            match (self.weighted, edge.weight) {
                (false, Some(_)) => out.push(Violation::UnexpectedWeight { edge }),
                (true, None) | (true, Some(0)) => out.push(Violation::BadWeight { edge }),
                _ => {}
            }
        }
        out
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[EdgeTuple] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The canonical edge set as a `BTreeSet`, the form the scoring
    /// metrics operate on.
    pub fn edge_set(&self) -> BTreeSet<EdgeTuple> {
        self.edges.iter().copied().collect()
    }

    /// True when the graph contains `{u, v}` (undirected) or `(u, v)`
    /// (directed).
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let probe = EdgeTuple::canonical(u, v, None, self.directed);
        self.edges
            .iter()
            .any(|e| e.a == probe.a && e.b == probe.b)
    }

    /// Weight of the edge `{u, v}` / `(u, v)`, if the edge exists.
    /// Unweighted edges report weight 1.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        let probe = EdgeTuple::canonical(u, v, None, self.directed);
        self.edges
            .iter()
            .find(|e| e.a == probe.a && e.b == probe.b)
            .map(|e| e.weight.unwrap_or(1))
    }

    /// Sorted neighbor list of `v`: adjacent nodes for undirected graphs,
    /// out-neighbors for directed graphs.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v >= self.node_count {
            return Err(GraphError::NodeOutOfRange {
                id: v,
                n: self.node_count,
            });
        }
        let mut out = Vec::new();
        for e in &self.edges {
            if e.a == v {
                out.push(e.b);
            } else if !self.directed && e.b == v {
                out.push(e.a);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Adjacency lists with weights (1 for unweighted edges), neighbor ids
    /// ascending. Directed graphs list out-neighbors only.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            let w = e.weight.unwrap_or(1);
            adj[e.a].push((e.b, w));
            if !self.directed {
                adj[e.b].push((e.a, w));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Canonical textual form: a header line
    /// `directed|undirected weighted|unweighted n=<int>` followed by one
    /// `u v` or `u v w` line per edge. This is the wire format consumed by
    /// generated programs in the agent pipeline and by fixture files.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(if self.directed { "directed" } else { "undirected" });
        out.push(' ');
        out.push_str(if self.weighted { "weighted" } else { "unweighted" });
        out.push_str(&format!(" n={}\n", self.node_count));
        for e in &self.edges {
            match e.weight {
                Some(w) => out.push_str(&format!("{} {} {}\n", e.a, e.b, w)),
                None => out.push_str(&format!("{} {}\n", e.a, e.b)),
            }
        }
        out
    }

    /// Parses the canonical textual form. Inverse of [`Graph::to_text`] on
    /// every valid graph.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| GraphError::Parse {
                line: 1,
                reason: "empty input".into(),
            })?;
        let mut parts = header.split_whitespace();
        let directed = match parts.next() {
            Some("directed") => true,
            Some("undirected") => false,
            other => {
                return Err(GraphError::Parse {
                    line: 1,
                    reason: format!("expected directed|undirected, got {other:?}"),
                })
            }
        };
        let weighted = match parts.next() {
            Some("weighted") => true,
            Some("unweighted") => false,
            other => {
                return Err(GraphError::Parse {
                    line: 1,
                    reason: format!("expected weighted|unweighted, got {other:?}"),
                })
            }
        };
        let n = match parts.next().and_then(|p| p.strip_prefix("n=")) {
            Some(num) => num.parse::<usize>().map_err(|e| GraphError::Parse {
                line: 1,
                reason: format!("bad node count: {e}"),
            })?,
            None => {
                return Err(GraphError::Parse {
                    line: 1,
                    reason: "expected n=<int>".into(),
                })
            }
        };
        if parts.next().is_some() {
            return Err(GraphError::Parse {
                line: 1,
                reason: "trailing tokens after header".into(),
            });
        }
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_num = |s: &str| -> Result<u64, GraphError> {
                s.parse::<u64>().map_err(|e| GraphError::Parse {
                    line: idx + 1,
                    reason: format!("bad integer {s:?}: {e}"),
                })
            };
            match (weighted, fields.as_slice()) {
                (false, [u, v]) => edges.push((parse_num(u)? as usize, parse_num(v)? as usize, None)),
                (true, [u, v, w]) => edges.push((
                    parse_num(u)? as usize,
                    parse_num(v)? as usize,
                    Some(parse_num(w)?),
                )),
                _ => {
                    return Err(GraphError::Parse {
                        line: idx + 1,
                        reason: format!(
                            "expected {} fields, got {}",
                            if weighted { 3 } else { 2 },
                            fields.len()
                        ),
                    })
                }
            }
        }
        Graph::new(directed, weighted, n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(false, false, n, edges.iter().map(|&(u, v)| (u, v, None))).unwrap()
    }

    #[test]
    fn minimal_legal_graph_is_valid() {
        let g = undirected(2, &[(0, 1)]);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn self_loop_is_reported() {
        let g = Graph::from_parts_unchecked(
            false,
            false,
            2,
            vec![EdgeTuple { a: 0, b: 0, weight: None }],
        );
        assert_eq!(g.validate(), vec![Violation::SelfLoop {
            edge: EdgeTuple { a: 0, b: 0, weight: None }
        }]);
    }

    #[test]
    fn unordered_duplicate_is_reported() {
        let g = Graph::from_parts_unchecked(
            false,
            false,
            2,
            vec![
                EdgeTuple { a: 0, b: 1, weight: None },
                EdgeTuple { a: 1, b: 0, weight: None },
            ],
        );
        assert_eq!(g.validate(), vec![Violation::DuplicateEdge {
            edge: EdgeTuple { a: 1, b: 0, weight: None }
        }]);
    }

    #[test]
    fn neighbors_on_path() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.neighbors(1).unwrap(), vec![0, 2]);
    }

    #[test]
    fn directed_neighbors_are_out_only() {
        let g = Graph::new(true, false, 2, [(0, 1, None)]).unwrap();
        assert_eq!(g.neighbors(1).unwrap(), Vec::<usize>::new());
        assert_eq!(g.neighbors(0).unwrap(), vec![1]);
    }

    #[test]
    fn isolated_node_has_no_neighbors() {
        let g = undirected(3, &[(0, 1)]);
        assert_eq!(g.neighbors(2).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn neighbors_rejects_out_of_range() {
        let g = undirected(2, &[(0, 1)]);
        assert!(matches!(
            g.neighbors(5),
            Err(GraphError::NodeOutOfRange { id: 5, n: 2 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::new(true, true, 4, [(0, 1, Some(3)), (2, 3, Some(9))]).unwrap();
        let parsed = Graph::from_text(&g.to_text()).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn weight_required_when_weighted() {
        let err = Graph::new(false, true, 2, [(0, 1, None)]).unwrap_err();
        assert!(matches!(err, GraphError::Invalid(v) if v.len() == 1));
    }
}
