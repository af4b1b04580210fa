//! Exact solvers for all eight task kinds. Tie-breaking is ascending node
//! id throughout, so every solver is a deterministic function of its input;
//! correctness of any answer is still defined by the verifiers, not by
//! equality with these outputs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::Graph;
use crate::task::{Query, TaskAnswer, TaskKind};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("source and target must differ (both {0})")]
    SourceEqualsTarget(usize),
    #[error("nodes {from} and {to} are disconnected")]
    Disconnected { from: usize, to: usize },
    #[error("graph contains a directed cycle: {0:?}")]
    DirectedCycle(Vec<usize>),
    #[error("edge ({u}, {v}) does not cross the bipartition")]
    NonBipartiteEdge { u: usize, v: usize },
    #[error("embedding matrix has {got} rows, graph has {expected} nodes")]
    EmbeddingDimension { got: usize, expected: usize },
    #[error("query does not match task kind {kind}")]
    QueryMismatch { kind: TaskKind },
}

fn check_node(graph: &Graph, id: usize) -> Result<(), SolverError> {
    if id >= graph.node_count() {
        Err(SolverError::NodeOutOfRange {
            id,
            n: graph.node_count(),
        })
    } else {
        Ok(())
    }
}

/// Breadth-first search for a shortest-hop path from `u` to `v`.
pub fn find_path(graph: &Graph, u: usize, v: usize) -> Result<Option<Vec<usize>>, SolverError> {
    check_node(graph, u)?;
    check_node(graph, v)?;
    if u == v {
        return Ok(Some(vec![u]));
    }
    let adj = graph.adjacency();
    let mut parent = vec![usize::MAX; graph.node_count()];
    let mut queue = VecDeque::new();
    parent[u] = u;
    queue.push_back(u);
    while let Some(cur) = queue.pop_front() {
        for &(next, _) in &adj[cur] {
            if parent[next] == usize::MAX {
                parent[next] = cur;
                if next == v {
                    let mut path = vec![v];
                    let mut node = v;
                    while node != u {
                        node = parent[node];
                        path.push(node);
                    }
                    path.reverse();
                    return Ok(Some(path));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Depth-first search with parent tracking. Returns a simple cycle (first
/// node not repeated at the end) or `None` when the graph is a forest.
pub fn find_cycle(graph: &Graph) -> Option<Vec<usize>> {
    let n = graph.node_count();
    let adj = graph.adjacency();
    let mut visited = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        // Iterative DFS; in an undirected graph every non-tree edge closes
        // a cycle with an ancestor.
        let mut stack = vec![(root, usize::MAX)];
        while let Some((node, from)) = stack.pop() {
            if visited[node] {
                continue;
            }
            visited[node] = true;
            parent[node] = from;
            for &(next, _) in adj[node].iter().rev() {
                if next == from {
                    continue;
                }
                if visited[next] {
                    // Walk back from `node` to `next` through tree parents.
                    let mut cycle = vec![node];
                    let mut cur = node;
                    while cur != next {
                        cur = parent[cur];
                        if cur == usize::MAX {
                            break;
                        }
                        cycle.push(cur);
                    }
                    if cur == next {
                        cycle.reverse();
                        return Some(cycle);
                    }
                } else {
                    stack.push((next, node));
                }
            }
        }
    }
    None
}

/// Kahn's algorithm with an ascending-id frontier. Errors with a witness
/// cycle when the graph is not acyclic.
pub fn topo_sort(graph: &Graph) -> Result<Vec<usize>, SolverError> {
    let n = graph.node_count();
    let adj = graph.adjacency();
    let mut indegree = vec![0usize; n];
    for e in graph.edges() {
        indegree[e.b] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(node)) = heap.pop() {
        order.push(node);
        for &(next, _) in &adj[node] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                heap.push(Reverse(next));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every node with residual in-degree > 0 has an unprocessed
    // predecessor, so walking predecessors inside the remainder must
    // revisit a node; that segment, reversed, is a directed cycle.
    let mut preds = vec![Vec::new(); n];
    for e in graph.edges() {
        if indegree[e.a] > 0 && indegree[e.b] > 0 {
            preds[e.b].push(e.a);
        }
    }
    let start = (0..n).find(|&v| indegree[v] > 0).expect("remainder nonempty");
    let mut seen_at = vec![usize::MAX; n];
    let mut walk = vec![start];
    seen_at[start] = 0;
    let mut cur = start;
    loop {
        let prev = *preds[cur]
            .first()
            .expect("unprocessed node has an unprocessed predecessor");
        if seen_at[prev] != usize::MAX {
            let mut cycle = walk[seen_at[prev]..].to_vec();
            cycle.reverse();
            return Err(SolverError::DirectedCycle(cycle));
        }
        seen_at[prev] = walk.len();
        walk.push(prev);
        cur = prev;
    }
}

/// Dijkstra with ascending-id tie-breaking among equal-distance frontier
/// nodes. Returns the path and its total weight.
pub fn shortest_path(
    graph: &Graph,
    u: usize,
    v: usize,
) -> Result<(Vec<usize>, u64), SolverError> {
    check_node(graph, u)?;
    check_node(graph, v)?;
    if u == v {
        return Err(SolverError::SourceEqualsTarget(u));
    }
    let n = graph.node_count();
    let adj = graph.adjacency();
    let mut dist = vec![u64::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[u] = 0;
    heap.push(Reverse((0u64, u)));
    while let Some(Reverse((d, node))) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        if node == v {
            break;
        }
        for &(next, w) in &adj[node] {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                parent[next] = node;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    if dist[v] == u64::MAX {
        return Err(SolverError::Disconnected { from: u, to: v });
    }
    let mut path = vec![v];
    let mut node = v;
    while node != u {
        node = parent[node];
        path.push(node);
    }
    path.reverse();
    Ok((path, dist[v]))
}

/// Edmonds–Karp: BFS augmenting paths on the residual network. Returns the
/// maximum flow value.
pub fn max_flow(graph: &Graph, s: usize, t: usize) -> Result<u64, SolverError> {
    check_node(graph, s)?;
    check_node(graph, t)?;
    if s == t {
        return Err(SolverError::SourceEqualsTarget(s));
    }
    let n = graph.node_count();
    let mut capacity = vec![vec![0i64; n]; n];
    for e in graph.edges() {
        capacity[e.a][e.b] += e.weight.unwrap_or(1) as i64;
        if !graph.directed() {
            capacity[e.b][e.a] += e.weight.unwrap_or(1) as i64;
        }
    }
    let mut flow = 0i64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(cur) = queue.pop_front() {
            for next in 0..n {
                if parent[next] == usize::MAX && capacity[cur][next] > 0 {
                    parent[next] = cur;
                    queue.push_back(next);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut node = t;
        while node != s {
            let prev = parent[node];
            bottleneck = bottleneck.min(capacity[prev][node]);
            node = prev;
        }
        let mut node = t;
        while node != s {
            let prev = parent[node];
            capacity[prev][node] -= bottleneck;
            capacity[node][prev] += bottleneck;
            node = prev;
        }
        flow += bottleneck;
    }
    Ok(flow as u64)
}

/// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
/// `left` and `right` must cover every edge endpoint on opposite sides.
pub fn max_matching(
    graph: &Graph,
    left: &[usize],
    right: &[usize],
) -> Result<Vec<(usize, usize)>, SolverError> {
    let n = graph.node_count();
    let mut side = vec![0u8; n]; // 0 unknown, 1 left, 2 right
    for &u in left {
        check_node(graph, u)?;
        side[u] = 1;
    }
    for &v in right {
        check_node(graph, v)?;
        side[v] = 2;
    }
    for e in graph.edges() {
        let cross = (side[e.a] == 1 && side[e.b] == 2) || (side[e.a] == 2 && side[e.b] == 1);
        if !cross {
            return Err(SolverError::NonBipartiteEdge { u: e.a, v: e.b });
        }
    }
    let adj = graph.adjacency();
    let mut matched_right: Vec<usize> = vec![usize::MAX; n];

    fn try_augment(
        u: usize,
        adj: &[Vec<(usize, u64)>],
        matched_right: &mut [usize],
        visited: &mut [bool],
    ) -> bool {
        for &(v, _) in &adj[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if matched_right[v] == usize::MAX
                || try_augment(matched_right[v], adj, matched_right, visited)
            {
                matched_right[v] = u;
                return true;
            }
        }
        false
    }

    let mut ordered_left = left.to_vec();
    ordered_left.sort_unstable();
    for &u in &ordered_left {
        let mut visited = vec![false; n];
        try_augment(u, &adj, &mut matched_right, &mut visited);
    }
    let mut pairs: Vec<(usize, usize)> = matched_right
        .iter()
        .enumerate()
        .filter(|&(_, &u)| u != usize::MAX)
        .map(|(v, &u)| (u, v))
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// Backtracking Hamilton-path search over ascending start nodes with
/// feasibility pruning. Absent only after the search space is exhausted.
pub fn hamilton_path(graph: &Graph) -> Option<Vec<usize>> {
    let n = graph.node_count();
    if n == 1 {
        return Some(vec![0]);
    }
    let adj: Vec<Vec<usize>> = graph
        .adjacency()
        .into_iter()
        .map(|list| list.into_iter().map(|(v, _)| v).collect())
        .collect();

    // A node with degree 0 can never sit on a Hamilton path of n >= 2.
    if adj.iter().any(|list| list.is_empty()) {
        return None;
    }

    fn feasible(endpoint: usize, visited: &[bool], adj: &[Vec<usize>]) -> bool {
        let n = adj.len();
        // Degree condition on the remainder: every unvisited node needs at
        // least 2 available neighbors (unvisited or the current endpoint),
        // except the eventual last node which needs 1. More than one
        // deficient node, or any dead node, kills the branch.
        let mut deficient = 0;
        for x in 0..n {
            if visited[x] {
                continue;
            }
            let avail = adj[x]
                .iter()
                .filter(|&&y| !visited[y] || y == endpoint)
                .count();
            match avail {
                0 => return false,
                1 => {
                    deficient += 1;
                    if deficient > 1 {
                        return false;
                    }
                }
                _ => {}
            }
        }
        // The remainder plus the endpoint must be connected.
        let mut seen = vec![false; n];
        let mut stack = vec![endpoint];
        seen[endpoint] = true;
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] && (!visited[w] || w == endpoint) {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == visited.iter().filter(|&&b| !b).count()
    }

    fn extend(
        path: &mut Vec<usize>,
        visited: &mut [bool],
        adj: &[Vec<usize>],
    ) -> bool {
        if path.len() == adj.len() {
            return true;
        }
        let endpoint = *path.last().expect("path never empty");
        if !feasible(endpoint, visited, adj) {
            return false;
        }
        for &next in &adj[endpoint] {
            if visited[next] {
                continue;
            }
            visited[next] = true;
            path.push(next);
            if extend(path, visited, adj) {
                return true;
            }
            path.pop();
            visited[next] = false;
        }
        false
    }

    for start in 0..n {
        let mut visited = vec![false; n];
        visited[start] = true;
        let mut path = vec![start];
        if extend(&mut path, &mut visited, &adj) {
            return Some(path);
        }
    }
    None
}

/// One sum-aggregation convolution layer: output row v is the sum of the
/// input rows of v's neighbors; isolated nodes map to the zero vector.
pub fn gnn_layer(graph: &Graph, embeddings: &[[i64; 2]]) -> Result<Vec<[i64; 2]>, SolverError> {
    let n = graph.node_count();
    if embeddings.len() != n {
        return Err(SolverError::EmbeddingDimension {
            got: embeddings.len(),
            expected: n,
        });
    }
    let adj = graph.adjacency();
    let mut out = vec![[0i64; 2]; n];
    for v in 0..n {
        for &(u, _) in &adj[v] {
            out[v][0] += embeddings[u][0];
            out[v][1] += embeddings[u][1];
        }
    }
    Ok(out)
}

/// Dispatches the solver family for `kind` and wraps the certificate as a
/// task answer. This is the gold-answer producer and the internal-oracle
/// executor backend.
pub fn solve_task(graph: &Graph, kind: TaskKind, query: &Query) -> Result<TaskAnswer, SolverError> {
    match kind {
        TaskKind::Connectivity => {
            let (s, t) = expect_pair(kind, query)?;
            let path = find_path(graph, s, t)?;
            Ok(TaskAnswer::YesNoWitness {
                answer: path.is_some(),
                witness: path,
            })
        }
        TaskKind::Cycle => {
            let cycle = find_cycle(graph);
            Ok(TaskAnswer::YesNoWitness {
                answer: cycle.is_some(),
                witness: cycle,
            })
        }
        TaskKind::TopoSort => Ok(TaskAnswer::TopoOrder {
            order: topo_sort(graph)?,
        }),
        TaskKind::ShortestPath => {
            let (s, t) = expect_pair(kind, query)?;
            let (path, total) = shortest_path(graph, s, t)?;
            Ok(TaskAnswer::PathWeight { path, total })
        }
        TaskKind::MaxFlow => {
            let (s, t) = expect_pair(kind, query)?;
            Ok(TaskAnswer::FlowValue {
                value: max_flow(graph, s, t)?,
            })
        }
        TaskKind::BipartiteMatching => {
            let (left, right) = match query {
                Query::Bipartition { left, right } => (left, right),
                _ => return Err(SolverError::QueryMismatch { kind }),
            };
            Ok(TaskAnswer::Matching {
                pairs: max_matching(graph, left, right)?,
            })
        }
        TaskKind::HamiltonPath => {
            let path = hamilton_path(graph);
            Ok(TaskAnswer::YesNoWitness {
                answer: path.is_some(),
                witness: path,
            })
        }
        TaskKind::Gnn => {
            let vectors = match query {
                Query::Embeddings { vectors } => vectors,
                _ => return Err(SolverError::QueryMismatch { kind }),
            };
            Ok(TaskAnswer::Embeddings {
                vectors: gnn_layer(graph, vectors)?,
            })
        }
    }
}

fn expect_pair(kind: TaskKind, query: &Query) -> Result<(usize, usize), SolverError> {
    match query {
        Query::NodePair { source, target } => Ok((*source, *target)),
        _ => Err(SolverError::QueryMismatch { kind }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(false, false, n, edges.iter().map(|&(u, v)| (u, v, None))).unwrap()
    }

    fn weighted(n: usize, edges: &[(usize, usize, u64)]) -> Graph {
        Graph::new(false, true, n, edges.iter().map(|&(u, v, w)| (u, v, Some(w)))).unwrap()
    }

    #[test]
    fn bfs_on_k2() {
        let g = undirected(2, &[(0, 1)]);
        assert_eq!(find_path(&g, 0, 1).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn bfs_disconnected() {
        let g = undirected(2, &[]);
        assert_eq!(find_path(&g, 0, 1).unwrap(), None);
    }

    #[test]
    fn bfs_unique_path() {
        let g = undirected(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(find_path(&g, 0, 3).unwrap(), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn cycle_on_triangle() {
        let g = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        let cycle = find_cycle(&g).unwrap();
        assert_eq!(cycle.len(), 3);
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn tree_is_acyclic() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        assert_eq!(find_cycle(&g), None);
    }

    #[test]
    fn topo_unique_order() {
        let g = Graph::new(true, false, 3, [(0, 1, None), (1, 2, None)]).unwrap();
        assert_eq!(topo_sort(&g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn topo_tie_breaks_ascending() {
        let g = Graph::new(true, false, 3, [(0, 2, None), (1, 2, None)]).unwrap();
        assert_eq!(topo_sort(&g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn topo_reports_cycle() {
        let g = Graph::new(true, false, 2, [(0, 1, None), (1, 0, None)]).unwrap();
        match topo_sort(&g) {
            Err(SolverError::DirectedCycle(c)) => assert_eq!(c.len(), 2),
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn dijkstra_prefers_light_detour() {
        let g = weighted(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 3)]);
        assert_eq!(shortest_path(&g, 0, 2).unwrap(), (vec![0, 1, 2], 2));
    }

    #[test]
    fn dijkstra_disconnected_errors() {
        let g = weighted(3, &[(0, 1, 1)]);
        assert!(matches!(
            shortest_path(&g, 0, 2),
            Err(SolverError::Disconnected { .. })
        ));
    }

    #[test]
    fn flow_bottleneck() {
        let g = Graph::new(true, true, 3, [(0, 1, Some(3)), (1, 2, Some(2))]).unwrap();
        assert_eq!(max_flow(&g, 0, 2).unwrap(), 2);
    }

    #[test]
    fn flow_disjoint_paths_add() {
        let g = Graph::new(
            true,
            true,
            4,
            [
                (0, 1, Some(1)),
                (1, 3, Some(1)),
                (0, 2, Some(2)),
                (2, 3, Some(2)),
            ],
        )
        .unwrap();
        assert_eq!(max_flow(&g, 0, 3).unwrap(), 3);
    }

    #[test]
    fn matching_single_edge() {
        let g = undirected(4, &[(0, 2)]);
        assert_eq!(max_matching(&g, &[0, 1], &[2, 3]).unwrap(), vec![(0, 2)]);
    }

    #[test]
    fn matching_one_applicant() {
        let g = undirected(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(max_matching(&g, &[0], &[1, 2, 3]).unwrap().len(), 1);
    }

    #[test]
    fn matching_rejects_same_side_edge() {
        let g = undirected(4, &[(0, 1)]);
        assert!(matches!(
            max_matching(&g, &[0, 1], &[2, 3]),
            Err(SolverError::NonBipartiteEdge { .. })
        ));
    }

    #[test]
    fn hamilton_on_k3() {
        let g = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        let path = hamilton_path(&g).unwrap();
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn hamilton_absent_on_star() {
        let g = undirected(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(hamilton_path(&g), None);
    }

    #[test]
    fn hamilton_straight_path() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        assert_eq!(hamilton_path(&g), Some(vec![0, 1, 2]));
    }

    #[test]
    fn gnn_path_sums() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        let out = gnn_layer(&g, &[[1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(out, vec![[0, 1], [2, 1], [0, 1]]);
    }

    #[test]
    fn gnn_isolated_zero() {
        let g = undirected(2, &[]);
        assert_eq!(gnn_layer(&g, &[[5, 7], [2, 3]]).unwrap(), vec![[0, 0], [0, 0]]);
    }

    #[test]
    fn gnn_k3_symmetry() {
        let g = undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        let out = gnn_layer(&g, &[[1, 2], [3, 4], [5, 6]]).unwrap();
        assert_eq!(out, vec![[8, 10], [6, 8], [4, 6]]);
    }

    #[test]
    fn gnn_rejects_dimension_mismatch() {
        let g = undirected(2, &[(0, 1)]);
        assert!(matches!(
            gnn_layer(&g, &[[1, 1]]),
            Err(SolverError::EmbeddingDimension { .. })
        ));
    }
}
