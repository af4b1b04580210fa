//! Seeded construction of benchmark instances for all eight task kinds,
//! plus the graph-understanding augmentation items (overall edge
//! recognition and edge-relevant VQA).
//!
//! Everything here is a pure function of `(kind, tier, seed, config)`:
//! the same inputs always produce byte-identical instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::verify_gold;
use crate::graph::{EdgeTuple, Graph};
use crate::solvers::{self, solve_task};
use crate::task::{
    instance_questions, DifficultyTier, GoldAnswer, Query, TaskInstance, TaskKind,
};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("no {tier} tier exists for task {kind}")]
    InvalidCell { kind: TaskKind, tier: DifficultyTier },
    #[error("generation for {kind}/{tier} seed {seed} exhausted {attempts} attempts")]
    RetryExhausted {
        kind: TaskKind,
        tier: DifficultyTier,
        seed: u64,
        attempts: u32,
    },
}

/// Tunable generation parameters. Defaults: weights in `[1, 10]`,
/// embedding values in `[0, 9]`, Hamilton plant probability 0.5, retry
/// budget 50.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub weight_min: u64,
    pub weight_max: u64,
    pub embed_min: i64,
    pub embed_max: i64,
    pub hamilton_plant_prob: f64,
    pub retry_budget: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            weight_min: 1,
            weight_max: 10,
            embed_min: 0,
            embed_max: 9,
            hamilton_plant_prob: 0.5,
            retry_budget: 50,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Instance RNG derived from the (kind, tier, seed) triple so distinct
/// cells with the same seed do not share a stream.
fn instance_rng(kind: TaskKind, tier: DifficultyTier, seed: u64, attempt: u32) -> ChaCha8Rng {
    let kind_ix = TaskKind::ALL.iter().position(|k| *k == kind).unwrap() as u64;
    let tier_ix = DifficultyTier::ALL.iter().position(|t| *t == tier).unwrap() as u64;
    let mixed = splitmix64(seed)
        ^ splitmix64(kind_ix.wrapping_mul(31).wrapping_add(tier_ix))
        ^ splitmix64(0xA11CE ^ u64::from(attempt).wrapping_mul(0x5851F42D4C957F2D));
    ChaCha8Rng::seed_from_u64(mixed)
}

pub fn instance_id(kind: TaskKind, tier: DifficultyTier, seed: u64) -> String {
    format!("{}-{}-{:08}", kind.slug(), tier.slug(), seed)
}

fn max_undirected_edges(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Default edge budget: uniform in `[n-1, min(2n, n(n-1)/2)]`, the density
/// band that keeps renders legible.
fn sample_edge_target(rng: &mut ChaCha8Rng, n: usize, maxm: usize) -> usize {
    let lo = (n.saturating_sub(1)).min(maxm).max(1);
    let hi = (2 * n).min(maxm).max(lo);
    rng.gen_range(lo..=hi)
}

/// Random spanning tree over `nodes` by random attachment.
fn spanning_tree(rng: &mut ChaCha8Rng, nodes: &[usize]) -> Vec<(usize, usize)> {
    let mut order = nodes.to_vec();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..order.len() {
        let parent = order[rng.gen_range(0..i)];
        edges.push((order[i], parent));
    }
    edges
}

/// Adds random distinct undirected edges among `nodes` until `target`
/// edges exist (or the clique is full).
fn add_undirected_edges(
    rng: &mut ChaCha8Rng,
    nodes: &[usize],
    existing: &mut BTreeSet<(usize, usize)>,
    target: usize,
) {
    let full = nodes.len() * (nodes.len() - 1) / 2;
    let target = target.min(full);
    let mut attempts = 0;
    while existing.len() < target && attempts < target * 40 {
        attempts += 1;
        let a = nodes[rng.gen_range(0..nodes.len())];
        let b = nodes[rng.gen_range(0..nodes.len())];
        if a == b {
            continue;
        }
        existing.insert((a.min(b), a.max(b)));
    }
    if existing.len() < target {
        // Dense corner: enumerate the complement and draw from it.
        let mut candidates = Vec::new();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                let key = (a.min(b), a.max(b));
                if !existing.contains(&key) {
                    candidates.push(key);
                }
            }
        }
        candidates.shuffle(rng);
        for key in candidates.into_iter().take(target - existing.len()) {
            existing.insert(key);
        }
    }
}

fn attach_weights(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<(usize, usize, Option<u64>)> {
    edges
        .into_iter()
        .map(|(a, b)| (a, b, Some(rng.gen_range(cfg.weight_min..=cfg.weight_max))))
        .collect()
}

fn unweighted(edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize, Option<u64>)> {
    edges.into_iter().map(|(a, b)| (a, b, None)).collect()
}

/// Random connected undirected edge set over all `n` nodes.
fn connected_edge_set(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<(usize, usize)> {
    let nodes: Vec<usize> = (0..n).collect();
    let mut edges: BTreeSet<(usize, usize)> = spanning_tree(rng, &nodes)
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let target = sample_edge_target(rng, n, max_undirected_edges(n));
    add_undirected_edges(rng, &nodes, &mut edges, target);
    edges
}

fn build_connectivity(rng: &mut ChaCha8Rng, n: usize) -> (Graph, Query) {
    if rng.gen_bool(0.5) {
        let edges = connected_edge_set(rng, n);
        let source = rng.gen_range(0..n);
        let mut target = rng.gen_range(0..n);
        while target == source {
            target = rng.gen_range(0..n);
        }
        let graph = Graph::new(false, false, n, unweighted(edges)).unwrap();
        (graph, Query::NodePair { source, target })
    } else {
        // Two internally connected components with no cross edges; the
        // query endpoints live in different components.
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let split = rng.gen_range(1..n);
        let (left, right) = perm.split_at(split);
        let mut edges = BTreeSet::new();
        for part in [left, right] {
            let mut part_edges: BTreeSet<(usize, usize)> = spanning_tree(rng, part)
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            if part.len() >= 2 {
                let maxm = part.len() * (part.len() - 1) / 2;
                let target = sample_edge_target(rng, part.len(), maxm);
                add_undirected_edges(rng, part, &mut part_edges, target);
            }
            edges.extend(part_edges);
        }
        let source = left[rng.gen_range(0..left.len())];
        let target = right[rng.gen_range(0..right.len())];
        let graph = Graph::new(false, false, n, unweighted(edges)).unwrap();
        (graph, Query::NodePair { source, target })
    }
}

fn build_cycle(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let nodes: Vec<usize> = (0..n).collect();
    if rng.gen_bool(0.5) {
        // Forest: spanning tree with a few edges removed (keep >= 1).
        let mut tree = spanning_tree(rng, &nodes);
        tree.shuffle(rng);
        let removals = rng.gen_range(0..=(n.saturating_sub(2)).min(n / 3 + 1));
        tree.truncate(tree.len() - removals.min(tree.len().saturating_sub(1)));
        Graph::new(false, false, n, unweighted(tree)).unwrap()
    } else {
        // Spanning tree plus at least one chord.
        let mut edges: BTreeSet<(usize, usize)> = spanning_tree(rng, &nodes)
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let maxm = max_undirected_edges(n);
        let target = rng.gen_range((n).min(maxm)..=(2 * n).min(maxm).max(n.min(maxm)));
        add_undirected_edges(rng, &nodes, &mut edges, target);
        Graph::new(false, false, n, unweighted(edges)).unwrap()
    }
}

fn build_topo(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let maxm = max_undirected_edges(n);
    let target = sample_edge_target(rng, n, maxm);
    let mut slots = BTreeSet::new();
    let mut attempts = 0;
    while slots.len() < target && attempts < target * 40 {
        attempts += 1;
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        slots.insert((i, j));
    }
    let edges: Vec<(usize, usize)> = slots.into_iter().map(|(i, j)| (perm[i], perm[j])).collect();
    Graph::new(true, false, n, unweighted(edges)).unwrap()
}

fn build_shortest_path(rng: &mut ChaCha8Rng, cfg: &GenConfig, n: usize) -> (Graph, Query) {
    let edges = connected_edge_set(rng, n);
    let source = rng.gen_range(0..n);
    let mut target = rng.gen_range(0..n);
    while target == source {
        target = rng.gen_range(0..n);
    }
    let graph = Graph::new(false, true, n, attach_weights(rng, cfg, edges)).unwrap();
    (graph, Query::NodePair { source, target })
}

fn build_max_flow(rng: &mut ChaCha8Rng, cfg: &GenConfig, n: usize) -> (Graph, Query) {
    let source = rng.gen_range(0..n);
    let mut sink = rng.gen_range(0..n);
    while sink == source {
        sink = rng.gen_range(0..n);
    }
    // Plant one simple source->sink path so the instance carries flow.
    let mut others: Vec<usize> = (0..n).filter(|&v| v != source && v != sink).collect();
    others.shuffle(rng);
    let via = rng.gen_range(0..=others.len().min(3));
    let mut path = vec![source];
    path.extend(others.into_iter().take(via));
    path.push(sink);
    let mut edges: BTreeSet<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    let target = sample_edge_target(rng, n, n * (n - 1));
    let mut attempts = 0;
    while edges.len() < target && attempts < target * 40 {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a, b));
        }
    }
    let graph = Graph::new(true, true, n, attach_weights(rng, cfg, edges)).unwrap();
    (
        graph,
        Query::NodePair {
            source,
            target: sink,
        },
    )
}

fn build_bipartite(rng: &mut ChaCha8Rng, n: usize) -> (Graph, Query) {
    let lo = (n / 3).max(1);
    let hi = (2 * n / 3).max(lo).min(n - 1);
    let left_size = rng.gen_range(lo..=hi);
    let left: Vec<usize> = (0..left_size).collect();
    let right: Vec<usize> = (left_size..n).collect();
    let full = left.len() * right.len();
    let lo_m = (n - 1).min(full).max(1);
    let hi_m = (2 * n).min(full).max(lo_m);
    let target = rng.gen_range(lo_m..=hi_m);
    let mut edges = BTreeSet::new();
    let mut attempts = 0;
    while edges.len() < target && attempts < target * 40 {
        attempts += 1;
        let u = left[rng.gen_range(0..left.len())];
        let v = right[rng.gen_range(0..right.len())];
        edges.insert((u, v));
    }
    let graph = Graph::new(false, false, n, unweighted(edges)).unwrap();
    (graph, Query::Bipartition { left, right })
}

fn build_hamilton(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    n: usize,
) -> Option<Graph> {
    if rng.gen_bool(cfg.hamilton_plant_prob) {
        // Plant a Hamilton path, then sprinkle extra edges on top.
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut edges: BTreeSet<(usize, usize)> = order
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect();
        let target = sample_edge_target(rng, n, max_undirected_edges(n));
        add_undirected_edges(rng, &(0..n).collect::<Vec<_>>(), &mut edges, target);
        Some(Graph::new(false, false, n, unweighted(edges)).unwrap())
    } else {
        // Sparse random graph; accept only when the solver certifies that
        // no Hamilton path exists.
        let nodes: Vec<usize> = (0..n).collect();
        let maxm = max_undirected_edges(n);
        let lo = n.saturating_sub(2).max(1).min(maxm);
        let hi = n.min(maxm).max(lo);
        let target = rng.gen_range(lo..=hi);
        let mut edges = BTreeSet::new();
        add_undirected_edges(rng, &nodes, &mut edges, target);
        let graph = Graph::new(false, false, n, unweighted(edges)).unwrap();
        if graph.edge_count() >= 1 && solvers::hamilton_path(&graph).is_none() {
            Some(graph)
        } else {
            None
        }
    }
}

fn build_gnn(rng: &mut ChaCha8Rng, cfg: &GenConfig, n: usize) -> (Graph, Query) {
    let nodes: Vec<usize> = (0..n).collect();
    let maxm = max_undirected_edges(n);
    let target = sample_edge_target(rng, n, maxm);
    let mut edges = BTreeSet::new();
    add_undirected_edges(rng, &nodes, &mut edges, target);
    let graph = Graph::new(false, false, n, unweighted(edges)).unwrap();
    let vectors: Vec<[i64; 2]> = (0..n)
        .map(|_| {
            [
                rng.gen_range(cfg.embed_min..=cfg.embed_max),
                rng.gen_range(cfg.embed_min..=cfg.embed_max),
            ]
        })
        .collect();
    (graph, Query::Embeddings { vectors })
}

/// Deterministic instance construction for a valid `(kind, tier)` cell.
pub fn generate_instance(
    kind: TaskKind,
    tier: DifficultyTier,
    seed: u64,
) -> Result<TaskInstance, GenError> {
    generate_instance_with(&GenConfig::default(), kind, tier, seed)
}

pub fn generate_instance_with(
    cfg: &GenConfig,
    kind: TaskKind,
    tier: DifficultyTier,
    seed: u64,
) -> Result<TaskInstance, GenError> {
    let range = tier
        .node_range(kind)
        .ok_or(GenError::InvalidCell { kind, tier })?;
    for attempt in 0..cfg.retry_budget {
        let mut rng = instance_rng(kind, tier, seed, attempt);
        let n = rng.gen_range(range.clone());
        let (graph, query) = match kind {
            TaskKind::Connectivity => build_connectivity(&mut rng, n),
            TaskKind::Cycle => (build_cycle(&mut rng, n), Query::None),
            TaskKind::TopoSort => (build_topo(&mut rng, n), Query::None),
            TaskKind::ShortestPath => build_shortest_path(&mut rng, cfg, n),
            TaskKind::MaxFlow => build_max_flow(&mut rng, cfg, n),
            TaskKind::BipartiteMatching => build_bipartite(&mut rng, n),
            TaskKind::HamiltonPath => match build_hamilton(&mut rng, cfg, n) {
                Some(graph) => (graph, Query::None),
                None => continue,
            },
            TaskKind::Gnn => build_gnn(&mut rng, cfg, n),
        };
        if graph.edge_count() == 0 {
            continue; // edge metrics require at least one edge
        }
        let task = match solve_task(&graph, kind, &query) {
            Ok(answer) => answer,
            Err(_) => continue,
        };
        let id = instance_id(kind, tier, seed);
        let instance = TaskInstance {
            image_ref: format!("{id}.png"),
            id,
            kind,
            tier,
            query: query.clone(),
            questions: instance_questions(kind, &query),
            gold: GoldAnswer {
                node_count: graph.node_count(),
                edge_set: graph.edges().to_vec(),
                task,
            },
            graph,
            seed,
        };
        debug_assert!(instance.check_tier());
        debug_assert!(verify_gold(&instance), "gold self-consistency for {}", instance.id);
        return Ok(instance);
    }
    Err(GenError::RetryExhausted {
        kind,
        tier,
        seed,
        attempts: cfg.retry_budget,
    })
}

// ---------------------------------------------------------------------------
// Graph-understanding augmentation items.
// ---------------------------------------------------------------------------

/// Gold answer for one augmentation item.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AugmentationGold {
    EdgeSet { edges: Vec<EdgeTuple> },
    YesNo { answer: bool },
    Number { value: u64 },
}

impl AugmentationGold {
    pub fn as_text(&self) -> String {
        match self {
            AugmentationGold::EdgeSet { edges } => edges
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            AugmentationGold::YesNo { answer } => {
                if *answer { "yes" } else { "no" }.to_string()
            }
            AugmentationGold::Number { value } => value.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentationItem {
    pub id: String,
    pub graph: Graph,
    pub image_ref: String,
    pub question: String,
    pub gold: AugmentationGold,
    pub seed: u64,
}

/// Node caps for augmentation graphs: 25 for undirected, 20 for directed.
pub const AUG_CAP_UNDIRECTED: usize = 25;
pub const AUG_CAP_DIRECTED: usize = 20;

fn random_any_graph(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Graph {
    let directed = rng.gen_bool(0.5);
    let weighted = rng.gen_bool(0.5);
    let cap = if directed { AUG_CAP_DIRECTED } else { AUG_CAP_UNDIRECTED };
    let n = rng.gen_range(5..=cap);
    let maxm = if directed { n * (n - 1) } else { max_undirected_edges(n) };
    let target = sample_edge_target(rng, n, maxm);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut attempts = 0;
    while edges.len() < target && attempts < target * 40 {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        if directed {
            edges.insert((a, b));
        } else {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    if edges.is_empty() {
        edges.insert((0, 1));
    }
    let list = if weighted {
        attach_weights(rng, cfg, edges)
    } else {
        unweighted(edges)
    };
    Graph::new(directed, weighted, n, list).unwrap()
}

/// Gold computation for an edge-relevant VQA question; exposed for direct
/// testing.
pub fn vqa_edge_exists(graph: &Graph, a: usize, b: usize) -> AugmentationGold {
    AugmentationGold::YesNo {
        answer: graph.has_edge(a, b),
    }
}

pub fn vqa_edge_weight(graph: &Graph, a: usize, b: usize) -> Option<AugmentationGold> {
    graph
        .edge_weight(a, b)
        .map(|value| AugmentationGold::Number { value })
}

pub fn vqa_degree(graph: &Graph, v: usize) -> AugmentationGold {
    let degree = graph.neighbors(v).map(|ns| ns.len()).unwrap_or(0) as u64;
    AugmentationGold::Number { value: degree }
}

/// Generates `count` augmentation items: half overall edge recognition,
/// half edge-relevant VQA, over all four graph types within the node caps.
pub fn generate_augmentation(count: usize, seed: u64) -> Vec<AugmentationItem> {
    generate_augmentation_with(&GenConfig::default(), count, seed)
}

pub fn generate_augmentation_with(
    cfg: &GenConfig,
    count: usize,
    seed: u64,
) -> Vec<AugmentationItem> {
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let item_seed = splitmix64(seed ^ splitmix64(index as u64 + 1));
        let mut rng = ChaCha8Rng::seed_from_u64(item_seed);
        let graph = random_any_graph(&mut rng, cfg);
        let n = graph.node_count();
        let (question, gold) = if rng.gen_bool(0.5) {
            let kind_word = match (graph.directed(), graph.weighted()) {
                (false, false) => "undirected and unweighted",
                (false, true) => "undirected and weighted",
                (true, false) => "directed and unweighted",
                (true, true) => "directed and weighted",
            };
            (
                format!("List all edges as tuples in the {kind_word} graph."),
                AugmentationGold::EdgeSet {
                    edges: graph.edges().to_vec(),
                },
            )
        } else {
            let pick_pair = |rng: &mut ChaCha8Rng, graph: &Graph| -> (usize, usize) {
                if rng.gen_bool(0.5) && graph.edge_count() > 0 {
                    let e = graph.edges()[rng.gen_range(0..graph.edge_count())];
                    (e.a, e.b)
                } else {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n);
                    while b == a {
                        b = rng.gen_range(0..n);
                    }
                    (a, b)
                }
            };
            let variant_count = if graph.weighted() { 3 } else { 2 };
            match rng.gen_range(0..variant_count) {
                0 => {
                    let (a, b) = pick_pair(&mut rng, &graph);
                    let question = if graph.directed() {
                        format!("Is there an edge from node {a} to node {b}?")
                    } else {
                        format!("Is there an edge between node {a} and node {b}?")
                    };
                    (question, vqa_edge_exists(&graph, a, b))
                }
                1 => {
                    let v = rng.gen_range(0..n);
                    let question = if graph.directed() {
                        format!("What is the out-degree of node {v}?")
                    } else {
                        format!("What is the degree of node {v}?")
                    };
                    (question, vqa_degree(&graph, v))
                }
                _ => {
                    let e = graph.edges()[rng.gen_range(0..graph.edge_count())];
                    let question = if graph.directed() {
                        format!("What is the weight of the edge from node {} to node {}?", e.a, e.b)
                    } else {
                        format!(
                            "What is the weight of the edge between node {} and node {}?",
                            e.a, e.b
                        )
                    };
                    (
                        question,
                        vqa_edge_weight(&graph, e.a, e.b).expect("edge drawn from edge list"),
                    )
                }
            }
        };
        let id = format!("aug-{seed:08}-{index:06}");
        out.push(AugmentationItem {
            image_ref: format!("{id}.png"),
            id,
            graph,
            question,
            gold,
            seed: item_seed,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::TaskAnswer;

    #[test]
    fn connectivity_easy_in_range() {
        let inst = generate_instance(TaskKind::Connectivity, DifficultyTier::Easy, 7).unwrap();
        assert!((5..=10).contains(&inst.graph.node_count()));
    }

    #[test]
    fn gnn_easy_has_embeddings() {
        for seed in 0..5 {
            let inst = generate_instance(TaskKind::Gnn, DifficultyTier::Easy, seed).unwrap();
            let n = inst.graph.node_count();
            assert!((5..=8).contains(&n));
            match &inst.query {
                Query::Embeddings { vectors } => assert_eq!(vectors.len(), n),
                other => panic!("expected embeddings query, got {other:?}"),
            }
        }
    }

    #[test]
    fn invalid_cell_rejected() {
        assert!(matches!(
            generate_instance(TaskKind::ShortestPath, DifficultyTier::Medium, 0),
            Err(GenError::InvalidCell { .. })
        ));
    }

    #[test]
    fn determinism_same_seed() {
        let a = generate_instance(TaskKind::MaxFlow, DifficultyTier::Easy, 42).unwrap();
        let b = generate_instance(TaskKind::MaxFlow, DifficultyTier::Easy, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn connectivity_balance_holds_on_sample() {
        let mut connected = 0;
        for seed in 0..200 {
            let inst =
                generate_instance(TaskKind::Connectivity, DifficultyTier::Easy, seed).unwrap();
            if matches!(inst.gold.task, TaskAnswer::YesNoWitness { answer: true, .. }) {
                connected += 1;
            }
        }
        let fraction = connected as f64 / 200.0;
        assert!((0.4..=0.6).contains(&fraction), "fraction {fraction}");
    }

    #[test]
    fn vqa_golds_on_small_graphs() {
        let k2 = Graph::new(false, false, 2, [(0, 1, None)]).unwrap();
        assert_eq!(vqa_edge_exists(&k2, 0, 1), AugmentationGold::YesNo { answer: true });
        let path = Graph::new(false, false, 3, [(0, 1, None), (1, 2, None)]).unwrap();
        assert_eq!(
            AugmentationGold::EdgeSet { edges: path.edges().to_vec() }.as_text(),
            "(0, 1), (1, 2)"
        );
        assert_eq!(vqa_degree(&path, 1), AugmentationGold::Number { value: 2 });
    }

    #[test]
    fn augmentation_respects_caps() {
        for item in generate_augmentation(300, 5) {
            let cap = if item.graph.directed() {
                AUG_CAP_DIRECTED
            } else {
                AUG_CAP_UNDIRECTED
            };
            assert!(item.graph.node_count() <= cap);
        }
    }
}
