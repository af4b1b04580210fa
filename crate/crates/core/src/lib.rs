//! Core of the graph benchmark toolkit: canonical graph types, seeded
//! instance generation with exact gold answers, deterministic layout and
//! rendering, and the response parsing / scoring machinery.

pub mod codec;
pub mod gen;
pub mod graph;
pub mod layout;
pub mod render;
pub mod solvers;
pub mod task;

pub use graph::{EdgeTuple, Graph, GraphError, Violation};
pub use task::{DifficultyTier, GoldAnswer, Query, SubQuestion, TaskAnswer, TaskInstance, TaskKind};
