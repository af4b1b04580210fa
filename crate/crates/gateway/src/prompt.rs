//! Prompt assembly for the three per-instance questions under the four
//! prompting modes, including few-shot exemplar composites.

use std::str::FromStr;

use graphprobe_core::codec::{render_edge_tuples, render_node_count, render_task_answer};
use graphprobe_core::layout::layout;
use graphprobe_core::render::{compose_vertical, rasterize, render, wrap_text, SvgDocument};
use graphprobe_core::task::{q3_demand, SubQuestion, TaskInstance};
use graphprobe_core::DifficultyTier;
use serde::{Deserialize, Serialize};

use crate::GatewayError;

/// Prompting mode from the benchmark's prompt table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PromptMode {
    ZeroShot,
    FewShot(usize),
    ZeroCot,
    FewCot(usize),
}

impl PromptMode {
    pub fn shot_count(self) -> usize {
        match self {
            PromptMode::ZeroShot | PromptMode::ZeroCot => 0,
            PromptMode::FewShot(k) | PromptMode::FewCot(k) => k,
        }
    }

    pub fn chain_of_thought(self) -> bool {
        matches!(self, PromptMode::ZeroCot | PromptMode::FewCot(_))
    }

    pub fn label(self) -> String {
        match self {
            PromptMode::ZeroShot => "zero-shot".into(),
            PromptMode::FewShot(k) => format!("few-shot:{k}"),
            PromptMode::ZeroCot => "zero-cot".into(),
            PromptMode::FewCot(k) => format!("few-cot:{k}"),
        }
    }
}

impl FromStr for PromptMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero-shot" => return Ok(PromptMode::ZeroShot),
            "zero-cot" => return Ok(PromptMode::ZeroCot),
            _ => {}
        }
        let parse_k = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| format!("bad shot count in {s:?}"))
        };
        if let Some(rest) = s.strip_prefix("few-shot:") {
            return Ok(PromptMode::FewShot(parse_k(rest)?));
        }
        if let Some(rest) = s.strip_prefix("few-cot:") {
            return Ok(PromptMode::FewCot(parse_k(rest)?));
        }
        Err(format!(
            "unknown prompt mode {s:?} (expected zero-shot, zero-cot, few-shot:K or few-cot:K)"
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageAttachment {
    pub media_type: &'static str,
    pub data: Vec<u8>,
}

/// One prompt request: mode, sub-question and the exemplars backing the
/// few-shot composite. Exemplars must come from non-hard tiers.
#[derive(Clone, Debug)]
pub struct PromptSpec {
    pub mode: PromptMode,
    pub sub_question: SubQuestion,
    pub exemplars: Vec<TaskInstance>,
    /// Raster width for the exemplar composite.
    pub composite_width: u32,
}

impl PromptSpec {
    pub fn new(mode: PromptMode, sub_question: SubQuestion) -> Self {
        PromptSpec {
            mode,
            sub_question,
            exemplars: Vec::new(),
            composite_width: 512,
        }
    }

    pub fn with_exemplars(mut self, exemplars: Vec<TaskInstance>) -> Result<Self, GatewayError> {
        if self.mode.shot_count() >= 1 {
            if exemplars.len() != self.mode.shot_count() {
                return Err(GatewayError::BadPrompt(format!(
                    "mode {} needs {} exemplars, got {}",
                    self.mode.label(),
                    self.mode.shot_count(),
                    exemplars.len()
                )));
            }
            if exemplars.iter().any(|e| e.tier == DifficultyTier::Hard) {
                return Err(GatewayError::BadPrompt(
                    "few-shot exemplars must come from easy/medium subsets".into(),
                ));
            }
        }
        self.exemplars = exemplars;
        Ok(self)
    }
}

fn few_shot_prefix(k: usize) -> String {
    format!(
        "The first URL refers to the first image and the second URL refers to the second image. \
         Following the {k} in-context examples shown in the first composite image, answer the \
         following question for the second image."
    )
}

/// The gold answer text of an exemplar for a sub-question, used as the
/// composite caption.
fn exemplar_answer(instance: &TaskInstance, sub: SubQuestion) -> String {
    match sub {
        SubQuestion::Q1 => render_node_count(instance.graph.node_count()),
        SubQuestion::Q2 => render_edge_tuples(instance.kind, &instance.gold.edge_set),
        SubQuestion::Q3 => {
            render_task_answer(instance.kind, &instance.query, &instance.gold.task)
        }
    }
}

fn exemplar_question(instance: &TaskInstance, sub: SubQuestion) -> &str {
    match sub {
        SubQuestion::Q1 => &instance.questions[0],
        SubQuestion::Q2 => &instance.questions[1],
        SubQuestion::Q3 => &instance.questions[2],
    }
}

/// Builds the composite document: each exemplar's rendered graph with its
/// question and gold answer captioned beneath.
pub fn build_composite(
    exemplars: &[TaskInstance],
    sub: SubQuestion,
) -> Result<SvgDocument, GatewayError> {
    let mut panels = Vec::new();
    for exemplar in exemplars {
        let lay = layout(&exemplar.graph, exemplar.seed)
            .map_err(|e| GatewayError::BadPrompt(format!("exemplar layout: {e}")))?;
        let doc = render(&exemplar.graph, &lay)
            .map_err(|e| GatewayError::BadPrompt(format!("exemplar render: {e}")))?;
        let mut captions = wrap_text(&format!("Q: {}", exemplar_question(exemplar, sub)), 70);
        captions.extend(wrap_text(&format!("A: {}", exemplar_answer(exemplar, sub)), 70));
        panels.push((doc, captions));
    }
    Ok(compose_vertical(&panels))
}

/// Assembles the message and attachment list for one request. The caller
/// supplies the instance's rendered image bytes.
pub fn build_prompt(
    instance: &TaskInstance,
    spec: &PromptSpec,
    instance_image: &[u8],
) -> Result<(Vec<ChatMessage>, Vec<ImageAttachment>), GatewayError> {
    let k = spec.mode.shot_count();
    let question = exemplar_question(instance, spec.sub_question).to_string();
    let mut text = String::new();
    if k >= 1 {
        text.push_str(&few_shot_prefix(k));
        text.push(' ');
    }
    match spec.sub_question {
        SubQuestion::Q1 | SubQuestion::Q2 => text.push_str(&question),
        SubQuestion::Q3 => {
            if k >= 1 {
                text.push_str(&format!("Question: {question}"));
            } else {
                text.push_str(&format!("Answer the following question: {question}"));
            }
            if let Some(demand) = q3_demand(instance.kind, &instance.query) {
                text.push_str(&format!(" (Demand: {demand})"));
            }
            if spec.mode.chain_of_thought() {
                text.push_str(" Let's think step by step.");
            }
        }
    }
    let mut images = Vec::new();
    if k >= 1 {
        if spec.exemplars.len() != k {
            return Err(GatewayError::BadPrompt(format!(
                "mode {} needs {k} exemplars, got {}",
                spec.mode.label(),
                spec.exemplars.len()
            )));
        }
        let composite = build_composite(&spec.exemplars, spec.sub_question)?;
        let png = rasterize(&composite, spec.composite_width)
            .map_err(|e| GatewayError::BadPrompt(format!("composite raster: {e}")))?;
        images.push(ImageAttachment {
            media_type: "image/png",
            data: png,
        });
    }
    images.push(ImageAttachment {
        media_type: "image/png",
        data: instance_image.to_vec(),
    });
    let messages = vec![ChatMessage {
        role: "user".into(),
        content: text,
    }];
    Ok((messages, images))
}

/// Loads the instance's rendered image from the dataset directory.
pub fn load_instance_image(
    dataset_dir: &std::path::Path,
    instance: &TaskInstance,
) -> Result<Vec<u8>, GatewayError> {
    let path = dataset_dir.join(&instance.image_ref);
    std::fs::read(&path).map_err(|_| GatewayError::MissingImage(path.display().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphprobe_core::gen::generate_instance;
    use graphprobe_core::{DifficultyTier, TaskKind};

    fn easy(kind: TaskKind, seed: u64) -> TaskInstance {
        generate_instance(kind, DifficultyTier::Easy, seed).unwrap()
    }

    #[test]
    fn mode_labels_round_trip() {
        for mode in [
            PromptMode::ZeroShot,
            PromptMode::FewShot(2),
            PromptMode::ZeroCot,
            PromptMode::FewCot(3),
        ] {
            assert_eq!(mode.label().parse::<PromptMode>().unwrap(), mode);
        }
        assert!("few-shot:0".parse::<PromptMode>().is_err());
    }

    #[test]
    fn zero_shot_q2_carries_tuple_demand() {
        let instance = easy(TaskKind::ShortestPath, 3);
        let spec = PromptSpec::new(PromptMode::ZeroShot, SubQuestion::Q2);
        let (messages, images) = build_prompt(&instance, &spec, b"png").unwrap();
        assert_eq!(messages.len(), 1);
        assert!(messages[0]
            .content
            .contains("Please use tuples to represent the edges"));
        assert!(messages[0].content.contains("(node1, node2, weight)"));
        assert_eq!(images.len(), 1);
    }

    #[test]
    fn zero_cot_q3_ends_with_cot() {
        let instance = easy(TaskKind::Connectivity, 5);
        let spec = PromptSpec::new(PromptMode::ZeroCot, SubQuestion::Q3);
        let (messages, _) = build_prompt(&instance, &spec, b"png").unwrap();
        assert!(messages[0].content.ends_with("Let's think step by step."));
    }

    #[test]
    fn few_shot_two_images_composite_first() {
        let instance = easy(TaskKind::Cycle, 2);
        let exemplars = vec![easy(TaskKind::Cycle, 100), easy(TaskKind::Cycle, 101)];
        let spec = PromptSpec::new(PromptMode::FewShot(2), SubQuestion::Q3)
            .with_exemplars(exemplars)
            .unwrap();
        let (messages, images) = build_prompt(&instance, &spec, b"instance-png").unwrap();
        assert_eq!(images.len(), 2);
        // composite first: a real PNG, larger than the stub instance bytes
        assert!(images[0].data.starts_with(b"\x89PNG"));
        assert_eq!(images[1].data, b"instance-png");
        assert!(messages[0].content.starts_with("The first URL refers"));
        assert!(messages[0].content.contains("Following the 2 in-context examples"));
    }

    #[test]
    fn hard_exemplars_rejected() {
        let hard = generate_instance(TaskKind::Cycle, DifficultyTier::Hard, 0).unwrap();
        let err = PromptSpec::new(PromptMode::FewShot(1), SubQuestion::Q3)
            .with_exemplars(vec![hard]);
        assert!(err.is_err());
    }

    #[test]
    fn build_prompt_deterministic() {
        let instance = easy(TaskKind::Gnn, 8);
        let exemplars = vec![easy(TaskKind::Gnn, 200)];
        let spec = PromptSpec::new(PromptMode::FewCot(1), SubQuestion::Q3)
            .with_exemplars(exemplars)
            .unwrap();
        let a = build_prompt(&instance, &spec, b"png").unwrap();
        let b = build_prompt(&instance, &spec, b"png").unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
