//! Uniform access to multimodal chat backends plus the prompt templates
//! used by the benchmark: a JSON chat-completion HTTP client and a
//! deterministic scripted mock for offline runs.

pub mod backend;
pub mod prompt;

use thiserror::Error;

pub use backend::{
    Backend, BackendConfig, BackendKind, ChatOutcome, ChatRequest, HttpBackend, MockBackend,
    ScriptEntry,
};
pub use prompt::{
    build_composite, build_prompt, load_instance_image, ChatMessage, ImageAttachment, PromptMode,
    PromptSpec,
};

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("invalid backend config: {0}")]
    InvalidConfig(String),
    #[error("no script entry for instance {instance_id} tag {tag}")]
    MissingScript { instance_id: String, tag: String },
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    #[error("http status {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    BadResponse(String),
    #[error("prompt construction failed: {0}")]
    BadPrompt(String),
    #[error("rendered image missing: {0}")]
    MissingImage(String),
}
