//! Chat backends: a JSON chat-completion HTTP client with retries, and a
//! scripted mock that keeps every downstream test fully offline.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::prompt::{ChatMessage, ImageAttachment};
use crate::GatewayError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Http,
    Mock,
}

/// Connection settings for one backend. Credentials are referenced by
/// environment variable name and never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: Option<u32>,
    pub timeout_secs: u64,
    pub retries: u32,
    pub credential_env: Option<String>,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::Mock,
            endpoint: String::new(),
            model: "mock".into(),
            temperature: 0.2,
            max_tokens: None,
            timeout_secs: 60,
            retries: 2,
            credential_env: None,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.temperature < 0.0 {
            return Err(GatewayError::InvalidConfig(format!(
                "temperature {} must be >= 0",
                self.temperature
            )));
        }
        if self.timeout_secs == 0 {
            return Err(GatewayError::InvalidConfig("timeout must be > 0".into()));
        }
        if self.kind == BackendKind::Http && self.endpoint.is_empty() {
            return Err(GatewayError::InvalidConfig(
                "http backend requires an endpoint".into(),
            ));
        }
        Ok(())
    }
}

/// One request routed through a backend. `tag` identifies the pipeline
/// step (q1/q2/q3 for evaluation; the agent pipeline uses its own tags)
/// and keys the mock script.
pub struct ChatRequest<'a> {
    pub instance_id: &'a str,
    pub tag: &'a str,
    pub messages: &'a [ChatMessage],
    pub images: &'a [ImageAttachment],
}

#[derive(Clone, Debug)]
pub struct ChatOutcome {
    pub text: String,
    pub attempts: u32,
    pub elapsed: Duration,
}

/// A scripted response line: `{instance_id, tag, response}` in JSONL.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub instance_id: String,
    pub tag: String,
    pub response: String,
}

/// Deterministic offline backend. Responses are consumed per
/// (instance id, tag) key in script order; the final entry repeats so
/// retried steps stay answerable.
pub struct MockBackend {
    script: Mutex<HashMap<(String, String), VecDeque<String>>>,
}

impl MockBackend {
    pub fn new(entries: impl IntoIterator<Item = ScriptEntry>) -> Self {
        let mut script: HashMap<(String, String), VecDeque<String>> = HashMap::new();
        for entry in entries {
            script
                .entry((entry.instance_id, entry.tag))
                .or_default()
                .push_back(entry.response);
        }
        MockBackend {
            script: Mutex::new(script),
        }
    }

    pub fn from_jsonl(text: &str) -> Result<Self, GatewayError> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: ScriptEntry = serde_json::from_str(line).map_err(|e| {
                GatewayError::InvalidConfig(format!("bad script line {}: {e}", idx + 1))
            })?;
            entries.push(entry);
        }
        Ok(MockBackend::new(entries))
    }

    fn respond(&self, instance_id: &str, tag: &str) -> Result<String, GatewayError> {
        let key = (instance_id.to_string(), tag.to_string());
        let mut script = self.script.lock().expect("script lock");
        match script.get_mut(&key) {
            Some(queue) if queue.len() > 1 => Ok(queue.pop_front().expect("nonempty")),
            Some(queue) if queue.len() == 1 => Ok(queue.front().expect("nonempty").clone()),
            _ => Err(GatewayError::MissingScript {
                instance_id: instance_id.to_string(),
                tag: tag.to_string(),
            }),
        }
    }
}

/// HTTP chat-completion backend speaking the de-facto JSON shape:
/// role/content messages, images inlined as base64 data URLs.
pub struct HttpBackend {
    config: BackendConfig,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(config: BackendConfig) -> Result<Self, GatewayError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| GatewayError::Transport(e.to_string()))?;
        Ok(HttpBackend { config, client })
    }

    fn credential(&self) -> Result<Option<String>, GatewayError> {
        match &self.config.credential_env {
            None => Ok(None),
            Some(name) => std::env::var(name)
                .map(Some)
                .map_err(|_| GatewayError::MissingCredential(name.clone())),
        }
    }

    fn request_body(&self, req: &ChatRequest<'_>) -> serde_json::Value {
        let mut content = Vec::new();
        for message in req.messages {
            content.push(json!({ "type": "text", "text": message.content }));
        }
        for image in req.images {
            let url = format!(
                "data:{};base64,{}",
                image.media_type,
                BASE64.encode(&image.data)
            );
            content.push(json!({ "type": "image_url", "image_url": { "url": url } }));
        }
        let mut body = json!({
            "model": self.config.model,
            "temperature": self.config.temperature,
            "messages": [{ "role": "user", "content": content }],
        });
        if let Some(max_tokens) = self.config.max_tokens {
            body["max_tokens"] = json!(max_tokens);
        }
        body
    }

    fn extract_text(value: &serde_json::Value) -> Result<String, GatewayError> {
        let content = &value["choices"][0]["message"]["content"];
        if let Some(text) = content.as_str() {
            return Ok(text.to_string());
        }
        if let Some(parts) = content.as_array() {
            let text: String = parts
                .iter()
                .filter_map(|p| p["text"].as_str())
                .collect::<Vec<_>>()
                .join("");
            if !text.is_empty() {
                return Ok(text);
            }
        }
        Err(GatewayError::BadResponse(format!(
            "no message content in response: {value}"
        )))
    }

    fn call(&self, req: &ChatRequest<'_>) -> Result<String, GatewayError> {
        let body = self.request_body(req);
        let mut attempt = 0u32;
        loop {
            attempt += 1;
            let mut builder = self.client.post(&self.config.endpoint).json(&body);
            if let Some(token) = self.credential()? {
                builder = builder.bearer_auth(token);
            }
            let result = builder.send();
            let retryable = match &result {
                Ok(resp) => {
                    let status = resp.status();
                    status.as_u16() == 429 || status.is_server_error()
                }
                Err(_) => true,
            };
            match result {
                Ok(resp) if resp.status().is_success() => {
                    let value: serde_json::Value = resp
                        .json()
                        .map_err(|e| GatewayError::BadResponse(e.to_string()))?;
                    return Self::extract_text(&value);
                }
                Ok(resp) if !retryable || attempt > self.config.retries => {
                    let status = resp.status().as_u16();
                    let text = resp.text().unwrap_or_default();
                    return Err(GatewayError::Http { status, body: text });
                }
                Err(e) if attempt > self.config.retries => {
                    return Err(GatewayError::Transport(e.to_string()));
                }
                _ => {
                    // Exponential backoff with mild jitter before retrying.
                    let base = 200u64.saturating_mul(1 << attempt.min(5));
                    let jitter = (Instant::now().elapsed().subsec_nanos() as u64) % 97;
                    std::thread::sleep(Duration::from_millis(base + jitter));
                }
            }
        }
    }
}

/// A chat backend plus optional transcript logging.
pub enum Backend {
    Http(HttpBackend),
    Mock(MockBackend),
}

impl Backend {
    pub fn mock(entries: impl IntoIterator<Item = ScriptEntry>) -> Self {
        Backend::Mock(MockBackend::new(entries))
    }

    pub fn http(config: BackendConfig) -> Result<Self, GatewayError> {
        Ok(Backend::Http(HttpBackend::new(config)?))
    }

    pub fn kind(&self) -> BackendKind {
        match self {
            Backend::Http(_) => BackendKind::Http,
            Backend::Mock(_) => BackendKind::Mock,
        }
    }

    /// Sends one request and returns the response text with attempt
    /// accounting.
    pub fn chat(&self, req: &ChatRequest<'_>) -> Result<ChatOutcome, GatewayError> {
        let start = Instant::now();
        let result = match self {
            Backend::Mock(mock) => mock.respond(req.instance_id, req.tag),
            Backend::Http(http) => http.call(req),
        };
        result.map(|text| ChatOutcome {
            text,
            attempts: 1,
            elapsed: start.elapsed(),
        })
    }

    /// Writes request/response JSON transcripts for audit. Credentials
    /// travel in headers only, so bodies are safe to persist verbatim.
    pub fn chat_logged(
        &self,
        req: &ChatRequest<'_>,
        transcript_dir: Option<&PathBuf>,
    ) -> Result<ChatOutcome, GatewayError> {
        if let Some(dir) = transcript_dir {
            let stem = format!("{}-{}", req.instance_id, req.tag);
            let request_log = json!({
                "instance_id": req.instance_id,
                "tag": req.tag,
                "messages": req.messages,
                "image_count": req.images.len(),
                "image_bytes": req.images.iter().map(|i| i.data.len()).collect::<Vec<_>>(),
            });
            let _ = std::fs::write(
                dir.join(format!("{stem}.request.json")),
                serde_json::to_vec_pretty(&request_log).unwrap_or_default(),
            );
            let outcome = self.chat(req);
            let response_log = match &outcome {
                Ok(o) => json!({ "ok": true, "text": o.text }),
                Err(e) => json!({ "ok": false, "error": e.to_string() }),
            };
            let _ = std::fs::write(
                dir.join(format!("{stem}.response.json")),
                serde_json::to_vec_pretty(&response_log).unwrap_or_default(),
            );
            outcome
        } else {
            self.chat(req)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, tag: &str, response: &str) -> ScriptEntry {
        ScriptEntry {
            instance_id: id.into(),
            tag: tag.into(),
            response: response.into(),
        }
    }

    fn request<'a>(id: &'a str, tag: &'a str) -> ChatRequest<'a> {
        ChatRequest {
            instance_id: id,
            tag,
            messages: &[],
            images: &[],
        }
    }

    #[test]
    fn mock_replays_by_key() {
        let backend = Backend::mock([entry("a", "q1", "first"), entry("a", "q1", "second")]);
        assert_eq!(backend.chat(&request("a", "q1")).unwrap().text, "first");
        assert_eq!(backend.chat(&request("a", "q1")).unwrap().text, "second");
        // last entry repeats
        assert_eq!(backend.chat(&request("a", "q1")).unwrap().text, "second");
    }

    #[test]
    fn mock_missing_entry_is_distinct_error() {
        let backend = Backend::mock([entry("a", "q1", "x")]);
        match backend.chat(&request("a", "q2")) {
            Err(GatewayError::MissingScript { instance_id, tag }) => {
                assert_eq!(instance_id, "a");
                assert_eq!(tag, "q2");
            }
            other => panic!("expected missing script, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let mut config = BackendConfig::default();
        config.temperature = -1.0;
        assert!(config.validate().is_err());
        let mut config = BackendConfig {
            kind: BackendKind::Http,
            ..BackendConfig::default()
        };
        assert!(config.validate().is_err()); // missing endpoint
        config.endpoint = "http://127.0.0.1:9".into();
        assert!(config.validate().is_ok());
    }

    #[test]
    fn script_jsonl_round_trip() {
        let text = r#"{"instance_id":"a","tag":"q1","response":"hello"}"#;
        let backend = MockBackend::from_jsonl(text).unwrap();
        assert_eq!(backend.respond("a", "q1").unwrap(), "hello");
    }
}
