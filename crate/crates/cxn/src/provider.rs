//! Completion providers: a scripted stub for tests and offline runs, and a
//! generic HTTP chat-completion client.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::Duration;

use serde_json::{json, Value};
use thiserror::Error;

/// Environment variable holding the HTTP provider's API key.
pub const API_KEY_ENV: &str = "CXN_PROBE_API_KEY";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeParams {
    pub temperature: f64,
}

impl Default for DecodeParams {
    fn default() -> Self {
        DecodeParams { temperature: 0.0 }
    }
}

/// One stateless request. `probe_id` is for bookkeeping; only the prompt is
/// sent over the wire.
#[derive(Clone, Debug, PartialEq)]
pub struct Request<'a> {
    pub probe_id: &'a str,
    pub prompt: &'a str,
    pub params: DecodeParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProviderError {
    /// Worth retrying: connection failures, timeouts, 429 and 5xx.
    #[error("transient: {0}")]
    Transient(String),
    #[error("{0}")]
    Permanent(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("environment variable {API_KEY_ENV} is not set")]
    MissingKey,
    #[error("invalid endpoint `{0}`")]
    BadEndpoint(String),
}

pub trait CompletionProvider: Send + Sync {
    fn id(&self) -> String;
    fn send(&self, request: &Request<'_>) -> Result<String, ProviderError>;
}

type Script = Box<dyn Fn(&Request<'_>, usize) -> Result<String, ProviderError> + Send + Sync>;

/// Provider driven by a closure of (request, attempt number for this probe).
pub struct StubProvider {
    id: String,
    script: Script,
    attempts: Mutex<BTreeMap<String, usize>>,
}

impl StubProvider {
    pub fn new<F>(id: &str, script: F) -> Self
    where
        F: Fn(&Request<'_>, usize) -> Result<String, ProviderError> + Send + Sync + 'static,
    {
        StubProvider {
            id: id.to_string(),
            script: Box::new(script),
            attempts: Mutex::new(BTreeMap::new()),
        }
    }

    /// Same reply to everything.
    pub fn constant(id: &str, reply: &str) -> Self {
        let reply = reply.to_string();
        Self::new(id, move |_, _| Ok(reply.clone()))
    }

    /// Replies looked up by probe id, with a fallback for unlisted probes.
    pub fn table(id: &str, replies: BTreeMap<String, String>, fallback: &str) -> Self {
        let fallback = fallback.to_string();
        Self::new(id, move |r, _| {
            Ok(replies
                .get(r.probe_id)
                .cloned()
                .unwrap_or_else(|| fallback.clone()))
        })
    }
}

impl CompletionProvider for StubProvider {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn send(&self, request: &Request<'_>) -> Result<String, ProviderError> {
        let attempt = {
            let mut seen = self.attempts.lock().unwrap_or_else(|e| e.into_inner());
            let n = seen.entry(request.probe_id.to_string()).or_insert(0);
            *n += 1;
            *n - 1
        };
        (self.script)(request, attempt)
    }
}

/// OpenAI-style `POST {endpoint}/chat/completions` client.
pub struct HttpProvider {
    endpoint: String,
    model: String,
    api_key: String,
    agent: ureq::Agent,
}

impl HttpProvider {
    /// Reads the key from the environment; fails before any request is made.
    pub fn from_env(endpoint: &str, model: &str) -> Result<Self, ConfigError> {
        let key = std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty());
        Self::with_key(endpoint, model, key)
    }

    fn with_key(endpoint: &str, model: &str, key: Option<String>) -> Result<Self, ConfigError> {
        if !(endpoint.starts_with("http://") || endpoint.starts_with("https://")) {
            return Err(ConfigError::BadEndpoint(endpoint.to_string()));
        }
        let api_key = key.ok_or(ConfigError::MissingKey)?;
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpProvider {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            model: model.to_string(),
            api_key,
            agent,
        })
    }

    fn body(&self, request: &Request<'_>) -> Value {
        json!({
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.params.temperature,
        })
    }
}

impl CompletionProvider for HttpProvider {
    fn id(&self) -> String {
        self.model.clone()
    }

    fn send(&self, request: &Request<'_>) -> Result<String, ProviderError> {
        let url = format!("{}/chat/completions", self.endpoint);
        let mut resp = self
            .agent
            .post(&url)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(self.body(request))
            .map_err(|e| ProviderError::Transient(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ProviderError::Transient(e.to_string()))?;
        if status == 429 || status >= 500 {
            return Err(ProviderError::Transient(format!("HTTP {status}: {text}")));
        }
        if status >= 400 {
            return Err(ProviderError::Permanent(format!("HTTP {status}: {text}")));
        }
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| ProviderError::Permanent(format!("bad response body: {e}")))?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| {
                ProviderError::Permanent("response has no choices[0].message.content".into())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn http_requires_key_and_url() {
        assert_eq!(
            HttpProvider::with_key("http://localhost:1", "m", None).err(),
            Some(ConfigError::MissingKey)
        );
        assert!(matches!(
            HttpProvider::with_key("localhost", "m", Some("k".into())).err(),
            Some(ConfigError::BadEndpoint(_))
        ));
    }

    #[test]
    fn request_body_is_stateless() {
        let p = HttpProvider::with_key("http://localhost:1/v1/", "m", Some("k".into())).unwrap();
        let r = Request {
            probe_id: "p1",
            prompt: "hello",
            params: DecodeParams::default(),
        };
        let body = p.body(&r);
        assert_eq!(body["messages"].as_array().unwrap().len(), 1);
        assert_eq!(body["temperature"], 0.0);
        assert!(!body.to_string().contains("p1"));
        assert_eq!(p.endpoint, "http://localhost:1/v1");
    }

    #[test]
    fn unreachable_endpoint_is_transient() {
        let p = HttpProvider::with_key("http://127.0.0.1:9", "m", Some("k".into())).unwrap();
        let r = Request {
            probe_id: "p",
            prompt: "x",
            params: DecodeParams::default(),
        };
        assert!(matches!(p.send(&r), Err(ProviderError::Transient(_))));
    }

    #[test]
    fn stub_counts_attempts_per_probe() {
        let s = StubProvider::new("s", |r, n| Ok(format!("{}:{n}", r.probe_id)));
        let r = |id| Request {
            probe_id: id,
            prompt: "",
            params: DecodeParams::default(),
        };
        assert_eq!(s.send(&r("a")).unwrap(), "a:0");
        assert_eq!(s.send(&r("a")).unwrap(), "a:1");
        assert_eq!(s.send(&r("b")).unwrap(), "b:0");
    }
}
