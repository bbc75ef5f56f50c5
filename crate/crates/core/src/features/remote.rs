use std::sync::{Condvar, Mutex, OnceLock};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{EmbeddingProvider, FeatureError, FeatureVector};

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
}

/// Counting gate bounding concurrent requests.
struct InFlight {
    limit: usize,
    active: Mutex<usize>,
    freed: Condvar,
}

struct Permit<'a>(&'a InFlight);

impl InFlight {
    fn acquire(&self) -> Permit<'_> {
        let mut active = self.active.lock().unwrap_or_else(|e| e.into_inner());
        while *active >= self.limit {
            active = self.freed.wait(active).unwrap_or_else(|e| e.into_inner());
        }
        *active += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut active = self.0.active.lock().unwrap_or_else(|e| e.into_inner());
        *active -= 1;
        self.0.freed.notify_one();
    }
}

/// Client for an external encoder speaking
/// `POST {"texts": [...]}` → `{"vectors": [[...], ...]}`.
///
/// The output dimension is fixed by the first successful response; later
/// responses of a different width are rejected.
pub struct RemoteEmbedder {
    endpoint: String,
    timeout: Duration,
    client: OnceLock<reqwest::blocking::Client>,
    dimension: OnceLock<usize>,
    gate: InFlight,
}

impl RemoteEmbedder {
    pub fn new(endpoint: impl Into<String>, timeout_ms: u64, max_in_flight: usize) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout: Duration::from_millis(timeout_ms),
            client: OnceLock::new(),
            dimension: OnceLock::new(),
            gate: InFlight {
                limit: max_in_flight.max(1),
                active: Mutex::new(0),
                freed: Condvar::new(),
            },
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn error(&self, status: Option<u16>, message: impl Into<String>) -> FeatureError {
        FeatureError::Provider {
            endpoint: self.endpoint.clone(),
            status,
            message: message.into(),
        }
    }

    fn client(&self) -> Result<&reqwest::blocking::Client, FeatureError> {
        if let Some(c) = self.client.get() {
            return Ok(c);
        }
        let built = reqwest::blocking::Client::builder()
            .timeout(self.timeout)
            .build()
            .map_err(|e| self.error(None, e.to_string()))?;
        Ok(self.client.get_or_init(|| built))
    }
}

impl EmbeddingProvider for RemoteEmbedder {
    fn dimension(&self) -> Option<usize> {
        self.dimension.get().copied()
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<FeatureVector>, FeatureError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(FeatureError::EmptyText);
        }
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let client = self.client()?;
        let response = {
            let _permit = self.gate.acquire();
            client
                .post(&self.endpoint)
                .json(&EmbedRequest { texts })
                .send()
                .map_err(|e| self.error(e.status().map(|s| s.as_u16()), e.to_string()))?
        };
        let status = response.status();
        if !status.is_success() {
            return Err(self.error(Some(status.as_u16()), "non-success status"));
        }
        let body: EmbedResponse = response
            .json()
            .map_err(|e| self.error(Some(status.as_u16()), format!("bad response body: {e}")))?;
        if body.vectors.len() != texts.len() {
            return Err(self.error(
                Some(status.as_u16()),
                format!("sent {} texts, received {} vectors", texts.len(), body.vectors.len()),
            ));
        }
        let first = body.vectors[0].len();
        if first == 0 {
            return Err(self.error(Some(status.as_u16()), "empty vectors"));
        }
        let expected = *self.dimension.get_or_init(|| first);
        body.vectors
            .into_iter()
            .map(|v| {
                if v.len() != expected {
                    return Err(FeatureError::DimensionMismatch {
                        expected,
                        found: v.len(),
                    });
                }
                FeatureVector::new(v)
            })
            .collect()
    }
}
