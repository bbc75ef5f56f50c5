//! HTTP service: topics, Δ-ranked examples, analysis, portfolio comparison
//! and submission logging over a loaded corpus and model bundle.

mod error;
mod snapshot;
mod submissions;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rhetor_core::corpus::{read_corpus, Corpus};
use rhetor_core::portfolio::portfolio_difference;
use rhetor_core::{AnalysisError, AnalysisResult, Analyzer, DifferenceBar, ModelBundle, RatioVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use error::ApiError;
pub use snapshot::{Example, ExampleSentence, Snapshot, TopicEntry, TopicExamples};
pub use submissions::{Clock, LogError, SubmissionLog, SubmissionRecord};

/// Response header carrying the model snapshot hash.
pub const SNAPSHOT_HEADER: &str = "x-model-snapshot";
pub const DEFAULT_PORT: u16 = 8707;

pub struct AppState {
    pub snapshot: Snapshot,
    pub log: SubmissionLog,
}

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error("cannot load corpus {path}: {message}")]
    Corpus { path: PathBuf, message: String },
    #[error("models unavailable at {path}: {message}")]
    Models { path: PathBuf, message: String },
    #[error(transparent)]
    Log(#[from] LogError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub corpus: PathBuf,
    pub models: PathBuf,
    pub port: u16,
    pub log: PathBuf,
}

impl AppState {
    pub fn new(corpus: &Corpus, analyzer: Analyzer, log: SubmissionLog) -> Self {
        Self {
            snapshot: Snapshot::new(corpus, analyzer),
            log,
        }
    }

    /// Loads everything named in `config`. Missing or inconsistent model
    /// files stop startup rather than failing individual requests.
    pub fn load(config: &ServiceConfig) -> Result<Self, StartupError> {
        let corpus = read_corpus(&config.corpus).map_err(|e| StartupError::Corpus {
            path: config.corpus.clone(),
            message: e.to_string(),
        })?;
        let models = |message: String| StartupError::Models {
            path: config.models.clone(),
            message,
        };
        let bundle = ModelBundle::load(&config.models).map_err(|e| models(e.to_string()))?;
        let analyzer = Analyzer::new(bundle).map_err(|e| models(e.to_string()))?;
        let log = SubmissionLog::open(&config.log)?;
        Ok(Self::new(&corpus, analyzer, log))
    }
}

/// Body extractor that reports malformed JSON in the service's error shape.
struct ApiJson<T>(T);

impl<T, S> axum::extract::FromRequest<S> for ApiJson<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: axum::extract::Request, state: &S) -> Result<Self, Self::Rejection> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::validation(e.body_text()))?;
        serde_json::from_slice(&bytes)
            .map(ApiJson)
            .map_err(|e| ApiError::validation(e.to_string()))
    }
}

type Shared = State<Arc<AppState>>;

async fn topics(State(s): Shared) -> Json<Vec<TopicEntry>> {
    Json(s.snapshot.topics.clone())
}

async fn examples(State(s): Shared, Path(topic): Path<String>) -> Result<Response, ApiError> {
    let t = s.snapshot.examples.get(&topic).ok_or_else(|| ApiError::unknown_topic(&topic))?;
    Ok(Json(t).into_response())
}

#[derive(Deserialize)]
pub struct AnalyzeRequest {
    pub topic: String,
    pub body: String,
}

async fn analyze(State(s): Shared, ApiJson(req): ApiJson<AnalyzeRequest>) -> Result<Json<AnalysisResult>, ApiError> {
    if req.body.trim().is_empty() {
        return Err(ApiError::validation("body is empty"));
    }
    if !s.snapshot.examples.contains_key(&req.topic) {
        return Err(ApiError::unknown_topic(&req.topic));
    }
    let state = s.clone();
    let result = tokio::task::spawn_blocking(move || state.snapshot.analyzer.analyze(&req.body).map(|r| (r, req.topic)))
        .await
        .map_err(|e| ApiError::internal("analysis_failed", e.to_string()))?
        .map_err(|e| match e {
            AnalysisError::EmptyBody => ApiError::validation("body is empty"),
            AnalysisError::Feature(f) => ApiError::new(StatusCode::BAD_GATEWAY, "embedding_failed", f.to_string()),
            other => ApiError::internal("analysis_failed", other.to_string()),
        })
        .map(|(mut r, topic)| {
            r.projection = Some(s.snapshot.examples[&topic].project(&r.portfolio.ratios));
            r
        })?;
    Ok(Json(result))
}

#[derive(Deserialize)]
pub struct CompareRequest {
    pub user_ratios: RatioVector,
    pub reference: String,
    pub topic: String,
}

/// Reference value selecting the topic average instead of one example.
pub const TOPIC_AVERAGE: &str = "topic_average";

async fn compare(State(s): Shared, ApiJson(req): ApiJson<CompareRequest>) -> Result<Json<Vec<DifferenceBar>>, ApiError> {
    let t = s
        .snapshot
        .examples
        .get(&req.topic)
        .ok_or_else(|| ApiError::unknown_topic(&req.topic))?;
    let reference = if req.reference == TOPIC_AVERAGE {
        t.average
    } else {
        t.example(&req.reference)
            .ok_or_else(|| ApiError::unknown_example(&req.reference, &req.topic))?
            .portfolio
            .ratios
    };
    Ok(Json(portfolio_difference(&req.user_ratios, &reference)))
}

#[derive(Deserialize)]
pub struct SubmissionRequest {
    pub session_id: String,
    pub topic: String,
    pub body: String,
    pub ratios: RatioVector,
}

#[derive(Serialize, Deserialize)]
pub struct SubmissionAck {
    pub submission_id: u64,
}

async fn submit(State(s): Shared, ApiJson(req): ApiJson<SubmissionRequest>) -> Result<Response, ApiError> {
    for (field, value) in [("session_id", &req.session_id), ("topic", &req.topic), ("body", &req.body)] {
        if value.trim().is_empty() {
            return Err(ApiError::validation(format!("{field} is empty")));
        }
    }
    let state = s.clone();
    let record = tokio::task::spawn_blocking(move || state.log.append(&req.session_id, &req.topic, &req.body, req.ratios))
        .await
        .map_err(|e| ApiError::internal("write_failed", e.to_string()))?
        .map_err(|e| ApiError::internal("write_failed", e.to_string()))?;
    tracing::info!(id = record.submission_id, session = %record.session_id, "submission logged");
    Ok((
        StatusCode::CREATED,
        Json(SubmissionAck {
            submission_id: record.submission_id,
        }),
    )
        .into_response())
}

#[derive(Deserialize)]
struct SessionQuery {
    session_id: Option<String>,
}

async fn replay(
    State(s): Shared,
    q: Result<Query<SessionQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<Json<Vec<SubmissionRecord>>, ApiError> {
    let Query(q) = q.map_err(|e| ApiError::validation(e.body_text()))?;
    let id = q
        .session_id
        .filter(|s| !s.trim().is_empty())
        .ok_or_else(|| ApiError::validation("session_id query parameter is required"))?;
    Ok(Json(s.log.session(&id)))
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

pub fn router(state: Arc<AppState>) -> Router {
    let snapshot = HeaderValue::from_str(state.snapshot.analyzer.snapshot_id()).expect("hex digest is a valid header");
    Router::new()
        .route("/topics", get(topics))
        .route("/topics/{topic}/examples", get(examples))
        .route("/analyze", post(analyze))
        .route("/compare", post(compare))
        .route("/submissions", post(submit).get(replay))
        .fallback(not_found)
        .with_state(state)
        .layer(axum::middleware::map_response(move |mut r: Response| {
            let snapshot = snapshot.clone();
            async move {
                r.headers_mut().insert(SNAPSHOT_HEADER, snapshot);
                r
            }
        }))
}

/// Loads state and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), StartupError> {
    let state = Arc::new(AppState::load(&config)?);
    for id in &state.snapshot.skipped {
        tracing::warn!(post = %id, "post has no usable portfolio; left out of examples");
    }
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| StartupError::Bind { addr, source })?;
    tracing::info!(%addr, snapshot = state.snapshot.analyzer.snapshot_id(), "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|source| StartupError::Bind { addr, source })
}
