#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rhetor_core::corpus::read_corpus;
use rhetor_core::{stub, Analyzer, ModelBundle};
use rhetor_service::{router, AppState, SubmissionLog};
use serde_json::Value;
use tower::ServiceExt;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn lexicon() -> ModelBundle {
    stub::lexicon_bundle(stub::LEXICON_DIMENSION, 0)
}

/// Service over the mini corpus with the given bundle and log file.
pub fn app_with(bundle: ModelBundle, log: &Path) -> Router {
    let corpus = read_corpus(fixture("mini.jsonl")).unwrap();
    let state = AppState::new(&corpus, Analyzer::new(bundle).unwrap(), SubmissionLog::open(log).unwrap());
    router(Arc::new(state))
}

pub fn app(log: &Path) -> Router {
    app_with(lexicon(), log)
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or_else(|e| panic!("non-JSON reply ({e}): {:?}", String::from_utf8_lossy(&self.bytes)))
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, bytes }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::POST, uri, Some(body)).await
}

/// Compares against `tests/golden/{name}.json`. Run with
/// `RHETOR_BLESS=1` to rewrite the files after an intended change.
pub fn assert_golden(name: &str, actual: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var("RHETOR_BLESS").is_ok_and(|v| v == "1") {
        std::fs::write(&path, serde_json::to_string_pretty(actual).unwrap() + "\n").unwrap();
    }
    let expected: Value = serde_json::from_str(
        &std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display())),
    )
    .unwrap();
    assert_eq!(&expected, actual, "response differs from golden {name}");
}

/// Value of one category's bar in a /compare reply.
pub fn bar(bars: &Value, category: &str) -> f64 {
    bars.as_array()
        .unwrap()
        .iter()
        .find(|b| b["category"] == category)
        .unwrap_or_else(|| panic!("no {category} bar"))["value"]
        .as_f64()
        .unwrap()
}
