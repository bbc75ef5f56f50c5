use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    detail: &'a str,
}

/// JSON error reply `{"error": code, "detail": message}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        Self {
            status,
            code,
            detail: detail.into(),
        }
    }

    pub fn validation(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "validation", detail)
    }

    pub fn unknown_topic(topic: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_topic", format!("no examples for topic {topic:?}"))
    }

    pub fn unknown_example(id: &str, topic: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_example",
            format!("no example {id:?} in topic {topic:?}"),
        )
    }

    pub fn internal(code: &'static str, detail: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, code, detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Json(ErrorBody {
            error: self.code,
            detail: &self.detail,
        });
        (self.status, body).into_response()
    }
}
