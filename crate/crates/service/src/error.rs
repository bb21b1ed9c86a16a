use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use ramsey_core::clique::VerifyError;
use ramsey_core::graph::format::ParseError;
use ramsey_core::graph::GraphError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("line {}: {}", .0.line, .0.message)]
    Parse(ParseError),
    #[error("coloring leaves {undecided} edges undecided")]
    Partial { undecided: usize },
    #[error("{0}")]
    BadRequest(String),
    #[error("no session {0}")]
    NotFound(String),
    #[error("nothing to undo")]
    NothingToUndo,
}

impl From<GraphError> for ApiError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Incomplete { count } => ApiError::Partial { undecided: count },
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

impl From<VerifyError> for ApiError {
    fn from(e: VerifyError) -> Self {
        ApiError::BadRequest(e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let message = self.to_string();
        let (status, body) = match &self {
            ApiError::Parse(p) => (StatusCode::BAD_REQUEST, json!({ "error": message, "line": p.line })),
            ApiError::Partial { undecided } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": message, "undecided": undecided }))
            }
            ApiError::BadRequest(_) => (StatusCode::BAD_REQUEST, json!({ "error": message })),
            ApiError::NotFound(_) => (StatusCode::NOT_FOUND, json!({ "error": message })),
            ApiError::NothingToUndo => (StatusCode::CONFLICT, json!({ "error": message })),
        };
        (status, Json(body)).into_response()
    }
}
