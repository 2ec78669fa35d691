use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::json;

/// Error body: `{"error": {"kind", "message", "field"?}}`.
#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, kind, message: message.into(), field: None }
    }

    pub fn invalid_token() -> Self {
        Self::new(StatusCode::NOT_FOUND, "invalid_token", "unknown or expired experiment token")
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn conflict(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, "conflict", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<netdiff_core::Error> for ApiError {
    fn from(e: netdiff_core::Error) -> Self {
        use netdiff_core::Error as E;
        let message = e.to_string();
        match e {
            E::Config { field, .. } => {
                ApiError { field: Some(field), ..Self::new(StatusCode::BAD_REQUEST, "invalid_config", message) }
            }
            E::Param { name, .. } => {
                ApiError { field: Some(name), ..Self::new(StatusCode::BAD_REQUEST, "invalid_parameter", message) }
            }
            E::Parse { .. } | E::Json(_) => Self::new(StatusCode::BAD_REQUEST, "parse_error", message),
            E::UnknownModel(_) => Self::new(StatusCode::NOT_FOUND, "unknown_model", message),
            E::NotImplemented(_) => Self::new(StatusCode::NOT_IMPLEMENTED, "not_implemented", message),
            E::Simulation(_) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "simulation_error", message),
            E::Io(_) => Self::internal(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self }))).into_response()
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
