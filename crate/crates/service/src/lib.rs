//! HTTP/JSON API over the HRE engine.
//!
//! Every endpoint is a pure function of its request body. Bodies are rendered
//! with the same canonical JSON as the CLI, so identical requests produce
//! byte-identical responses.

pub mod session;

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use hre_core::document::{Diagnostic, MatrixDocument};
use hre_core::pc::DEFAULT_RECIPROCITY_TOLERANCE;
use hre_core::report::{check_report, compare_report, rank_report, to_canonical_json, RankReport};
use hre_core::{bound_table, ErrorKind, Problem};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::ServeDir;

use crate::session::SessionStore;

/// Largest `n_max` served by the bound table endpoint.
pub const MAX_TABLE_SIZE: usize = 1000;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Allowed CORS origin; any origin when unset.
    pub ui_origin: Option<String>,
    /// Directory of static UI assets served at `/`.
    pub asset_dir: Option<PathBuf>,
    /// Enables the in-memory session store under `/api/sessions`.
    pub sessions: bool,
}

#[derive(Clone, Default)]
pub struct AppState {
    pub sessions: Arc<SessionStore>,
}

/// Canonical JSON response with the given status.
pub(crate) fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        to_canonical_json(body),
    )
        .into_response()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagnosticsBody {
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

/// 409 payload for rankings the engine could not produce.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConflictBody {
    /// `"infeasible"` or `"singular"`; numerical failures report as singular.
    pub kind: String,
    pub detail: String,
    pub report: RankReport,
}

pub(crate) fn unprocessable(diagnostics: Vec<Diagnostic>) -> Response {
    json_response(StatusCode::UNPROCESSABLE_ENTITY, &DiagnosticsBody { diagnostics })
}

fn message_diagnostic(message: String) -> Diagnostic {
    Diagnostic {
        message,
        row: None,
        col: None,
    }
}

/// Parses and validates a request body, or lists what is wrong with it.
pub(crate) fn parse_problem(body: &[u8]) -> Result<Problem, Vec<Diagnostic>> {
    let text = std::str::from_utf8(body)
        .map_err(|e| vec![message_diagnostic(format!("body is not UTF-8: {e}"))])?;
    let doc = MatrixDocument::from_json(text).map_err(|e| vec![message_diagnostic(e.to_string())])?;
    let diagnostics = doc.diagnostics(DEFAULT_RECIPROCITY_TOLERANCE);
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }
    doc.to_problem(DEFAULT_RECIPROCITY_TOLERANCE)
        .map_err(|e| vec![Diagnostic::from(&e)])
}

async fn rank(body: Bytes) -> Response {
    let problem = match parse_problem(&body) {
        Ok(p) => p,
        Err(d) => return unprocessable(d),
    };
    match rank_report(&problem) {
        Ok(report) => match &report.error {
            None => json_response(StatusCode::OK, &report),
            Some(e) => {
                let kind = match e.kind {
                    ErrorKind::Infeasible => "infeasible",
                    _ => "singular",
                };
                let body = ConflictBody {
                    kind: kind.to_string(),
                    detail: e.message.clone(),
                    report: report.clone(),
                };
                json_response(StatusCode::CONFLICT, &body)
            }
        },
        Err(e) => unprocessable(vec![Diagnostic::from(&e)]),
    }
}

async fn check(body: Bytes) -> Response {
    match parse_problem(&body) {
        Ok(problem) => match check_report(&problem) {
            Ok(report) => json_response(StatusCode::OK, &report),
            Err(e) => unprocessable(vec![Diagnostic::from(&e)]),
        },
        Err(d) => unprocessable(d),
    }
}

async fn compare(body: Bytes) -> Response {
    match parse_problem(&body) {
        Ok(problem) => json_response(StatusCode::OK, &compare_report(&problem)),
        Err(d) => unprocessable(d),
    }
}

#[derive(Debug, Deserialize)]
struct TableQuery {
    n_max: Option<String>,
}

async fn table(Query(q): Query<TableQuery>) -> Response {
    let bad = |error: String| json_response(StatusCode::BAD_REQUEST, &ErrorBody { error });
    let Some(raw) = q.n_max else {
        return bad("missing query parameter n_max".into());
    };
    let n_max: usize = match raw.parse() {
        Ok(n) => n,
        Err(_) => return bad(format!("n_max must be an integer, got {raw:?}")),
    };
    if !(3..=MAX_TABLE_SIZE).contains(&n_max) {
        return bad(format!("n_max must be between 3 and {MAX_TABLE_SIZE}, got {n_max}"));
    }
    match bound_table(n_max) {
        Ok(t) => json_response(StatusCode::OK, &t),
        Err(e) => bad(e.to_string()),
    }
}

fn cors(config: &ServiceConfig) -> CorsLayer {
    let origin = match config
        .ui_origin
        .as_deref()
        .and_then(|o| HeaderValue::from_str(o).ok())
    {
        Some(o) => AllowOrigin::exact(o),
        None => AllowOrigin::from(Any),
    };
    CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST, Method::PUT, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE])
}

pub fn router(config: &ServiceConfig) -> Router {
    let mut api = Router::new()
        .route("/api/rank", post(rank))
        .route("/api/check", post(check))
        .route("/api/compare", post(compare))
        .route("/api/bound-table", get(table));
    if config.sessions {
        api = api.merge(session::routes());
    }
    let mut app = api.with_state(AppState::default());
    if let Some(dir) = &config.asset_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    app.layer(cors(config))
}
