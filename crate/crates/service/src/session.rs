//! Optional in-memory session documents for the interactive UI.
//!
//! Sessions hold upper-triangle judgments, so stored matrices are reciprocal
//! by construction. Each session sits behind its own lock; requests on
//! different sessions never wait on each other.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use hre_core::document::{Diagnostic, KnownValues, MatrixDocument};
use hre_core::pc::DEFAULT_RECIPROCITY_TOLERANCE;
use hre_core::report::{check_report, rank_report, CheckReport, RankReport};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use uuid::Uuid;

use crate::{json_response, AppState, ErrorBody};

/// Request body for creating or replacing a session's contents.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionInput {
    pub labels: Vec<String>,
    /// Row `i` holds the judgments `m[i][j]` for `j > i`; `null` when not yet given.
    pub judgments: Vec<Vec<Option<f64>>>,
    #[serde(default)]
    pub known: KnownValues,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionDocument {
    pub id: Uuid,
    pub labels: Vec<String>,
    pub judgments: Vec<Vec<Option<f64>>>,
    pub known: KnownValues,
    /// Non-empty exactly when the results below are absent.
    pub diagnostics: Vec<Diagnostic>,
    pub rank: Option<RankReport>,
    pub check: Option<CheckReport>,
}

impl SessionDocument {
    fn new(id: Uuid, input: SessionInput) -> Self {
        let doc = MatrixDocument {
            labels: input.labels.clone(),
            matrix: None,
            judgments: Some(input.judgments.clone()),
            known: input.known.clone(),
        };
        let mut diagnostics = doc.diagnostics(DEFAULT_RECIPROCITY_TOLERANCE);
        let (mut rank, mut check) = (None, None);
        if diagnostics.is_empty() {
            match doc
                .to_problem(DEFAULT_RECIPROCITY_TOLERANCE)
                .and_then(|p| Ok((rank_report(&p)?, check_report(&p)?)))
            {
                Ok((r, c)) => {
                    rank = Some(r);
                    check = Some(c);
                }
                Err(e) => diagnostics.push(Diagnostic::from(&e)),
            }
        }
        Self {
            id,
            labels: input.labels,
            judgments: input.judgments,
            known: input.known,
            diagnostics,
            rank,
            check,
        }
    }
}

#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<SessionDocument>>>>,
}

impl SessionStore {
    fn get(&self, id: Uuid) -> Option<Arc<Mutex<SessionDocument>>> {
        self.sessions.read().expect("session map lock").get(&id).cloned()
    }

    fn insert(&self, doc: SessionDocument) {
        let id = doc.id;
        self.sessions
            .write()
            .expect("session map lock")
            .insert(id, Arc::new(Mutex::new(doc)));
    }

    fn remove(&self, id: Uuid) -> bool {
        self.sessions.write().expect("session map lock").remove(&id).is_some()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn parse_input(body: &[u8]) -> Result<SessionInput, Vec<Diagnostic>> {
    serde_json::from_slice(body).map_err(|e| {
        vec![Diagnostic {
            message: e.to_string(),
            row: None,
            col: None,
        }]
    })
}

fn not_found(id: &str) -> Response {
    json_response(
        StatusCode::NOT_FOUND,
        &ErrorBody {
            error: format!("no session {id}"),
        },
    )
}

fn session_id(raw: &str) -> Option<Uuid> {
    Uuid::parse_str(raw).ok()
}

async fn create(State(state): State<AppState>, body: Bytes) -> Response {
    let input = match parse_input(&body) {
        Ok(i) => i,
        Err(d) => return crate::unprocessable(d),
    };
    let doc = SessionDocument::new(Uuid::new_v4(), input);
    let resp = json_response(StatusCode::CREATED, &doc);
    state.sessions.insert(doc);
    resp
}

async fn fetch(State(state): State<AppState>, Path(raw): Path<String>) -> Response {
    match session_id(&raw).and_then(|id| state.sessions.get(id)) {
        Some(session) => json_response(StatusCode::OK, &*session.lock().await),
        None => not_found(&raw),
    }
}

async fn replace(State(state): State<AppState>, Path(raw): Path<String>, body: Bytes) -> Response {
    let Some(session) = session_id(&raw).and_then(|id| state.sessions.get(id)) else {
        return not_found(&raw);
    };
    let input = match parse_input(&body) {
        Ok(i) => i,
        Err(d) => return crate::unprocessable(d),
    };
    let mut doc = session.lock().await;
    *doc = SessionDocument::new(doc.id, input);
    json_response(StatusCode::OK, &*doc)
}

async fn delete(State(state): State<AppState>, Path(raw): Path<String>) -> Response {
    match session_id(&raw) {
        Some(id) if state.sessions.remove(id) => StatusCode::NO_CONTENT.into_response(),
        _ => not_found(&raw),
    }
}

pub fn routes() -> Router<AppState> {
    Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}", get(fetch).put(replace).delete(delete))
}
