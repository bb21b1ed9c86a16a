//! In-memory editing sessions over HTTP.
//!
//! A session holds one total coloring, the clique sizes it is checked
//! against and the flips applied since loading. Every response that carries
//! a report is computed from scratch on the current coloring.
//!
//! | method | path | body / query | success |
//! |---|---|---|---|
//! | POST | `/sessions` | `{text, format?, s, t, limit?}` | 201 `{id, n, s, t, report}` |
//! | GET | `/sessions/{id}` | | 200 state |
//! | POST | `/sessions/{id}/flip` | `{i, j}` | 200 `{report, undo_depth}` |
//! | POST | `/sessions/{id}/undo` | | 200 `{report, undo_depth}` |
//! | GET | `/sessions/{id}/violations` | `?limit=` | 200 report |
//! | GET | `/sessions/{id}/export` | `?format=adj\|tri` | 200 text |

mod error;
mod session;

pub use error::ApiError;
pub use session::{Format, Session, SessionStore};

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ramsey_core::clique::VerificationReport;
use serde::{Deserialize, Serialize};
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

#[derive(Clone, Copy, Debug)]
pub struct ServiceConfig {
    /// Sessions untouched for this long are dropped.
    pub ttl: Duration,
    /// Violations listed per color when a request names no limit.
    pub default_limit: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { ttl: Duration::from_secs(24 * 60 * 60), default_limit: 50 }
    }
}

#[derive(Clone)]
pub struct AppState {
    store: Arc<SessionStore>,
    config: ServiceConfig,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        AppState { store: Arc::new(SessionStore::new(config.ttl)), config }
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub text: String,
    #[serde(default)]
    pub format: Option<Format>,
    pub s: usize,
    pub t: usize,
    #[serde(default)]
    pub limit: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CreateResponse {
    pub id: String,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub report: VerificationReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FlipRequest {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EditResponse {
    pub report: VerificationReport,
    pub undo_depth: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateResponse {
    pub id: String,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    /// Triangle text of the current coloring.
    pub matrix: String,
    pub undo_depth: usize,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub modified: u64,
}

#[derive(Debug, Deserialize)]
pub struct LimitQuery {
    pub limit: Option<usize>,
}

#[derive(Debug, Deserialize)]
pub struct ExportQuery {
    pub format: Option<Format>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(get_state))
        .route("/sessions/{id}/flip", post(flip))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/violations", get(violations))
        .route("/sessions/{id}/export", get(export))
        .with_state(state)
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn create(State(app): State<AppState>, Json(req): Json<CreateRequest>) -> Result<Response, ApiError> {
    let limit = req.limit.unwrap_or(app.config.default_limit);
    let session = Session::load(req.text, req.format, req.s, req.t)?;
    let report = session.report(limit)?;
    let n = session.coloring().n();
    let id = app.store.insert(session);
    let body = CreateResponse { id, n, s: req.s, t: req.t, report };
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_state(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateResponse>, ApiError> {
    let session = app.store.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(StateResponse {
        id,
        n: s.coloring().n(),
        s: s.s(),
        t: s.t(),
        matrix: s.export(Format::Tri)?,
        undo_depth: s.undo_depth(),
        created: s.created(),
        modified: s.modified(),
    }))
}

async fn flip(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<FlipRequest>,
) -> Result<Json<EditResponse>, ApiError> {
    let session = app.store.get(&id)?;
    let mut s = session.lock().expect("session lock");
    s.flip(req.i, req.j)?;
    Ok(Json(EditResponse { report: s.report(app.config.default_limit)?, undo_depth: s.undo_depth() }))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<EditResponse>, ApiError> {
    let session = app.store.get(&id)?;
    let mut s = session.lock().expect("session lock");
    s.undo()?;
    Ok(Json(EditResponse { report: s.report(app.config.default_limit)?, undo_depth: s.undo_depth() }))
}

async fn violations(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<LimitQuery>,
) -> Result<Json<VerificationReport>, ApiError> {
    let session = app.store.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(s.report(q.limit.unwrap_or(app.config.default_limit))?))
}

async fn export(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let session = app.store.get(&id)?;
    let s = session.lock().expect("session lock");
    let text = s.export(q.format.unwrap_or(Format::Adj))?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response())
}
