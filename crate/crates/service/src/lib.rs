//! HTTP access layer for annotation sessions.
//!
//! All state lives in a [`gae_core::store::AnnotationStore`] behind a
//! read/write lock: submissions take the write lock (one writer, arrival
//! order) and every read sees a complete snapshot. Bodies are JSON with the
//! field names of the annotation line format.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use gae_core::gae::{AnnotationRecord, GaeAnnotation, GaeCategory, GaeError, SessionItem};
use gae_core::store::{AnnotationStore, StoreError};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

pub type SharedStore = Arc<RwLock<AnnotationStore>>;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    pub data_dir: PathBuf,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    missing_categories: Vec<GaeCategory>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            missing_categories: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    missing_categories: &'a [GaeCategory],
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: &self.message,
            missing_categories: &self.missing_categories,
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<GaeError> for ApiError {
    fn from(e: GaeError) -> Self {
        let status = match e {
            GaeError::UnknownSentence(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let missing = match &e {
            GaeError::MissingCategories(m) => m.clone(),
            _ => Vec::new(),
        };
        ApiError {
            missing_categories: missing,
            ..ApiError::new(status, e.to_string())
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Gae(g) => g.into(),
            e if e.is_not_found() => ApiError::new(StatusCode::NOT_FOUND, e.to_string()),
            e if e.is_validation() => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
            e => {
                log::error!("store failure: {e}");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
            }
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("invalid JSON body: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    pub model_label: String,
    pub items: Vec<SessionItem>,
    /// Optional caller-chosen id; a fresh one is generated otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Created {
    pub session_id: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryInfo {
    pub key: String,
    pub label: String,
    pub criterion: String,
    pub shortcut: u8,
}

pub fn categories() -> Vec<CategoryInfo> {
    GaeCategory::ALL
        .into_iter()
        .map(|c| CategoryInfo {
            key: c.key().to_string(),
            label: c.label().to_string(),
            criterion: c.criterion().to_string(),
            shortcut: c.shortcut(),
        })
        .collect()
}

async fn list_categories() -> Json<Vec<CategoryInfo>> {
    Json(categories())
}

async fn create_session(
    State(store): State<SharedStore>,
    body: Bytes,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let req: CreateSession = parse_json(&body)?;
    let mut store = store.write();
    let session_id = match req.session_id {
        Some(id) => {
            store.create_session_with_id(&id, &req.model_label, req.items)?;
            id
        }
        None => store.create_session(&req.model_label, req.items)?,
    };
    Ok((StatusCode::CREATED, Json(Created { session_id })))
}

async fn list_sessions(State(store): State<SharedStore>) -> Response {
    let store = store.read();
    let infos: Vec<_> = store
        .sessions()
        .filter_map(|s| store.session_info(s.session_id()).ok())
        .collect();
    Json(infos).into_response()
}

async fn session_info(State(store): State<SharedStore>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(Json(store.read().session_info(&id)?).into_response())
}

#[derive(Deserialize)]
struct NextQuery {
    annotator: Option<String>,
}

async fn next_item(
    State(store): State<SharedStore>,
    Path(id): Path<String>,
    Query(q): Query<NextQuery>,
) -> Result<Response, ApiError> {
    let annotator = q
        .annotator
        .filter(|a| !a.trim().is_empty())
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, "query parameter `annotator` is required"))?;
    Ok(Json(store.read().next_item(&id, &annotator)?).into_response())
}

async fn submit(
    State(store): State<SharedStore>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let record: AnnotationRecord = parse_json(&body)?;
    let annotation = GaeAnnotation::try_from(record)?;
    let ack = store.write().submit(&id, annotation)?;
    Ok(Json(ack).into_response())
}

async fn scores(State(store): State<SharedStore>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(Json(store.read().session_scores(&id)?).into_response())
}

async fn export(State(store): State<SharedStore>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let body = store.read().export(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}

pub fn router(store: SharedStore) -> Router {
    Router::new()
        .route("/categories", get(list_categories))
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(session_info))
        .route("/sessions/{id}/next", get(next_item))
        .route("/sessions/{id}/annotations", put(submit))
        .route("/sessions/{id}/scores", get(scores))
        .route("/sessions/{id}/export", get(export))
        .with_state(store)
}

pub fn shared(store: AnnotationStore) -> SharedStore {
    Arc::new(RwLock::new(store))
}

/// Serves `store` on `config.addr` until ctrl-c.
pub async fn serve(config: ServiceConfig, store: SharedStore) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    log::info!(
        "listening on {} (data in {})",
        listener.local_addr()?,
        config.data_dir.display()
    );
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
