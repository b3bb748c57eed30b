//! HTTP completion service.
//!
//! The index is immutable; a reload builds a new one off to the side and
//! swaps it in, so every request sees exactly one index.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use syncomplete::Index;
use syncomplete_bench::{measure, StructureStats};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::response::{views, CompletionResponse};
use crate::snapshot::{Snapshot, SnapshotError};

pub const MAX_K: usize = 1000;
pub const DEFAULT_K: usize = 10;

pub struct Loaded {
    pub index: Index,
    pub stats: StructureStats,
}

impl Loaded {
    pub fn from_snapshot(snapshot: &Snapshot) -> Result<Self, SnapshotError> {
        let start = Instant::now();
        let index = snapshot.build()?;
        let millis = start.elapsed().as_secs_f64() * 1e3;
        let label = syncomplete_bench::label(snapshot.kind, snapshot.alpha.unwrap_or(0.0));
        let mut stats = measure(&label, &index, &snapshot.dict, &snapshot.model, millis);
        stats.alpha = snapshot.alpha;
        Ok(Loaded { index, stats })
    }

    pub fn from_path(path: &Path) -> Result<Self, SnapshotError> {
        Self::from_snapshot(&Snapshot::load(path)?)
    }
}

#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Loaded>>>,
    path: Option<PathBuf>,
}

impl AppState {
    /// `path` is where reloads read the snapshot from.
    pub fn new(loaded: Loaded, path: Option<PathBuf>) -> Self {
        AppState {
            current: Arc::new(RwLock::new(Arc::new(loaded))),
            path,
        }
    }

    pub fn current(&self) -> Arc<Loaded> {
        self.current.read().expect("index lock poisoned").clone()
    }

    /// Rebuilds from the snapshot path and swaps the index in.
    pub async fn reload(&self) -> Result<(), ApiError> {
        let Some(path) = self.path.clone() else {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "no_snapshot",
                "service was not started from a snapshot file",
            ));
        };
        let loaded = tokio::task::spawn_blocking(move || Loaded::from_path(&path))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?
            .map_err(|e| ApiError::internal(e.to_string()))?;
        *self.current.write().expect("index lock poisoned") = Arc::new(loaded);
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    error: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            error,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self)).into_response()
    }
}

pub fn router(state: AppState, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/complete", get(complete))
        .route("/api/stats", get(stats))
        .route("/api/health", get(health))
        .route("/api/admin/reload", post(reload))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(CorsLayer::permissive())
}

async fn complete(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<CompletionResponse>, ApiError> {
    let query = params
        .get("q")
        .ok_or_else(|| ApiError::bad_request("missing query parameter `q`"))?
        .clone();
    let k = match params.get("k") {
        None => DEFAULT_K,
        Some(raw) => match raw.parse::<i64>() {
            Ok(k) if (0..=MAX_K as i64).contains(&k) => k as usize,
            Ok(k) => {
                return Err(ApiError::bad_request(format!(
                    "k must lie in 0..={MAX_K}, got {k}"
                )))
            }
            Err(_) => {
                return Err(ApiError::bad_request(format!(
                    "k is not an integer: {raw:?}"
                )))
            }
        },
    };
    let loaded = state.current();
    let start = Instant::now();
    let found = loaded.index.topk(&query, k);
    let latency_us = start.elapsed().as_secs_f64() * 1e6;
    Ok(Json(CompletionResponse {
        completions: views(&found, loaded.index.rules()),
        query,
        k,
        latency_us,
        structure: loaded.stats.structure.clone(),
    }))
}

async fn stats(State(state): State<AppState>) -> Json<StructureStats> {
    Json(state.current().stats.clone())
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn reload(State(state): State<AppState>) -> Result<Json<StructureStats>, ApiError> {
    state.reload().await?;
    Ok(Json(state.current().stats.clone()))
}

/// Serves until the process is stopped. On unix, SIGHUP reloads the index.
pub async fn run(
    listener: tokio::net::TcpListener,
    state: AppState,
    static_dir: Option<&Path>,
) -> std::io::Result<()> {
    #[cfg(unix)]
    {
        use tokio::signal::unix::{signal, SignalKind};
        let mut hangups = signal(SignalKind::hangup())?;
        let state = state.clone();
        tokio::spawn(async move {
            while hangups.recv().await.is_some() {
                if let Err(e) = state.reload().await {
                    eprintln!("reload failed: {}", e.message);
                }
            }
        });
    }
    axum::serve(listener, router(state, static_dir)).await
}
