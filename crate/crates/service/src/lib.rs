//! JSON-over-HTTP session service for interactive track correction.
//!
//! Sessions are loaded from a directory of `{id}.json` files at startup.
//! Marker edits are exclusive per session: a second edit arriving while one
//! is in flight is rejected with `409 Conflict` rather than queued.

mod api;
mod error;
mod preview;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::http::{HeaderValue, Method};
use axum::routing::{get, post, put};
use axum::Router;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

pub use error::ApiError;
pub use preview::{compute_preview, GeoTimedPoint, PciOverlay, PreviewOptions, PreviewResponse};
pub use store::{SessionStore, SessionSummary};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub preview: PreviewOptions,
    /// Allowed CORS origin; any origin when `None`.
    pub cors_origin: Option<String>,
    /// Artificial delay inside marker edits. Zero in production; tests use
    /// it to hold the edit token open.
    pub edit_latency: Duration,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self {
            data_dir: data_dir.into(),
            preview: PreviewOptions::default(),
            cors_origin: None,
            edit_latency: Duration::ZERO,
        }
    }
}

#[derive(Clone)]
pub(crate) struct AppState {
    pub store: Arc<SessionStore>,
    pub preview: PreviewOptions,
    pub edit_latency: Duration,
}

/// Build the router over sessions found in `config.data_dir`.
pub fn router(config: &ServiceConfig) -> trajkit::Result<Router> {
    config.preview.sampler.validate()?;
    let store = SessionStore::open(&config.data_dir)?;
    let state = AppState {
        store: Arc::new(store),
        preview: config.preview.clone(),
        edit_latency: config.edit_latency,
    };
    Ok(Router::new()
        .route("/sessions", get(api::list_sessions))
        .route("/sessions/{id}", get(api::get_session))
        .route("/sessions/{id}/markers", put(api::put_markers))
        .route("/sessions/{id}/preview", get(api::get_preview))
        .route("/sessions/{id}/commit", post(api::commit))
        .layer(cors_layer(config.cors_origin.as_deref())?)
        .with_state(state))
}

fn cors_layer(origin: Option<&str>) -> trajkit::Result<CorsLayer> {
    let allow = match origin {
        None => AllowOrigin::from(Any),
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o)
                .map_err(|_| trajkit::Error::Config(format!("invalid CORS origin `{o}`")))?,
        ),
    };
    Ok(CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::PUT, Method::POST])
        .allow_headers(Any))
}

/// Bind `addr` and serve until the task is cancelled.
pub async fn serve(config: ServiceConfig, addr: SocketAddr) -> std::io::Result<()> {
    let app = router(&config).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app).await
}

/// Default port when neither flag nor environment sets one.
pub const DEFAULT_PORT: u16 = 8787;
