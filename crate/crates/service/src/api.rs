use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use trajkit::correction::{query_grid, snap_markers, spline_correct, validate_markers};
use trajkit::{to_mercator, GeoPoint, Marker, Millis, PlanePoint};

use crate::error::ApiError;
use crate::preview::{compute_preview, GeoTimedPoint};
use crate::store::SessionSummary;
use crate::AppState;

pub(crate) async fn list_sessions(State(app): State<AppState>) -> Json<Vec<SessionSummary>> {
    Json(app.store.summaries().await)
}

pub(crate) async fn get_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let slot = app.store.slot(&id)?;
    let document = slot.state.read().await.document.clone();
    Ok(([(header::CONTENT_TYPE, "application/json")], document).into_response())
}

/// A marker given either in projected meters or in degrees.
#[derive(Debug, Clone, Deserialize)]
pub(crate) struct MarkerInput {
    timestamp_ms: Millis,
    #[serde(flatten)]
    position: PositionInput,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PositionInput {
    Plane { x: f64, y: f64 },
    Geo { lat: f64, lon: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MarkersRequest {
    markers: Vec<MarkerInput>,
}

#[derive(Debug, Serialize)]
struct MarkersAck {
    session_id: String,
    markers: Vec<GeoTimedPoint>,
}

fn to_markers(input: &[MarkerInput]) -> Result<Vec<Marker>, ApiError> {
    input
        .iter()
        .map(|m| {
            let p = match m.position {
                PositionInput::Plane { x, y } => PlanePoint::new(x, y),
                PositionInput::Geo { lat, lon } => {
                    to_mercator(GeoPoint { lat, lon }).map_err(ApiError::invalid)?
                }
            };
            Ok(Marker::new(m.timestamp_ms, p))
        })
        .collect()
}

pub(crate) async fn put_markers(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MarkersRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let slot = app.store.slot(&id)?;
    let _edit = slot.begin_edit()?;
    let Json(body) = body.map_err(|e| ApiError::Invalid(e.body_text()))?;

    let markers = to_markers(&body.markers)?;
    validate_markers(&markers).map_err(ApiError::invalid)?;
    let mut next = slot.state.read().await.session.clone();
    let raw = next.raw_timestamps();
    let (first, last) = (raw[0], raw[raw.len() - 1]);
    if let Some(m) = markers
        .iter()
        .find(|m| m.timestamp_ms < first || m.timestamp_ms > last)
    {
        return Err(ApiError::Invalid(format!(
            "marker at {} ms outside raw span [{first}, {last}]",
            m.timestamp_ms
        )));
    }
    let snapped = snap_markers(&raw, &markers).map_err(ApiError::invalid)?;
    validate_markers(&snapped).map_err(|e| {
        ApiError::Invalid(format!("markers share a raw sample after snapping: {e}"))
    })?;
    next.markers = snapped;

    if !app.edit_latency.is_zero() {
        tokio::time::sleep(app.edit_latency).await;
    }

    let body = if next.markers.len() >= 2 {
        let preview = compute_preview(&next, false, &app.preview).map_err(ApiError::invalid)?;
        serde_json::to_value(preview).map_err(ApiError::internal)?
    } else {
        let markers = next
            .markers
            .iter()
            .map(|m| GeoTimedPoint::new(m.timestamp_ms, m.position))
            .collect::<trajkit::Result<_>>()
            .map_err(ApiError::invalid)?;
        serde_json::to_value(MarkersAck {
            session_id: next.session_id.clone(),
            markers,
        })
        .map_err(ApiError::internal)?
    };
    app.store.persist(slot, next).await?;
    Ok(Json(body).into_response())
}

#[derive(Debug, Default, Deserialize)]
pub(crate) struct PreviewQuery {
    #[serde(default)]
    pci: bool,
}

pub(crate) async fn get_preview(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<PreviewQuery>,
) -> Result<Response, ApiError> {
    let slot = app.store.slot(&id)?;
    let session = slot.state.read().await.session.clone();
    if session.markers.len() < 2 {
        return Err(ApiError::Conflict(format!(
            "preview needs at least 2 markers, session has {}",
            session.markers.len()
        )));
    }
    let preview = compute_preview(&session, q.pci, &app.preview).map_err(ApiError::internal)?;
    Ok(Json(preview).into_response())
}

#[derive(Debug, Serialize)]
struct CommitResponse {
    session_id: String,
    points: usize,
    first_ms: Millis,
    last_ms: Millis,
}

pub(crate) async fn commit(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let slot = app.store.slot(&id)?;
    let _edit = slot.begin_edit()?;
    let mut next = slot.state.read().await.session.clone();
    if next.markers.len() < 2 {
        return Err(ApiError::Conflict(
            "nothing to commit: at least 2 markers are required".into(),
        ));
    }
    let corrected = spline_correct(
        &next.markers,
        &query_grid(&next.raw_timestamps(), &next.markers),
    )
    .map_err(ApiError::internal)?;
    let response = CommitResponse {
        session_id: next.session_id.clone(),
        points: corrected.len(),
        first_ms: corrected.first_ms(),
        last_ms: corrected.last_ms(),
    };
    if next.corrected_track.as_ref() != Some(&corrected) {
        next.corrected_track = Some(corrected);
        app.store.persist(slot, next).await?;
    }
    Ok(Json(response).into_response())
}
