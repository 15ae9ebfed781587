//! File formats: GPS and gaze CSV streams, planar track CSV, session JSON
//! documents, the split manifest, and GeoJSON centerlines.
//!
//! Loaders reject malformed input instead of repairing it; every format error
//! carries the file path and 1-based line number.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::correction::{validate_markers, Centerline, Marker};
use crate::error::{Error, Result};
use crate::gaze::{GazeSample, GazeStream};
use crate::geodesy::{to_mercator, GeoPoint};
use crate::trajectory::{Millis, Trajectory};

pub const GPS_HEADER: [&str; 3] = ["timestamp_ms", "lat", "lon"];
pub const GAZE_HEADER: [&str; 3] = ["timestamp_ms", "x_px", "y_px"];
pub const PLANE_HEADER: [&str; 3] = ["timestamp_ms", "x", "y"];

/// Session document schema version written by this build.
pub const SESSION_VERSION: u32 = 1;

/// One raw GPS fix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpsRecord {
    pub timestamp_ms: Millis,
    pub lat: f64,
    pub lon: f64,
}

impl GpsRecord {
    pub fn geo(&self) -> GeoPoint {
        GeoPoint {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

fn format_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Rows of a three-column CSV with an exact header, as `(line, ts, a, b)`.
fn read_triples(path: &Path, header: [&str; 3]) -> Result<Vec<(u64, Millis, f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let found = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(format_err(
            path,
            1,
            format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut rows = Vec::new();
    let mut prev: Option<Millis> = None;
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if record.len() != 3 {
            return Err(format_err(
                path,
                line,
                format!("row {row}: expected 3 fields, got {}", record.len()),
            ));
        }
        let ts: Millis = record[0].parse().map_err(|_| {
            format_err(
                path,
                line,
                format!("row {row}: bad timestamp `{}`", &record[0]),
            )
        })?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    format_err(
                        path,
                        line,
                        format!("row {row}: bad {} `{}`", header[i], &record[i]),
                    )
                })
        };
        let (a, b) = (num(1)?, num(2)?);
        if let Some(p) = prev {
            if ts <= p {
                return Err(format_err(
                    path,
                    line,
                    format!("row {row}: timestamp {ts} does not increase (previous {p})"),
                ));
            }
        }
        prev = Some(ts);
        rows.push((line, ts, a, b));
    }
    Ok(rows)
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => format_err(path, line, format!("{other:?}")),
    }
}

fn write_triples<I>(path: &Path, header: [&str; 3], rows: I) -> Result<()>
where
    I: IntoIterator<Item = (Millis, f64, f64)>,
{
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for (t, a, b) in rows {
        out.push_str(&format!("{t},{a},{b}\n"));
    }
    write_atomic(path, out.as_bytes())
}

pub fn load_gps_csv(path: impl AsRef<Path>) -> Result<Vec<GpsRecord>> {
    let path = path.as_ref();
    read_triples(path, GPS_HEADER)?
        .into_iter()
        .map(|(line, timestamp_ms, lat, lon)| {
            let r = GpsRecord {
                timestamp_ms,
                lat,
                lon,
            };
            r.geo()
                .validate()
                .map_err(|e| format_err(path, line, e.to_string()))?;
            Ok(r)
        })
        .collect()
}

pub fn save_gps_csv(path: impl AsRef<Path>, records: &[GpsRecord]) -> Result<()> {
    write_triples(
        path.as_ref(),
        GPS_HEADER,
        records.iter().map(|r| (r.timestamp_ms, r.lat, r.lon)),
    )
}

pub fn load_gaze_csv(path: impl AsRef<Path>) -> Result<GazeStream> {
    Ok(read_triples(path.as_ref(), GAZE_HEADER)?
        .into_iter()
        .map(|(_, t, x, y)| GazeSample::new(t, x, y))
        .collect())
}

pub fn save_gaze_csv(path: impl AsRef<Path>, stream: &[GazeSample]) -> Result<()> {
    write_triples(
        path.as_ref(),
        GAZE_HEADER,
        stream.iter().map(|s| (s.timestamp_ms, s.x, s.y)),
    )
}

pub fn save_plane_csv(path: impl AsRef<Path>, traj: &Trajectory) -> Result<()> {
    write_triples(
        path.as_ref(),
        PLANE_HEADER,
        traj.iter().map(|(t, p)| (t, p.x, p.y)),
    )
}

/// Project raw fixes into the plane.
pub fn project_track(records: &[GpsRecord]) -> Result<Trajectory> {
    let (ts, ps): (Vec<Millis>, Vec<_>) = records
        .iter()
        .map(|r| Ok((r.timestamp_ms, to_mercator(r.geo())?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Trajectory::new(ts, ps)
}

/// Load a track from either a GPS CSV (projected on load) or a planar CSV,
/// chosen by header.
pub fn load_track_csv(path: impl AsRef<Path>) -> Result<Trajectory> {
    let path = path.as_ref();
    let first = fs::read_to_string(path)?
        .lines()
        .next()
        .unwrap_or_default()
        .replace(' ', "");
    if first == GPS_HEADER.join(",") {
        project_track(&load_gps_csv(path)?)
    } else {
        let rows = read_triples(path, PLANE_HEADER)?;
        let (ts, ps) = rows
            .into_iter()
            .map(|(_, t, x, y)| (t, crate::geodesy::PlanePoint::new(x, y)))
            .unzip();
        Trajectory::new(ts, ps).map_err(|e| format_err(path, 2, e.to_string()))
    }
}

/// Dataset split a session belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

/// One recording: raw GPS, correction markers, the committed corrected
/// track, and optional gaze.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Session {
    pub version: u32,
    pub session_id: String,
    pub split: Split,
    pub raw_track: Vec<GpsRecord>,
    #[serde(default)]
    pub markers: Vec<Marker>,
    #[serde(default)]
    pub corrected_track: Option<Trajectory>,
    #[serde(default)]
    pub gaze: Option<GazeStream>,
}

impl Session {
    pub fn new(
        session_id: impl Into<String>,
        split: Split,
        raw_track: Vec<GpsRecord>,
    ) -> Result<Self> {
        let s = Self {
            version: SESSION_VERSION,
            session_id: session_id.into(),
            split,
            raw_track,
            markers: Vec::new(),
            corrected_track: None,
            gaze: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn raw_timestamps(&self) -> Vec<Millis> {
        self.raw_track.iter().map(|r| r.timestamp_ms).collect()
    }

    /// Raw track in plane coordinates.
    pub fn raw_trajectory(&self) -> Result<Trajectory> {
        project_track(&self.raw_track)
    }

    /// The corrected track when committed, otherwise the projected raw track.
    pub fn best_trajectory(&self) -> Result<Trajectory> {
        match &self.corrected_track {
            Some(t) => Ok(t.clone()),
            None => self.raw_trajectory(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_valid_session_id(&self.session_id) {
            return Err(Error::Domain(format!(
                "invalid session id `{}`",
                self.session_id
            )));
        }
        if self.raw_track.is_empty() {
            return Err(Error::InvalidTrajectory("raw track is empty".into()));
        }
        self.raw_trajectory()?;
        validate_markers(&self.markers)?;
        let (first, last) = (
            self.raw_track[0].timestamp_ms,
            self.raw_track.last().unwrap().timestamp_ms,
        );
        if let Some(m) = self
            .markers
            .iter()
            .find(|m| m.timestamp_ms < first || m.timestamp_ms > last)
        {
            return Err(Error::OutOfRange(format!(
                "marker at {} ms outside raw span [{first}, {last}]",
                m.timestamp_ms
            )));
        }
        if let Some(g) = &self.gaze {
            crate::gaze::validate_stream(g)?;
        }
        Ok(())
    }

    /// Canonical JSON encoding; identical sessions give identical bytes.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let found = value
            .get("version")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Domain("session document has no numeric `version`".into()))?;
        if found != SESSION_VERSION as u64 {
            return Err(Error::UnsupportedVersion {
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: SESSION_VERSION,
            });
        }
        let s: Session = serde_json::from_value(value)?;
        s.validate()?;
        Ok(s)
    }
}

/// Ids are used as file stems, so they are restricted to `[A-Za-z0-9_-]+`.
pub fn is_valid_session_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

/// Write via a sibling temp file and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Domain(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn save_session(path: impl AsRef<Path>, session: &Session) -> Result<()> {
    session.validate()?;
    write_atomic(path.as_ref(), session.to_json()?.as_bytes())
}

pub fn load_session(path: impl AsRef<Path>) -> Result<Session> {
    Session::from_json(&fs::read_to_string(path)?)
}

/// `session_id → split`, stored as `manifest.json`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Manifest {
    pub splits: BTreeMap<String, Split>,
}

impl Manifest {
    pub fn sessions_in(&self, split: Split) -> impl Iterator<Item = &str> {
        self.splits
            .iter()
            .filter(move |(_, s)| **s == split)
            .map(|(id, _)| id.as_str())
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let m: Manifest = serde_json::from_str(&fs::read_to_string(path)?)?;
    if let Some(bad) = m.splits.keys().find(|id| !is_valid_session_id(id)) {
        return Err(Error::Domain(format!(
            "invalid session id `{bad}` in manifest"
        )));
    }
    Ok(m)
}

pub fn save_manifest(path: impl AsRef<Path>, manifest: &Manifest) -> Result<()> {
    let mut s = serde_json::to_string_pretty(manifest)?;
    s.push('\n');
    write_atomic(path.as_ref(), s.as_bytes())
}

/// Centerlines from GeoJSON `LineString` / `MultiLineString` geometries
/// (bare, in a `Feature`, or in a `FeatureCollection`). Other geometry
/// types are ignored. Coordinates are `[lon, lat]` and are projected.
pub fn parse_centerlines_geojson(text: &str) -> Result<Vec<Centerline>> {
    let value: Value = serde_json::from_str(text)?;
    let mut out = Vec::new();
    collect_lines(&value, &mut out)?;
    Ok(out)
}

fn collect_lines(v: &Value, out: &mut Vec<Centerline>) -> Result<()> {
    match v.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => {
            for f in v
                .get("features")
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
            {
                collect_lines(f, out)?;
            }
        }
        Some("Feature") => {
            if let Some(g) = v.get("geometry").filter(|g| !g.is_null()) {
                collect_lines(g, out)?;
            }
        }
        Some("GeometryCollection") => {
            for g in v
                .get("geometries")
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
            {
                collect_lines(g, out)?;
            }
        }
        Some("LineString") => out.push(line_from(coords(v)?)?),
        Some("MultiLineString") => {
            for part in coords(v)?.as_array().into_iter().flatten() {
                out.push(line_from(part)?);
            }
        }
        Some(_) => {}
        None => return Err(Error::Domain("GeoJSON object without `type`".into())),
    }
    Ok(())
}

fn coords(v: &Value) -> Result<&Value> {
    v.get("coordinates")
        .ok_or_else(|| Error::Domain("geometry without `coordinates`".into()))
}

fn line_from(v: &Value) -> Result<Centerline> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Domain("line coordinates must be an array".into()))?;
    let pts = arr
        .iter()
        .map(|pos| {
            let lon = pos.get(0).and_then(Value::as_f64);
            let lat = pos.get(1).and_then(Value::as_f64);
            match (lat, lon) {
                (Some(lat), Some(lon)) => to_mercator(GeoPoint { lat, lon }),
                _ => Err(Error::Domain(format!("bad GeoJSON position {pos}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Centerline::new(pts)
}

pub fn load_centerlines_geojson(path: impl AsRef<Path>) -> Result<Vec<Centerline>> {
    parse_centerlines_geojson(&fs::read_to_string(path)?)
}
