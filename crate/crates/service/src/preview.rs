use serde::{Deserialize, Serialize};
use trajkit::correction::{query_grid, spline_correct};
use trajkit::pci::pci_profile;
use trajkit::trajectory::{resample, speed_profile};
use trajkit::{from_mercator, Millis, PlanePoint, SamplerConfig, Session, Trajectory};

/// A timestamped point in both projected meters and degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoTimedPoint {
    pub timestamp_ms: Millis,
    pub x: f64,
    pub y: f64,
    pub lat: f64,
    pub lon: f64,
}

impl GeoTimedPoint {
    pub fn new(timestamp_ms: Millis, p: PlanePoint) -> trajkit::Result<Self> {
        let g = from_mercator(p)?;
        Ok(Self {
            timestamp_ms,
            x: p.x,
            y: p.y,
            lat: g.lat,
            lon: g.lon,
        })
    }
}

fn geo_points(traj: &Trajectory) -> trajkit::Result<Vec<GeoTimedPoint>> {
    traj.iter().map(|(t, p)| GeoTimedPoint::new(t, p)).collect()
}

/// Mean PCI per point of the corrected track resampled to `fps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PciOverlay {
    pub fps: f64,
    pub stride_secs: f64,
    pub points: Vec<GeoTimedPoint>,
    pub mean_pci_m: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreviewResponse {
    pub session_id: String,
    pub markers: Vec<GeoTimedPoint>,
    pub corrected_points: Vec<GeoTimedPoint>,
    /// One entry per consecutive pair of corrected points, m/s.
    pub speeds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pci_profile: Option<PciOverlay>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreviewOptions {
    pub sampler: SamplerConfig,
    pub pci_stride_secs: f64,
}

impl Default for PreviewOptions {
    fn default() -> Self {
        let sampler = SamplerConfig::default();
        Self {
            pci_stride_secs: 1.0 / sampler.fps,
            sampler,
        }
    }
}

/// Spline preview over the session's markers, sampled at raw timestamps
/// inside the marker span. Needs at least two markers.
pub fn compute_preview(
    session: &Session,
    with_pci: bool,
    opts: &PreviewOptions,
) -> trajkit::Result<PreviewResponse> {
    let corrected = spline_correct(
        &session.markers,
        &query_grid(&session.raw_timestamps(), &session.markers),
    )?;
    let pci_overlay = if with_pci {
        let grid = resample(&corrected, opts.sampler.fps)?;
        Some(PciOverlay {
            fps: opts.sampler.fps,
            stride_secs: opts.pci_stride_secs,
            mean_pci_m: pci_profile(&grid, &opts.sampler, opts.pci_stride_secs)?,
            points: geo_points(&grid)?,
        })
    } else {
        None
    };
    Ok(PreviewResponse {
        session_id: session.session_id.clone(),
        markers: session
            .markers
            .iter()
            .map(|m| GeoTimedPoint::new(m.timestamp_ms, m.position))
            .collect::<trajkit::Result<_>>()?,
        speeds: speed_profile(&corrected)?,
        corrected_points: geo_points(&corrected)?,
        pci_profile: pci_overlay,
    })
}
