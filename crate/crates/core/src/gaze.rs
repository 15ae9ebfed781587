//! Gaze streams: dispersion-threshold fixation detection (I-DT), median
//! downsampling to a frame rate, and seeded noise injection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{check_fps, Millis};

/// One gaze sample in scene-image pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSample {
    pub timestamp_ms: Millis,
    pub x: f64,
    pub y: f64,
}

impl GazeSample {
    pub const fn new(timestamp_ms: Millis, x: f64, y: f64) -> Self {
        Self { timestamp_ms, x, y }
    }
}

pub type GazeStream = Vec<GazeSample>;

/// Check strictly increasing timestamps and finite coordinates.
pub fn validate_stream(stream: &[GazeSample]) -> Result<()> {
    for (i, s) in stream.iter().enumerate() {
        if !s.x.is_finite() || !s.y.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite gaze sample at index {i}"
            )));
        }
        if i > 0 && s.timestamp_ms <= stream[i - 1].timestamp_ms {
            return Err(Error::Domain(format!(
                "gaze timestamp at index {i} ({} ms) does not increase",
                s.timestamp_ms
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixation {
    pub start_ms: Millis,
    pub end_ms: Millis,
    /// Centroid x in pixels.
    pub cx: f64,
    /// Centroid y in pixels.
    pub cy: f64,
    pub sample_count: usize,
}

impl Fixation {
    pub fn duration_ms(&self) -> Millis {
        self.end_ms - self.start_ms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixationConfig {
    pub min_duration_ms: Millis,
    pub max_duration_ms: Millis,
    /// Dispersion limit in degrees of visual angle.
    pub dispersion_deg: f64,
    /// Scene-camera calibration: visual angle per pixel.
    pub deg_per_pixel: f64,
}

impl Default for FixationConfig {
    fn default() -> Self {
        Self {
            min_duration_ms: 80,
            max_duration_ms: 1000,
            dispersion_deg: 1.5,
            deg_per_pixel: 0.075,
        }
    }
}

impl FixationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_duration_ms <= 0 || self.max_duration_ms <= self.min_duration_ms {
            return Err(Error::Config(format!(
                "need 0 < min_duration_ms < max_duration_ms, got {} and {}",
                self.min_duration_ms, self.max_duration_ms
            )));
        }
        if !(self.dispersion_deg > 0.0 && self.deg_per_pixel > 0.0) {
            return Err(Error::Config(
                "dispersion_deg and deg_per_pixel must be positive".into(),
            ));
        }
        Ok(())
    }

    /// I-DT dispersion of a bounding box, in degrees.
    pub fn dispersion(&self, x_range: f64, y_range: f64) -> f64 {
        (x_range + y_range) * self.deg_per_pixel
    }
}

/// Running bounding box of a candidate window.
#[derive(Clone, Copy)]
struct Bounds {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Bounds {
    fn of(s: &GazeSample) -> Self {
        Self {
            min_x: s.x,
            max_x: s.x,
            min_y: s.y,
            max_y: s.y,
        }
    }

    fn with(self, s: &GazeSample) -> Self {
        Self {
            min_x: self.min_x.min(s.x),
            max_x: self.max_x.max(s.x),
            min_y: self.min_y.min(s.y),
            max_y: self.max_y.max(s.y),
        }
    }
}

/// Dispersion-threshold fixation identification.
///
/// From each start sample the window grows while its dispersion stays within
/// `cfg.dispersion_deg` and its duration within `cfg.max_duration_ms`. A
/// window lasting at least `cfg.min_duration_ms` is emitted and scanning
/// resumes after it; otherwise the start advances by one sample. Stable gaze
/// longer than the maximum therefore yields consecutive fixations.
pub fn detect_fixations(stream: &[GazeSample], cfg: &FixationConfig) -> Result<Vec<Fixation>> {
    cfg.validate()?;
    validate_stream(stream)?;

    let mut out = Vec::new();
    let mut i = 0;
    while i < stream.len() {
        let t0 = stream[i].timestamp_ms;
        let mut bounds = Bounds::of(&stream[i]);
        let mut j = i;
        while let Some(next) = stream.get(j + 1) {
            if next.timestamp_ms - t0 > cfg.max_duration_ms {
                break;
            }
            let grown = bounds.with(next);
            if cfg.dispersion(grown.max_x - grown.min_x, grown.max_y - grown.min_y)
                > cfg.dispersion_deg
            {
                break;
            }
            bounds = grown;
            j += 1;
        }

        if stream[j].timestamp_ms - t0 >= cfg.min_duration_ms {
            let window = &stream[i..=j];
            let n = window.len() as f64;
            out.push(Fixation {
                start_ms: t0,
                end_ms: stream[j].timestamp_ms,
                cx: window.iter().map(|s| s.x).sum::<f64>() / n,
                cy: window.iter().map(|s| s.y).sum::<f64>() / n,
                sample_count: window.len(),
            });
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Lower median: the `(n-1)/2`-th order statistic, always an observed value.
fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

/// Reduce a high-rate stream to `target_fps` by per-bin coordinate medians.
///
/// Bins are aligned to multiples of `1000 / target_fps` ms on the absolute
/// clock; each output sample carries its bin-center timestamp. Empty bins are
/// skipped.
pub fn median_downsample(stream: &[GazeSample], target_fps: f64) -> Result<Vec<GazeSample>> {
    check_fps(target_fps)?;
    let bin_of = |t: Millis| (t as f64 * target_fps / 1000.0).floor() as i64;

    let mut out = Vec::new();
    let mut start = 0;
    while start < stream.len() {
        let bin = bin_of(stream[start].timestamp_ms);
        let end = start
            + stream[start..]
                .iter()
                .position(|s| bin_of(s.timestamp_ms) != bin)
                .unwrap_or(stream.len() - start);
        let chunk = &stream[start..end];
        let mut xs: Vec<f64> = chunk.iter().map(|s| s.x).collect();
        let mut ys: Vec<f64> = chunk.iter().map(|s| s.y).collect();
        let center = ((bin as f64 + 0.5) * 1000.0 / target_fps).round() as Millis;
        out.push(GazeSample::new(
            center,
            lower_median(&mut xs),
            lower_median(&mut ys),
        ));
        start = end;
    }
    Ok(out)
}

/// Add independent uniform noise in `[-amplitude_px, amplitude_px]` to each
/// coordinate. Deterministic for a given seed.
pub fn inject_noise(
    stream: &[GazeSample],
    amplitude_px: f64,
    seed: u64,
) -> Result<Vec<GazeSample>> {
    if !(amplitude_px >= 0.0 && amplitude_px.is_finite()) {
        return Err(Error::Config(format!(
            "noise amplitude must be >= 0, got {amplitude_px}"
        )));
    }
    if amplitude_px == 0.0 {
        return Ok(stream.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(stream
        .iter()
        .map(|s| {
            let dx = rng.gen_range(-amplitude_px..=amplitude_px);
            let dy = rng.gen_range(-amplitude_px..=amplitude_px);
            GazeSample::new(s.timestamp_ms, s.x + dx, s.y + dy)
        })
        .collect())
}
