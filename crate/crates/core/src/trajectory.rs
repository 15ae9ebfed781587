//! Timestamped planar trajectories, uniform resampling and the input/target
//! window sampler used for forecasting evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};
use crate::geodesy::{to_deltas, MotionDelta, PlanePoint};

/// Timestamps are integer milliseconds.
pub type Millis = i64;

/// One serialized trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedPoint {
    pub timestamp_ms: Millis,
    pub x: f64,
    pub y: f64,
}

/// A non-empty sequence of finite planar points at strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TimedPoint>", into = "Vec<TimedPoint>")]
pub struct Trajectory {
    timestamps: Vec<Millis>,
    points: Vec<PlanePoint>,
}

impl Trajectory {
    pub fn new(timestamps: Vec<Millis>, points: Vec<PlanePoint>) -> Result<Self> {
        if timestamps.len() != points.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: points.len(),
            });
        }
        if timestamps.is_empty() {
            return Err(Error::InvalidTrajectory("empty trajectory".into()));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTrajectory(format!(
                "timestamp at index {} ({} ms) does not increase",
                i + 1,
                timestamps[i + 1]
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidTrajectory(format!(
                "non-finite point at index {i}"
            )));
        }
        Ok(Self { timestamps, points })
    }

    /// Samples `points` on the grid `start_ms + round(k * 1000 / fps)`.
    pub fn uniform(start_ms: Millis, fps: f64, points: Vec<PlanePoint>) -> Result<Self> {
        check_fps(fps)?;
        let timestamps = (0..points.len())
            .map(|k| start_ms + grid_offset_ms(k, fps))
            .collect();
        Self::new(timestamps, points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn timestamps(&self) -> &[Millis] {
        &self.timestamps
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn first_ms(&self) -> Millis {
        self.timestamps[0]
    }

    pub fn last_ms(&self) -> Millis {
        *self.timestamps.last().unwrap()
    }

    pub fn last_point(&self) -> PlanePoint {
        *self.points.last().unwrap()
    }

    /// Time between first and last sample.
    pub fn span_ms(&self) -> Millis {
        self.last_ms() - self.first_ms()
    }

    /// True when every timestamp sits on the `fps` grid anchored at the first sample.
    pub fn is_uniform_at(&self, fps: f64) -> bool {
        let t0 = self.first_ms();
        self.timestamps
            .iter()
            .enumerate()
            .all(|(k, &t)| t - t0 == grid_offset_ms(k, fps))
    }

    pub fn deltas(&self) -> Result<Vec<MotionDelta>> {
        to_deltas(&self.points)
    }

    /// Copy of samples `range`. Panics on an empty or out-of-bounds range.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Trajectory {
        assert!(!range.is_empty(), "empty trajectory slice");
        Trajectory {
            timestamps: self.timestamps[range.clone()].to_vec(),
            points: self.points[range].to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Millis, PlanePoint)> + '_ {
        self.timestamps
            .iter()
            .copied()
            .zip(self.points.iter().copied())
    }

    /// Apply `f` to every point, keeping timestamps.
    pub fn map_points(&self, f: impl FnMut(PlanePoint) -> PlanePoint) -> Result<Trajectory> {
        Trajectory::new(
            self.timestamps.clone(),
            self.points.iter().copied().map(f).collect(),
        )
    }
}

impl TryFrom<Vec<TimedPoint>> for Trajectory {
    type Error = Error;

    fn try_from(samples: Vec<TimedPoint>) -> Result<Self> {
        let (timestamps, points) = samples
            .into_iter()
            .map(|s| (s.timestamp_ms, PlanePoint::new(s.x, s.y)))
            .unzip();
        Trajectory::new(timestamps, points)
    }
}

impl From<Trajectory> for Vec<TimedPoint> {
    fn from(t: Trajectory) -> Self {
        t.iter()
            .map(|(timestamp_ms, p)| TimedPoint {
                timestamp_ms,
                x: p.x,
                y: p.y,
            })
            .collect()
    }
}

pub(crate) fn check_fps(fps: f64) -> Result<()> {
    if fps.is_finite() && fps > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("fps must be positive, got {fps}")))
    }
}

/// Offset of the k-th grid sample, rounded to whole milliseconds.
pub(crate) fn grid_offset_ms(k: usize, fps: f64) -> Millis {
    (k as f64 * 1000.0 / fps).round() as Millis
}

/// Linear-in-time resampling onto a uniform grid spanning the input.
///
/// Grid instants that coincide with an input timestamp return that sample
/// unchanged, so resampling uniform data at its own rate is the identity.
pub fn resample(traj: &Trajectory, fps: f64) -> Result<Trajectory> {
    require_len(traj.len(), 2)?;
    check_fps(fps)?;
    let (ts, ps) = (traj.timestamps(), traj.points());
    let (t0, t_end) = (traj.first_ms(), traj.last_ms());

    let mut out_t = Vec::new();
    let mut out_p = Vec::new();
    let mut seg = 0;
    for k in 0.. {
        let t = t0 + grid_offset_ms(k, fps);
        if t > t_end {
            break;
        }
        while ts[seg + 1] < t {
            seg += 1;
        }
        let p = if ts[seg] == t {
            ps[seg]
        } else if ts[seg + 1] == t {
            ps[seg + 1]
        } else {
            let (a, b) = (ps[seg], ps[seg + 1]);
            let u = (t - ts[seg]) as f64 / (ts[seg + 1] - ts[seg]) as f64;
            PlanePoint::new(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u)
        };
        out_t.push(t);
        out_p.push(p);
    }
    Trajectory::new(out_t, out_p)
}

/// Window lengths and stride for input/target sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub input_secs: f64,
    pub target_secs: f64,
    pub stride_secs: f64,
    pub fps: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            input_secs: 8.0,
            target_secs: 6.0,
            stride_secs: 2.0,
            fps: 5.0,
        }
    }
}

fn samples_in(secs: f64, fps: f64, what: &str) -> Result<usize> {
    let n = secs * fps;
    if !(secs > 0.0 && n.is_finite()) || (n - n.round()).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "{what} of {secs} s is not a positive whole number of samples at {fps} fps"
        )));
    }
    Ok(n.round() as usize)
}

impl SamplerConfig {
    pub fn with_stride(self, stride_secs: f64) -> Self {
        Self {
            stride_secs,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sample_counts().map(|_| ())
    }

    /// `(input, target, stride)` lengths in samples.
    pub fn sample_counts(&self) -> Result<(usize, usize, usize)> {
        check_fps(self.fps)?;
        Ok((
            samples_in(self.input_secs, self.fps, "input")?,
            samples_in(self.target_secs, self.fps, "target")?,
            samples_in(self.stride_secs, self.fps, "stride")?,
        ))
    }

    pub fn input_len(&self) -> usize {
        (self.input_secs * self.fps).round() as usize
    }

    pub fn target_len(&self) -> usize {
        (self.target_secs * self.fps).round() as usize
    }

    /// Number of windows a track spanning `span_ms` yields:
    /// `floor((span - input - target) / stride) + 1`, never negative.
    pub fn window_count(&self, span_ms: Millis) -> usize {
        let slack = span_ms as f64 - (self.input_secs + self.target_secs) * 1000.0;
        let n = (slack / (self.stride_secs * 1000.0) + 1e-9).floor() + 1.0;
        if n > 0.0 {
            n as usize
        } else {
            0
        }
    }
}

/// An input segment and the target segment that immediately follows it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowPair {
    pub input: Trajectory,
    pub target: Trajectory,
    /// Timestamp of the last input sample; the target starts one step later.
    pub anchor_time_ms: Millis,
    /// Index of the first input sample in the source trajectory.
    pub start_index: usize,
}

/// Cut `traj` into input/target pairs at offsets `0, stride, 2·stride, …`.
///
/// Input and target never share a sample. Tracks shorter than one full
/// window produce no pairs.
pub fn sliding_windows(traj: &Trajectory, cfg: &SamplerConfig) -> Result<Vec<WindowPair>> {
    let (n_in, n_tgt, n_stride) = cfg.sample_counts()?;
    if !traj.is_uniform_at(cfg.fps) {
        return Err(Error::InvalidTrajectory(format!(
            "trajectory is not uniformly sampled at {} fps",
            cfg.fps
        )));
    }
    let count = cfg.window_count(traj.span_ms());
    Ok((0..count)
        .map(|k| k * n_stride)
        .filter(|&s| s + n_in + n_tgt <= traj.len())
        .map(|s| {
            let input = traj.slice(s..s + n_in);
            let target = traj.slice(s + n_in..s + n_in + n_tgt);
            WindowPair {
                anchor_time_ms: input.last_ms(),
                input,
                target,
                start_index: s,
            }
        })
        .collect())
}

/// Instantaneous speed per segment, meters/second.
pub fn speed_profile(traj: &Trajectory) -> Result<Vec<f64>> {
    require_len(traj.len(), 2)?;
    Ok(traj
        .timestamps()
        .windows(2)
        .zip(traj.points().windows(2))
        .map(|(t, p)| p[1].distance(p[0]) / ((t[1] - t[0]) as f64 / 1000.0))
        .collect())
}
