//! Path Complexity Index.
//!
//! The PCI of a target segment is its discrete Fréchet distance to the
//! constant-velocity continuation of the input segment, where the velocity is
//! taken from the final two input samples. Straight, steady driving scores 0;
//! turns, merges and speed changes score in meters of deviation.

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};
use crate::geodesy::PlanePoint;
use crate::trajectory::{
    check_fps, grid_offset_ms, sliding_windows, Millis, SamplerConfig, Trajectory,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PciResult {
    /// Fréchet distance in meters.
    pub value: f64,
    /// The constant-velocity extrapolation the target was compared against.
    pub simple_trajectory: Trajectory,
}

/// Continue `input` at its final velocity for `n_steps` samples.
///
/// Point `k` is `last + k·v_final` with `v_final = last − second_to_last`;
/// timestamps continue at the final input step.
pub fn simple_extrapolation(input: &Trajectory, n_steps: usize) -> Result<Trajectory> {
    require_len(input.len(), 2)?;
    if n_steps == 0 {
        return Err(Error::OutOfRange(
            "extrapolation needs at least one step".into(),
        ));
    }
    let n = input.len();
    let (ts, ps) = (input.timestamps(), input.points());
    let v_final = ps[n - 1] - ps[n - 2];
    let step_ms = ts[n - 1] - ts[n - 2];
    let last = ps[n - 1];

    let timestamps = (1..=n_steps as Millis)
        .map(|k| ts[n - 1] + k * step_ms)
        .collect();
    let points = (1..=n_steps)
        .map(|k| last.offset(v_final, k as f64))
        .collect();
    Trajectory::new(timestamps, points)
}

/// Discrete Fréchet distance (Eiter & Mannila coupling DP).
///
/// Runs in `O(|p|·|q|)` time with a single row of scratch.
pub fn discrete_frechet(p: &[PlanePoint], q: &[PlanePoint]) -> Result<f64> {
    require_len(p.len(), 1)?;
    require_len(q.len(), 1)?;

    let mut row = vec![0.0f64; q.len()];
    for (i, &pi) in p.iter().enumerate() {
        // `diag` holds the previous row's value at j-1 before it is overwritten.
        let mut diag = 0.0;
        for (j, &qj) in q.iter().enumerate() {
            let d = pi.distance(qj);
            let up = row[j];
            let best = match (i, j) {
                (0, 0) => d,
                (0, _) => d.max(row[j - 1]),
                (_, 0) => d.max(up),
                _ => d.max(up.min(diag).min(row[j - 1])),
            };
            diag = up;
            row[j] = best;
        }
    }
    Ok(row[q.len() - 1])
}

/// PCI of `target` given the preceding `input`.
///
/// Both segments are expected on the same uniform grid.
pub fn pci(input: &Trajectory, target: &Trajectory) -> Result<PciResult> {
    let simple = simple_extrapolation(input, target.len())?;
    let value = discrete_frechet(target.points(), simple.points())?;
    Ok(PciResult {
        value,
        simple_trajectory: simple,
    })
}

/// How the heading change is distributed along a synthetic target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureProfile {
    /// Uniform turn rate: a circular arc.
    Constant,
    /// Turn rate grows along the path; most of the turn happens late.
    EaseIn,
    /// Turn rate decays along the path; most of the turn happens early.
    EaseOut,
}

impl CurvatureProfile {
    /// Fraction of the total heading change accumulated at path fraction `s`.
    fn cumulative(self, s: f64) -> f64 {
        match self {
            CurvatureProfile::Constant => s,
            CurvatureProfile::EaseIn => s * s,
            CurvatureProfile::EaseOut => 1.0 - (1.0 - s) * (1.0 - s),
        }
    }
}

/// Parameters of a synthetic target path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// meters/second
    pub speed: f64,
    /// Total heading change in degrees, positive counter-clockwise.
    pub turn_angle: f64,
    pub curvature_profile: CurvatureProfile,
    /// seconds
    pub duration: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::Config(format!(
                "speed must be positive, got {}",
                self.speed
            )));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Config(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if !self.turn_angle.is_finite() {
            return Err(Error::Config("turn angle must be finite".into()));
        }
        Ok(())
    }
}

/// Constant-speed path starting at `input_end` with initial `heading` (radians,
/// counter-clockwise from +x) that turns by `spec.turn_angle` in total.
///
/// Sample `k` (1-based) sits at `k` grid steps after time 0, so it pairs with
/// an input ending at time 0 such as [`constant_velocity_input`].
pub fn generate_target(
    input_end: PlanePoint,
    heading: f64,
    spec: &SyntheticSpec,
    fps: f64,
) -> Result<Trajectory> {
    spec.validate()?;
    check_fps(fps)?;
    let n = (spec.duration * fps).round() as usize;
    if n == 0 {
        return Err(Error::Config(format!(
            "duration {} s yields no samples at {fps} fps",
            spec.duration
        )));
    }
    let turn = spec.turn_angle.to_radians();
    let step_len = spec.speed / fps;

    let mut cur = input_end;
    let mut timestamps = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for k in 1..=n {
        // chord of each step follows the heading at the step midpoint
        let s = (k as f64 - 0.5) / n as f64;
        let theta = heading + turn * spec.curvature_profile.cumulative(s);
        cur = PlanePoint::new(
            cur.x + step_len * theta.cos(),
            cur.y + step_len * theta.sin(),
        );
        timestamps.push(grid_offset_ms(k, fps));
        points.push(cur);
    }
    Trajectory::new(timestamps, points)
}

/// Straight constant-speed input of `secs` duration ending at `end` at time 0.
pub fn constant_velocity_input(
    end: PlanePoint,
    heading: f64,
    speed: f64,
    secs: f64,
    fps: f64,
) -> Result<Trajectory> {
    check_fps(fps)?;
    let n = (secs * fps).round() as usize;
    require_len(n, 2)?;
    let (dx, dy) = (heading.cos() * speed / fps, heading.sin() * speed / fps);
    let mut timestamps = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for j in (0..n).rev() {
        timestamps.push(-grid_offset_ms(j, fps));
        points.push(PlanePoint::new(
            end.x - j as f64 * dx,
            end.y - j as f64 * dy,
        ));
    }
    Trajectory::new(timestamps, points)
}

/// Per-point mean PCI over every window whose target covers the point.
///
/// Windows of `cfg.input_secs`/`cfg.target_secs` slide by `stride_secs`.
/// Each window's PCI is attributed to its target samples only. Points never
/// covered by a target are `None`.
pub fn pci_profile(
    traj: &Trajectory,
    cfg: &SamplerConfig,
    stride_secs: f64,
) -> Result<Vec<Option<f64>>> {
    let cfg = cfg.with_stride(stride_secs);
    let (n_in, n_tgt, _) = cfg.sample_counts()?;
    let mut sums = vec![0.0; traj.len()];
    let mut counts = vec![0u32; traj.len()];
    for w in sliding_windows(traj, &cfg)? {
        let value = pci(&w.input, &w.target)?.value;
        let start = w.start_index + n_in;
        for i in start..start + n_tgt {
            sums[i] += value;
            counts[i] += 1;
        }
    }
    Ok(sums
        .into_iter()
        .zip(counts)
        .map(|(s, c)| (c > 0).then(|| s / c as f64))
        .collect())
}
