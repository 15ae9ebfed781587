//! Marker-driven GPS correction.
//!
//! A human places trusted positions (markers) on a noisy track; the corrected
//! track is a natural cubic spline through the markers, parameterized by time
//! and evaluated at the raw timestamps. Distances to road centerlines give a
//! noise estimate for raw and corrected tracks alike.

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};
use crate::geodesy::PlanePoint;
use crate::trajectory::{Millis, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub timestamp_ms: Millis,
    #[serde(flatten)]
    pub position: PlanePoint,
}

impl Marker {
    pub fn new(timestamp_ms: Millis, position: PlanePoint) -> Self {
        Self {
            timestamp_ms,
            position,
        }
    }
}

/// Markers must have strictly increasing timestamps and finite positions.
pub fn validate_markers(markers: &[Marker]) -> Result<()> {
    for (i, m) in markers.iter().enumerate() {
        if !m.position.is_finite() {
            return Err(Error::Domain(format!(
                "marker {i} has a non-finite position"
            )));
        }
        if i > 0 && m.timestamp_ms <= markers[i - 1].timestamp_ms {
            return Err(Error::Domain(format!(
                "marker {i} at {} ms is not after marker {} at {} ms",
                m.timestamp_ms,
                i - 1,
                markers[i - 1].timestamp_ms
            )));
        }
    }
    Ok(())
}

/// Index of the timestamp in sorted `raw` nearest to `t`; ties go to the earlier one.
pub fn nearest_index(raw: &[Millis], t: Millis) -> Option<usize> {
    if raw.is_empty() {
        return None;
    }
    let i = raw.partition_point(|&r| r < t);
    if i == 0 {
        return Some(0);
    }
    if i == raw.len() {
        return Some(raw.len() - 1);
    }
    Some(if t - raw[i - 1] <= raw[i] - t {
        i - 1
    } else {
        i
    })
}

/// Move every marker onto the nearest raw timestamp, keeping its position.
pub fn snap_markers(raw_timestamps: &[Millis], markers: &[Marker]) -> Result<Vec<Marker>> {
    markers
        .iter()
        .map(|m| {
            let i = nearest_index(raw_timestamps, m.timestamp_ms)
                .ok_or_else(|| Error::InvalidTrajectory("raw track is empty".into()))?;
            Ok(Marker::new(raw_timestamps[i], m.position))
        })
        .collect()
}

/// Natural cubic spline through `(knots[i], values[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivative at each knot; zero at both ends.
    second: Vec<f64>,
}

impl NaturalSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        require_len(knots.len(), 2)?;
        if knots.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: knots.len(),
                right: values.len(),
            });
        }
        if !knots.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Domain("spline knots must strictly increase".into()));
        }
        let second = natural_second_derivatives(&knots, &values);
        Ok(Self {
            knots,
            values,
            second,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.knots.len();
        self.knots.partition_point(|&k| k <= t).clamp(1, n - 1) - 1
    }

    /// Value at `t`. Outside the knot span the end cubic is extended.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let (a, b) = ((t1 - t) / h, (t - t0) / h);
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }

    /// Second derivative at `t` (piecewise linear between knots).
    pub fn second_derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let b = (t - t0) / (t1 - t0);
        (1.0 - b) * self.second[i] + b * self.second[i + 1]
    }
}

/// Solve the tridiagonal system for interior second derivatives (Thomas algorithm).
fn natural_second_derivatives(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let interior = n - 2;
    let mut diag = vec![0.0; interior];
    let mut upper = vec![0.0; interior];
    let mut rhs = vec![0.0; interior];
    for k in 0..interior {
        let i = k + 1;
        let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    // forward sweep; sub-diagonal entry of row k is h_{k} = t[k+1] - t[k]
    for k in 1..interior {
        let lower = t[k + 1] - t[k];
        let w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    m[interior] = rhs[interior - 1] / diag[interior - 1];
    for k in (0..interior - 1).rev() {
        m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
    }
    m
}

/// Spline through both coordinates of a marker set, parameterized by seconds
/// since the first marker.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerSpline {
    origin_ms: Millis,
    span: (Millis, Millis),
    x: NaturalSpline,
    y: NaturalSpline,
}

impl MarkerSpline {
    pub fn new(markers: &[Marker]) -> Result<Self> {
        require_len(markers.len(), 2)?;
        validate_markers(markers)?;
        let origin_ms = markers[0].timestamp_ms;
        let knots: Vec<f64> = markers
            .iter()
            .map(|m| (m.timestamp_ms - origin_ms) as f64 / 1000.0)
            .collect();
        Ok(Self {
            origin_ms,
            span: (origin_ms, markers.last().unwrap().timestamp_ms),
            x: NaturalSpline::new(
                knots.clone(),
                markers.iter().map(|m| m.position.x).collect(),
            )?,
            y: NaturalSpline::new(knots, markers.iter().map(|m| m.position.y).collect())?,
        })
    }

    fn param(&self, t_ms: Millis) -> f64 {
        (t_ms - self.origin_ms) as f64 / 1000.0
    }

    pub fn span_ms(&self) -> (Millis, Millis) {
        self.span
    }

    pub fn at(&self, t_ms: Millis) -> Result<PlanePoint> {
        if t_ms < self.span.0 || t_ms > self.span.1 {
            return Err(Error::OutOfRange(format!(
                "query {t_ms} ms outside marker span [{}, {}]",
                self.span.0, self.span.1
            )));
        }
        let s = self.param(t_ms);
        Ok(PlanePoint::new(self.x.eval(s), self.y.eval(s)))
    }

    pub fn x(&self) -> &NaturalSpline {
        &self.x
    }

    pub fn y(&self) -> &NaturalSpline {
        &self.y
    }
}

/// Corrected track through `markers`, sampled at `query_timestamps`.
pub fn spline_correct(markers: &[Marker], query_timestamps: &[Millis]) -> Result<Trajectory> {
    let spline = MarkerSpline::new(markers)?;
    let points = query_timestamps
        .iter()
        .map(|&t| spline.at(t))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(query_timestamps.to_vec(), points)
}

/// Raw timestamps lying within the marker span; the default correction grid.
pub fn query_grid(raw_timestamps: &[Millis], markers: &[Marker]) -> Vec<Millis> {
    match (markers.first(), markers.last()) {
        (Some(a), Some(b)) => raw_timestamps
            .iter()
            .copied()
            .filter(|&t| t >= a.timestamp_ms && t <= b.timestamp_ms)
            .collect(),
        _ => Vec::new(),
    }
}

/// A road centerline polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centerline {
    polyline: Vec<PlanePoint>,
}

impl Centerline {
    pub fn new(polyline: Vec<PlanePoint>) -> Result<Self> {
        require_len(polyline.len(), 2)?;
        if polyline.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("centerline has a non-finite vertex".into()));
        }
        if let Some(i) = polyline.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!(
                "centerline vertices {i} and {} coincide",
                i + 1
            )));
        }
        Ok(Self { polyline })
    }

    pub fn polyline(&self) -> &[PlanePoint] {
        &self.polyline
    }

    pub fn distance(&self, p: PlanePoint) -> f64 {
        self.polyline
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Euclidean distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    let ab = b - a;
    let len2 = ab.dx * ab.dx + ab.dy * ab.dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let u = (((p.x - a.x) * ab.dx + (p.y - a.y) * ab.dy) / len2).clamp(0.0, 1.0);
    p.distance(a.offset(ab, u))
}

/// Per-point distance to the nearest segment of any centerline.
pub fn distance_to_centerline(points: &[PlanePoint], lines: &[Centerline]) -> Result<Vec<f64>> {
    if lines.is_empty() {
        return Err(Error::Config("no centerlines given".into()));
    }
    Ok(points
        .iter()
        .map(|&p| {
            lines
                .iter()
                .map(|l| l.distance(p))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Non-empty `[k·w, (k+1)·w)` bins in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }
}

pub fn noise_histogram(distances: &[f64], bin_width: f64) -> Result<Histogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::Config(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let mut counts = std::collections::BTreeMap::<i64, usize>::new();
    for &d in distances {
        if !d.is_finite() {
            return Err(Error::Domain("non-finite distance".into()));
        }
        *counts.entry((d / bin_width).floor() as i64).or_default() += 1;
    }
    Ok(Histogram {
        bin_width,
        bins: counts
            .into_iter()
            .map(|(k, count)| HistogramBin {
                lower: k as f64 * bin_width,
                upper: (k + 1) as f64 * bin_width,
                count,
            })
            .collect(),
    })
}
