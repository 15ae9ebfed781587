//! Spherical Web Mercator (EPSG:3857) projection and relative-motion encoding.
//!
//! All planar quantities in this crate are meters in the projected plane.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};

/// Sphere radius used by EPSG:3857, in meters.
pub const EARTH_RADIUS_M: f64 = 6_378_137.0;

/// Latitude band accepted by [`to_mercator`], in degrees.
pub const MAX_LATITUDE: f64 = 85.05113;

/// Largest projected easting magnitude, `π·R`.
pub const MAX_EASTING: f64 = PI * EARTH_RADIUS_M;

/// Largest northing produced by projecting [`MAX_LATITUDE`].
///
/// Slightly above `π·R`, because the rounded band limit sits a hair past the
/// latitude where the square map closes.
pub fn max_northing() -> f64 {
    EARTH_RADIUS_M * MAX_LATITUDE.to_radians().tan().asinh()
}

/// WGS84 latitude/longitude in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        let p = Self { lat, lon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lat.is_finite() || !self.lon.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite coordinate ({}, {})",
                self.lat, self.lon
            )));
        }
        if self.lat.abs() > MAX_LATITUDE {
            return Err(Error::Domain(format!(
                "latitude {} outside Web Mercator band ±{MAX_LATITUDE}",
                self.lat
            )));
        }
        if self.lon.abs() > 180.0 {
            return Err(Error::Domain(format!(
                "longitude {} outside [-180, 180]",
                self.lon
            )));
        }
        Ok(())
    }
}

/// A position in the projected plane, meters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Translate by `k` times `delta`.
    pub fn offset(self, delta: MotionDelta, k: f64) -> PlanePoint {
        PlanePoint::new(self.x + k * delta.dx, self.y + k * delta.dy)
    }
}

/// Per-step displacement between consecutive samples, meters/step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MotionDelta {
    pub dx: f64,
    pub dy: f64,
}

impl MotionDelta {
    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }
}

impl Sub for PlanePoint {
    type Output = MotionDelta;

    fn sub(self, rhs: PlanePoint) -> MotionDelta {
        MotionDelta::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<MotionDelta> for PlanePoint {
    type Output = PlanePoint;

    fn add(self, rhs: MotionDelta) -> PlanePoint {
        PlanePoint::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

pub fn to_mercator(p: GeoPoint) -> Result<PlanePoint> {
    p.validate()?;
    let x = EARTH_RADIUS_M * p.lon.to_radians();
    // R·ln(tan(π/4 + φ/2)), in a form that is odd in φ and exact at 0
    let y = EARTH_RADIUS_M * p.lat.to_radians().tan().asinh();
    Ok(PlanePoint::new(x, y))
}

pub fn from_mercator(p: PlanePoint) -> Result<GeoPoint> {
    if !p.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite plane point ({}, {})",
            p.x, p.y
        )));
    }
    if p.x.abs() > MAX_EASTING || p.y.abs() > max_northing() {
        return Err(Error::Domain(format!(
            "plane point ({}, {}) outside Web Mercator bounds",
            p.x, p.y
        )));
    }
    let lon = (p.x / EARTH_RADIUS_M).to_degrees();
    let lat = (p.y / EARTH_RADIUS_M).sinh().atan().to_degrees();
    Ok(GeoPoint { lat, lon })
}

/// Differences between consecutive points: `out[t] = p[t+1] - p[t]`.
pub fn to_deltas(points: &[PlanePoint]) -> Result<Vec<MotionDelta>> {
    require_len(points.len(), 2)?;
    Ok(points.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Cumulative reconstruction from an anchor. The anchor itself is not emitted.
pub fn from_deltas(anchor: PlanePoint, deltas: &[MotionDelta]) -> Vec<PlanePoint> {
    deltas
        .iter()
        .scan(anchor, |cur, d| {
            *cur = *cur + *d;
            Some(*cur)
        })
        .collect()
}
