//! Trajectory toolkit for ego-vehicle forecasting research.
//!
//! - [`geodesy`]: EPSG:3857 projection and relative-motion encoding
//! - [`trajectory`]: timestamped tracks, resampling, input/target windows
//! - [`pci`]: Path Complexity Index and synthetic targets
//! - [`eval`]: ADE/FDE, discounted loss, baselines and PCI-stratified reports
//! - [`gaze`]: fixation detection, median downsampling, noise injection
//! - [`correction`]: marker-driven spline correction and centerline distances
//! - [`ingest`]: CSV streams, session files and split manifests
//!
//! Runnable walkthroughs live in `examples/`.

pub mod correction;
pub mod error;
pub mod eval;
pub mod gaze;
pub mod geodesy;
pub mod ingest;
pub mod pci;
pub mod trajectory;

pub use correction::{Centerline, Marker};
pub use error::{Error, Result};
pub use gaze::{Fixation, FixationConfig, GazeSample};
pub use geodesy::{from_mercator, to_mercator, GeoPoint, MotionDelta, PlanePoint};
pub use ingest::{GpsRecord, Session, Split};
pub use trajectory::{Millis, SamplerConfig, Trajectory, WindowPair};
