//! Marker-based correction of a drive whose GPS drifts inside a tunnel:
//! snap hand-placed markers, fit the spline, compare distances to a road
//! centerline before and after, and save the session.
//!
//!     cargo run -p trajkit --example correct_session

use trajkit::correction::{
    distance_to_centerline, noise_histogram, query_grid, snap_markers, spline_correct,
};
use trajkit::ingest::{parse_centerlines_geojson, save_session};
use trajkit::{
    from_mercator, to_mercator, GeoPoint, GpsRecord, Marker, PlanePoint, Session, Split,
};

const ROAD: &str = r#"{"type": "FeatureCollection", "features": [
  {"type": "Feature", "properties": {"name": "tunnel"},
   "geometry": {"type": "LineString", "coordinates": [[2.2940, 48.8580], [2.3010, 48.8580]]}}
]}"#;

fn main() -> trajkit::Result<()> {
    let start = to_mercator(GeoPoint::new(48.8580, 2.2945)?)?;
    // 40 s at 2 Hz along the road; from 10 s to 30 s the fix wanders north
    let raw: Vec<GpsRecord> = (0..=80)
        .map(|i| {
            let t = i as f64 / 2.0;
            let drift = if (10.0..30.0).contains(&t) {
                12.0 * ((t - 10.0) / 20.0 * std::f64::consts::PI).sin()
            } else {
                0.0
            };
            let g = from_mercator(PlanePoint::new(
                start.x + 11.0 * t,
                start.y + drift + 0.3 * (t * 3.1).sin(),
            ))?;
            Ok(GpsRecord {
                timestamp_ms: 1_700_000_000_000 + i * 500,
                lat: g.lat,
                lon: g.lon,
            })
        })
        .collect::<trajkit::Result<_>>()?;
    let mut session = Session::new("tunnel-demo", Split::Val, raw)?;

    // markers dropped on the road by hand, slightly off the fix times
    let t0 = session.raw_track[0].timestamp_ms;
    let placed: Vec<Marker> = [0.0, 9.8, 20.3, 30.1, 40.0]
        .iter()
        .map(|&s| {
            Marker::new(
                t0 + (s * 1000.0) as i64,
                PlanePoint::new(start.x + 11.0 * s, start.y),
            )
        })
        .collect();
    session.markers = snap_markers(&session.raw_timestamps(), &placed)?;
    session.validate()?;
    for (p, s) in placed.iter().zip(&session.markers) {
        println!(
            "marker {:+} ms -> {:+} ms",
            p.timestamp_ms - t0,
            s.timestamp_ms - t0
        );
    }

    let corrected = spline_correct(
        &session.markers,
        &query_grid(&session.raw_timestamps(), &session.markers),
    )?;
    let road = parse_centerlines_geojson(ROAD)?;
    for (label, points) in [
        ("raw", session.raw_trajectory()?),
        ("corrected", corrected.clone()),
    ] {
        let d = distance_to_centerline(points.points(), &road)?;
        let hist = noise_histogram(&d, 2.0)?;
        let bars: Vec<String> = hist
            .bins
            .iter()
            .map(|b| format!("[{:.0},{:.0}):{}", b.lower, b.upper, b.count))
            .collect();
        println!(
            "{label:>9}: max {:.2} m  {}",
            d.iter().copied().fold(0.0, f64::max),
            bars.join(" ")
        );
    }

    session.corrected_track = Some(corrected);
    let path = std::env::temp_dir().join("tunnel-demo.json");
    save_session(&path, &session)?;
    println!("saved {}", path.display());
    Ok(())
}
