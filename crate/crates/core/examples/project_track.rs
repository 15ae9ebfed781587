//! Project a short GPS drive into Web Mercator meters, encode it as per-step
//! motion deltas and rebuild it, then resample to 5 fps.
//!
//!     cargo run -p trajkit --example project_track

use trajkit::geodesy::{from_deltas, to_deltas};
use trajkit::ingest::project_track;
use trajkit::trajectory::{resample, speed_profile};
use trajkit::{from_mercator, GpsRecord};

fn main() -> trajkit::Result<()> {
    // about 1 Hz with a dropped fix around t = 4 s
    let fixes = [
        (0, 52.52000, 13.40500),
        (1000, 52.52008, 13.40512),
        (2000, 52.52016, 13.40525),
        (3000, 52.52023, 13.40540),
        (5100, 52.52036, 13.40571),
        (6000, 52.52040, 13.40586),
        (7000, 52.52043, 13.40602),
    ];
    let records: Vec<GpsRecord> = fixes
        .iter()
        .map(|&(t, lat, lon)| GpsRecord {
            timestamp_ms: t,
            lat,
            lon,
        })
        .collect();

    let track = project_track(&records)?;
    println!("{} fixes, span {} ms", track.len(), track.span_ms());

    let deltas = to_deltas(track.points())?;
    let rebuilt = from_deltas(track.points()[0], &deltas);
    let drift = rebuilt
        .iter()
        .zip(&track.points()[1..])
        .map(|(a, b)| a.distance(*b))
        .fold(0.0, f64::max);
    println!("delta round trip max drift: {drift:.3e} m");

    let five = resample(&track, 5.0)?;
    let speeds = speed_profile(&five)?;
    println!("resampled to {} points at 5 fps", five.len());
    // speed of the segment leaving each printed sample
    for ((t, p), v) in five.iter().zip(&speeds).step_by(5) {
        let g = from_mercator(p)?;
        println!(
            "  {t:>5} ms  x={:.2} y={:.2}  ({:.6}, {:.6})  {v:.2} m/s",
            p.x, p.y, g.lat, g.lon
        );
    }
    Ok(())
}
