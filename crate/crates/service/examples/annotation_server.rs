//! Serve a generated demo session for the annotation UI.
//!
//!     cargo run -p trajkit-service --example annotation_server [port]
//!
//! Then, for instance:
//!
//!     curl localhost:8787/sessions
//!     curl -X PUT localhost:8787/sessions/demo/markers -H 'content-type: application/json' \
//!          -d '{"markers": [{"timestamp_ms": 0, "lat": 40.4168, "lon": -3.7038},
//!                           {"timestamp_ms": 30000, "lat": 40.4190, "lon": -3.7000}]}'
//!     curl 'localhost:8787/sessions/demo/preview?pci=true'
//!     curl -X POST localhost:8787/sessions/demo/commit

use std::net::SocketAddr;

use trajkit::ingest::save_session;
use trajkit::{from_mercator, to_mercator, GeoPoint, GpsRecord, PlanePoint, Session, Split};
use trajkit_service::{ServiceConfig, DEFAULT_PORT};

fn demo_session() -> trajkit::Result<Session> {
    let origin = to_mercator(GeoPoint::new(40.4168, -3.7038)?)?;
    let raw = (0..=300)
        .map(|i| {
            let t = i as f64 / 10.0;
            let p = PlanePoint::new(
                origin.x + 14.0 * t + 2.0 * (t * 0.9).sin(),
                origin.y + 0.4 * t * t + 2.0 * (t * 1.3).cos(),
            );
            let g = from_mercator(p)?;
            Ok(GpsRecord {
                timestamp_ms: i * 100,
                lat: g.lat,
                lon: g.lon,
            })
        })
        .collect::<trajkit::Result<_>>()?;
    Session::new("demo", Split::Test, raw)
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let port = match std::env::args().nth(1) {
        Some(p) => p.parse()?,
        None => DEFAULT_PORT,
    };
    let dir = std::env::temp_dir().join("trajkit-demo-sessions");
    std::fs::create_dir_all(&dir)?;
    save_session(dir.join("demo.json"), &demo_session()?)?;

    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    println!("sessions in {}; listening on http://{addr}", dir.display());
    trajkit_service::serve(ServiceConfig::new(&dir), addr).await?;
    Ok(())
}
