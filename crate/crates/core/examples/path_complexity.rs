//! Path complexity of synthetic turns, and a per-point complexity profile of
//! a track with one sharp corner.
//!
//!     cargo run -p trajkit --example path_complexity

use trajkit::pci::{
    constant_velocity_input, generate_target, pci, pci_profile, CurvatureProfile, SyntheticSpec,
};
use trajkit::{PlanePoint, SamplerConfig, Trajectory};

fn main() -> trajkit::Result<()> {
    let fps = 5.0;
    let end = PlanePoint::new(0.0, 0.0);
    let input = constant_velocity_input(end, 0.0, 10.0, 8.0, fps)?;

    println!(
        "{:>8} {:>10} {:>10} {:>10}",
        "turn", "constant", "ease_in", "ease_out"
    );
    for angle in [0.0, 30.0, 60.0, 90.0, 135.0, 180.0] {
        let row: Vec<f64> = [
            CurvatureProfile::Constant,
            CurvatureProfile::EaseIn,
            CurvatureProfile::EaseOut,
        ]
        .into_iter()
        .map(|curvature_profile| {
            let spec = SyntheticSpec {
                speed: 10.0,
                turn_angle: angle,
                curvature_profile,
                duration: 6.0,
            };
            pci(&input, &generate_target(end, 0.0, &spec, fps)?).map(|r| r.value)
        })
        .collect::<trajkit::Result<_>>()?;
        println!(
            "{:>7}° {:>9.2}m {:>9.2}m {:>9.2}m",
            angle, row[0], row[1], row[2]
        );
    }

    // 20 s east, then 20 s north after a right-angle corner
    let points: Vec<PlanePoint> = (0..=200)
        .map(|i| {
            let t = i as f64 / fps;
            if t <= 20.0 {
                PlanePoint::new(8.0 * t, 0.0)
            } else {
                PlanePoint::new(160.0, 8.0 * (t - 20.0))
            }
        })
        .collect();
    let track = Trajectory::uniform(0, fps, points)?;
    let profile = pci_profile(&track, &SamplerConfig::default(), 1.0)?;
    let (peak_i, peak) = profile
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("track long enough for one window");
    println!(
        "\nprofile: {} of {} points covered, peak {peak:.2} m at t = {} ms",
        profile.iter().flatten().count(),
        track.len(),
        track.timestamps()[peak_i]
    );
    Ok(())
}
