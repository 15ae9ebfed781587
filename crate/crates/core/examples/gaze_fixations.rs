//! Detect fixations in a synthetic 200 Hz gaze recording, before and after
//! injecting uniform noise and median-downsampling.
//!
//!     cargo run -p trajkit --example gaze_fixations

use trajkit::gaze::{detect_fixations, inject_noise, median_downsample};
use trajkit::{FixationConfig, GazeSample};

fn recording() -> Vec<GazeSample> {
    let targets = [
        (960.0, 540.0),
        (1300.0, 420.0),
        (700.0, 650.0),
        (1000.0, 300.0),
    ];
    (0..1600)
        .map(|i| {
            let t = i * 5;
            let (k, phase) = ((t / 2000) as usize, t % 2000);
            let (mut x, mut y) = targets[k];
            if k > 0 && phase < 50 {
                // 50 ms saccade from the previous target
                let (px, py) = targets[k - 1];
                let a = phase as f64 / 50.0;
                x = px + (x - px) * a;
                y = py + (y - py) * a;
            }
            GazeSample::new(t, x + (i as f64 * 0.7).sin(), y + (i as f64 * 1.3).cos())
        })
        .collect()
}

fn show(label: &str, stream: &[GazeSample], cfg: &FixationConfig) -> trajkit::Result<()> {
    let fixations = detect_fixations(stream, cfg)?;
    println!(
        "{label}: {} samples, {} fixations",
        stream.len(),
        fixations.len()
    );
    for f in &fixations {
        println!(
            "  {:>5}-{:<5} ms  {:>4} ms  ({:7.1}, {:6.1})  n={}",
            f.start_ms,
            f.end_ms,
            f.duration_ms(),
            f.cx,
            f.cy,
            f.sample_count
        );
    }
    Ok(())
}

fn main() -> trajkit::Result<()> {
    let cfg = FixationConfig::default();
    let raw = recording();
    show("clean", &raw, &cfg)?;

    let noisy = inject_noise(&raw, 3.0, 7)?;
    show("±3 px noise", &noisy, &cfg)?;

    let down = median_downsample(&noisy, 50.0)?;
    show("noisy, median 50 Hz", &down, &cfg)?;
    Ok(())
}
