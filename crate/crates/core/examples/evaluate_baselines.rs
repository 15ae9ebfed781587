//! Cut a track into forecasting windows, score the stationary and linear
//! baselines, and print PCI-stratified tables. Also shows the discounted
//! loss and the auxiliary-loss weighting.
//!
//!     cargo run -p trajkit --example evaluate_baselines

use trajkit::eval::{
    auxiliary_weight, baseline_linear, baseline_stationary, discount_weight,
    future_discounted_loss, render_table, report, score_window, LossConfig, DEFAULT_PCI_THRESHOLD,
};
use trajkit::trajectory::sliding_windows;
use trajkit::{PlanePoint, SamplerConfig, Trajectory};

fn city_drive(fps: f64) -> trajkit::Result<Trajectory> {
    // straight runs with a few corners and one stop
    let mut heading: f64 = 0.0;
    let mut p = PlanePoint::default();
    let mut points = Vec::new();
    for i in 0..900 {
        let t = i as f64 / fps;
        let speed = if (60.0..70.0).contains(&t) { 0.0 } else { 9.0 };
        if [25.0, 48.0, 95.0, 130.0]
            .iter()
            .any(|c| (t - c).abs() < 2.0)
        {
            heading += std::f64::consts::FRAC_PI_2 / (4.0 * fps);
        }
        p = PlanePoint::new(
            p.x + speed / fps * heading.cos(),
            p.y + speed / fps * heading.sin(),
        );
        points.push(p);
    }
    Trajectory::uniform(0, fps, points)
}

fn main() -> trajkit::Result<()> {
    let cfg = SamplerConfig::default();
    let windows = sliding_windows(&city_drive(cfg.fps)?, &cfg)?;
    println!(
        "{} windows of {} + {} samples\n",
        windows.len(),
        cfg.input_len(),
        cfg.target_len()
    );

    for (name, linear) in [("stationary", false), ("linear", true)] {
        let samples = windows
            .iter()
            .enumerate()
            .map(|(id, w)| {
                let pred = if linear {
                    baseline_linear(w)?
                } else {
                    baseline_stationary(w)
                };
                score_window(id, w, pred.points(), cfg.fps)
            })
            .collect::<trajkit::Result<Vec<_>>>()?;
        println!(
            "{}",
            render_table(&report(&samples, DEFAULT_PCI_THRESHOLD), name)
        );
    }

    let loss = LossConfig::default();
    let w = &windows[windows.len() / 2];
    let pred = baseline_linear(w)?;
    let l_fd = future_discounted_loss(pred.points(), w.target.points(), loss.gamma)?;
    println!(
        "discounted loss on one window: {l_fd:.3} (final-step weight {:.4})",
        discount_weight(cfg.target_len(), loss.gamma)
    );
    let aux = auxiliary_weight(l_fd, 3.5, loss.rho_v)?;
    println!(
        "auxiliary weight {:.4}, combined loss {:.3}",
        aux.alpha_v, aux.combined
    );
    Ok(())
}
