//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trajkit::correction::MarkerSpline;
use trajkit::eval::{ade, auxiliary_weight, baseline_linear, discount_weight, fde};
use trajkit::gaze::{detect_fixations, median_downsample};
use trajkit::pci::{
    constant_velocity_input, discrete_frechet, generate_target, pci, CurvatureProfile,
    SyntheticSpec,
};
use trajkit::trajectory::sliding_windows;
use trajkit::{
    from_mercator, to_mercator, FixationConfig, GazeSample, GeoPoint, Marker, PlanePoint,
    SamplerConfig, Trajectory,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_points(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<PlanePoint> {
    (0..n)
        .map(|_| PlanePoint::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale)))
        .collect()
}

/// Minimum over every monotone coupling of the maximum paired distance,
/// enumerated path by path.
fn coupling_enumeration(p: &[PlanePoint], q: &[PlanePoint]) -> f64 {
    fn walk(p: &[PlanePoint], q: &[PlanePoint], i: usize, j: usize, worst: f64, best: &mut f64) {
        let worst = worst.max(p[i].distance(q[j]));
        if i + 1 == p.len() && j + 1 == q.len() {
            *best = best.min(worst);
            return;
        }
        if i + 1 < p.len() {
            walk(p, q, i + 1, j, worst, best);
        }
        if j + 1 < q.len() {
            walk(p, q, i, j + 1, worst, best);
        }
        if i + 1 < p.len() && j + 1 < q.len() {
            walk(p, q, i + 1, j + 1, worst, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(p, q, 0, 0, 0.0, &mut best);
    best
}

fn frechet_oracle() -> Outcome {
    let mut r = rng(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (n, m) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let p = random_points(&mut r, n, 100.0);
        let q = random_points(&mut r, m, 100.0);
        let got = discrete_frechet(&p, &q).map_err(|e| e.to_string())?;
        worst = worst.max((got - coupling_enumeration(&p, &q)).abs());
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-9 && elapsed < Duration::from_secs(5),
        format!(
            "1000 pairs, max |diff| {worst:.1e} m, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn pci_zero_law() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let origin = PlanePoint::new(r.gen_range(-1e4..1e4), r.gen_range(-1e4..1e4));
        let (vx, vy) = (r.gen_range(-30.0..30.0), r.gen_range(-30.0..30.0));
        let fps = [1.0, 2.0, 5.0, 10.0][r.gen_range(0..4)];
        let n_in = r.gen_range(2..60);
        let n_tgt = r.gen_range(1..60);
        let pts: Vec<PlanePoint> = (0..n_in + n_tgt)
            .map(|k| PlanePoint::new(origin.x + k as f64 * vx, origin.y + k as f64 * vy))
            .collect();
        let traj = Trajectory::uniform(0, fps, pts).map_err(|e| e.to_string())?;
        let input = traj.slice(0..n_in);
        let target = traj.slice(n_in..n_in + n_tgt);
        worst = worst.max(pci(&input, &target).map_err(|e| e.to_string())?.value);
    }
    check(worst <= 1e-9, format!("200 cases, max pci {worst:.1e} m"))
}

fn wandering_track(r: &mut ChaCha8Rng, n: usize) -> Trajectory {
    let mut heading: f64 = r.gen_range(0.0..std::f64::consts::TAU);
    let mut p = PlanePoint::new(r.gen_range(-1e3..1e3), r.gen_range(-1e3..1e3));
    let pts = (0..n)
        .map(|_| {
            heading += r.gen_range(-0.15..0.15);
            let step = r.gen_range(0.0..4.0);
            p = PlanePoint::new(p.x + step * heading.cos(), p.y + step * heading.sin());
            p
        })
        .collect();
    Trajectory::uniform(0, 5.0, pts).unwrap()
}

fn linear_baseline_identity() -> Outcome {
    let mut r = rng(3);
    let cfg = SamplerConfig::default();
    let mut windows = 0;
    for _ in 0..20 {
        let n = r.gen_range(71..400);
        for w in sliding_windows(&wandering_track(&mut r, n), &cfg).map_err(|e| e.to_string())? {
            let base = baseline_linear(&w).map_err(|e| e.to_string())?;
            let lhs =
                discrete_frechet(w.target.points(), base.points()).map_err(|e| e.to_string())?;
            let rhs = pci(&w.input, &w.target).map_err(|e| e.to_string())?.value;
            if lhs.to_bits() != rhs.to_bits() {
                return Err(format!("window at {} ms: {lhs} != {rhs}", w.anchor_time_ms));
            }
            windows += 1;
        }
    }
    check(windows > 0, format!("{windows} windows bit-identical"))
}

fn discount_weight_claim() -> Outcome {
    let w = discount_weight(30, 0.97);
    check((w - 0.4010).abs() <= 1e-4, format!("0.97^30 = {w:.6}"))
}

fn auxiliary_proportion() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let lt = 10f64.powf(r.gen_range(-3.0..3.0));
        let lv = 10f64.powf(r.gen_range(-3.0..3.0));
        let rho = r.gen_range(1e-3..2.0);
        let a = auxiliary_weight(lt, lv, rho).map_err(|e| e.to_string())?;
        worst = worst.max((a.alpha_v * lv / lt - rho).abs());
    }
    check(
        worst <= 1e-12,
        format!("1000 cases, max |diff| {worst:.1e}"),
    )
}

fn ade_fde_cases() -> Outcome {
    let p = |v: &[(f64, f64)]| {
        v.iter()
            .map(|&(x, y)| PlanePoint::new(x, y))
            .collect::<Vec<_>>()
    };
    let zeros = p(&[(0.0, 0.0), (0.0, 0.0)]);
    let hand = [
        ade(&p(&[(0.0, 0.0), (1.0, 0.0)]), &zeros).unwrap() == 0.5,
        fde(&p(&[(0.0, 0.0), (3.0, 4.0)]), &zeros).unwrap() == 5.0,
        ade(&zeros, &zeros).unwrap() == 0.0 && fde(&zeros, &zeros).unwrap() == 0.0,
    ];
    if hand.contains(&false) {
        return Err(format!("hand cases {hand:?}"));
    }
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.gen_range(1..50);
        let a = random_points(&mut r, n, 500.0);
        let b = random_points(&mut r, n, 500.0);
        let mut sum = 0.0;
        for i in 0..n {
            sum += ((a[i].x - b[i].x).powi(2) + (a[i].y - b[i].y).powi(2)).sqrt();
        }
        let last = ((a[n - 1].x - b[n - 1].x).powi(2) + (a[n - 1].y - b[n - 1].y).powi(2)).sqrt();
        worst = worst
            .max((ade(&a, &b).unwrap() - sum / n as f64).abs())
            .max((fde(&a, &b).unwrap() - last).abs());
    }
    check(
        worst <= 1e-12,
        format!("3 hand cases exact, 1000 random within {worst:.1e}"),
    )
}

fn synthetic(speed: f64, angle: f64) -> f64 {
    let end = PlanePoint::new(250.0, 40.0);
    let heading = -0.4;
    let input = constant_velocity_input(end, heading, speed, 8.0, 5.0).unwrap();
    let spec = SyntheticSpec {
        speed,
        turn_angle: angle,
        curvature_profile: CurvatureProfile::Constant,
        duration: 6.0,
    };
    pci(&input, &generate_target(end, heading, &spec, 5.0).unwrap())
        .unwrap()
        .value
}

fn turn_ordering() -> Outcome {
    let by_angle: Vec<f64> = [0.0, 30.0, 60.0, 90.0, 135.0, 180.0]
        .iter()
        .map(|&a| synthetic(10.0, a))
        .collect();
    let by_speed: Vec<f64> = [2.5, 5.0, 10.0, 20.0]
        .iter()
        .map(|&s| synthetic(s, 90.0))
        .collect();
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.2}"))
            .collect::<Vec<_>>()
            .join(" < ")
    };
    check(
        increasing(&by_angle) && increasing(&by_speed),
        format!("angle: {}; speed: {}", fmt(&by_angle), fmt(&by_speed)),
    )
}

fn window_counts() -> Outcome {
    let cfg = SamplerConfig::default();
    let count = |secs: f64| {
        let n = (secs * cfg.fps).round() as usize + 1;
        let pts = (0..n).map(|i| PlanePoint::new(i as f64, 0.0)).collect();
        sliding_windows(&Trajectory::uniform(0, cfg.fps, pts).unwrap(), &cfg)
            .unwrap()
            .len()
    };
    let got = [count(14.0), count(16.0), count(13.8)];
    check(got == [1, 2, 0], format!("14 s / 16 s / 13.8 s -> {got:?}"))
}

/// Random 200 Hz stream: dwells with jitter, drifts and jumps.
fn gaze_stream(r: &mut ChaCha8Rng) -> Vec<GazeSample> {
    let mut out = Vec::with_capacity(2000);
    let (mut cx, mut cy) = (r.gen_range(0.0..1920.0), r.gen_range(0.0..1080.0));
    let mut left = 0;
    let mut jitter = 1.0;
    let mut drift = (0.0, 0.0);
    for i in 0..2000 {
        if left == 0 {
            left = r.gen_range(1..300);
            if r.gen_bool(0.7) {
                cx = r.gen_range(0.0..1920.0);
                cy = r.gen_range(0.0..1080.0);
            }
            jitter = [0.5, 3.0, 8.0, 25.0][r.gen_range(0..4)];
            drift = if r.gen_bool(0.3) {
                (r.gen_range(-0.3..0.3), r.gen_range(-0.3..0.3))
            } else {
                (0.0, 0.0)
            };
        }
        left -= 1;
        cx += drift.0;
        cy += drift.1;
        out.push(GazeSample::new(
            i * 5,
            cx + r.gen_range(-jitter..=jitter),
            cy + r.gen_range(-jitter..=jitter),
        ));
    }
    out
}

fn dispersion_deg(s: &[GazeSample], deg_per_pixel: f64) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for g in s {
        x0 = x0.min(g.x);
        x1 = x1.max(g.x);
        y0 = y0.min(g.y);
        y1 = y1.max(g.y);
    }
    ((x1 - x0) + (y1 - y0)) * deg_per_pixel
}

/// Longest admissible window from each start, found by bisection over
/// windows whose dispersion is recomputed from scratch.
fn fixation_brute(s: &[GazeSample], cfg: &FixationConfig) -> Vec<(i64, i64, usize)> {
    let ok = |i: usize, j: usize| {
        s[j].timestamp_ms - s[i].timestamp_ms <= cfg.max_duration_ms
            && dispersion_deg(&s[i..=j], cfg.deg_per_pixel) <= cfg.dispersion_deg
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let (mut lo, mut hi) = (i, s.len() - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if ok(i, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if s[lo].timestamp_ms - s[i].timestamp_ms >= cfg.min_duration_ms {
            out.push((s[i].timestamp_ms, s[lo].timestamp_ms, lo - i + 1));
            i = lo + 1;
        } else {
            i += 1;
        }
    }
    out
}

fn fixation_oracle() -> Outcome {
    let cfg = FixationConfig::default();
    let mut r = rng(9);
    let mut total = 0;
    for k in 0..500 {
        let s = gaze_stream(&mut r);
        let got = detect_fixations(&s, &cfg).map_err(|e| e.to_string())?;
        let want = fixation_brute(&s, &cfg);
        let got_spans: Vec<_> = got
            .iter()
            .map(|f| (f.start_ms, f.end_ms, f.sample_count))
            .collect();
        if got_spans != want {
            return Err(format!(
                "stream {k}: {} fixations vs oracle {}",
                got.len(),
                want.len()
            ));
        }
        for f in &got {
            let i = s.partition_point(|g| g.timestamp_ms < f.start_ms);
            let window = &s[i..i + f.sample_count];
            let d = f.duration_ms();
            if !(80..=1000).contains(&d) || dispersion_deg(window, cfg.deg_per_pixel) > 1.5 {
                return Err(format!("stream {k}: fixation {f:?} outside bounds"));
            }
        }
        total += got.len();
    }
    check(
        total > 0,
        format!("500 streams, {total} fixations identical, bounds hold"),
    )
}

/// Natural-spline second derivatives from the tridiagonal moment equations,
/// solved densely.
fn moments(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    a[(0, 0)] = 1.0;
    a[(n - 1, n - 1)] = 1.0;
    for i in 1..n - 1 {
        let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        a[(i, i - 1)] = h0;
        a[(i, i)] = 2.0 * (h0 + h1);
        a[(i, i + 1)] = h1;
        b[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

fn moment_eval(t: &[f64], y: &[f64], m: &[f64], q: f64) -> f64 {
    let i = (t.partition_point(|&k| k <= q).clamp(1, t.len() - 1)) - 1;
    let h = t[i + 1] - t[i];
    let (a, b) = ((t[i + 1] - q) / h, (q - t[i]) / h);
    a * y[i] + b * y[i + 1] + ((a.powi(3) - a) * m[i] + (b.powi(3) - b) * m[i + 1]) * h * h / 6.0
}

fn cubic_second_derivative(xs: [f64; 4], ys: [f64; 4], x0: f64) -> f64 {
    let m = Matrix4::from_fn(|r, c| (xs[r] - x0).powi(c as i32));
    2.0 * m.lu().solve(&Vector4::from(ys)).unwrap()[2]
}

fn spline_correctness() -> Outcome {
    let mut r = rng(10);
    let (mut knot_err, mut end_err, mut c2_err, mut oracle_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..300 {
        let n = r.gen_range(2..15);
        let mut t = 0;
        let markers: Vec<Marker> = (0..n)
            .map(|_| {
                t += r.gen_range(100..4000);
                Marker::new(
                    t,
                    PlanePoint::new(r.gen_range(-300.0..300.0), r.gen_range(-300.0..300.0)),
                )
            })
            .collect();
        let sp = MarkerSpline::new(&markers).map_err(|e| e.to_string())?;
        for m in &markers {
            knot_err = knot_err.max(sp.at(m.timestamp_ms).unwrap().distance(m.position));
        }
        let knots = sp.x().knots().to_vec();
        for (spline, vals) in [
            (
                sp.x(),
                markers.iter().map(|m| m.position.x).collect::<Vec<_>>(),
            ),
            (
                sp.y(),
                markers.iter().map(|m| m.position.y).collect::<Vec<_>>(),
            ),
        ] {
            let m = moments(&knots, &vals);
            for _ in 0..20 {
                let q = r.gen_range(knots[0]..=knots[n - 1]);
                oracle_err =
                    oracle_err.max((spline.eval(q) - moment_eval(&knots, &vals, &m, q)).abs());
            }
            let side = |k: usize, dir: f64| {
                let h = if dir < 0.0 {
                    knots[k] - knots[k - 1]
                } else {
                    knots[k + 1] - knots[k]
                } / 5.0;
                let xs = [1.0, 2.0, 3.0, 4.0].map(|j| knots[k] + dir * j * h);
                cubic_second_derivative(xs, xs.map(|x| spline.eval(x)), knots[k])
            };
            end_err = end_err.max(side(0, 1.0).abs()).max(side(n - 1, -1.0).abs());
            for (k, moment) in m.iter().enumerate().take(n - 1).skip(1) {
                let (lhs, rhs) = (side(k, -1.0), side(k, 1.0));
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                c2_err = c2_err
                    .max((lhs - rhs).abs() / scale)
                    .max((lhs - moment).abs() / scale);
            }
        }
    }
    check(
        knot_err <= 1e-9 && end_err <= 1e-6 && c2_err <= 1e-6 && oracle_err <= 1e-9,
        format!(
            "knots {knot_err:.1e} m, ends {end_err:.1e}, interior C2 {c2_err:.1e} rel, vs solve {oracle_err:.1e} m"
        ),
    )
}

fn geodesy_round_trip() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let g = GeoPoint::new(
            r.gen_range(-85.05113..=85.05113),
            r.gen_range(-180.0..=180.0),
        )
        .unwrap();
        let back = from_mercator(to_mercator(g).unwrap()).unwrap();
        worst = worst
            .max((back.lat - g.lat).abs())
            .max((back.lon - g.lon).abs());
    }
    check(
        worst <= 1e-9,
        format!("1e5 points, max error {worst:.1e} deg"),
    )
}

fn median_robustness() -> Outcome {
    let mut r = rng(12);
    let mut bins = 0;
    for _ in 0..500 {
        // 200 Hz into 5, 10 or 25 fps bins of 40, 20 or 8 samples
        let fps = [5.0, 10.0, 25.0][r.gen_range(0..3)];
        let per_bin = (200.0 / fps) as usize;
        let n_bins = r.gen_range(1..20);
        let mut stream = Vec::new();
        let mut expected = Vec::new();
        for b in 0..n_bins {
            let (cx, cy) = (r.gen_range(0.0..1920.0), r.gen_range(0.0..1080.0));
            expected.push((cx, cy));
            let n_out = r.gen_range(0..=(per_bin * 49) / 100);
            let mut slots: Vec<bool> = (0..per_bin).map(|k| k < n_out).collect();
            for k in (1..per_bin).rev() {
                slots.swap(k, r.gen_range(0..=k));
            }
            for (k, outlier) in slots.into_iter().enumerate() {
                let t = (b * per_bin + k) as i64 * 5;
                let s = if outlier {
                    GazeSample::new(t, r.gen_range(-1e6..1e6), r.gen_range(-1e6..1e6))
                } else {
                    GazeSample::new(t, cx, cy)
                };
                stream.push(s);
            }
        }
        let down = median_downsample(&stream, fps).map_err(|e| e.to_string())?;
        if down.len() != n_bins {
            return Err(format!("{} bins out, {n_bins} expected", down.len()));
        }
        for (d, (cx, cy)) in down.iter().zip(&expected) {
            if d.x != *cx || d.y != *cy {
                return Err(format!(
                    "bin at {} ms moved to ({}, {})",
                    d.timestamp_ms, d.x, d.y
                ));
            }
        }
        bins += n_bins;
    }
    check(
        true,
        format!("{bins} bins with up to 49% outliers unchanged"),
    )
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Run every subcommand on the bundled fixtures into `dir`.
fn run_cli(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let f = fixtures();
    let fx = |name: &str| f.join(name).display().to_string();
    let out = |name: &str| dir.join(name).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec![
            "pci".into(),
            fx("track.csv"),
            "-o".into(),
            out("pci.csv"),
            "--profile".into(),
            out("profile.csv"),
        ],
        vec![
            "eval".into(),
            "--session".into(),
            fx("session.json"),
            "--predictions".into(),
            fx("predictions.csv"),
            "--json".into(),
            out("eval.json"),
            "--table".into(),
            out("eval.txt"),
        ],
        vec![
            "eval".into(),
            "--session".into(),
            fx("session.json"),
            "--baseline".into(),
            "linear".into(),
            "--json".into(),
            out("linear.json"),
            "--table".into(),
            out("linear.txt"),
        ],
        vec![
            "fixations".into(),
            fx("gaze.csv"),
            "-o".into(),
            out("fixations.csv"),
        ],
        vec![
            "correct".into(),
            fx("track.csv"),
            "--markers".into(),
            fx("markers.json"),
            "-o".into(),
            out("corrected.csv"),
            "--centerlines".into(),
            fx("centerlines.geojson"),
            "--histogram".into(),
            out("histogram.csv"),
        ],
    ];
    for args in &runs {
        let status = Command::new(env!("CARGO_BIN_EXE_trajkit"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!(
                "`trajkit {}` failed: {}",
                args[0],
                String::from_utf8_lossy(&status.stderr)
            ));
        }
    }
    let mut files = Vec::new();
    for name in [
        "pci.csv",
        "profile.csv",
        "eval.json",
        "eval.txt",
        "linear.json",
        "linear.txt",
        "fixations.csv",
        "corrected.csv",
        "histogram.csv",
    ] {
        let bytes = std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        if bytes.iter().filter(|&&b| b == b'\n').count() < 2 {
            return Err(format!("{name} is empty"));
        }
        files.push((name.to_string(), bytes));
    }
    Ok(files)
}

fn cli_byte_stable() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_cli(a.path())?;
    let second = run_cli(b.path())?;
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        if x != y {
            return Err(format!("{name} differs between runs"));
        }
    }
    check(
        true,
        format!(
            "pci, eval, fixations, correct: {} outputs identical across 2 runs",
            first.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("frechet-oracle", frechet_oracle),
        ("pci-zero-law", pci_zero_law),
        ("linear-baseline-identity", linear_baseline_identity),
        ("discount-weight", discount_weight_claim),
        ("auxiliary-proportion", auxiliary_proportion),
        ("ade-fde", ade_fde_cases),
        ("turn-ordering", turn_ordering),
        ("window-count", window_counts),
        ("fixation-oracle", fixation_oracle),
        ("spline-correctness", spline_correctness),
        ("geodesy-round-trip", geodesy_round_trip),
        ("median-robustness", median_robustness),
        ("cli-end-to-end", cli_byte_stable),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name:<26} {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<26} {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
