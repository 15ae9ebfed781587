use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use trajkit::correction::{
    distance_to_centerline, noise_histogram, query_grid, snap_markers, spline_correct,
};
use trajkit::eval::{baseline_linear, baseline_stationary, render_table, report, score_window};
use trajkit::gaze::{detect_fixations, median_downsample};
use trajkit::ingest::{load_centerlines_geojson, load_gaze_csv, load_session, load_track_csv};
use trajkit::pci::{pci, pci_profile};
use trajkit::trajectory::{resample, sliding_windows};
use trajkit::{to_mercator, FixationConfig, GeoPoint, Marker, PlanePoint, SamplerConfig};
use trajkit_service::{ServiceConfig, DEFAULT_PORT};

#[derive(Parser)]
#[command(
    name = "trajkit",
    version,
    about = "Trajectory complexity, evaluation, gaze and GPS correction tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-window path complexity of a track.
    Pci(PciArgs),
    /// Score predictions or a baseline against a session's windows.
    Eval(EvalArgs),
    /// Detect gaze fixations.
    Fixations(FixationArgs),
    /// Spline-correct a raw track through hand-placed markers.
    Correct(CorrectArgs),
    /// Run the annotation HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = 5.0)]
    fps: f64,
    #[arg(long, default_value_t = 8.0)]
    input_secs: f64,
    #[arg(long, default_value_t = 6.0)]
    target_secs: f64,
    #[arg(long, default_value_t = 2.0)]
    stride_secs: f64,
}

impl WindowArgs {
    fn sampler(&self) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            input_secs: self.input_secs,
            target_secs: self.target_secs,
            stride_secs: self.stride_secs,
            fps: self.fps,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct PciArgs {
    /// Track CSV: `timestamp_ms,lat,lon` or `timestamp_ms,x,y`.
    track: PathBuf,
    #[command(flatten)]
    windows: WindowArgs,
    /// Output CSV, stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the per-point mean PCI profile here.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Window stride for the profile; defaults to one sample.
    #[arg(long)]
    profile_stride_secs: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Linear,
    Stationary,
}

#[derive(Args)]
struct EvalArgs {
    /// Ground-truth session JSON.
    #[arg(long)]
    session: PathBuf,
    /// Predictions CSV with `window_id,step,x,y`, steps counted from 1.
    #[arg(
        long,
        conflicts_with = "baseline",
        required_unless_present = "baseline"
    )]
    predictions: Option<PathBuf>,
    #[arg(long, value_enum)]
    baseline: Option<Baseline>,
    #[command(flatten)]
    windows: WindowArgs,
    #[arg(long, default_value_t = trajkit::eval::DEFAULT_PCI_THRESHOLD)]
    pci_threshold: f64,
    /// Write the JSON report here; stdout when omitted.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the text table here; stderr when omitted.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Row label in the table.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct FixationArgs {
    /// Gaze CSV: `timestamp_ms,x_px,y_px`.
    gaze: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 80)]
    min_duration_ms: i64,
    #[arg(long, default_value_t = 1000)]
    max_duration_ms: i64,
    #[arg(long, default_value_t = 1.5)]
    dispersion_deg: f64,
    #[arg(long, default_value_t = 0.075)]
    deg_per_pixel: f64,
    /// Median-downsample to this rate before detection.
    #[arg(long)]
    downsample_fps: Option<f64>,
}

#[derive(Args)]
struct CorrectArgs {
    /// Raw track CSV: `timestamp_ms,lat,lon` or `timestamp_ms,x,y`.
    track: PathBuf,
    /// Markers JSON: array of `{timestamp_ms, x, y}` or `{timestamp_ms, lat, lon}`.
    #[arg(long)]
    markers: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Road centerlines as GeoJSON; enables the distance histogram.
    #[arg(long, requires = "histogram")]
    centerlines: Option<PathBuf>,
    /// Histogram CSV of corrected-point distances to the nearest centerline.
    #[arg(long, requires = "centerlines")]
    histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    bin_width: f64,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "TRAJKIT_PORT", default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long)]
    data_dir: PathBuf,
    #[arg(long)]
    bind: Option<Ipv4Addr>,
    /// Allowed CORS origin; any origin when omitted.
    #[arg(long)]
    cors_origin: Option<String>,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run_pci(args: &PciArgs) -> Result<()> {
    let cfg = args.windows.sampler()?;
    let track = resample(&load_track_csv(&args.track)?, cfg.fps)?;
    let mut out = csv::Writer::from_writer(sink(args.output.as_deref())?);
    out.write_record(["window_start_ms", "pci_m"])?;
    for w in sliding_windows(&track, &cfg)? {
        let value = pci(&w.input, &w.target)?.value;
        out.serialize((w.input.first_ms(), value))?;
    }
    out.flush()?;

    if let Some(path) = &args.profile {
        let stride = args.profile_stride_secs.unwrap_or(1.0 / cfg.fps);
        let profile = pci_profile(&track, &cfg, stride)?;
        let mut out = csv::Writer::from_writer(sink(Some(path))?);
        out.write_record(["timestamp_ms", "mean_pci_m"])?;
        for (t, v) in track.timestamps().iter().zip(profile) {
            if let Some(v) = v {
                out.serialize((t, v))?;
            }
        }
        out.flush()?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct PredictionRow {
    window_id: usize,
    step: usize,
    x: f64,
    y: f64,
}

fn load_predictions(path: &Path) -> Result<BTreeMap<usize, Vec<(usize, PlanePoint)>>> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut by_window: BTreeMap<usize, Vec<(usize, PlanePoint)>> = BTreeMap::new();
    for (i, row) in rdr.deserialize::<PredictionRow>().enumerate() {
        let row = row.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        by_window
            .entry(row.window_id)
            .or_default()
            .push((row.step, PlanePoint::new(row.x, row.y)));
    }
    Ok(by_window)
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let cfg = args.windows.sampler()?;
    let session = load_session(&args.session)?;
    let track = resample(&session.best_trajectory()?, cfg.fps)?;
    let windows = sliding_windows(&track, &cfg)?;
    let predictions = args
        .predictions
        .as_deref()
        .map(load_predictions)
        .transpose()?;

    let mut samples = Vec::with_capacity(windows.len());
    for (id, w) in windows.iter().enumerate() {
        let pred = match (&predictions, args.baseline) {
            (Some(p), _) => {
                let Some(rows) = p.get(&id) else {
                    bail!("no predictions for window {id}");
                };
                let mut rows = rows.clone();
                rows.sort_by_key(|r| r.0);
                let steps: Vec<usize> = rows.iter().map(|r| r.0).collect();
                if steps != (1..=w.target.len()).collect::<Vec<_>>() {
                    bail!("window {id}: expected steps 1..={}", w.target.len());
                }
                rows.into_iter().map(|r| r.1).collect()
            }
            (None, Some(Baseline::Linear)) => baseline_linear(w)?.points().to_vec(),
            (None, Some(Baseline::Stationary)) => baseline_stationary(w).points().to_vec(),
            (None, None) => unreachable!("clap requires one source"),
        };
        samples.push(score_window(id, w, &pred, cfg.fps)?);
    }
    if let Some(p) = &predictions {
        if let Some(extra) = p.keys().find(|&&k| k >= windows.len()) {
            bail!(
                "predictions reference window {extra}, session has {}",
                windows.len()
            );
        }
    }

    let rep = report(&samples, args.pci_threshold);
    let method = args.method.clone().unwrap_or_else(|| match args.baseline {
        Some(Baseline::Linear) => "linear".into(),
        Some(Baseline::Stationary) => "stationary".into(),
        None => "model".into(),
    });
    let mut json = sink(args.json.as_deref())?;
    serde_json::to_writer_pretty(&mut json, &rep)?;
    writeln!(json)?;
    json.flush()?;
    let table = render_table(&rep, &method);
    match &args.table {
        Some(p) => std::fs::write(p, table)?,
        None => eprint!("{table}"),
    }
    Ok(())
}

fn run_fixations(args: &FixationArgs) -> Result<()> {
    let cfg = FixationConfig {
        min_duration_ms: args.min_duration_ms,
        max_duration_ms: args.max_duration_ms,
        dispersion_deg: args.dispersion_deg,
        deg_per_pixel: args.deg_per_pixel,
    };
    let mut stream = load_gaze_csv(&args.gaze)?;
    if let Some(fps) = args.downsample_fps {
        stream = median_downsample(&stream, fps)?;
    }
    let mut out = csv::Writer::from_writer(sink(args.output.as_deref())?);
    out.write_record(["start_ms", "end_ms", "cx", "cy", "n"])?;
    for f in detect_fixations(&stream, &cfg)? {
        out.serialize((f.start_ms, f.end_ms, f.cx, f.cy, f.sample_count))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MarkerInput {
    Plane {
        timestamp_ms: i64,
        x: f64,
        y: f64,
    },
    Geo {
        timestamp_ms: i64,
        lat: f64,
        lon: f64,
    },
}

fn load_markers(path: &Path) -> Result<Vec<Marker>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inputs: Vec<MarkerInput> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    inputs
        .into_iter()
        .map(|m| {
            Ok(match m {
                MarkerInput::Plane { timestamp_ms, x, y } => {
                    Marker::new(timestamp_ms, PlanePoint::new(x, y))
                }
                MarkerInput::Geo {
                    timestamp_ms,
                    lat,
                    lon,
                } => Marker::new(timestamp_ms, to_mercator(GeoPoint { lat, lon })?),
            })
        })
        .collect()
}

fn run_correct(args: &CorrectArgs) -> Result<()> {
    let raw = load_track_csv(&args.track)?;
    let markers = snap_markers(raw.timestamps(), &load_markers(&args.markers)?)?;
    let corrected = spline_correct(&markers, &query_grid(raw.timestamps(), &markers))?;

    let mut out = csv::Writer::from_writer(sink(args.output.as_deref())?);
    out.write_record(trajkit::ingest::PLANE_HEADER)?;
    for (t, p) in corrected.iter() {
        out.serialize((t, p.x, p.y))?;
    }
    out.flush()?;

    if let Some(path) = &args.centerlines {
        let lines = load_centerlines_geojson(path)?;
        let distances = distance_to_centerline(corrected.points(), &lines)?;
        let hist = noise_histogram(&distances, args.bin_width)?;
        let mut out = csv::Writer::from_writer(sink(args.histogram.as_deref())?);
        out.write_record(["lower_m", "upper_m", "count"])?;
        for b in &hist.bins {
            out.serialize((b.lower, b.upper, b.count))?;
        }
        out.flush()?;
    }
    Ok(())
}

fn run_serve(args: &ServeArgs) -> Result<()> {
    let mut config = ServiceConfig::new(&args.data_dir);
    config.cors_origin = args.cors_origin.clone();
    let addr = SocketAddr::from((args.bind.unwrap_or(Ipv4Addr::LOCALHOST), args.port));
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("serving {} on http://{addr}", args.data_dir.display());
    rt.block_on(trajkit_service::serve(config, addr))?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Pci(a) => run_pci(a),
        Command::Eval(a) => run_eval(a),
        Command::Fixations(a) => run_fixations(a),
        Command::Correct(a) => run_correct(a),
        Command::Serve(a) => run_serve(a),
    }
}
