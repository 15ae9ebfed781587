//! Forecast scoring: displacement metrics, discounted loss, naive baselines
//! and PCI-stratified aggregation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{require_len, require_same_len, Error, Result};
use crate::geodesy::PlanePoint;
use crate::pci::{pci, simple_extrapolation};
use crate::trajectory::{Trajectory, WindowPair};

fn displacements<'a>(
    pred: &'a [PlanePoint],
    gt: &'a [PlanePoint],
) -> Result<impl Iterator<Item = f64> + 'a> {
    require_same_len(pred.len(), gt.len())?;
    require_len(pred.len(), 1)?;
    Ok(pred.iter().zip(gt).map(|(p, g)| p.distance(*g)))
}

/// Average displacement error: mean Euclidean distance over all steps.
pub fn ade(pred: &[PlanePoint], gt: &[PlanePoint]) -> Result<f64> {
    let n = pred.len() as f64;
    Ok(displacements(pred, gt)?.sum::<f64>() / n)
}

/// Final displacement error: distance at the last step.
pub fn fde(pred: &[PlanePoint], gt: &[PlanePoint]) -> Result<f64> {
    Ok(displacements(pred, gt)?.last().unwrap())
}

/// Displacement at `horizon_secs` into the prediction, i.e. at 1-based step
/// `horizon_secs · fps`. The full horizon coincides with [`fde`].
pub fn fde_at(pred: &[PlanePoint], gt: &[PlanePoint], horizon_secs: f64, fps: f64) -> Result<f64> {
    require_same_len(pred.len(), gt.len())?;
    let k = horizon_secs * fps;
    if !k.is_finite() || (k - k.round()).abs() > 1e-9 || k.round() < 1.0 {
        return Err(Error::OutOfRange(format!(
            "horizon {horizon_secs} s is not a whole number of steps at {fps} fps"
        )));
    }
    let k = k.round() as usize;
    if k > pred.len() {
        return Err(Error::OutOfRange(format!(
            "horizon {horizon_secs} s (step {k}) beyond prediction length {}",
            pred.len()
        )));
    }
    Ok(pred[k - 1].distance(gt[k - 1]))
}

/// Discount and auxiliary-loss ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub gamma: f64,
    pub rho_v: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            gamma: 0.97,
            rho_v: 0.5,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        check_rho(self.rho_v)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "discount must lie in (0, 1), got {gamma}"
        )))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "auxiliary ratio must be >= 0, got {rho}"
        )))
    }
}

/// Weight of 1-based step `i` under discount `gamma`.
pub fn discount_weight(step: usize, gamma: f64) -> f64 {
    gamma.powi(step as i32)
}

/// `Σ_{i=1}^{N} γ^i · ‖pred_i − gt_i‖²`.
pub fn future_discounted_loss(pred: &[PlanePoint], gt: &[PlanePoint], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    require_same_len(pred.len(), gt.len())?;
    require_len(pred.len(), 1)?;
    let mut weight = 1.0;
    let mut total = 0.0;
    for (p, g) in pred.iter().zip(gt) {
        weight *= gamma;
        let d = *p - *g;
        total += weight * (d.dx * d.dx + d.dy * d.dy);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryWeighting {
    /// Coefficient applied to the auxiliary loss.
    pub alpha_v: f64,
    /// `loss_t + alpha_v · loss_v`.
    pub combined: f64,
}

/// Scale an auxiliary loss so it contributes `rho_v` times the primary loss.
///
/// `alpha_v = rho_v · |loss_t| / |loss_v|`. A zero auxiliary loss gets
/// `alpha_v = 0`.
pub fn auxiliary_weight(loss_t: f64, loss_v: f64, rho_v: f64) -> Result<AuxiliaryWeighting> {
    check_rho(rho_v)?;
    if !loss_t.is_finite() || !loss_v.is_finite() {
        return Err(Error::Domain("losses must be finite".into()));
    }
    let alpha_v = if loss_v == 0.0 {
        0.0
    } else {
        rho_v * loss_t.abs() / loss_v.abs()
    };
    Ok(AuxiliaryWeighting {
        alpha_v,
        combined: loss_t + alpha_v * loss_v,
    })
}

/// Hold the last input position for the whole target horizon.
pub fn baseline_stationary(window: &WindowPair) -> Trajectory {
    let last = window.input.last_point();
    Trajectory::new(
        window.target.timestamps().to_vec(),
        vec![last; window.target.len()],
    )
    .expect("target timestamps are already valid")
}

/// Continue at the final input velocity; identical to the PCI reference path.
pub fn baseline_linear(window: &WindowPair) -> Result<Trajectory> {
    simple_extrapolation(&window.input, window.target.len())
}

/// Metrics for one evaluated window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub window_id: usize,
    pub ade: f64,
    pub fde: f64,
    /// Keyed by whole-second horizon.
    pub fde_at: BTreeMap<u32, f64>,
    pub pci: f64,
}

/// Score `pred` against a window's target, including PCI of the window and
/// FDE at every whole-second horizon the prediction covers.
pub fn score_window(
    window_id: usize,
    window: &WindowPair,
    pred: &[PlanePoint],
    fps: f64,
) -> Result<SampleResult> {
    let gt = window.target.points();
    let horizons = (pred.len() as f64 / fps).floor() as u32;
    let fde_at = (1..=horizons)
        .filter(|&h| ((h as f64) * fps - (h as f64 * fps).round()).abs() < 1e-9)
        .map(|h| Ok((h, fde_at(pred, gt, h as f64, fps)?)))
        .collect::<Result<_>>()?;
    Ok(SampleResult {
        window_id,
        ade: ade(pred, gt)?,
        fde: fde(pred, gt)?,
        fde_at,
        pci: pci(&window.input, &window.target)?.value,
    })
}

/// Lower edges of the reporting bins; the last bin is open-ended.
pub const PCI_BIN_EDGES: [f64; 4] = [0.0, 10.0, 20.0, 40.0];

/// Default filter for the "hard samples" columns.
pub const DEFAULT_PCI_THRESHOLD: f64 = 20.0;

pub fn pci_bin(value: f64) -> usize {
    PCI_BIN_EDGES.iter().rposition(|&e| value >= e).unwrap_or(0)
}

fn bin_label(i: usize) -> String {
    match PCI_BIN_EDGES.get(i + 1) {
        Some(hi) => format!("{}-{}", PCI_BIN_EDGES[i], hi),
        None => format!("{}+", PCI_BIN_EDGES[i]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub ade: f64,
    pub fde: f64,
    /// Mean FDE per horizon over samples that have that horizon.
    pub fde_at: BTreeMap<u32, f64>,
}

impl Aggregate {
    fn of<'a>(samples: impl IntoIterator<Item = &'a SampleResult>) -> Option<Aggregate> {
        let mut count = 0;
        let (mut ade, mut fde) = (0.0, 0.0);
        let mut horizons: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
        for s in samples {
            count += 1;
            ade += s.ade;
            fde += s.fde;
            for (&h, &v) in &s.fde_at {
                let e = horizons.entry(h).or_default();
                e.0 += v;
                e.1 += 1;
            }
        }
        (count > 0).then(|| Aggregate {
            count,
            ade: ade / count as f64,
            fde: fde / count as f64,
            fde_at: horizons
                .into_iter()
                .map(|(h, (sum, n))| (h, sum / n as f64))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    pub label: String,
    pub lower_m: f64,
    pub upper_m: Option<f64>,
    pub count: usize,
    pub ade: Option<f64>,
    pub fde: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub pci_threshold: f64,
    /// Absent when there are no samples.
    pub overall: Option<Aggregate>,
    /// Samples with `pci >= pci_threshold`; absent when none qualify.
    pub filtered: Option<Aggregate>,
    pub bins: Vec<BinSummary>,
    /// Sorted by PCI bin, then window id.
    pub samples: Vec<SampleResult>,
}

pub fn report(samples: &[SampleResult], pci_threshold: f64) -> EvalReport {
    let mut sorted = samples.to_vec();
    sorted.sort_by_key(|s| (pci_bin(s.pci), s.window_id));

    let bins = (0..PCI_BIN_EDGES.len())
        .map(|b| {
            let agg = Aggregate::of(sorted.iter().filter(|s| pci_bin(s.pci) == b));
            BinSummary {
                label: bin_label(b),
                lower_m: PCI_BIN_EDGES[b],
                upper_m: PCI_BIN_EDGES.get(b + 1).copied(),
                count: agg.as_ref().map_or(0, |a| a.count),
                ade: agg.as_ref().map(|a| a.ade),
                fde: agg.as_ref().map(|a| a.fde),
            }
        })
        .collect();

    EvalReport {
        pci_threshold,
        overall: Aggregate::of(&sorted),
        filtered: Aggregate::of(sorted.iter().filter(|s| s.pci >= pci_threshold)),
        bins,
        samples: sorted,
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

/// Aligned plain-text summary: headline ADE / ADE+PCI columns, then per-bin
/// and per-horizon breakdowns.
pub fn render_table(report: &EvalReport, method: &str) -> String {
    let thr = report.pci_threshold;
    let mut out = String::new();
    let overall = report.overall.as_ref();
    let filtered = report.filtered.as_ref();

    let _ = writeln!(
        out,
        "{:<12} {:>8} {:>10} {:>16} {:>10} {:>16} {:>10}",
        "method",
        "samples",
        "ADE (m)",
        format!("ADE+{thr}PCI (m)"),
        "FDE (m)",
        format!("FDE+{thr}PCI (m)"),
        format!("n({thr}+PCI)"),
    );
    let _ = writeln!(
        out,
        "{:<12} {:>8} {:>10} {:>16} {:>10} {:>16} {:>10}",
        method,
        overall.map_or(0, |a| a.count),
        cell(overall.map(|a| a.ade)),
        cell(filtered.map(|a| a.ade)),
        cell(overall.map(|a| a.fde)),
        cell(filtered.map(|a| a.fde)),
        filtered.map_or(0, |a| a.count),
    );

    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<12} {:>8} {:>10} {:>10}",
        "PCI bin (m)", "samples", "ADE (m)", "FDE (m)"
    );
    for b in &report.bins {
        let _ = writeln!(
            out,
            "{:<12} {:>8} {:>10} {:>10}",
            b.label,
            b.count,
            cell(b.ade),
            cell(b.fde)
        );
    }

    if let Some(a) = overall.filter(|a| !a.fde_at.is_empty()) {
        let _ = writeln!(out);
        let _ = write!(out, "{:<12}", "horizon");
        for h in a.fde_at.keys() {
            let _ = write!(out, " {:>9}", format!("FDE@{h}s"));
        }
        let _ = writeln!(out);
        for (label, agg) in [("all", Some(a)), ("filtered", filtered)] {
            let _ = write!(out, "{label:<12}");
            for h in a.fde_at.keys() {
                let _ = write!(
                    out,
                    " {:>9}",
                    cell(agg.and_then(|g| g.fde_at.get(h).copied()))
                );
            }
            let _ = writeln!(out);
        }
    }
    out
}
