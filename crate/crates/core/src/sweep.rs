//! Robustness sweeps over window lengths or filter bands.

use std::fmt;
use std::str::FromStr;

use crate::data::{FilterBand, Panel};
use crate::error::{Error, Result};
use crate::panel::{run_pipeline, PipelineConfig, SyncResult};
use crate::sync::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSetting {
    Window(Window),
    Band(FilterBand),
}

impl SweepSetting {
    /// Short label used in file names: `W13` or `k4-18`.
    pub fn label(&self) -> String {
        match self {
            SweepSetting::Window(w) => format!("W{}", w.len()),
            SweepSetting::Band(b) => format!("k{}-{}", b.lower(), b.upper()),
        }
    }

    pub fn apply(&self, base: &PipelineConfig) -> PipelineConfig {
        let mut cfg = base.clone();
        match *self {
            SweepSetting::Window(w) => cfg.window = w,
            SweepSetting::Band(b) => cfg.band = b,
        }
        cfg
    }
}

impl fmt::Display for SweepSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `11,13,15`.
pub fn parse_windows(s: &str) -> Result<Vec<SweepSetting>> {
    s.split(',')
        .map(|w| {
            let w: usize = w
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad window '{w}'")))?;
            Ok(SweepSetting::Window(Window::new(w)?))
        })
        .collect()
}

/// Parses `5:17,4:18,3:19`.
pub fn parse_bands(s: &str) -> Result<Vec<SweepSetting>> {
    s.split(',')
        .map(|b| {
            let bad = || Error::InvalidSpec(format!("bad band '{b}', expected <k_l>:<k_u>"));
            let (l, u) = b.trim().split_once(':').ok_or_else(bad)?;
            let l = l.parse().map_err(|_| bad())?;
            let u = u.parse().map_err(|_| bad())?;
            Ok(SweepSetting::Band(FilterBand::new(l, u)?))
        })
        .collect()
}

impl FromStr for SweepSetting {
    type Err = Error;

    /// `W13` or `13` for a window, `4:18` for a band.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains(':') {
            Ok(parse_bands(s)?.remove(0))
        } else {
            Ok(parse_windows(s.trim_start_matches('W'))?.remove(0))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub setting: SweepSetting,
    pub result: SyncResult,
}

pub fn run_sweep(panel: &Panel, base: &PipelineConfig, settings: &[SweepSetting]) -> Result<Vec<SweepRun>> {
    settings
        .iter()
        .map(|s| {
            Ok(SweepRun {
                setting: *s,
                result: run_pipeline(panel, &s.apply(base))?,
            })
        })
        .collect()
}

/// Pearson correlation; `None` for fewer than two points or zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let (x, y) = (&x[..n], &y[..n]);
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Correlation of one threshold's ratio series between two settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Stability {
    pub a: String,
    pub b: String,
    pub threshold: f64,
    /// Number of shared time points.
    pub common: usize,
    pub correlation: Option<f64>,
}

/// Restricts two results' ratio series for `threshold` to their common
/// t range.
pub fn common_support(a: &SyncResult, b: &SyncResult, threshold: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let ra = a.ratio(threshold)?;
    let rb = b.ratio(threshold)?;
    let (a0, b0) = (a.meta().first_index, b.meta().first_index);
    let lo = a0.max(b0);
    let hi = (a0 + ra.values.len()).min(b0 + rb.values.len());
    if hi <= lo {
        return Some((vec![], vec![]));
    }
    Some((
        ra.values[lo - a0..hi - a0].to_vec(),
        rb.values[lo - b0..hi - b0].to_vec(),
    ))
}

/// Pairwise correlations between every two runs, for every threshold of the
/// first run.
pub fn stability_report(runs: &[SweepRun]) -> Vec<Stability> {
    let Some(first) = runs.first() else {
        return vec![];
    };
    let mut out = Vec::new();
    for ratio in first.result.ratios() {
        let r = ratio.threshold;
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                if let Some((x, y)) = common_support(&runs[i].result, &runs[j].result, r) {
                    out.push(Stability {
                        a: runs[i].setting.label(),
                        b: runs[j].setting.label(),
                        threshold: r,
                        common: x.len(),
                        correlation: pearson(&x, &y),
                    });
                }
            }
        }
    }
    out
}
