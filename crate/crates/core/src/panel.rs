//! The all-pairs pipeline: detrend, band-pass, analytic phase, pairwise
//! windowed synchronization and the share of pairs above a threshold.

use rayon::prelude::*;

use crate::analytic::{analytic_signal, DEFAULT_AMPLITUDE_FLOOR};
use crate::calendar::{RecessionCalendar, Regime, YearMonth};
use crate::data::{periods_of_band, FilterBand, Panel, PeriodRange};
use crate::error::{Error, Result};
use crate::spectral::{bandpass, detrend_linear, trim_edges, trim_margin};
use crate::sync::{phase_difference, sync_index_windowed, SyncSeries, Window};

/// Thresholds reported when none are given.
pub const DEFAULT_THRESHOLDS: [f64; 2] = [0.7, 0.8];

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub band: FilterBand,
    pub window: Window,
    /// Sorted, each in `[0, 1]`.
    pub thresholds: Vec<f64>,
    pub detrend: bool,
    pub trim: bool,
    /// Relative amplitude floor, see [`analytic_signal`].
    pub amplitude_floor: f64,
}

impl PipelineConfig {
    /// Detrending and trimming on, thresholds 0.7 and 0.8.
    pub fn new(band: FilterBand, window: Window) -> Self {
        Self {
            band,
            window,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            detrend: true,
            trim: true,
            amplitude_floor: DEFAULT_AMPLITUDE_FLOOR,
        }
    }

    /// Sorts and deduplicates; rejects an empty list and values outside `[0, 1]`.
    pub fn with_thresholds(mut self, thresholds: &[f64]) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidThresholds("empty".into()));
        }
        let mut t = thresholds.to_vec();
        if let Some(bad) = t.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidThresholds(format!("{bad} outside [0, 1]")));
        }
        t.sort_by(|a, b| a.total_cmp(b));
        t.dedup();
        self.thresholds = t;
        Ok(self)
    }

    pub fn with_detrend(mut self, on: bool) -> Self {
        self.detrend = on;
        self
    }

    pub fn with_trim(mut self, on: bool) -> Self {
        self.trim = on;
        self
    }

    pub fn with_amplitude_floor(mut self, floor: f64) -> Self {
        self.amplitude_floor = floor;
        self
    }

    /// Points removed from each end for a record of `len` months.
    pub fn trim_offset(&self, len: usize) -> usize {
        if self.trim {
            trim_margin(len, self.band)
        } else {
            0
        }
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        self.band.check(len)?;
        if self.thresholds.is_empty() {
            return Err(Error::InvalidThresholds("empty".into()));
        }
        if self.thresholds.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::InvalidThresholds("values must lie in [0, 1]".into()));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidThresholds("must be strictly increasing".into()));
        }
        if !(self.amplitude_floor >= 0.0 && self.amplitude_floor < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "amplitude floor {} outside [0, 1)",
                self.amplitude_floor
            )));
        }
        let kept = len.saturating_sub(2 * self.trim_offset(len));
        if kept < self.window.len() {
            return Err(Error::TooShort {
                needed: self.window.len() + 2 * self.trim_offset(len),
                got: len,
            });
        }
        Ok(())
    }
}

/// Windowed index for one unordered pair, `left < right` lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSync {
    pub left: String,
    pub right: String,
    pub sync: SyncSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries {
    pub threshold: f64,
    pub values: Vec<f64>,
}

/// Run metadata needed to place outputs on the calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub config: PipelineConfig,
    pub start: YearMonth,
    pub input_len: usize,
    pub members: usize,
    pub periods: PeriodRange,
    /// Points dropped from each end before pairing.
    pub trim_offset: usize,
    /// 0-based index into the input record of the first output value.
    pub first_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncResult {
    pairs: Vec<PairSync>,
    ratios: Vec<RatioSeries>,
    meta: RunMeta,
}

impl SyncResult {
    pub fn pairs(&self) -> &[PairSync] {
        &self.pairs
    }

    pub fn ratios(&self) -> &[RatioSeries] {
        &self.ratios
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }

    /// Number of output time points.
    pub fn len(&self) -> usize {
        self.pairs.first().map_or(0, |p| p.sync.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 1-based position in the input record of output `j`.
    pub fn t_at(&self, j: usize) -> usize {
        self.meta.first_index + j + 1
    }

    pub fn date_at(&self, j: usize) -> YearMonth {
        self.meta.start.offset((self.meta.first_index + j) as i64)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&PairSync> {
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        self.pairs.iter().find(|p| p.left == l && p.right == r)
    }

    pub fn ratio(&self, threshold: f64) -> Option<&RatioSeries> {
        self.ratios.iter().find(|r| r.threshold == threshold)
    }
}

/// Instantaneous phases of every member, keyed by id and sorted by id, after
/// the optional edge trim.
pub fn member_phases(panel: &Panel, config: &PipelineConfig) -> Result<Vec<(String, Vec<f64>)>> {
    let mut members: Vec<_> = panel.series().iter().collect();
    members.sort_by(|a, b| a.id().cmp(b.id()));
    members
        .par_iter()
        .map(|s| {
            let phase = (|| {
                let detrended;
                let input = if config.detrend {
                    detrended = detrend_linear(s.values())?;
                    &detrended[..]
                } else {
                    s.values()
                };
                let filtered = bandpass(input, config.band)?;
                let phase = analytic_signal(&filtered, config.amplitude_floor)?.into_phase();
                if config.trim {
                    Ok(trim_edges(&phase, config.band)?.0)
                } else {
                    Ok(phase)
                }
            })()
            .map_err(|e: Error| e.in_series(s.id()))?;
            Ok((s.id().to_string(), phase))
        })
        .collect()
}

pub fn run_pipeline(panel: &Panel, config: &PipelineConfig) -> Result<SyncResult> {
    if panel.members() < 2 {
        return Err(Error::InvalidPanel(format!(
            "need ≥ 2 series, got {}",
            panel.members()
        )));
    }
    let len = panel.len();
    config.validate(len)?;

    let phases = member_phases(panel, config)?;
    let index_pairs: Vec<(usize, usize)> = (0..phases.len())
        .flat_map(|i| (i + 1..phases.len()).map(move |j| (i, j)))
        .collect();
    let pairs = index_pairs
        .par_iter()
        .map(|&(i, j)| {
            let (left, pl) = &phases[i];
            let (right, pr) = &phases[j];
            let sync = phase_difference(pl, pr)
                .and_then(|psi| sync_index_windowed(&psi, config.window))
                .map_err(|e| e.in_pair(left, right))?;
            Ok(PairSync {
                left: left.clone(),
                right: right.clone(),
                sync,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let series: Vec<&SyncSeries> = pairs.iter().map(|p| &p.sync).collect();
    let ratios = config
        .thresholds
        .iter()
        .map(|&r| {
            Ok(RatioSeries {
                threshold: r,
                values: ratio_above(&series, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let trim_offset = config.trim_offset(len);
    Ok(SyncResult {
        meta: RunMeta {
            config: config.clone(),
            start: panel.start(),
            input_len: len,
            members: panel.members(),
            periods: periods_of_band(len, config.band)?,
            trim_offset,
            first_index: trim_offset + config.window.half(),
        },
        pairs,
        ratios,
    })
}

/// Share of pairs with `gamma^2_t >= threshold` at each t.
pub fn ratio_above<S: std::borrow::Borrow<SyncSeries>>(pairs: &[S], threshold: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThresholds(format!("{threshold} outside [0, 1]")));
    }
    let first = pairs
        .first()
        .ok_or_else(|| Error::Misaligned("no pair series".into()))?
        .borrow();
    for (i, p) in pairs.iter().enumerate() {
        let p = p.borrow();
        if p.len() != first.len()
            || p.source_len() != first.source_len()
            || p.window() != first.window()
        {
            return Err(Error::Misaligned(format!(
                "series {i} covers {:?} of {} (W={}) but series 0 covers {:?} of {} (W={})",
                p.valid_range(),
                p.source_len(),
                p.window().len(),
                first.valid_range(),
                first.source_len(),
                first.window().len()
            )));
        }
    }
    let total = pairs.len() as f64;
    Ok((0..first.len())
        .map(|t| {
            let above = pairs
                .iter()
                .filter(|p| p.borrow().gamma2()[t] >= threshold)
                .count();
            above as f64 / total
        })
        .collect())
}

/// Maps a 0..100 diffusion index onto `[-1, 1]` via `(x - 50) / 50`.
pub fn normalize_di(series: &[f64]) -> Result<Vec<f64>> {
    series
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            if (0.0..=100.0).contains(&x) {
                Ok((x - 50.0) / 50.0)
            } else {
                Err(Error::OutOfRange {
                    index,
                    value: x,
                    lo: 0.0,
                    hi: 100.0,
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeRow {
    pub t: usize,
    pub date: YearMonth,
    pub regime: Regime,
}

/// Mean `R_t` over the points of one regime.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeMean {
    pub threshold: f64,
    pub regime: Regime,
    pub count: usize,
    /// `None` when the regime has no points in range.
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeTable {
    pub rows: Vec<RegimeRow>,
    pub summary: Vec<RegimeMean>,
}

impl RegimeTable {
    pub fn mean(&self, threshold: f64, regime: Regime) -> Option<f64> {
        self.summary
            .iter()
            .find(|m| m.threshold == threshold && m.regime == regime)
            .and_then(|m| m.mean)
    }
}

/// Labels every output month and averages each ratio series by regime.
pub fn annotate_recessions(result: &SyncResult, calendar: &RecessionCalendar) -> Result<RegimeTable> {
    let n = result.len();
    if n == 0 {
        return Err(Error::Misaligned("empty result".into()));
    }
    let (first, last) = (result.date_at(0), result.date_at(n - 1));
    let (cal_first, cal_last) = calendar.span();
    if last < cal_first || first > cal_last {
        return Err(Error::DisjointCalendar { first, last });
    }
    let rows: Vec<RegimeRow> = (0..n)
        .map(|j| {
            let date = result.date_at(j);
            RegimeRow {
                t: result.t_at(j),
                date,
                regime: calendar.regime_at(date),
            }
        })
        .collect();
    let mut summary = Vec::new();
    for ratio in result.ratios() {
        for regime in [Regime::Contraction, Regime::Expansion] {
            let vals: Vec<f64> = rows
                .iter()
                .zip(&ratio.values)
                .filter(|(row, _)| row.regime == regime)
                .map(|(_, &v)| v)
                .collect();
            summary.push(RegimeMean {
                threshold: ratio.threshold,
                regime,
                count: vals.len(),
                mean: (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64),
            });
        }
    }
    Ok(RegimeTable { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sync::PhaseDifferenceSeries;

    fn all_synced(len: usize) -> SyncSeries {
        let w = Window::new(3).unwrap();
        sync_index_windowed(&PhaseDifferenceSeries::new(vec![0.0; len + 2]), w).unwrap()
    }

    #[test]
    fn ratio_examples() {
        let ones = vec![all_synced(5); 4];
        assert!(ratio_above(&ones, 0.8).unwrap().iter().all(|&r| r == 1.0));

        // build series with prescribed values at a single time point
        let w = Window::new(3).unwrap();
        let with_gamma = |target: f64| {
            // three phases 0, a, -a give gamma^2 = ((1 + 2 cos a)/3)^2
            let c = (3.0 * target.sqrt() - 1.0) / 2.0;
            let a = c.clamp(-1.0, 1.0).acos();
            sync_index_windowed(&PhaseDifferenceSeries::new(vec![a, 0.0, -a]), w).unwrap()
        };
        let halves = vec![with_gamma(0.5); 3];
        assert!((halves[0].gamma2()[0] - 0.5).abs() < 1e-12);
        assert_eq!(ratio_above(&halves, 0.7).unwrap(), vec![0.0]);

        let mixed = vec![with_gamma(0.9), with_gamma(0.75), with_gamma(0.2)];
        let r = ratio_above(&mixed, 0.7).unwrap();
        assert!((r[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_is_inclusive() {
        let s = all_synced(3);
        assert_eq!(ratio_above(&[s], 1.0).unwrap(), vec![1.0; 3]);
    }

    #[test]
    fn ratio_rejects_misaligned() {
        let a = all_synced(5);
        let b = all_synced(6);
        assert!(matches!(ratio_above(&[a, b], 0.5), Err(Error::Misaligned(_))));
        let none: Vec<SyncSeries> = vec![];
        assert!(ratio_above(&none, 0.5).is_err());
    }

    #[test]
    fn di_normalization() {
        assert_eq!(normalize_di(&[50.0, 100.0, 0.0, 75.0]).unwrap(), vec![0.0, 1.0, -1.0, 0.5]);
        assert!(matches!(
            normalize_di(&[10.0, 100.5]),
            Err(Error::OutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn thresholds_are_normalized() {
        let cfg = PipelineConfig::new(FilterBand::new(2, 5).unwrap(), Window::new(5).unwrap())
            .with_thresholds(&[0.8, 0.7, 0.8])
            .unwrap();
        assert_eq!(cfg.thresholds, vec![0.7, 0.8]);
        assert!(cfg.clone().with_thresholds(&[1.2]).is_err());
        let mut bad = cfg;
        bad.thresholds = vec![0.8, 0.7];
        assert!(bad.validate(100).is_err());
    }
}
