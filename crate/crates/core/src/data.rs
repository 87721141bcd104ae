//! Panel data types and cutoff/period arithmetic.

use std::collections::HashSet;

use crate::calendar::YearMonth;
use crate::error::{Error, Result};

/// Rounds halves away from zero for positive inputs (`2.5 -> 3`).
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// One region's monthly series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    start: YearMonth,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, start: YearMonth, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if values.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: values.len(),
            }
            .in_series(&id));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i).in_series(&id));
        }
        Ok(Self { id, start, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Month of the `n`-th (0-based) observation.
    pub fn date_at(&self, n: usize) -> YearMonth {
        self.start.offset(n as i64)
    }

    /// Same id and calendar with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                left: self.values.len(),
                right: values.len(),
            });
        }
        Self::new(self.id.clone(), self.start, values)
    }
}

/// Series sharing one monthly calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    series: Vec<TimeSeries>,
}

impl Panel {
    pub fn new(series: Vec<TimeSeries>) -> Result<Self> {
        let first = series
            .first()
            .ok_or_else(|| Error::InvalidPanel("panel has no series".into()))?;
        let (start, len) = (first.start(), first.len());
        let mut seen = HashSet::new();
        for s in &series {
            if s.start() != start || s.len() != len {
                return Err(Error::InvalidPanel(format!(
                    "series '{}' spans {}+{} but panel spans {}+{}",
                    s.id(),
                    s.start(),
                    s.len(),
                    start,
                    len
                )));
            }
            if !seen.insert(s.id()) {
                return Err(Error::InvalidPanel(format!("duplicate id '{}'", s.id())));
            }
        }
        Ok(Self { series })
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn start(&self) -> YearMonth {
        self.series[0].start()
    }

    /// Number of months.
    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> usize {
        self.series.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.series.iter().map(|s| s.id())
    }

    pub fn get(&self, id: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|s| s.id() == id)
    }

    /// Applies `f` to every member's values, keeping ids and calendar.
    pub fn map_values<F>(&self, mut f: F) -> Result<Panel>
    where
        F: FnMut(&TimeSeries) -> Result<Vec<f64>>,
    {
        let series = self
            .series
            .iter()
            .map(|s| {
                let v = f(s).map_err(|e| e.in_series(s.id()))?;
                s.with_values(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Panel::new(series)
    }
}

/// Integer Fourier cutoffs `[lower, upper]`, in cycles per record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterBand {
    lower: usize,
    upper: usize,
}

impl FilterBand {
    /// A band with `1 <= lower <= upper`. The upper limit depends on N and is
    /// checked by [`FilterBand::check`].
    pub fn new(lower: usize, upper: usize) -> Result<Self> {
        if lower == 0 || lower > upper {
            return Err(Error::InvalidCutoffs { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Verifies `upper <= floor(len / 2)`.
    pub fn check(&self, len: usize) -> Result<()> {
        if self.lower == 0 || self.lower > self.upper || self.upper > len / 2 {
            return Err(Error::InvalidBand {
                lower: self.lower,
                upper: self.upper,
                len,
            });
        }
        Ok(())
    }

    pub fn contains(&self, k: usize) -> bool {
        (self.lower..=self.upper).contains(&k)
    }
}

/// Shortest and longest periods (in months) passed by a band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRange {
    pub shortest: f64,
    pub longest: f64,
}

impl PeriodRange {
    /// Periods rounded half-up to whole months.
    pub fn rounded(&self) -> (usize, usize) {
        (round_half_up(self.shortest), round_half_up(self.longest))
    }
}

/// `(N / k_u, N / k_l)`.
pub fn periods_of_band(len: usize, band: FilterBand) -> Result<PeriodRange> {
    band.check(len)?;
    Ok(PeriodRange {
        shortest: len as f64 / band.upper() as f64,
        longest: len as f64 / band.lower() as f64,
    })
}

/// Inverse of [`periods_of_band`]: cutoffs are `N / period` rounded half-up
/// and clamped to `[1, floor(N/2)]`.
pub fn band_from_periods(len: usize, longest: f64, shortest: f64) -> Result<FilterBand> {
    let bad = || Error::InvalidPeriods {
        longest,
        shortest,
        len,
    };
    if !(shortest.is_finite() && longest.is_finite())
        || shortest < 2.0
        || shortest > longest
        || longest > len as f64
    {
        return Err(bad());
    }
    let max = (len / 2).max(1);
    let n = len as f64;
    let lower = round_half_up(n / longest).clamp(1, max);
    let upper = round_half_up(n / shortest).clamp(1, max);
    if lower > upper {
        return Err(bad());
    }
    let band = FilterBand::new(lower, upper)?;
    band.check(len)?;
    Ok(band)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start() -> YearMonth {
        YearMonth::new(1979, 4).unwrap()
    }

    #[test]
    fn periods_for_us_and_japan_bands() {
        let us = periods_of_band(505, FilterBand::new(4, 18).unwrap()).unwrap();
        assert!((us.shortest - 28.055_555_555_6).abs() < 1e-9);
        assert!((us.longest - 126.25).abs() < 1e-12);
        assert_eq!(us.rounded(), (28, 126));

        let jp = periods_of_band(488, FilterBand::new(6, 14).unwrap()).unwrap();
        assert!((jp.shortest - 34.857_142_857_1).abs() < 1e-9);
        assert!((jp.longest - 81.333_333_333_3).abs() < 1e-9);
        assert_eq!(jp.rounded(), (35, 81));

        let edge = periods_of_band(100, FilterBand::new(1, 50).unwrap()).unwrap();
        assert_eq!((edge.shortest, edge.longest), (2.0, 100.0));
    }

    #[test]
    fn bands_from_periods() {
        let b = band_from_periods(505, 126.0, 28.0).unwrap();
        assert_eq!((b.lower(), b.upper()), (4, 18));
        let b = band_from_periods(488, 81.0, 35.0).unwrap();
        assert_eq!((b.lower(), b.upper()), (6, 14));
        let b = band_from_periods(100, 100.0, 2.0).unwrap();
        assert_eq!((b.lower(), b.upper()), (1, 50));
    }

    #[test]
    fn round_trip_on_reference_bands() {
        for (n, kl, ku) in [(505, 4, 18), (488, 6, 14), (505, 5, 17), (505, 3, 19), (488, 7, 13)] {
            let band = FilterBand::new(kl, ku).unwrap();
            let p = periods_of_band(n, band).unwrap();
            assert_eq!(band_from_periods(n, p.longest, p.shortest).unwrap(), band);
        }
    }

    #[test]
    fn invalid_bands_and_periods() {
        assert!(FilterBand::new(0, 3).is_err());
        assert!(FilterBand::new(5, 3).is_err());
        assert!(periods_of_band(20, FilterBand::new(2, 11).unwrap()).is_err());
        assert!(band_from_periods(100, 10.0, 20.0).is_err());
        assert!(band_from_periods(100, 200.0, 20.0).is_err());
        assert!(band_from_periods(100, 50.0, 1.5).is_err());
    }

    #[test]
    fn round_half_up_ties() {
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(round_half_up(2.4999), 2);
        assert_eq!(round_half_up(505.0 / 18.0), 28);
        assert_eq!(round_half_up(488.0 / 14.0), 35);
    }

    #[test]
    fn panel_invariants() {
        let a = TimeSeries::new("a", start(), vec![1.0, 2.0, 3.0]).unwrap();
        let b = TimeSeries::new("b", start(), vec![1.0, 2.0, 3.0]).unwrap();
        let short = TimeSeries::new("c", start(), vec![1.0, 2.0]).unwrap();
        let late = TimeSeries::new("d", start().succ(), vec![1.0, 2.0, 3.0]).unwrap();
        assert!(Panel::new(vec![a.clone(), b.clone()]).is_ok());
        assert!(Panel::new(vec![a.clone(), a.clone()]).is_err());
        assert!(Panel::new(vec![a.clone(), short]).is_err());
        assert!(Panel::new(vec![a, late]).is_err());
        assert!(Panel::new(vec![]).is_err());
        assert!(TimeSeries::new("x", start(), vec![1.0]).is_err());
        assert!(TimeSeries::new("x", start(), vec![1.0, f64::NAN]).is_err());
    }
}
