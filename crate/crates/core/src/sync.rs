//! Phase differences and the synchronization index
//!
//! ```text
//! gamma^2 = ((1/W) sum cos psi_i)^2 + ((1/W) sum sin psi_i)^2
//! ```
//!
//! evaluated over a whole record or over a centered moving window of odd
//! length `W`. Under i.i.d. uniform phase differences its expectation is
//! `1/W`.

use std::ops::Range;

use crate::error::{Error, Result};

/// Odd moving-window length, at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window(usize);

impl Window {
    /// Preset for ~500-month records whose shortest cycle is ~28 months.
    pub const US: Window = Window(13);
    /// Preset for ~500-month records whose shortest cycle is ~36 months.
    pub const JAPAN: Window = Window(17);

    pub fn new(w: usize) -> Result<Self> {
        if w < 3 || w.is_multiple_of(2) {
            return Err(Error::InvalidWindow(w));
        }
        Ok(Self(w))
    }

    pub fn len(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// `p = (W - 1) / 2`.
    pub fn half(self) -> usize {
        (self.0 - 1) / 2
    }
}

/// `psi_i = phi1_i - phi2_i`, left unwrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDifferenceSeries(Vec<f64>);

impl PhaseDifferenceSeries {
    pub fn new(psi: Vec<f64>) -> Self {
        Self(psi)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn phase_difference(phi1: &[f64], phi2: &[f64]) -> Result<PhaseDifferenceSeries> {
    if phi1.len() != phi2.len() {
        return Err(Error::LengthMismatch {
            left: phi1.len(),
            right: phi2.len(),
        });
    }
    Ok(PhaseDifferenceSeries(
        phi1.iter().zip(phi2).map(|(a, b)| a - b).collect(),
    ))
}

fn resultant_sq(sum_cos: f64, sum_sin: f64, count: f64) -> f64 {
    let c = sum_cos / count;
    let s = sum_sin / count;
    (c * c + s * s).min(1.0)
}

/// Index over the whole record.
pub fn sync_index_full(psi: &PhaseDifferenceSeries) -> Result<f64> {
    if psi.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let (c, s) = psi
        .values()
        .iter()
        .fold((0.0, 0.0), |(c, s), p| (c + p.cos(), s + p.sin()));
    Ok(resultant_sq(c, s, psi.len() as f64))
}

/// Windowed index; `gamma2()[j]` belongs to the window centered at input
/// index `offset() + j` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SyncSeries {
    gamma2: Vec<f64>,
    window: Window,
    source_len: usize,
}

impl SyncSeries {
    pub fn gamma2(&self) -> &[f64] {
        &self.gamma2
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Length of the phase-difference record the index was computed from.
    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Input index of the first window center, `p`.
    pub fn offset(&self) -> usize {
        self.window.half()
    }

    /// Input indices (0-based) that carry a value: `p .. N - p`.
    pub fn valid_range(&self) -> Range<usize> {
        self.offset()..self.source_len - self.offset()
    }

    pub fn len(&self) -> usize {
        self.gamma2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma2.is_empty()
    }
}

const RESUM_EVERY: usize = 512;

/// Centered moving evaluation in O(N) using running sums of `cos psi` and
/// `sin psi`.
pub fn sync_index_windowed(psi: &PhaseDifferenceSeries, window: Window) -> Result<SyncSeries> {
    let n = psi.len();
    let w = window.len();
    if w > n {
        return Err(Error::TooShort { needed: w, got: n });
    }
    let (cos, sin): (Vec<f64>, Vec<f64>) = psi.values().iter().map(|p| (p.cos(), p.sin())).unzip();
    let mut sum_c: f64 = cos[..w].iter().sum();
    let mut sum_s: f64 = sin[..w].iter().sum();
    let count = w as f64;
    let mut gamma2 = Vec::with_capacity(n - w + 1);
    gamma2.push(resultant_sq(sum_c, sum_s, count));
    for i in w..n {
        let lo = i + 1 - w;
        if lo.is_multiple_of(RESUM_EVERY) {
            // bound rounding drift of the running sums
            sum_c = cos[lo..=i].iter().sum();
            sum_s = sin[lo..=i].iter().sum();
        } else {
            sum_c += cos[i] - cos[i - w];
            sum_s += sin[i] - sin[i - w];
        }
        gamma2.push(resultant_sq(sum_c, sum_s, count));
    }
    Ok(SyncSeries {
        gamma2,
        window,
        source_len: n,
    })
}
