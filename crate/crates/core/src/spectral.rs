//! Real Fourier series of a finite record, band-pass partial sums, linear
//! detrending and edge trimming.
//!
//! A record `x_0..x_{N-1}` is treated as one period of a periodic function and
//! expanded as
//!
//! ```text
//! x_n = a_0/2 + sum_{k=1}^{floor(N/2)} a_k cos(2 pi k n / N) + b_k sin(2 pi k n / N)
//! ```
//!
//! with `a_k = (2/N) sum x_n cos(2 pi k n / N)` and `b_k = (2/N) sum x_n sin(..)`.
//! For even N the Nyquist coefficient `a_{N/2}` uses `1/N` and `b_{N/2} = 0`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::data::{round_half_up, FilterBand};
use crate::error::{Error, Result};

/// Cosine and sine coefficients of a real record.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    a: Vec<f64>,
    // b[0] is always zero; a and b share indexing.
    b: Vec<f64>,
    len: usize,
}

impl FourierCoefficients {
    /// `a_0 ..= a_{floor(N/2)}`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `b_0 ..= b_{floor(N/2)}`, with `b_0 = 0`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Highest harmonic, `floor(N/2)`.
    pub fn max_harmonic(&self) -> usize {
        self.len / 2
    }

    /// Partial sum over harmonics `band.lower() ..= band.upper()`.
    pub fn partial_sum(&self, band: FilterBand) -> Result<Vec<f64>> {
        band.check(self.len)?;
        let n = self.len;
        let mut spec = vec![Complex::new(0.0, 0.0); n];
        for k in band.lower()..=band.upper() {
            if 2 * k == n {
                spec[k] = Complex::new(self.a[k] * n as f64, 0.0);
            } else {
                let c = Complex::new(self.a[k], -self.b[k]) * (n as f64 / 2.0);
                spec[k] = c;
                spec[n - k] = c.conj();
            }
        }
        Ok(inverse_real(spec))
    }

    /// Mean term plus all harmonics; reproduces the source record.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = if self.len >= 2 {
            self.partial_sum(FilterBand::new(1, self.max_harmonic()).expect("N >= 2"))
                .expect("full band is valid")
        } else {
            vec![0.0; self.len]
        };
        let mean = self.a[0] / 2.0;
        out.iter_mut().for_each(|v| *v += mean);
        out
    }
}

fn forward(series: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn inverse_real(mut spec: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spec.len();
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec);
    spec.into_iter().map(|c| c.re / n as f64).collect()
}

fn check_len(series: &[f64]) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: series.len(),
        });
    }
    Ok(())
}

pub fn fourier_analyze(series: &[f64]) -> Result<FourierCoefficients> {
    check_len(series)?;
    let n = series.len();
    let spec = forward(series);
    let half = n / 2;
    let scale = 2.0 / n as f64;
    let mut a = Vec::with_capacity(half + 1);
    let mut b = Vec::with_capacity(half + 1);
    for (k, x) in spec.iter().enumerate().take(half + 1) {
        if k > 0 && 2 * k == n {
            a.push(x.re / n as f64);
            b.push(0.0);
        } else {
            a.push(scale * x.re);
            b.push(if k == 0 { 0.0 } else { -scale * x.im });
        }
    }
    Ok(FourierCoefficients { a, b, len: n })
}

/// Keeps only the harmonics in `band`. The output has zero mean.
pub fn bandpass(series: &[f64], band: FilterBand) -> Result<Vec<f64>> {
    check_len(series)?;
    band.check(series.len())?;
    fourier_analyze(series)?.partial_sum(band)
}

/// Removes the least-squares line fitted against the index `0..N`.
pub fn detrend_linear(series: &[f64]) -> Result<Vec<f64>> {
    check_len(series)?;
    let n = series.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let y_mean = series.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in series.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (y - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    Ok(series
        .iter()
        .enumerate()
        .map(|(i, &y)| y - y_mean - slope * (i as f64 - t_mean))
        .collect())
}

/// Number of points dropped from each end: the period of the band's highest
/// harmonic, `round(N / k_u)`.
pub fn trim_margin(len: usize, band: FilterBand) -> usize {
    round_half_up(len as f64 / band.upper() as f64)
}

/// Drops [`trim_margin`] points from each end; returns the kept slice and the
/// offset of its first element.
pub fn trim_edges<T: Clone>(series: &[T], band: FilterBand) -> Result<(Vec<T>, usize)> {
    let n = series.len();
    let m = trim_margin(n, band);
    if n <= 2 * m {
        return Err(Error::TooShort {
            needed: 2 * m + 1,
            got: n,
        });
    }
    Ok((series[m..n - m].to_vec(), m))
}

/// Samples of `cos(2 pi k n / N)` on `n = 0..N`.
pub fn grid_cosine(len: usize, k: f64) -> Vec<f64> {
    (0..len)
        .map(|n| (2.0 * PI * k * n as f64 / len as f64).cos())
        .collect()
}

/// Samples of `sin(2 pi k n / N)` on `n = 0..N`.
pub fn grid_sine(len: usize, k: f64) -> Vec<f64> {
    (0..len)
        .map(|n| (2.0 * PI * k * n as f64 / len as f64).sin())
        .collect()
}
