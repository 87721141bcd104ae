//! Analytic signal `s_t + i s^H_t`, instantaneous amplitude and phase.
//!
//! The Hilbert transform is applied in the frequency domain: every harmonic
//! `a_k cos(theta) + b_k sin(theta)` becomes `a_k sin(theta) - b_k cos(theta)`,
//! a shift of `-pi/2`. The mean and, for even N, the Nyquist harmonic map to
//! zero. Exact for a band-passed record.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Relative amplitude floor used when none is configured.
pub const DEFAULT_AMPLITUDE_FLOOR: f64 = 1e-12;

pub fn hilbert(series: &[f64]) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);

    buf[0] = Complex::new(0.0, 0.0);
    for (k, c) in buf.iter_mut().enumerate().skip(1) {
        *c = if 2 * k == n {
            Complex::new(0.0, 0.0)
        } else if 2 * k < n {
            // multiply by -i
            Complex::new(c.im, -c.re)
        } else {
            // multiply by +i
            Complex::new(-c.im, c.re)
        };
    }

    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.into_iter().map(|c| c.re / n as f64).collect())
}

/// Angle of `(re, im)` in `[-pi, pi)`.
pub fn phase_angle(re: f64, im: f64) -> f64 {
    let phi = im.atan2(re);
    if phi >= PI {
        phi - 2.0 * PI
    } else {
        phi
    }
}

/// Per-time real part, Hilbert image, amplitude and phase.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSeries {
    signal: Vec<f64>,
    hilbert: Vec<f64>,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
}

impl AnalyticSeries {
    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn hilbert(&self) -> &[f64] {
        &self.hilbert
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Instantaneous phase in `[-pi, pi)`.
    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }

    pub fn into_phase(self) -> Vec<f64> {
        self.phase
    }
}

/// Builds the analytic signal of `series`.
///
/// `relative_floor` scales the largest amplitude in the record; any point
/// whose amplitude falls below `relative_floor * max(A)` has no meaningful
/// phase and is reported as [`Error::DegeneratePhase`]. An all-zero record is
/// degenerate at `t = 0`.
pub fn analytic_signal(series: &[f64], relative_floor: f64) -> Result<AnalyticSeries> {
    let hilbert = hilbert(series)?;
    let amplitude: Vec<f64> = series
        .iter()
        .zip(&hilbert)
        .map(|(s, h)| s.hypot(*h))
        .collect();
    let max = amplitude.iter().cloned().fold(0.0, f64::max);
    let floor = relative_floor * max;
    if max == 0.0 {
        return Err(Error::DegeneratePhase {
            t: 0,
            amplitude: 0.0,
            floor,
        });
    }
    if let Some(t) = amplitude.iter().position(|&a| a < floor) {
        return Err(Error::DegeneratePhase {
            t,
            amplitude: amplitude[t],
            floor,
        });
    }
    let phase = series
        .iter()
        .zip(&hilbert)
        .map(|(&s, &h)| phase_angle(s, h))
        .collect();
    Ok(AnalyticSeries {
        signal: series.to_vec(),
        hilbert,
        amplitude,
        phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{grid_cosine, grid_sine};

    fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn cosine_maps_to_sine() {
        for &(n, k) in &[(64, 3.0), (100, 5.0), (505, 18.0), (487, 7.0)] {
            let h = hilbert(&grid_cosine(n, k)).unwrap();
            assert!(max_abs_diff(&h, &grid_sine(n, k)) < 1e-10);
        }
    }

    #[test]
    fn sine_maps_to_negative_cosine() {
        let h = hilbert(&grid_sine(128, 7.0)).unwrap();
        let want: Vec<f64> = grid_cosine(128, 7.0).iter().map(|v| -v).collect();
        assert!(max_abs_diff(&h, &want) < 1e-10);
    }

    #[test]
    fn zeros_map_to_zeros() {
        assert!(hilbert(&[0.0; 10]).unwrap().iter().all(|&v| v == 0.0));
        assert!(hilbert(&[1.0]).is_err());
    }

    #[test]
    fn nyquist_mode_maps_to_zero() {
        let x: Vec<f64> = (0..16).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(hilbert(&x).unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn phase_range_is_half_open() {
        assert_eq!(phase_angle(-1.0, 0.0), -PI);
        assert_eq!(phase_angle(1.0, 0.0), 0.0);
        assert!((phase_angle(0.0, 1.0) - PI / 2.0).abs() < 1e-15);
        assert!((phase_angle(0.0, -1.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_cosine_phase_advances_uniformly() {
        let n = 100;
        let a = analytic_signal(&grid_cosine(n, 5.0), DEFAULT_AMPLITUDE_FLOOR).unwrap();
        assert!(a.phase()[0].abs() < 1e-12);
        let step = 2.0 * PI * 5.0 / n as f64;
        for w in a.phase().windows(2) {
            let d = (w[1] - w[0]).rem_euclid(2.0 * PI);
            assert!((d - step).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_amplitude_sinusoid() {
        let x: Vec<f64> = grid_cosine(90, 4.0).iter().map(|v| 2.0 * v).collect();
        let a = analytic_signal(&x, DEFAULT_AMPLITUDE_FLOOR).unwrap();
        assert!(a.amplitude().iter().all(|v| (v - 2.0).abs() < 1e-9));
    }

    #[test]
    fn degenerate_phase_is_reported() {
        let err = analytic_signal(&[0.0; 12], DEFAULT_AMPLITUDE_FLOOR).unwrap_err();
        assert!(matches!(err, Error::DegeneratePhase { t: 0, .. }));

        // amplitude-modulated cosine whose envelope touches zero at t = 0
        let n = 64;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / n as f64;
                (1.0 - th.cos()) * (8.0 * th).cos()
            })
            .collect();
        match analytic_signal(&x, 1e-6).unwrap_err() {
            Error::DegeneratePhase { t, .. } => assert_eq!(t, 0),
            e => panic!("unexpected {e}"),
        }
    }
}
