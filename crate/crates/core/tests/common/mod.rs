//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct O(N^2) evaluation of the real Fourier coefficients.
///
/// `a_k = (2/N) sum x_n cos(2 pi k n / N)`, `b_k = (2/N) sum x_n sin(...)`,
/// except `a_{N/2} = (1/N) sum x_n cos(pi n)` for even N.
pub fn direct_coefficients(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let mut a = vec![0.0; half + 1];
    let mut b = vec![0.0; half + 1];
    for k in 0..=half {
        let (mut sc, mut ss) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let th = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
            sc += v * th.cos();
            ss += v * th.sin();
        }
        let scale = if n.is_multiple_of(2) && k == half { 1.0 } else { 2.0 } / n as f64;
        a[k] = sc * scale;
        b[k] = if n.is_multiple_of(2) && k == half { 0.0 } else { ss * scale };
    }
    b[0] = 0.0;
    (a, b)
}

/// Direct partial sum over harmonics `lo..=hi`.
pub fn direct_bandpass(x: &[f64], lo: usize, hi: usize) -> Vec<f64> {
    let n = x.len();
    let (a, b) = direct_coefficients(x);
    (0..n)
        .map(|i| {
            (lo..=hi)
                .map(|k| {
                    let th = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
                    a[k] * th.cos() + b[k] * th.sin()
                })
                .sum()
        })
        .collect()
}

/// Mode-by-mode Hilbert image: `a_k sin - b_k cos`, Nyquist dropped.
pub fn direct_hilbert(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (a, b) = direct_coefficients(x);
    let top = if n.is_multiple_of(2) { n / 2 - 1 } else { n / 2 };
    (0..n)
        .map(|i| {
            (1..=top)
                .map(|k| {
                    let th = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
                    a[k] * th.sin() - b[k] * th.cos()
                })
                .sum()
        })
        .collect()
}

/// Per-window evaluation of the synchronization index, no running sums.
pub fn direct_gamma(psi: &[f64], w: usize) -> Vec<f64> {
    psi.windows(w)
        .map(|win| {
            let c = win.iter().map(|p| p.cos()).sum::<f64>() / w as f64;
            let s = win.iter().map(|p| p.sin()).sum::<f64>() / w as f64;
            c * c + s * s
        })
        .collect()
}

pub fn random_series(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

/// Zero-mean sum of random grid harmonics in `lo..=hi`.
pub fn band_limited(n: usize, lo: usize, hi: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; n];
    for k in lo..=hi {
        let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for (i, v) in out.iter_mut().enumerate() {
            let th = 2.0 * PI * ((k * i) % n) as f64 / n as f64;
            *v += a * th.cos() + b * th.sin();
        }
    }
    out
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Distance between two angles on the circle.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
