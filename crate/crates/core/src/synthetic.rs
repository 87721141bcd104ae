//! Ground-truth panels: pure sinusoids, uniform random phases and
//! regime-switching oscillator panels.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. A uniform draw `u` is `rng.gen::<f64>()`, i.e. the top
//! 53 bits of one `u64` output scaled to `[0, 1)`. Normal draws use one
//! Box-Muller pair per value: `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.
//!
//! Draw order for a regime panel with M members over N months:
//!
//! 1. for each member: amplitude `0.5 + u`, initial phase `2 pi u - pi`, then
//!    initial frequency draw `u`;
//! 2. for each month, for each member: one normal draw (observation noise);
//! 3. then, if the month lies in an uncoupled segment, for each member two
//!    uniform draws `v, u`: the member keeps its frequency draw when
//!    `v < persistence` and takes `u` otherwise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calendar::YearMonth;
use crate::data::{Panel, TimeSeries};
use crate::error::{Error, Result};

/// `amplitude * sin(2 pi n / period + phase_offset)` for `n = 0..len`.
pub fn gen_sine(
    id: &str,
    start: YearMonth,
    len: usize,
    period: f64,
    amplitude: f64,
    phase_offset: f64,
) -> Result<TimeSeries> {
    if period.is_nan() || period < 2.0 || len < 2 {
        return Err(Error::InvalidSpec(format!(
            "sine needs period >= 2 and N >= 2 (period={period}, N={len})"
        )));
    }
    let values = (0..len)
        .map(|n| amplitude * (2.0 * PI * n as f64 / period + phase_offset).sin())
        .collect();
    TimeSeries::new(id, start, values)
}

/// `len` i.i.d. uniform phases on `[-pi, pi)`.
pub fn uniform_phases(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| 2.0 * PI * rng.gen::<f64>() - PI).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    Coupled,
    Uncoupled,
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coupling::Coupled => "coupled",
            Coupling::Uncoupled => "uncoupled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub len: usize,
    pub coupling: Coupling,
}

impl FromStr for Segment {
    type Err = Error;

    /// `coupled:120` or `uncoupled:120`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("bad segment '{s}', expected coupled:<n> or uncoupled:<n>"));
        let (kind, len) = s.trim().split_once(':').ok_or_else(bad)?;
        let coupling = match kind {
            "coupled" => Coupling::Coupled,
            "uncoupled" => Coupling::Uncoupled,
            _ => return Err(bad()),
        };
        let len = len.parse().map_err(|_| bad())?;
        Ok(Segment { len, coupling })
    }
}

/// Parameters of a regime-switching panel.
///
/// In coupled months all members advance by the same increment `2 pi /
/// base_period`, so their phase differences are frozen. In uncoupled months
/// each member's instantaneous frequency is `1/base_period + jitter * (2u - 1)`
/// cycles per month, where the uniform draw `u` is kept from the previous
/// month with probability `persistence` and redrawn otherwise. The marginal
/// law of `u` is uniform whatever the persistence. With `persistence = 0` and
/// `jitter = 0.5` the monthly increment is uniform over a full turn and
/// independent across months, so the phases are i.i.d. uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSpec {
    pub segments: Vec<Segment>,
    /// Months per cycle of the common oscillation.
    pub base_period: f64,
    /// Frequency perturbation scale in cycles per month.
    pub jitter: f64,
    /// Probability in `[0, 1)` that an uncoupled member keeps last month's
    /// frequency draw.
    pub persistence: f64,
    /// Standard deviation of additive observation noise.
    pub noise_sd: f64,
    pub seed: u64,
    pub start: YearMonth,
}

impl RegimeSpec {
    pub const DEFAULT_BASE_PERIOD: f64 = 28.0;
    pub const DEFAULT_JITTER: f64 = 0.05;
    pub const DEFAULT_PERSISTENCE: f64 = 0.995;
    pub const DEFAULT_NOISE_SD: f64 = 0.05;

    pub fn new(segments: Vec<Segment>, seed: u64) -> Self {
        Self {
            segments,
            base_period: Self::DEFAULT_BASE_PERIOD,
            jitter: Self::DEFAULT_JITTER,
            persistence: Self::DEFAULT_PERSISTENCE,
            noise_sd: Self::DEFAULT_NOISE_SD,
            seed,
            start: YearMonth::new(1980, 1).expect("valid month"),
        }
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coupling in force at month `t` (0-based).
    pub fn coupling_at(&self, t: usize) -> Option<Coupling> {
        let mut end = 0;
        for s in &self.segments {
            end += s.len;
            if t < end {
                return Some(s.coupling);
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() || self.segments.iter().any(|s| s.len == 0) {
            return Err(Error::InvalidSpec("segments must be non-empty".into()));
        }
        if self.len() < 2 {
            return Err(Error::InvalidSpec("total length must be >= 2".into()));
        }
        if !(self.base_period >= 2.0 && self.base_period.is_finite()) {
            return Err(Error::InvalidSpec(format!("base period {} < 2", self.base_period)));
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            return Err(Error::InvalidSpec(format!("jitter {} < 0", self.jitter)));
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(Error::InvalidSpec(format!(
                "persistence {} outside [0, 1)",
                self.persistence
            )));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::InvalidSpec(format!("noise sd {} < 0", self.noise_sd)));
        }
        Ok(())
    }
}

/// A generated panel together with each member's unwrapped latent phase.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSimulation {
    pub panel: Panel,
    pub latent_phase: Vec<Vec<f64>>,
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * PI * u2).cos()
}

pub fn simulate_regimes(members: usize, spec: &RegimeSpec) -> Result<RegimeSimulation> {
    if members < 2 {
        return Err(Error::InvalidSpec(format!("need >= 2 members, got {members}")));
    }
    spec.validate()?;
    let n = spec.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut amplitude = Vec::with_capacity(members);
    let mut theta = Vec::with_capacity(members);
    let mut draw = Vec::with_capacity(members);
    for _ in 0..members {
        amplitude.push(0.5 + rng.gen::<f64>());
        theta.push(2.0 * PI * rng.gen::<f64>() - PI);
        draw.push(rng.gen::<f64>());
    }

    let base = 1.0 / spec.base_period;
    let mut values = vec![Vec::with_capacity(n); members];
    let mut latent = vec![Vec::with_capacity(n); members];
    for t in 0..n {
        for m in 0..members {
            let noise = normal(&mut rng);
            values[m].push(amplitude[m] * theta[m].cos() + spec.noise_sd * noise);
            latent[m].push(theta[m]);
        }
        match spec.coupling_at(t) {
            Some(Coupling::Uncoupled) => {
                for (th, d) in theta.iter_mut().zip(draw.iter_mut()) {
                    let v: f64 = rng.gen();
                    let u: f64 = rng.gen();
                    if v >= spec.persistence {
                        *d = u;
                    }
                    *th += 2.0 * PI * (base + spec.jitter * (2.0 * *d - 1.0));
                }
            }
            _ => theta.iter_mut().for_each(|th| *th += 2.0 * PI * base),
        }
    }

    let width = members.to_string().len().max(2);
    let series = values
        .into_iter()
        .enumerate()
        .map(|(m, v)| TimeSeries::new(format!("m{:0width$}", m + 1), spec.start, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegimeSimulation {
        panel: Panel::new(series)?,
        latent_phase: latent,
    })
}

pub fn gen_regime_panel(members: usize, spec: &RegimeSpec) -> Result<Panel> {
    Ok(simulate_regimes(members, spec)?.panel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start() -> YearMonth {
        YearMonth::new(2000, 1).unwrap()
    }

    #[test]
    fn sine_basics() {
        let z = gen_sine("z", start(), 24, 12.0, 0.0, 0.3).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
        let a = gen_sine("a", start(), 24, 12.0, 1.0, 0.0).unwrap();
        let b = gen_sine("b", start(), 24, 12.0, 1.0, 2.0 * PI).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(gen_sine("x", start(), 24, 1.5, 1.0, 0.0).is_err());
        assert!(gen_sine("x", start(), 1, 12.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn segment_parsing() {
        let s: Segment = "coupled:100".parse().unwrap();
        assert_eq!(s, Segment { len: 100, coupling: Coupling::Coupled });
        assert!("sync:10".parse::<Segment>().is_err());
        assert!("coupled:x".parse::<Segment>().is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        let spec = RegimeSpec::new(
            vec!["coupled:40".parse().unwrap(), "uncoupled:40".parse().unwrap()],
            7,
        );
        let a = gen_regime_panel(4, &spec).unwrap();
        let b = gen_regime_panel(4, &spec).unwrap();
        assert_eq!(a, b);
        let mut other = spec.clone();
        other.seed = 8;
        assert_ne!(gen_regime_panel(4, &other).unwrap(), a);
        assert_eq!(a.len(), 80);
        assert_eq!(a.ids().collect::<Vec<_>>(), ["m01", "m02", "m03", "m04"]);
    }

    #[test]
    fn coupled_segments_freeze_differences() {
        let spec = RegimeSpec::new(
            vec!["uncoupled:30".parse().unwrap(), "coupled:30".parse().unwrap()],
            3,
        );
        let sim = simulate_regimes(3, &spec).unwrap();
        let d: Vec<f64> = (0..60)
            .map(|t| sim.latent_phase[0][t] - sim.latent_phase[1][t])
            .collect();
        for t in 31..60 {
            assert!((d[t] - d[30]).abs() < 1e-9);
        }
        assert!((1..30).any(|t| (d[t] - d[0]).abs() > 1e-3));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = RegimeSpec::new(vec!["coupled:10".parse().unwrap()], 1);
        assert!(gen_regime_panel(1, &spec).is_err());
        spec.base_period = 1.0;
        assert!(gen_regime_panel(2, &spec).is_err());
        let empty = RegimeSpec::new(vec![], 1);
        assert!(gen_regime_panel(2, &empty).is_err());
    }
}
