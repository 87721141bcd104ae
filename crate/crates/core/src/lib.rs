//! Time-varying phase synchronization across a panel of monthly series.
//!
//! Each member is (optionally) detrended, band-passed with a Fourier partial
//! sum, turned into an analytic signal whose angle gives the instantaneous
//! phase, and trimmed at both ends. For every unordered pair of members the
//! phase difference feeds a centered moving synchronization index
//! `gamma^2_t`, and at every t the share of pairs with `gamma^2_t >= r` is
//! reported.
//!
//! ```
//! use phasesync::{FilterBand, PipelineConfig, RegimeSpec, Window};
//!
//! let spec = RegimeSpec::new(vec!["coupled:120".parse().unwrap()], 1);
//! let panel = phasesync::gen_regime_panel(4, &spec).unwrap();
//! let band = phasesync::band_from_periods(panel.len(), 120.0, 28.0).unwrap();
//! let config = PipelineConfig::new(band, Window::US);
//! let result = phasesync::run_pipeline(&panel, &config).unwrap();
//! assert_eq!(result.pairs().len(), 6);
//! ```

pub mod analytic;
pub mod calendar;
pub mod data;
pub mod error;
pub mod io;
pub mod panel;
pub mod report;
pub mod spectral;
pub mod sweep;
pub mod sync;
pub mod synthetic;

pub use analytic::{analytic_signal, hilbert, AnalyticSeries};
pub use calendar::{Episode, RecessionCalendar, Regime, YearMonth};
pub use data::{band_from_periods, periods_of_band, FilterBand, Panel, PeriodRange, TimeSeries};
pub use error::{Error, Result};
pub use io::{load_panel_csv, read_panel_csv, write_panel_csv};
pub use panel::{
    annotate_recessions, normalize_di, ratio_above, run_pipeline, PipelineConfig, RegimeTable, SyncResult,
};
pub use spectral::{bandpass, detrend_linear, fourier_analyze, trim_edges, FourierCoefficients};
pub use sweep::{run_sweep, stability_report, SweepSetting};
pub use sync::{
    phase_difference, sync_index_full, sync_index_windowed, PhaseDifferenceSeries, SyncSeries, Window,
};
pub use synthetic::{gen_regime_panel, gen_sine, simulate_regimes, RegimeSpec};
