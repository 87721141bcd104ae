//! Tidy CSV and key-value metadata emitted for a pipeline run.
//!
//! * `t,date,pair_i,pair_j,gamma2`: one row per pair and time point
//! * `t,date,r,R`: one row per threshold and time point
//! * `t,date,R_<r>...[,regime]`: one column per threshold
//!
//! `t` is the 1-based position in the input record.

use std::io::Write;

use crate::error::{Error, Result};
use crate::io::fmt_num;
use crate::panel::{RegimeTable, SyncResult};
use crate::sweep::Stability;

fn flush<W: Write>(w: &mut csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|source| Error::Io {
        path: "<writer>".into(),
        source,
    })
}

pub fn write_gamma_long<W: Write>(result: &SyncResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "date", "pair_i", "pair_j", "gamma2"])?;
    for pair in result.pairs() {
        for (j, g) in pair.sync.gamma2().iter().enumerate() {
            w.write_record([
                result.t_at(j).to_string(),
                result.date_at(j).to_string(),
                pair.left.clone(),
                pair.right.clone(),
                fmt_num(*g),
            ])?;
        }
    }
    flush(&mut w)
}

pub fn write_ratio_long<W: Write>(result: &SyncResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "date", "r", "R"])?;
    for ratio in result.ratios() {
        for (j, v) in ratio.values.iter().enumerate() {
            w.write_record([
                result.t_at(j).to_string(),
                result.date_at(j).to_string(),
                fmt_num(ratio.threshold),
                fmt_num(*v),
            ])?;
        }
    }
    flush(&mut w)
}

/// Column name for a threshold, e.g. `R_0.8`.
pub fn ratio_column(threshold: f64) -> String {
    format!("R_{}", fmt_num(threshold))
}

pub fn write_ratio_wide<W: Write>(result: &SyncResult, regimes: Option<&RegimeTable>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "date".to_string()];
    header.extend(result.ratios().iter().map(|r| ratio_column(r.threshold)));
    if regimes.is_some() {
        header.push("regime".into());
    }
    w.write_record(&header)?;
    for j in 0..result.len() {
        let mut row = vec![result.t_at(j).to_string(), result.date_at(j).to_string()];
        row.extend(result.ratios().iter().map(|r| fmt_num(r.values[j])));
        if let Some(table) = regimes {
            row.push(table.rows[j].regime.to_string());
        }
        w.write_record(&row)?;
    }
    flush(&mut w)
}

/// `r,regime,count,mean_R`; the mean is empty when a regime has no points.
pub fn write_regime_summary<W: Write>(table: &RegimeTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "regime", "count", "mean_R"])?;
    for m in &table.summary {
        w.write_record([
            fmt_num(m.threshold),
            m.regime.to_string(),
            m.count.to_string(),
            m.mean.map(fmt_num).unwrap_or_default(),
        ])?;
    }
    flush(&mut w)
}

/// `a,b,r,common,pearson`.
pub fn write_stability<W: Write>(rows: &[Stability], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "r", "common", "pearson"])?;
    for s in rows {
        w.write_record([
            s.a.clone(),
            s.b.clone(),
            fmt_num(s.threshold),
            s.common.to_string(),
            s.correlation.map(fmt_num).unwrap_or_default(),
        ])?;
    }
    flush(&mut w)
}

/// Run description as ordered `key=value` pairs.
pub fn run_metadata(result: &SyncResult) -> Vec<(String, String)> {
    let m = result.meta();
    let c = &m.config;
    let (short, long) = m.periods.rounded();
    let n = result.len();
    let mut kv = vec![
        ("members", m.members.to_string()),
        ("pairs", result.pairs().len().to_string()),
        ("input_len", m.input_len.to_string()),
        ("input_start", m.start.to_string()),
        ("k_l", c.band.lower().to_string()),
        ("k_u", c.band.upper().to_string()),
        ("shortest_period", fmt_num(m.periods.shortest)),
        ("longest_period", fmt_num(m.periods.longest)),
        ("shortest_period_rounded", short.to_string()),
        ("longest_period_rounded", long.to_string()),
        ("window", c.window.len().to_string()),
        (
            "thresholds",
            c.thresholds.iter().map(|r| fmt_num(*r)).collect::<Vec<_>>().join(","),
        ),
        ("detrend", c.detrend.to_string()),
        ("trim", c.trim.to_string()),
        ("trim_offset", m.trim_offset.to_string()),
        ("amplitude_floor", fmt_num(c.amplitude_floor)),
        ("output_len", n.to_string()),
    ];
    if n > 0 {
        kv.push(("first_t", result.t_at(0).to_string()));
        kv.push(("first_date", result.date_at(0).to_string()));
        kv.push(("last_t", result.t_at(n - 1).to_string()));
        kv.push(("last_date", result.date_at(n - 1).to_string()));
    }
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn format_key_values(kv: &[(String, String)]) -> String {
    kv.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}
