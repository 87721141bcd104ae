//! Wide panel CSV (`date,<id1>,<id2>,...`) and numeric formatting.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::calendar::YearMonth;
use crate::data::{Panel, TimeSeries};
use crate::error::{Error, Result};

/// Significant digits used for every numeric cell written by this crate.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with at most 12 significant digits, in the shortest decimal
/// form that parses back to the same rounded value.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    let plain = format!("{rounded}");
    let sci = format!("{rounded:e}");
    if plain.len() <= sci.len() + 4 {
        plain
    } else {
        sci
    }
}

pub fn load_panel_csv(path: impl AsRef<Path>) -> Result<Panel> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_panel_csv(file)
}

/// Parses a panel. Rows are numbered from 1 (the first data row); the header
/// is row 0.
pub fn read_panel_csv<R: Read>(rdr: R) -> Result<Panel> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(rdr);
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "date" {
        return Err(Error::Ingest {
            row: 0,
            column: headers.get(0).unwrap_or("").to_string(),
            message: "header must be 'date,<id1>,<id2>,...'".into(),
        });
    }
    let ids: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for id in &ids {
        if id.is_empty() {
            return Err(Error::Ingest {
                row: 0,
                column: id.clone(),
                message: "empty column id".into(),
            });
        }
        if !seen.insert(id.as_str()) {
            return Err(Error::Ingest {
                row: 0,
                column: id.clone(),
                message: "duplicate column id".into(),
            });
        }
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); ids.len()];
    let mut start: Option<YearMonth> = None;
    let mut prev: Option<YearMonth> = None;
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let date_cell = rec.get(0).unwrap_or("");
        let date: YearMonth = date_cell.parse().map_err(|_| Error::Ingest {
            row,
            column: "date".into(),
            message: format!("invalid date '{date_cell}', expected YYYY-MM"),
        })?;
        if let Some(p) = prev {
            if date != p.succ() {
                return Err(Error::NonConsecutive {
                    row,
                    expected: p.succ(),
                    found: date,
                });
            }
        } else {
            start = Some(date);
        }
        prev = Some(date);

        if rec.len() > ids.len() + 1 {
            return Err(Error::Ingest {
                row,
                column: "date".into(),
                message: format!("{} cells but header has {}", rec.len(), ids.len() + 1),
            });
        }
        for (c, id) in ids.iter().enumerate() {
            let cell = rec.get(c + 1).unwrap_or("");
            if cell.is_empty() {
                return Err(Error::Ingest {
                    row,
                    column: id.clone(),
                    message: "missing value".into(),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Ingest {
                row,
                column: id.clone(),
                message: format!("non-numeric value '{cell}'"),
            })?;
            if !v.is_finite() {
                return Err(Error::Ingest {
                    row,
                    column: id.clone(),
                    message: format!("non-finite value '{cell}'"),
                });
            }
            columns[c].push(v);
        }
    }

    let start = start.ok_or(Error::TooShort { needed: 2, got: 0 })?;
    let series = ids
        .into_iter()
        .zip(columns)
        .map(|(id, values)| TimeSeries::new(id, start, values))
        .collect::<Result<Vec<_>>>()?;
    Panel::new(series)
}

pub fn write_panel_csv<W: Write>(panel: &Panel, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["date".to_string()];
    header.extend(panel.ids().map(str::to_string));
    w.write_record(&header)?;
    for n in 0..panel.len() {
        let mut row = Vec::with_capacity(panel.members() + 1);
        row.push(panel.start().offset(n as i64).to_string());
        row.extend(panel.series().iter().map(|s| fmt_num(s.values()[n])));
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}

pub fn panel_to_csv_string(panel: &Panel) -> Result<String> {
    let mut buf = Vec::new();
    write_panel_csv(panel, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
