//! Month-granularity calendar and business-cycle reference dates.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidDate(format!("{year}-{month}")));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_ordinal(ord: i64) -> Self {
        Self {
            year: ord.div_euclid(12) as i32,
            month: ord.rem_euclid(12) as u32 + 1,
        }
    }

    /// The month `n` months later (or earlier, for negative `n`).
    pub fn offset(self, n: i64) -> Self {
        Self::from_ordinal(self.ordinal() + n)
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Signed number of months from `other` to `self`.
    pub fn months_since(self, other: YearMonth) -> i64 {
        self.ordinal() - other.ordinal()
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDate(s.to_string());
        let t = s.trim();
        let (y, m) = t.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        YearMonth::new(year, month).map_err(|_| bad())
    }
}

/// Expansion or contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Expansion,
    Contraction,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Expansion => "expansion",
            Regime::Contraction => "contraction",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One peak-to-trough contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Episode {
    pub peak: YearMonth,
    pub trough: YearMonth,
}

/// Chronological list of contraction episodes.
///
/// The peak month counts as the last month of the preceding expansion and the
/// trough month as the last month of the contraction, so a month `d` is in a
/// contraction when `peak < d <= trough`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecessionCalendar {
    episodes: Vec<Episode>,
}

const US_NBER: &str = include_str!("../data/us_nber.csv");
const JAPAN_ESRI: &str = include_str!("../data/japan_esri.csv");

impl RecessionCalendar {
    pub fn new(episodes: Vec<Episode>) -> Result<Self> {
        if episodes.is_empty() {
            return Err(Error::InvalidCalendar("no episodes".into()));
        }
        for (i, e) in episodes.iter().enumerate() {
            if e.peak >= e.trough {
                return Err(Error::InvalidCalendar(format!(
                    "episode {}: peak {} not before trough {}",
                    i + 1,
                    e.peak,
                    e.trough
                )));
            }
            if i > 0 && episodes[i - 1].trough > e.peak {
                return Err(Error::InvalidCalendar(format!(
                    "episode {} overlaps or precedes episode {}",
                    i + 1,
                    i
                )));
            }
        }
        Ok(Self { episodes })
    }

    /// NBER reference dates for U.S. contractions, 1980 through 2020.
    pub fn us_nber() -> Self {
        Self::from_reader(US_NBER.as_bytes()).expect("bundled calendar is valid")
    }

    /// ESRI reference dates for Japanese contractions, 1980 through 2020.
    pub fn japan_esri() -> Self {
        Self::from_reader(JAPAN_ESRI.as_bytes()).expect("bundled calendar is valid")
    }

    /// Reads a `peak,trough` CSV with `YYYY-MM` cells.
    pub fn from_reader<R: Read>(rdr: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(rdr);
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "peak" || &headers[1] != "trough" {
            return Err(Error::InvalidCalendar(
                "header must be exactly 'peak,trough'".into(),
            ));
        }
        let mut episodes = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let cell = |c: usize| -> Result<YearMonth> {
                rec.get(c)
                    .ok_or_else(|| Error::Ingest {
                        row: i + 1,
                        column: headers[c].to_string(),
                        message: "missing cell".into(),
                    })?
                    .parse()
            };
            episodes.push(Episode {
                peak: cell(0)?,
                trough: cell(1)?,
            });
        }
        Self::new(episodes)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file)
    }

    pub fn episodes(&self) -> &[Episode] {
        &self.episodes
    }

    pub fn regime_at(&self, month: YearMonth) -> Regime {
        let inside = self
            .episodes
            .iter()
            .any(|e| e.peak < month && month <= e.trough);
        if inside {
            Regime::Contraction
        } else {
            Regime::Expansion
        }
    }

    /// First peak and last trough.
    pub fn span(&self) -> (YearMonth, YearMonth) {
        (
            self.episodes[0].peak,
            self.episodes[self.episodes.len() - 1].trough,
        )
    }
}
