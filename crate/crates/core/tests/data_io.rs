mod common;

use std::io::Write;

use common::random_series;
use phasesync::io::{fmt_num, panel_to_csv_string};
use phasesync::{
    band_from_periods, load_panel_csv, periods_of_band, read_panel_csv, Error, FilterBand, Panel,
    RecessionCalendar, TimeSeries, YearMonth,
};
use proptest::prelude::*;

fn load(text: &str) -> phasesync::Result<Panel> {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    load_panel_csv(f.path())
}

#[test]
fn loads_small_panel() {
    let p = load("date,a,b\n2000-01,1,2\n2000-02,3,4\n2000-03,5,6\n2000-04,7,8\n2000-05,9,10\n").unwrap();
    assert_eq!((p.members(), p.len()), (2, 5));
    assert_eq!(p.ids().collect::<Vec<_>>(), ["a", "b"]);
    assert_eq!(p.get("b").unwrap().values(), [2.0, 4.0, 6.0, 8.0, 10.0]);
    assert_eq!(p.start(), YearMonth::new(2000, 1).unwrap());
}

#[test]
fn ingestion_errors_name_the_location() {
    let err = load("date,a,b\n2000-01,1,2\n2000-02,3,4\n2000-03,,6\n").unwrap_err();
    assert!(matches!(err, Error::Ingest { row: 3, .. }), "{err}");
    assert!(err.to_string().contains("row 3"), "{err}");

    let err = load("date,a\n1980-01,1\n1980-03,2\n").unwrap_err();
    assert!(err.to_string().contains("non-consecutive calendar"), "{err}");

    let err = load("date,a\n1980-01,x\n1980-02,2\n").unwrap_err();
    assert!(err.to_string().contains("row 1"), "{err}");

    assert!(load("date,a,a\n1980-01,1,2\n1980-02,2,3\n").is_err());
    assert!(load("month,a\n1980-01,1\n1980-02,2\n").is_err());
    assert!(load("date,a\n1980-1,1\n1980-02,2\n").is_err());
    assert!(matches!(load_panel_csv("/nonexistent/panel.csv"), Err(Error::Io { .. })));
}

#[test]
fn csv_round_trip_is_bit_identical() {
    let start = YearMonth::new(1985, 7).unwrap();
    let series = (0..4)
        .map(|i| {
            let v = random_series(120, i).iter().map(|x| x * 10f64.powi(i as i32 * 3 - 4)).collect();
            TimeSeries::new(format!("s{i}"), start, v).unwrap()
        })
        .collect();
    let panel = Panel::new(series).unwrap();
    let first = panel_to_csv_string(&panel).unwrap();
    let back = read_panel_csv(first.as_bytes()).unwrap();
    let second = panel_to_csv_string(&back).unwrap();
    assert_eq!(first, second);
    let again = read_panel_csv(second.as_bytes()).unwrap();
    assert_eq!(back, again);
}

#[test]
fn period_arithmetic() {
    let b = FilterBand::new(4, 18).unwrap();
    let p = periods_of_band(505, b).unwrap();
    assert!((p.shortest - 28.06).abs() < 0.005 && (p.longest - 126.25).abs() < 1e-12);
    assert_eq!(p.rounded(), (28, 126));
    let p = periods_of_band(488, FilterBand::new(6, 14).unwrap()).unwrap();
    assert!((p.shortest - 34.86).abs() < 0.005 && (p.longest - 81.33).abs() < 0.005);
    assert_eq!(p.rounded(), (35, 81));
    let p = periods_of_band(100, FilterBand::new(1, 50).unwrap()).unwrap();
    assert_eq!((p.shortest, p.longest), (2.0, 100.0));

    assert_eq!(band_from_periods(505, 126.0, 28.0).unwrap(), FilterBand::new(4, 18).unwrap());
    assert_eq!(band_from_periods(488, 81.0, 35.0).unwrap(), FilterBand::new(6, 14).unwrap());
    assert_eq!(band_from_periods(100, 100.0, 2.0).unwrap(), FilterBand::new(1, 50).unwrap());
    assert!(band_from_periods(100, 20.0, 30.0).is_err());
    assert!(periods_of_band(20, FilterBand::new(2, 11).unwrap()).is_err());
}

#[test]
fn bundled_calendars() {
    let us = RecessionCalendar::us_nber();
    assert_eq!(us.episodes().len(), 6);
    let jp = RecessionCalendar::japan_esri();
    assert_eq!(jp.episodes().len(), 8);
    let ym = |s: &str| s.parse::<YearMonth>().unwrap();
    assert_eq!(us.span(), (ym("1980-01"), ym("2020-04")));
    assert_eq!(jp.span(), (ym("1980-02"), ym("2020-05")));
    assert!(RecessionCalendar::from_reader("peak,trough\n2001-03,2000-11\n".as_bytes()).is_err());
    assert!(RecessionCalendar::from_reader("peak,trough\n2001-03,2001-11\n2001-06,2002-01\n".as_bytes()).is_err());
    assert!(RecessionCalendar::from_reader("start,end\n2001-03,2001-11\n".as_bytes()).is_err());
}

proptest! {
    #[test]
    fn twelve_digit_values_survive(x in -1e12f64..1e12, scale in -20i32..20) {
        let v: f64 = fmt_num(x * 10f64.powi(scale)).parse().unwrap();
        prop_assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn period_round_trip(n in 40usize..800, lo in 1usize..6, width in 1usize..14) {
        let hi = lo + width;
        prop_assume!(hi <= n / 2);
        let b = FilterBand::new(lo, hi).unwrap();
        let p = periods_of_band(n, b).unwrap();
        let (short, long) = p.rounded();
        prop_assume!(short != long);
        let back = band_from_periods(n, p.longest, p.shortest).unwrap();
        prop_assert_eq!(back, b);
    }
}
